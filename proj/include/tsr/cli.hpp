#pragma once

namespace tsr::cli {

// Parses argv and dispatches to one of the commands: simulate, reconstruct,
// scan, patterns, snr. Returns the process exit code; failures print a
// single-line "error: ..." to stderr and return nonzero.
int run(int argc, char** argv);

}  // namespace tsr::cli

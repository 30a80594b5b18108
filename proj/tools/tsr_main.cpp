#include "tsr/cli.hpp"

int main(int argc, char** argv) { return tsr::cli::run(argc, argv); }

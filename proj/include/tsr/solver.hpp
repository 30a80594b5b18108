#pragma once

#include <Eigen/Dense>

#include <array>
#include <vector>

#include "tsr/sensor_sim.hpp"
#include "tsr/signals.hpp"

namespace tsr::solver {

// Second-difference smoothness matrix: 4 on the diagonal, -2 on both
// off-diagonals, including at the boundary rows.
Eigen::MatrixXd build_m_temporal(int n);

// Five-pixel joint smoothness matrix of size 5n x 5n. Pixel p occupies the
// index block [p*n, (p+1)*n). Case rules in precedence order:
//   i == j             -> 2 * w_s + 2 * w_t
//   |i - j| == 1 within one pixel block -> -2 * w_t
//   |i - j| % 5 == 0   -> -2 * w_s
Eigen::MatrixXd build_m_spatial(int n, double w_t, double w_s);

// Solves min I' M I subject to S' I = C for one exposure. The factorizations
// depend only on the pattern, so they are cached for reuse across frames.
class Reconstructor {
 public:
  Reconstructor(const sensor::FlickerPattern& pattern,
                const std::vector<double>& gammas);

  Eigen::VectorXd apply(const std::vector<double>& c_values) const;
  int n() const { return static_cast<int>(minv_s_.rows()); }
  int m() const { return static_cast<int>(minv_s_.cols()); }

 private:
  Eigen::MatrixXd minv_s_;                    // M^-1 S
  Eigen::PartialPivLU<Eigen::MatrixXd> gram_; // factorized S' M^-1 S
  std::vector<double> gammas_;
};

std::vector<double> reconstruct(const sensor::ChannelFrame& frame,
                                const sensor::FlickerPattern& pattern,
                                const std::vector<double>& gammas = {});

// Reconstructed sub-step intensity trace over a frame sequence.
struct ReconstructedTrace {
  std::vector<double> values;
  int n_factor = 1;
  double fps = 0.0;
  double start_s = 0.0;

  double sample_rate() const { return fps * static_cast<double>(n_factor); }
};

ReconstructedTrace reconstruct_sequence(const std::vector<sensor::ChannelFrame>& frames,
                                        const sensor::FlickerPattern& pattern,
                                        const sensor::CameraConfig& cam,
                                        const std::vector<double>& gammas = {});

// One exposure over the center pixel and its 4-connected neighbours, solved
// jointly under combined temporal and spatial smoothness.
struct SpatialPatch {
  std::array<sensor::ChannelFrame, 5> frames;  // center, up, down, left, right
  double w_t = 3.0;
  double w_s = 1.0;
};

// Returns a 5 x n matrix, one row of sub-step intensities per pixel.
Eigen::MatrixXd reconstruct_spatial(const SpatialPatch& patch,
                                    const sensor::FlickerPattern& pattern,
                                    const std::vector<double>& gammas = {});

inline signals::SpectrumView spectrum(const ReconstructedTrace& trace) {
  return signals::spectrum(trace.values, trace.sample_rate(), trace.start_s);
}

}  // namespace tsr::solver

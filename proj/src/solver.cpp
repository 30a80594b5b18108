#include "tsr/solver.hpp"

#include <cmath>
#include <stdexcept>

namespace tsr::solver {

namespace {

Eigen::VectorXd divide_by_gammas(const std::vector<double>& c_values,
                                 const std::vector<double>& gammas) {
  Eigen::VectorXd c(static_cast<Eigen::Index>(c_values.size()));
  for (std::size_t i = 0; i < c_values.size(); ++i) {
    double g = 1.0;
    if (!gammas.empty()) {
      if (gammas.size() != c_values.size()) {
        throw std::invalid_argument("gamma count does not match channel count");
      }
      g = gammas[i];
      if (!(g > 0.0)) throw std::invalid_argument("gammas must be positive");
    }
    c(static_cast<Eigen::Index>(i)) = c_values[i] / g;
  }
  return c;
}

}  // namespace

Eigen::MatrixXd build_m_temporal(int n) {
  if (n < 2) throw std::invalid_argument("smoothness matrix needs n >= 2");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = 4.0;
    if (i > 0) m(i, i - 1) = -2.0;
    if (i + 1 < n) m(i, i + 1) = -2.0;
  }
  return m;
}

Eigen::MatrixXd build_m_spatial(int n, double w_t, double w_s) {
  if (n < 2) throw std::invalid_argument("smoothness matrix needs n >= 2");
  if (w_t <= 0.0) throw std::invalid_argument("w_t must be positive");
  if (w_s < 0.0) throw std::invalid_argument("w_s must be non-negative");
  const int dim = 5 * n;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      const int d = std::abs(i - j);
      if (i == j) {
        m(i, j) = 2.0 * w_s + 2.0 * w_t;
      } else if (d == 1 && i / n == j / n) {
        m(i, j) = -2.0 * w_t;
      } else if (d % 5 == 0) {
        m(i, j) = -2.0 * w_s;
      }
    }
  }
  return m;
}

Reconstructor::Reconstructor(const sensor::FlickerPattern& pattern,
                             const std::vector<double>& gammas)
    : gammas_(gammas) {
  if (!gammas_.empty() && static_cast<int>(gammas_.size()) != pattern.m()) {
    throw std::invalid_argument("gamma count does not match channel count");
  }
  if (!pattern.full_column_rank()) {
    throw std::invalid_argument("pattern not full rank");
  }
  const Eigen::MatrixXd m = build_m_temporal(pattern.n());
  Eigen::PartialPivLU<Eigen::MatrixXd> m_lu(m);
  minv_s_ = m_lu.solve(pattern.code);
  const Eigen::MatrixXd gram = pattern.code.transpose() * minv_s_;
  gram_.compute(gram);
}

Eigen::VectorXd Reconstructor::apply(const std::vector<double>& c_values) const {
  if (static_cast<int>(c_values.size()) != m()) {
    throw std::invalid_argument("channel count does not match the pattern");
  }
  const Eigen::VectorXd c = divide_by_gammas(c_values, gammas_);
  return minv_s_ * gram_.solve(c);
}

std::vector<double> reconstruct(const sensor::ChannelFrame& frame,
                                const sensor::FlickerPattern& pattern,
                                const std::vector<double>& gammas) {
  Reconstructor rec(pattern, gammas);
  const Eigen::VectorXd i = rec.apply(frame.c_values);
  return std::vector<double>(i.data(), i.data() + i.size());
}

ReconstructedTrace reconstruct_sequence(const std::vector<sensor::ChannelFrame>& frames,
                                        const sensor::FlickerPattern& pattern,
                                        const sensor::CameraConfig& cam,
                                        const std::vector<double>& gammas) {
  Reconstructor rec(pattern, gammas);
  ReconstructedTrace trace;
  trace.n_factor = pattern.n();
  trace.fps = cam.fps;
  trace.values.reserve(frames.size() * static_cast<std::size_t>(pattern.n()));
  for (std::size_t f = 0; f < frames.size(); ++f) {
    try {
      const Eigen::VectorXd i = rec.apply(frames[f].c_values);
      trace.values.insert(trace.values.end(), i.data(), i.data() + i.size());
    } catch (const std::exception& e) {
      throw std::runtime_error("frame " + std::to_string(f) + ": " + e.what());
    }
  }
  return trace;
}

Eigen::MatrixXd reconstruct_spatial(const SpatialPatch& patch,
                                    const sensor::FlickerPattern& pattern,
                                    const std::vector<double>& gammas) {
  if (!pattern.full_column_rank()) {
    throw std::invalid_argument("pattern not full rank");
  }
  const int n = pattern.n();
  const int m = pattern.m();
  const Eigen::MatrixXd msp = build_m_spatial(n, patch.w_t, patch.w_s);

  Eigen::MatrixXd s_block = Eigen::MatrixXd::Zero(5 * n, 5 * m);
  for (int p = 0; p < 5; ++p) {
    s_block.block(p * n, p * m, n, m) = pattern.code;
  }

  Eigen::VectorXd c(5 * m);
  for (int p = 0; p < 5; ++p) {
    const auto& frame = patch.frames[static_cast<std::size_t>(p)];
    if (static_cast<int>(frame.c_values.size()) != m) {
      throw std::invalid_argument("patch frame channel count does not match the pattern");
    }
    c.segment(p * m, m) = divide_by_gammas(frame.c_values, gammas);
  }

  Eigen::PartialPivLU<Eigen::MatrixXd> m_lu(msp);
  const Eigen::MatrixXd minv_s = m_lu.solve(s_block);
  const Eigen::MatrixXd gram = s_block.transpose() * minv_s;
  Eigen::PartialPivLU<Eigen::MatrixXd> gram_lu(gram);
  const Eigen::VectorXd i = minv_s * gram_lu.solve(c);

  Eigen::MatrixXd out(5, n);
  for (int p = 0; p < 5; ++p) {
    out.row(p) = i.segment(p * n, n).transpose();
  }
  return out;
}

}  // namespace tsr::solver

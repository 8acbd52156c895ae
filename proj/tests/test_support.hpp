#pragma once

#include <cmath>

#include "twistor/catalog.hpp"
#include "twistor/sampling.hpp"

namespace twistor::testing {

inline Chart centered_box(int dim, double half = 0.5) {
  return Chart::box(dim, -half, half, "test box");
}

inline VectorField coord_field(const Chart& chart, int a) {
  const int d = chart.dim;
  return VectorField{chart, [d, a](const Vec&) { return Vec(Vec::Unit(d, a)); }};
}

// The rotating hyperelliptic frame on a centered box, so that the
// literal origin is an interior point.
inline FrameField rotating_frame_centered() {
  const FrameField src = make_hyperelliptic(1).frame;
  return FrameField{centered_box(4), src.coeff, "rotating (centered)"};
}

// A deterministic smooth orthonormal frame: a trigonometric perturbation
// of the identity followed by pointwise Gram-Schmidt.
inline FrameField random_smooth_frame(std::uint64_t seed, double amp = 0.25) {
  Rng rng(seed);
  // frozen coefficients; the closure below must stay pure
  Mat amps(4, 4);
  Mat phase(4, 4);
  Eigen::MatrixXi freq(4, 4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      amps(r, c) = amp * (2.0 * rng.uniform() - 1.0);
      phase(r, c) = 6.283185307179586 * rng.uniform();
      freq(r, c) = 1 + int(rng.uniform() * 2.0);
    }
  auto coeff = [amps, phase, freq](const Vec& p) {
    Mat raw = Mat::Identity(4, 4);
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c)
        raw(r, c) += amps(r, c) *
                     std::sin(freq(r, c) * (p[(r + c) % 4] + p[c]) + phase(r, c));
    // Gram-Schmidt columns
    Mat q = raw;
    for (int c = 0; c < 4; ++c) {
      for (int k = 0; k < c; ++k) q.col(c) -= q.col(k).dot(q.col(c)) * q.col(k);
      q.col(c).normalize();
    }
    return q;
  };
  return FrameField{centered_box(4), coeff,
                    "random smooth " + std::to_string(seed)};
}

inline std::vector<GenSection> frame_and_coframe_sections(int dim) {
  std::vector<GenSection> out;
  for (int i = 0; i < dim; ++i) out.push_back(frame_section(i, dim));
  for (int i = 0; i < dim; ++i) out.push_back(coframe_section(i, dim));
  return out;
}

}  // namespace twistor::testing

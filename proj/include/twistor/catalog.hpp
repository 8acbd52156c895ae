#pragma once

#include <string>
#include <vector>

#include "twistor/quaternion.hpp"

namespace twistor {

// An affine chart map x -> linear x + offset induced by a quotient
// identification; the frame must satisfy theta_i(g x) = dg theta_i(x).
struct DeckGenerator {
  Mat linear;
  Vec offset;
  std::string label;

  Vec apply(const Vec& x) const { return linear * x + offset; }
};

struct Manifold {
  FrameField frame;
  std::vector<DeckGenerator> deck;
  std::string id;
  std::string lattice;  // metadata for quotient constructions

  int dim() const { return frame.chart.dim; }
};

// Box chart [0,1]^dim with the constant orthonormal frame; dim 4 or 8.
Manifold make_flat_torus(int dim);

// Flat chart on [0,1]^4 in coordinates (x1, y1, x2, y2) carrying the
// rotating frame
//   theta1 = R_{2 pi x1} e3, theta2 = R_{2 pi x1} e4,
//   theta3 = e1,            theta4 = e2,
// together with the deck generators of the given quotient type (1..7).
Manifold make_hyperelliptic(int type);

// S^1 x (unit S^3) for sign +1 (gnomonic chart, left-invariant frame
// with [theta_i, theta_j] = 2 eps_{ijk} theta_k) or S^1 x H^3 for sign
// -1 (upper-half-space frame). The flat circle direction is theta_4.
Manifold make_s1_x_space_form(int sign);

// theta_i = (1/lambda) d_i, so g = lambda^2 delta. Factor ids:
// "one", "round_s4" (lambda = 2/(1+|x|^2)), "exp_x1" (lambda = e^{x1}).
Manifold make_conformally_flat(const std::string& factor_id);

// Unit S^2 x flat T^2: frame d_alpha, (1/sin alpha) d_beta, d_x, d_y on
// alpha in [0.3, pi-0.3].
Manifold make_s2_x_t2();

// Quaternionic triples by name: "lambda+", "lambda-" on dim-4 frames;
// "product:++", "product:+-", "product:-+", "product:--" on T^8
// (blockwise Lambda pairs of the two factors).
std::array<Mat, 3> make_triple(const std::string& id, int dim);

QuatStructure make_structure(const std::string& dplus, const std::string& dminus,
                             const AlgebraIso& f, int dim);

}  // namespace twistor

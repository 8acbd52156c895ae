#pragma once

#include <array>

#include "twistor/genlin.hpp"

namespace twistor {

// The six constant skew matrices attached to an orthonormal frame of a
// 4-manifold:
//   I+ = t1^t2 + t3^t4   I- = t1^t2 - t3^t4
//   J+ = t1^t3 - t2^t4   J- = t1^t3 + t2^t4
//   K+ = t1^t4 + t2^t3   K- = -t1^t4 + t2^t3
// Each triple satisfies the quaternion relations and the two families
// commute with each other.
struct LambdaBases {
  Mat ip, jp, kp, im, jm, km;

  static LambdaBases standard();
  std::array<Mat, 3> plus() const { return {ip, jp, kp}; }
  std::array<Mat, 3> minus() const { return {im, jm, km}; }
  // 6x6 orthonormal basis-change matrix: columns are the bivector
  // coordinates of {I+, J+, K+, I-, J-, K-} / sqrt(2).
  Mat basis_matrix() const;
};

// f : D- -> D+ as a 3x3 matrix on (I,J,K) coordinates. Preserving the
// quaternion relations forces F in SO(3); orientation-reversing input is
// rejected.
struct AlgebraIso {
  Mat3 F = Mat3::Identity();

  static AlgebraIso identity();
  static AlgebraIso from_axis_angle(const Vec3& axis, double angle);
  static AlgebraIso from_matrix(const Mat3& m, double tol = 1e-10);
  bool is_identity(double tol = 1e-10) const;
};

// Rotation by theta about the I axis in the ordered basis (I, J, K).
AlgebraIso f_theta(double theta);

// Two quaternionic triples (constant in the frame basis) plus the
// algebra isomorphism between them.
struct QuatStructure {
  std::array<Mat, 3> dplus, dminus;
  AlgebraIso f;
  bool same_bundle = false;  // D+ and D- span the same sub-bundle

  int dim() const { return static_cast<int>(dplus[0].rows()); }
  // Worst quaternion-relation violation over both triples.
  double triple_residual() const;
};

// Basis change between the (theta | theta*) splitting and the
// normalized C+ (+) C- splitting; the matrix is its own inverse.
Mat cplus_cminus_split(int dim);

// Projection C+- -> TM applied to a generalized vector assumed to lie in
// the corresponding eigenspace.
Vec p_plus(const GenVector& v);
Vec p_minus(const GenVector& v);

struct GenQuatElement {
  Vec3 abc = Vec3::Zero();
  Mat uplus, uminus;  // classical endomorphisms on TM
  Mat gen;            // 2dim x 2dim matrix in the (theta | theta*) basis
};

// u- = a I- + b J- + c K-, u+ carries F (a,b,c) coordinates on D+, and
// the generalized matrix is diag(u+, u-) written back in the
// (theta | theta*) basis.
GenQuatElement assemble_df(const QuatStructure& q, double a, double b, double c);

struct Prop3Report {
  double intertwine = 0.0;  // max || nabla f(u-) - f(nabla u-) ||_F
  double offspan = 0.0;     // max projection residual of nabla D+- onto D+-
  int witness_direction = 0;
  int witness_element = 0;
  double combined() const { return std::max(intertwine, offspan); }
};

Prop3Report prop3_residual(const QuatStructure& q, const Connection& conn,
                           const Vec& p, double h = kFirstStep);

// The six covariant-derivative expansions of I+-, J+-, K+- in closed
// form from the Christoffel values.
struct Lemma4Expansion {
  Mat dip, djp, dkp, dim_, djm, dkm;
  std::array<Mat, 6> all() const { return {dip, djp, dkp, dim_, djm, dkm}; }
};
Lemma4Expansion lemma4_nabla(const ChristoffelMats& gamma, int direction);

// Chooses an orthonormal frame in which the Lambda+- bases reproduce the
// given triples (with the D+ triple read through f). Input matrices are
// expressed in an ambient orthonormal frame; the returned matrix has the
// adapted frame as columns.
Mat adapt_frame(const std::array<Mat, 3>& ip_triple,
                const std::array<Mat, 3>& im_triple, const AlgebraIso& f);

}  // namespace twistor

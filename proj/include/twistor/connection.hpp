#pragma once

#include <functional>
#include <vector>

#include "twistor/chartfield.hpp"

namespace twistor {

struct LambdaBases;  // quaternion.hpp

// Christoffel data at a point, stored as one matrix per frame direction:
// gamma[i](k, j) = Gamma^k_{ij}, i.e. nabla_{theta_i} theta_j =
// sum_k gamma[i](k, j) theta_k.
using ChristoffelMats = std::vector<Mat>;

// A metric connection presented through its frame Christoffel
// coefficients. The Levi-Civita constructor derives them from
// finite-difference Lie brackets of the frame (Koszul formula); other
// connections wrap a base one plus an explicit torsion term.
struct Connection {
  FrameField frame;
  std::function<ChristoffelMats(const Vec&)> christoffels;
  double inner_step = kFirstStep;

  int dim() const { return frame.chart.dim; }
};

// Gamma^k_{ij} = (c^k_{ij} - c^i_{jk} + c^j_{ki}) / 2 with
// [theta_i, theta_j] = c^k_{ij} theta_k from central differences.
ChristoffelMats christoffel(const FrameField& frame, const Vec& p,
                            double h = kFirstStep);

Connection levi_civita(const FrameField& frame, double h = kFirstStep);

// base plus the constant skew term (X x Y)^k = eps_{ijk} X^i Y^j on the
// first three frame indices (zero elsewhere).
Connection with_cross_torsion(const Connection& base);

// (nabla_{theta_i} psi) = theta_i . psi + [Gamma_i, psi] for a field of
// endomorphisms given by its frame-basis matrix.
Mat nabla_endo(const Connection& conn,
               const std::function<Mat(const Vec&)>& psi, int direction,
               const Vec& p, double h = kFirstStep);

// Curvature R(X,Y) = [nabla_Y, nabla_X] + nabla_{[X,Y]} evaluated on all
// frame pairs, plus its matrix on Lambda^2 through the identification
// g(phi(u), X ^ Y) = g(uX, Y).
struct CurvatureOperator {
  int dim = 0;
  // r4[i][j] = matrix of R(theta_i, theta_j) acting on TM (frame basis).
  std::vector<std::vector<Mat>> r4;
  Mat lambda2;  // biv_count(dim) square, lexicographic bivector basis

  const Mat& skew(int i, int j) const { return r4[i][j]; }
  // R applied to a bivector, returned as a skew endomorphism.
  Mat apply_biv(const Vec& b) const { return skew_from_biv(Vec(lambda2 * b), dim); }
  Mat apply_vectors(const Vec& x, const Vec& y) const {
    return apply_biv(bivector(x, y));
  }
};

CurvatureOperator curvature(const Connection& conn, const Vec& p,
                            double h = kCurvatureStep);

// The 6x6 Lambda^2 matrix written in the orthonormalized basis
// {I+/sqrt2, J+/sqrt2, K+/sqrt2, I-/sqrt2, J-/sqrt2, K-/sqrt2} decomposes
// into blocks [[W+ + s/12, B], [B*, W- + s/12]].
struct Dim4Blocks {
  Mat wplus, wminus;  // 3x3 symmetric traceless
  double s = 0.0;
  Mat b, bstar;       // 3x3, bstar ~ b^T up to FD noise
  double trace_plus = 0.0, trace_minus = 0.0;  // diagonal block traces
  double asym = 0.0;  // worst asymmetry of the diagonal blocks

  // Reassembles the 6x6 matrix (uses the per-block traces, so the round
  // trip is exact for symmetric inputs).
  Mat reconstruct() const;
};

Dim4Blocks blocks_dim4(const Mat& lambda2_in_lambda_basis);
Dim4Blocks blocks_dim4(const CurvatureOperator& R, const LambdaBases& bases);

// Lambda^2 matrix rewritten in the orthonormalized Lambda^{+-} basis.
Mat lambda2_in_pm_basis(const CurvatureOperator& R, const LambdaBases& bases);

// || [I, R(X,Y)] + c g(KX,Y) J - c g(JX,Y) K ||_F with c = s/(2n(n+2)).
double lemma1_residual(const CurvatureOperator& R, const Mat& I, const Mat& J,
                       const Mat& K, double s, int n, const Vec& X,
                       const Vec& Y);

}  // namespace twistor

#pragma once

#include <string>
#include <vector>

#include "twistor/quaternion.hpp"

namespace twistor {

// Obstruction-measurement thresholds: residuals at or below kVanish count
// as zero, at or above kNonzero as definitely nonzero; the band between
// is inconclusive (shrink the step to resolve).
constexpr double kVanishThreshold = 1e-4;
constexpr double kNonzeroThreshold = 1e-2;
// Curvature quantities treated as zero below this (block anchors).
constexpr double kCurvatureZeroTol = 1e-3;

// The three commutator tensors whose simultaneous vanishing at every
// sphere point is the integrability criterion:
//  G1(X,Y,u+) = [u+, R(X^Y - u+X ^ u+Y) + u+ R(u+X ^ Y + X ^ u+Y)]
//  G2(X,Y,u+) = [u+, R(X^Y - u+X ^ u-Y) + u+ R(u+X ^ Y + X ^ u-Y)]
//  G3(X,Y,u-) = [u-, R(X^Y - u-X ^ u-Y) + u- R(u-X ^ Y + X ^ u-Y)]
struct GTensors {
  Mat g1, g2, g3;
  double max_norm() const {
    return std::max({g1.norm(), g2.norm(), g3.norm()});
  }
};

GTensors g_tensors(const CurvatureOperator& R, const Mat& uplus,
                   const Mat& uminus, const Vec& X, const Vec& Y);

// || (Rhat(X^{1,0}, Y^{1,0}) Z^{1,0})^{0,1} || with X^{1,0} = (X - i u X)/2,
// Rhat acting as diag(R, R) on the bivector of vector parts, and the
// (0,1) projection taken against the assembled element u.
double theorem1bis_residual(const CurvatureOperator& R, const Mat& ugen,
                            const Vec& X, const Vec& Y, const Vec& Z);

// [u, Rhat(X^Y - uX^uY) + u Rhat(uX^Y + X^uY)] on generalized inputs;
// the commutator whose vanishing is equivalent to the residual above.
Mat gen_obstruction_commutator(const CurvatureOperator& R, const Mat& ugen,
                               const Vec& X, const Vec& Y);

// One matched evaluation of both integrability criteria at a point:
// t1b runs through the complex (1,0)/(0,1) projections restricted to
// C+/C- inputs, g_direct through the commutator tensors. The 16*sqrt(2)
// scale makes the two sides agree up to the column-norm/Frobenius gap.
struct MatchedSample {
  double t1b = 0.0;
  double g_direct = 0.0;
};
MatchedSample matched_criteria_sample(const CurvatureOperator& R,
                                      const GenQuatElement& u, int i, int j);

struct Prop567Report {
  bool f_identity = false;
  double s = 0.0;
  bool s_vanishes = false;
  bool dichotomy_ok = false;          // f = Id or s = 0
  bool dichotomy_applicable = false;  // n > 1, or same bundle with W+ = 0
  bool prop7_applicable = false;      // split bundles, conformally flat
  double prop7_residual = 0.0;        // || B - (s/12) F ||_F
  double b_norm = 0.0;
};

Prop567Report prop567_checks(const Dim4Blocks& blocks, const AlgebraIso& f,
                             int n, bool same_bundle);

// Type of the twistor almost structure at a sphere point: the type of
// the assembled structure on the base plus one for the fiber direction.
TypeResult twistor_type(const FrameField& frame, const GenQuatElement& u,
                        const Vec& p);

struct Verdict {
  enum class Branch {
    Thm3a,          // curvature vanishes on the D bundle
    Thm3b,          // f = Id and anti-self-dual
    Thm4,           // locally conformally flat, split bundles
    Thm2,           // dimension > 4
    NonIntegrable,  // no theorem hypothesis holds
    Inconclusive,   // measured residuals between thresholds
    NonApplicable,  // structure fails the parallelism requirement
  };
  enum class Measured { Vanishes, Nonzero, Inconclusive };

  Branch branch = Branch::Inconclusive;
  bool predicted_integrable = false;
  Measured measured = Measured::Inconclusive;
  bool agree = false;
  double max_g = 0.0;

  std::string branch_name() const;
  std::string measured_name() const;
};

struct ClassifyInput {
  int dim = 4;
  double prop3 = 0.0;
  double prop3_threshold = 1e-6;
  bool same_bundle = false;
  bool f_identity = false;
  double max_g = 0.0;
  double r_restricted_plus = 0.0;  // ||R restricted to the D bundle||
  double wplus = 0.0;
  double wminus = 0.0;
};

Verdict classify(const ClassifyInput& in);

// 6 axis poles followed by a Fibonacci lattice of k points.
std::vector<Vec3> sphere_samples(int k);

}  // namespace twistor

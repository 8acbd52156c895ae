#include "twistor/twistor.hpp"

#include <cmath>
#include <numbers>

namespace twistor {

GTensors g_tensors(const CurvatureOperator& R, const Mat& uplus,
                   const Mat& uminus, const Vec& X, const Vec& Y) {
  auto build = [&R](const Mat& outer, const Vec& ax, const Vec& by,
                    const Vec& X_, const Vec& Y_) {
    const Mat s1 = R.apply_biv(bivector(X_, Y_) - bivector(ax, by));
    const Mat s2 = R.apply_biv(bivector(ax, Y_) + bivector(X_, by));
    const Mat c = s1 + outer * s2;
    return Mat(outer * c - c * outer);
  };

  GTensors g;
  g.g1 = build(uplus, uplus * X, uplus * Y, X, Y);
  g.g2 = build(uplus, uplus * X, uminus * Y, X, Y);
  g.g3 = build(uminus, uminus * X, uminus * Y, X, Y);
  return g;
}

namespace {

CMat rhat_apply(const CurvatureOperator& R, const CVec& x, const CVec& y) {
  const int d = R.dim;
  const CVec beta = bivector(x, y);
  const CVec out = R.lambda2.cast<std::complex<double>>() * beta;
  const CMat s = skew_from_biv(out, d);
  CMat rhat = CMat::Zero(2 * d, 2 * d);
  rhat.block(0, 0, d, d) = s;
  rhat.block(d, d, d, d) = s;
  return rhat;
}

}  // namespace

double theorem1bis_residual(const CurvatureOperator& R, const Mat& ugen,
                            const Vec& X, const Vec& Y, const Vec& Z) {
  const int d = R.dim;
  const std::complex<double> iu(0.0, 1.0);
  const CMat u = ugen.cast<std::complex<double>>();
  auto deg10 = [&](const Vec& v) -> CVec {
    const CVec vc = v.cast<std::complex<double>>();
    return 0.5 * (vc - iu * (u * vc));
  };
  const CVec x10 = deg10(X), y10 = deg10(Y), z10 = deg10(Z);
  const CMat rhat = rhat_apply(R, x10.head(d), y10.head(d));
  const CVec w = rhat * z10;
  const CVec res01 = 0.5 * (w + iu * (u * w));
  return res01.norm();
}

Mat gen_obstruction_commutator(const CurvatureOperator& R, const Mat& ugen,
                               const Vec& X, const Vec& Y) {
  const int d = R.dim;
  const Vec ux = ugen * X, uy = ugen * Y;
  auto rhat = [&R, d](const Vec& beta_in) {
    const Mat s = skew_from_biv(Vec(R.lambda2 * beta_in), d);
    Mat out = Mat::Zero(2 * d, 2 * d);
    out.block(0, 0, d, d) = s;
    out.block(d, d, d, d) = s;
    return out;
  };
  const Vec bx = X.head(d), by = Y.head(d);
  const Vec bux = ux.head(d), buy = uy.head(d);
  const Mat a = rhat(bivector(bx, by) - bivector(bux, buy));
  const Mat b = rhat(bivector(bux, by) + bivector(bx, buy));
  const Mat c = a + ugen * b;
  return ugen * c - c * ugen;
}

MatchedSample matched_criteria_sample(const CurvatureOperator& R,
                                      const GenQuatElement& u, int i, int j) {
  const int d = R.dim;
  const double r = 1.0 / std::sqrt(2.0);
  auto cplus = [d, r](int k) {
    Vec v = Vec::Zero(2 * d);
    v[k] = r;
    v[d + k] = r;
    return v;
  };
  auto cminus = [d, r](int k) {
    Vec v = Vec::Zero(2 * d);
    v[k] = r;
    v[d + k] = -r;
    return v;
  };

  MatchedSample out;
  const double scale = 16.0 * std::sqrt(2.0);
  auto max_over_z = [&](const Vec& X, const Vec& Y, bool z_plus) {
    double worst = 0.0;
    for (int k = 0; k < d; ++k) {
      const Vec Z = z_plus ? cplus(k) : cminus(k);
      worst = std::max(worst, theorem1bis_residual(R, u.gen, X, Y, Z));
    }
    return worst * scale;
  };
  out.t1b = std::max({max_over_z(cplus(i), cplus(j), true),
                      max_over_z(cplus(i), cminus(j), true),
                      max_over_z(cminus(i), cminus(j), false)});

  Vec ei = Vec::Zero(d), ej = Vec::Zero(d);
  ei[i] = 1.0;
  ej[j] = 1.0;
  const GTensors g = g_tensors(R, u.uplus, u.uminus, ei, ej);
  out.g_direct = std::max({g.g1.norm(), g.g2.norm(), g.g3.norm()});
  return out;
}

Prop567Report prop567_checks(const Dim4Blocks& blocks, const AlgebraIso& f,
                             int n, bool same_bundle) {
  Prop567Report rep;
  rep.f_identity = f.is_identity();
  rep.s = blocks.s;
  rep.s_vanishes = std::abs(blocks.s) <= kCurvatureZeroTol;
  rep.dichotomy_ok = rep.f_identity || rep.s_vanishes;
  const bool asd = blocks.wplus.norm() <= kCurvatureZeroTol;
  const bool lcf = asd && blocks.wminus.norm() <= kCurvatureZeroTol;
  rep.dichotomy_applicable = n > 1 || (same_bundle && asd);
  rep.prop7_applicable = !same_bundle && lcf;
  rep.b_norm = blocks.b.norm();
  rep.prop7_residual = (blocks.b - (blocks.s / 12.0) * Mat(f.F)).norm();
  return rep;
}

TypeResult twistor_type(const FrameField& frame, const GenQuatElement& u,
                        const Vec& p) {
  const Gacs j = gacs_constant(frame, u.gen, "assembled");
  TypeResult t = gacs_type(j, p);
  t.type += 1;  // the fiber contributes one complex dimension
  return t;
}

std::string Verdict::branch_name() const {
  switch (branch) {
    case Branch::Thm3a: return "Thm3a";
    case Branch::Thm3b: return "Thm3b";
    case Branch::Thm4: return "Thm4";
    case Branch::Thm2: return "Thm2";
    case Branch::NonIntegrable: return "NonIntegrable";
    case Branch::Inconclusive: return "Inconclusive";
    case Branch::NonApplicable: return "NonApplicable";
  }
  return "?";
}

std::string Verdict::measured_name() const {
  switch (measured) {
    case Measured::Vanishes: return "vanishes";
    case Measured::Nonzero: return "nonzero";
    case Measured::Inconclusive: return "inconclusive";
  }
  return "?";
}

Verdict classify(const ClassifyInput& in) {
  Verdict v;
  v.max_g = in.max_g;
  if (in.max_g <= kVanishThreshold)
    v.measured = Verdict::Measured::Vanishes;
  else if (in.max_g >= kNonzeroThreshold)
    v.measured = Verdict::Measured::Nonzero;
  else
    v.measured = Verdict::Measured::Inconclusive;

  if (in.prop3 > in.prop3_threshold) {
    v.branch = Verdict::Branch::NonApplicable;
    v.predicted_integrable = false;
    v.agree = true;  // no prediction is made for such structures
    return v;
  }

  if (in.dim > 4) {
    v.branch = Verdict::Branch::Thm2;
    v.predicted_integrable = true;
  } else if (in.same_bundle) {
    if (in.r_restricted_plus <= kCurvatureZeroTol) {
      v.branch = Verdict::Branch::Thm3a;
      v.predicted_integrable = true;
    } else if (in.f_identity && in.wplus <= kCurvatureZeroTol) {
      v.branch = Verdict::Branch::Thm3b;
      v.predicted_integrable = true;
    } else {
      v.branch = Verdict::Branch::NonIntegrable;
      v.predicted_integrable = false;
    }
  } else {
    if (in.wplus <= kCurvatureZeroTol && in.wminus <= kCurvatureZeroTol) {
      v.branch = Verdict::Branch::Thm4;
      v.predicted_integrable = true;
    } else {
      v.branch = Verdict::Branch::NonIntegrable;
      v.predicted_integrable = false;
    }
  }

  if (v.measured == Verdict::Measured::Inconclusive) {
    v.branch = Verdict::Branch::Inconclusive;
    v.agree = false;
  } else {
    v.agree = v.predicted_integrable ==
              (v.measured == Verdict::Measured::Vanishes);
  }
  return v;
}

std::vector<Vec3> sphere_samples(int k) {
  std::vector<Vec3> pts;
  pts.reserve(k + 6);
  pts.emplace_back(1, 0, 0);
  pts.emplace_back(-1, 0, 0);
  pts.emplace_back(0, 1, 0);
  pts.emplace_back(0, -1, 0);
  pts.emplace_back(0, 0, 1);
  pts.emplace_back(0, 0, -1);
  const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
  for (int m = 0; m < k; ++m) {
    const double z = 1.0 - 2.0 * (m + 0.5) / k;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = 2.0 * std::numbers::pi * m / golden;
    pts.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
  }
  return pts;
}

}  // namespace twistor

#include "doctest.h"
#include "test_support.hpp"
#include "twistor/twistor.hpp"

using namespace twistor;
using namespace twistor::testing;

namespace {

constexpr double kPi = std::numbers::pi;

struct Setup {
  Manifold mani;
  QuatStructure q;
  Connection lc;
  Vec p;
  CurvatureOperator r;
};

Setup setup(const std::string& manifold, const std::string& dplus,
            const std::string& dminus, const AlgebraIso& f) {
  Manifold m = manifold == "s1xs3"  ? make_s1_x_space_form(1)
               : manifold == "s2xt2" ? make_s2_x_t2()
               : manifold == "s4"    ? make_conformally_flat("round_s4")
                                     : make_flat_torus(4);
  Connection lc = levi_civita(m.frame);
  Vec p = halton_points(m.frame.chart, 1, 0.05, 71)[0];
  CurvatureOperator r = curvature(lc, p);
  QuatStructure q = make_structure(dplus, dminus, f, m.dim());
  return Setup{std::move(m), std::move(q), std::move(lc), p, std::move(r)};
}

double lambda_span_residual(const Mat& g, const std::array<Mat, 3>& basis) {
  Mat rem = g;
  for (const Mat& e : basis)
    rem -= ((e.transpose() * g).trace() / e.squaredNorm()) * e;
  return rem.norm();
}

}  // namespace

TEST_SUITE_BEGIN("twistor");

TEST_CASE("obstruction tensors vanish on the flat torus") {
  Setup s = setup("t4", "lambda+", "lambda+", f_theta(kPi));
  const auto sph = sphere_samples(10);
  for (const auto& abc : sph) {
    const GenQuatElement u = assemble_df(s.q, abc[0], abc[1], abc[2]);
    const GTensors g =
        g_tensors(s.r, u.uplus, u.uminus, Vec::Unit(4, 0), Vec::Unit(4, 1));
    CHECK(g.max_norm() <= 1e-12);
  }
}

TEST_CASE("obstruction tensors on the conformally flat product stay small") {
  Setup s = setup("s1xs3", "lambda+", "lambda-", AlgebraIso::identity());
  double worst = 0.0;
  for (const auto& abc : sphere_samples(20)) {
    const GenQuatElement u = assemble_df(s.q, abc[0], abc[1], abc[2]);
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        worst = std::max(worst, g_tensors(s.r, u.uplus, u.uminus,
                                          Vec::Unit(4, i), Vec::Unit(4, j))
                                    .max_norm());
  }
  CHECK(worst <= 1e-4);
}

TEST_CASE("the Kaehler product is obstructed") {
  Setup s = setup("s2xt2", "lambda+", "lambda+", AlgebraIso::identity());
  double worst = 0.0;
  for (const auto& abc : sphere_samples(20)) {
    const GenQuatElement u = assemble_df(s.q, abc[0], abc[1], abc[2]);
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        worst = std::max(worst,
                         g_tensors(s.r, u.uplus, u.uminus, Vec::Unit(4, i),
                                   Vec::Unit(4, j))
                             .g1.norm());
  }
  CHECK(worst > 1e-2);
}

TEST_CASE("anti-self-duality kills the first tensor on the round sphere") {
  Setup s = setup("s4", "lambda+", "lambda+", AlgebraIso::identity());
  double worst = 0.0;
  for (const auto& abc : sphere_samples(10)) {
    const GenQuatElement u = assemble_df(s.q, abc[0], abc[1], abc[2]);
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        worst = std::max(worst, g_tensors(s.r, u.uplus, u.uminus,
                                          Vec::Unit(4, i), Vec::Unit(4, j))
                                    .max_norm());
  }
  CHECK(worst <= 1e-4);
}

TEST_CASE("obstruction samples are antisymmetric in the direction pair") {
  Setup s = setup("s2xt2", "lambda+", "lambda+", AlgebraIso::identity());
  const GenQuatElement u = assemble_df(s.q, 0.6, 0.0, 0.8);
  Rng rng(53);
  const Vec x = rng.unit_vector(4), y = rng.unit_vector(4);
  const GTensors gxy = g_tensors(s.r, u.uplus, u.uminus, x, y);
  const GTensors gyx = g_tensors(s.r, u.uplus, u.uminus, y, x);
  CHECK(max_abs(gxy.g1 + gyx.g1) <= 1e-10);
  CHECK(max_abs(gxy.g2 + gyx.g2) <= 1e-10);
  CHECK(max_abs(gxy.g3 + gyx.g3) <= 1e-10);
}

TEST_CASE("tensor values live in the expected sub-bundles") {
  const LambdaBases lb = LambdaBases::standard();
  Setup s = setup("s2xt2", "lambda+", "lambda-", AlgebraIso::identity());
  const GenQuatElement u = assemble_df(s.q, 0.48, -0.6, 0.64);
  const GTensors g =
      g_tensors(s.r, u.uplus, u.uminus, Vec::Unit(4, 0), Vec::Unit(4, 2));
  const double scale = std::max(1.0, g.max_norm());
  CHECK(lambda_span_residual(g.g1, lb.plus()) <= 1e-8 * scale);
  CHECK(lambda_span_residual(g.g2, lb.plus()) <= 1e-8 * scale);
  CHECK(lambda_span_residual(g.g3, lb.minus()) <= 1e-8 * scale);
  for (const Mat* m : {&g.g1, &g.g2, &g.g3}) {
    CHECK(std::abs(m->trace()) <= 1e-10 * scale);
    CHECK(max_abs(*m + m->transpose()) <= 1e-10 * scale);
  }
}

TEST_CASE("identity isomorphism collapses the three tensors") {
  Setup s = setup("s2xt2", "lambda+", "lambda+", AlgebraIso::identity());
  const GenQuatElement u = assemble_df(s.q, 0.36, 0.48, 0.8);
  const GTensors g =
      g_tensors(s.r, u.uplus, u.uminus, Vec::Unit(4, 1), Vec::Unit(4, 3));
  CHECK(max_abs(g.g1 - g.g2) <= 1e-10);
  CHECK(max_abs(g.g2 - g.g3) <= 1e-10);
}

TEST_CASE("sphere equivariance of the obstruction norms") {
  Setup s = setup("s1xs3", "lambda+", "lambda-", AlgebraIso::identity());
  Rng rng(59);
  const Mat3 rot = AlgebraIso::from_axis_angle(
                       Vec3(rng.uniform(-1, 1), rng.uniform(-1, 1),
                            rng.uniform(-1, 1)),
                       rng.uniform(0, 3))
                       .F;
  const Vec3 abc = rng.unit_vector(3);
  const Vec3 abc2 = rot * abc;
  QuatStructure rotated = s.q;
  for (int k = 0; k < 3; ++k) {
    Mat ep = Mat::Zero(4, 4), em = Mat::Zero(4, 4);
    for (int m = 0; m < 3; ++m) {
      ep += rot(k, m) * s.q.dplus[m];
      em += rot(k, m) * s.q.dminus[m];
    }
    rotated.dplus[k] = ep;
    rotated.dminus[k] = em;
  }
  rotated.f = AlgebraIso::from_matrix(Mat3(rot * s.q.f.F * rot.transpose()));

  const GenQuatElement u1 = assemble_df(s.q, abc[0], abc[1], abc[2]);
  const GenQuatElement u2 = assemble_df(rotated, abc2[0], abc2[1], abc2[2]);
  const GTensors g1 =
      g_tensors(s.r, u1.uplus, u1.uminus, Vec::Unit(4, 0), Vec::Unit(4, 1));
  const GTensors g2 =
      g_tensors(s.r, u2.uplus, u2.uminus, Vec::Unit(4, 0), Vec::Unit(4, 1));
  CHECK(std::abs(g1.g1.norm() - g2.g1.norm()) <= 1e-8);
  CHECK(std::abs(g1.g2.norm() - g2.g2.norm()) <= 1e-8);
  CHECK(std::abs(g1.g3.norm() - g2.g3.norm()) <= 1e-8);
}

TEST_CASE("projected curvature residual vanishes on the flat torus") {
  Setup s = setup("t4", "lambda+", "lambda+", f_theta(kPi));
  const GenQuatElement u = assemble_df(s.q, 0.0, 1.0, 0.0);
  Rng rng(61);
  for (int k = 0; k < 5; ++k) {
    Vec x(8), y(8), z(8);
    x << rng.unit_vector(4), rng.unit_vector(4);
    y << rng.unit_vector(4), rng.unit_vector(4);
    z << rng.unit_vector(4), rng.unit_vector(4);
    CHECK(theorem1bis_residual(s.r, u.gen, x, y, z) <= 1e-12);
  }
}

TEST_CASE("projected residual matches the commutator criterion") {
  for (const char* which : {"s2xt2", "s1xs3"}) {
    Setup s = setup(which, "lambda+",
                    std::string(which) == "s1xs3" ? "lambda-" : "lambda+",
                    AlgebraIso::identity());
    const auto sph = sphere_samples(4);
    for (const auto& abc : sph) {
      const GenQuatElement u = assemble_df(s.q, abc[0], abc[1], abc[2]);
      for (const auto& pr : std::vector<std::pair<int, int>>{{0, 1}, {0, 6}, {2, 7}}) {
        const Vec x = Vec::Unit(8, pr.first);
        const Vec y = Vec::Unit(8, pr.second);
        double worst_z = 0.0;
        for (int k = 0; k < 8; ++k)
          worst_z = std::max(
              worst_z, theorem1bis_residual(s.r, u.gen, x, y,
                                            Vec(Vec::Unit(8, k))));
        const Mat comm = gen_obstruction_commutator(s.r, u.gen, x, y);
        CHECK(std::abs(8.0 * std::sqrt(2.0) * worst_z - max_col_norm(comm)) <=
              1e-8);
      }
    }
  }
}

TEST_CASE("matched samples put both criteria in the same window") {
  SUBCASE("both vanish on integrable scenarios") {
    Setup s = setup("s1xs3", "lambda+", "lambda-", AlgebraIso::identity());
    const GenQuatElement u = assemble_df(s.q, 0.0, 1.0, 0.0);
    const MatchedSample ms = matched_criteria_sample(s.r, u, 0, 2);
    CHECK(ms.g_direct <= 1e-6);
    CHECK(ms.t1b <= 1e-6);
  }
  SUBCASE("ratio stays within one decade on obstructed scenarios") {
    Setup s = setup("s2xt2", "lambda+", "lambda+", AlgebraIso::identity());
    for (const auto& abc : sphere_samples(6)) {
      const GenQuatElement u = assemble_df(s.q, abc[0], abc[1], abc[2]);
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
          const MatchedSample ms = matched_criteria_sample(s.r, u, i, j);
          if (ms.g_direct > 1e-6) {
            const double ratio = ms.t1b / ms.g_direct;
            CHECK(ratio >= 0.1);
            CHECK(ratio <= 10.0);
          } else {
            CHECK(ms.t1b <= 1e-6);
          }
        }
    }
  }
}

TEST_CASE("dichotomy and trace-part diagnostics") {
  SUBCASE("twisted flat structure sits on the s = 0 branch") {
    Setup s = setup("t4", "lambda+", "lambda+", f_theta(kPi));
    const Dim4Blocks b = blocks_dim4(s.r, LambdaBases::standard());
    const Prop567Report rep = prop567_checks(b, s.q.f, 1, true);
    CHECK(!rep.f_identity);
    CHECK(rep.s_vanishes);
    CHECK(rep.dichotomy_ok);
  }
  SUBCASE("traceless Ricci block is s/12 times the isomorphism") {
    Setup s = setup("s1xs3", "lambda+", "lambda-", AlgebraIso::identity());
    const Dim4Blocks b = blocks_dim4(s.r, LambdaBases::standard());
    const Prop567Report rep = prop567_checks(b, s.q.f, 1, false);
    CHECK(rep.prop7_applicable);
    CHECK(rep.prop7_residual <= 2e-3 * rep.b_norm);
    CHECK(rep.b_norm > 0.5);
  }
}

TEST_CASE("twistor types of the twisted flat structure") {
  Setup s = setup("t4", "lambda+", "lambda+", f_theta(kPi));
  auto type_at = [&](double a, double b, double c) {
    return twistor_type(s.mani.frame, assemble_df(s.q, a, b, c), s.p).type;
  };
  CHECK(type_at(1, 0, 0) == 3);
  CHECK(type_at(-1, 0, 0) == 3);
  CHECK(type_at(0, 1, 0) == 1);
  const auto sph = sphere_samples(10);
  for (size_t k = 6; k < sph.size(); ++k)
    CHECK(type_at(sph[k][0], sph[k][1], sph[k][2]) == 1);

  const QuatStructure classical =
      make_structure("lambda+", "lambda+", AlgebraIso::identity(), 4);
  for (size_t k = 0; k < sph.size(); ++k)
    CHECK(twistor_type(s.mani.frame,
                       assemble_df(classical, sph[k][0], sph[k][1], sph[k][2]),
                       s.p)
              .type == 3);
}

TEST_CASE("classifier branches") {
  ClassifyInput in;
  in.dim = 4;
  in.prop3 = 1e-12;
  in.prop3_threshold = 1e-8;
  in.same_bundle = true;
  in.f_identity = false;
  in.max_g = 1e-9;
  in.r_restricted_plus = 1e-9;

  SUBCASE("flat twisted torus lands on the curvature-vanishing branch") {
    const Verdict v = classify(in);
    CHECK(v.branch == Verdict::Branch::Thm3a);
    CHECK(v.predicted_integrable);
    CHECK(v.agree);
  }
  SUBCASE("anti-self-dual with identity isomorphism") {
    in.r_restricted_plus = 1.0;
    in.f_identity = true;
    in.wplus = 1e-9;
    const Verdict v = classify(in);
    CHECK(v.branch == Verdict::Branch::Thm3b);
    CHECK(v.predicted_integrable);
  }
  SUBCASE("split bundles with conformally flat metric") {
    in.same_bundle = false;
    in.wplus = 1e-9;
    in.wminus = 1e-9;
    const Verdict v = classify(in);
    CHECK(v.branch == Verdict::Branch::Thm4);
  }
  SUBCASE("Kaehler product is non-integrable and the measurement agrees") {
    in.r_restricted_plus = 1.0;
    in.wplus = 0.4;
    in.max_g = 2.0;
    const Verdict v = classify(in);
    CHECK(v.branch == Verdict::Branch::NonIntegrable);
    CHECK(!v.predicted_integrable);
    CHECK(v.agree);
  }
  SUBCASE("failed parallelism is not classified") {
    in.prop3 = 1.0;
    const Verdict v = classify(in);
    CHECK(v.branch == Verdict::Branch::NonApplicable);
  }
  SUBCASE("residuals between the thresholds are inconclusive") {
    in.max_g = 1e-3;
    const Verdict v = classify(in);
    CHECK(v.branch == Verdict::Branch::Inconclusive);
    CHECK(!v.agree);
  }
  SUBCASE("higher dimension always predicts integrable") {
    in.dim = 8;
    const Verdict v = classify(in);
    CHECK(v.branch == Verdict::Branch::Thm2);
    CHECK(v.predicted_integrable);
  }
}

TEST_CASE("sphere sampling starts at the poles") {
  const auto sph = sphere_samples(50);
  CHECK(sph.size() == 56);
  CHECK((sph[0] - Vec3(1, 0, 0)).norm() == 0.0);
  CHECK((sph[1] - Vec3(-1, 0, 0)).norm() == 0.0);
  CHECK((sph[4] - Vec3(0, 0, 1)).norm() == 0.0);
  for (const auto& p : sph) CHECK(p.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_SUITE_END();

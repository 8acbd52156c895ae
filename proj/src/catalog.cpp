#include "twistor/catalog.hpp"

#include <cmath>
#include <numbers>

namespace twistor {

namespace {

constexpr double kPi = std::numbers::pi;

Mat rot2(double angle) {
  Mat r(2, 2);
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return r;
}

DeckGenerator z1_shift_z2_rot(double shift_x1, double angle,
                              const std::string& label) {
  Mat lin = Mat::Identity(4, 4);
  lin.block(2, 2, 2, 2) = rot2(angle);
  Vec off = Vec::Zero(4);
  off[0] = shift_x1;
  return DeckGenerator{lin, off, label};
}

DeckGenerator translation(const Vec& off, const std::string& label) {
  return DeckGenerator{Mat::Identity(4, 4), off, label};
}

}  // namespace

Manifold make_flat_torus(int dim) {
  if (dim != 4 && dim != 8)
    throw DimensionError("flat torus supports dim 4 or 8, got " +
                         std::to_string(dim));
  Manifold m;
  m.id = "flat_torus";
  m.frame = constant_frame(Chart::box(dim, 0.0, 1.0, "T^" + std::to_string(dim)),
                           Mat::Identity(dim, dim), "flat");
  return m;
}

Manifold make_hyperelliptic(int type) {
  if (type < 1 || type > 7)
    throw BadType("hyperelliptic type must be 1..7, got " +
                  std::to_string(type));

  Manifold m;
  m.id = "hyperelliptic";
  Chart chart = Chart::box(4, 0.0, 1.0, "hyperelliptic-" + std::to_string(type));
  m.frame = FrameField{
      chart,
      [](const Vec& p) {
        const double a = 2.0 * kPi * p[0];
        const double c = std::cos(a), s = std::sin(a);
        Mat f = Mat::Zero(4, 4);
        // columns: R_{2 pi x1} e3, R_{2 pi x1} e4, e1, e2
        f(2, 0) = c;
        f(3, 0) = s;
        f(2, 1) = -s;
        f(3, 1) = c;
        f(0, 2) = 1.0;
        f(1, 3) = 1.0;
        return f;
      },
      "hyperelliptic"};

  const double third = 1.0 / 3.0;
  switch (type) {
    case 1:
      m.lattice = "Z+iZ";
      m.deck.push_back(z1_shift_z2_rot(0.5, kPi, "g1"));
      break;
    case 2:
      m.lattice = "Z+iZ";
      m.deck.push_back(z1_shift_z2_rot(0.5, kPi, "g1"));
      m.deck.push_back(translation((Vec(4) << 0, 0.5, 0.5, 0).finished(),
                                   "g2 (2 e1 = 0)"));
      break;
    case 3:
      m.lattice = "Z+jZ";
      m.deck.push_back(z1_shift_z2_rot(third, 2.0 * kPi / 3.0, "g1"));
      break;
    case 4:
      m.lattice = "Z+jZ";
      m.deck.push_back(z1_shift_z2_rot(third, 2.0 * kPi / 3.0, "g1"));
      m.deck.push_back(translation(
          (Vec(4) << 0, third, 0, std::sqrt(3.0) / 3.0).finished(),
          "g2 (j e1 = e1)"));
      break;
    case 5:
      m.lattice = "Z+iZ";
      m.deck.push_back(z1_shift_z2_rot(0.25, kPi / 2.0, "g1"));
      break;
    case 6:
      m.lattice = "Z+iZ";
      m.deck.push_back(z1_shift_z2_rot(0.25, kPi / 2.0, "g1"));
      m.deck.push_back(translation((Vec(4) << 0, 0.5, 0.5, 0.5).finished(),
                                   "g2 (i e1 = e1)"));
      break;
    case 7:
      m.lattice = "Z+jZ";
      m.deck.push_back(z1_shift_z2_rot(-1.0 / 6.0, -kPi / 3.0, "g1"));
      break;
  }
  return m;
}

Manifold make_s1_x_space_form(int sign) {
  Manifold m;
  if (sign == +1) {
    m.id = "s1_x_s3";
    Chart chart;
    chart.dim = 4;
    chart.bounds = {{-0.4, 0.4}, {-0.4, 0.4}, {-0.4, 0.4}, {0.0, 1.0}};
    chart.label = "S1xS3 (gnomonic)";
    m.frame = FrameField{
        chart,
        [](const Vec& p) {
          // Unit S^3 in the gnomonic chart q(x) = (1, x)/sqrt(1+|x|^2):
          // the left-invariant fields q e_i pull back to
          // a_i(x) = e_i + x cross e_i + x_i x.
          const Vec3 x = p.head(3);
          Mat f = Mat::Zero(4, 4);
          for (int i = 0; i < 3; ++i) {
            Vec3 ei = Vec3::Zero();
            ei[i] = 1.0;
            const Vec3 a = ei + x.cross(ei) + x[i] * x;
            f.block(0, i, 3, 1) = a;
          }
          f(3, 3) = 1.0;
          return f;
        },
        "s1_x_s3"};
  } else if (sign == -1) {
    m.id = "s1_x_h3";
    Chart chart;
    chart.dim = 4;
    chart.bounds = {{0.0, 1.0}, {0.0, 1.0}, {0.6, 1.8}, {0.0, 1.0}};
    chart.label = "S1xH3 (half space)";
    m.frame = FrameField{chart,
                         [](const Vec& p) {
                           const double z = p[2];
                           Mat f = Mat::Zero(4, 4);
                           f(0, 0) = z;
                           f(1, 1) = z;
                           f(2, 2) = z;
                           f(3, 3) = 1.0;
                           return f;
                         },
                         "s1_x_h3"};
  } else {
    throw ConfigError("space form sign must be +1 or -1");
  }
  return m;
}

Manifold make_conformally_flat(const std::string& factor_id) {
  ScalarFn lambda;
  Chart chart;
  if (factor_id == "one") {
    chart = Chart::box(4, 0.0, 1.0, "flat (conformal)");
    lambda = [](const Vec&) { return 1.0; };
  } else if (factor_id == "round_s4") {
    chart = Chart::box(4, -0.4, 0.4, "round S4 (stereographic)");
    lambda = [](const Vec& p) { return 2.0 / (1.0 + p.squaredNorm()); };
  } else if (factor_id == "exp_x1") {
    chart = Chart::box(4, -0.5, 0.5, "conformal exp(x1)");
    lambda = [](const Vec& p) { return std::exp(p[0]); };
  } else if (factor_id == "shifted_x1") {
    // negative control: not positive anywhere on the box
    chart = Chart::box(4, -0.5, 0.5, "conformal x1 - 2");
    lambda = [](const Vec& p) { return p[0] - 2.0; };
  } else {
    throw ConfigError("unknown conformal factor '" + factor_id + "'");
  }

  // pre: the factor is positive on the box
  for (const Vec& probe : {Vec(Vec::Zero(4)),
                           (Vec(4) << chart.bounds[0][0], chart.bounds[1][0],
                            chart.bounds[2][0], chart.bounds[3][0])
                               .finished(),
                           (Vec(4) << chart.bounds[0][1], chart.bounds[1][1],
                            chart.bounds[2][1], chart.bounds[3][1])
                               .finished()}) {
    if (!(lambda(probe) > 0.0))
      throw NonPositiveFactor("conformal factor not positive on the box");
  }

  Manifold m;
  m.id = "conformally_flat:" + factor_id;
  m.frame = FrameField{chart,
                       [lambda](const Vec& p) {
                         return Mat((1.0 / lambda(p)) * Mat::Identity(4, 4));
                       },
                       m.id};
  return m;
}

Manifold make_s2_x_t2() {
  Manifold m;
  m.id = "s2_x_t2";
  Chart chart;
  chart.dim = 4;
  chart.bounds = {{0.3, kPi - 0.3}, {0.0, 2.0 * kPi}, {0.0, 1.0}, {0.0, 1.0}};
  chart.label = "S2xT2";
  m.frame = FrameField{chart,
                       [](const Vec& p) {
                         Mat f = Mat::Zero(4, 4);
                         f(0, 0) = 1.0;
                         f(1, 1) = 1.0 / std::sin(p[0]);
                         f(2, 2) = 1.0;
                         f(3, 3) = 1.0;
                         return f;
                       },
                       "s2_x_t2"};
  return m;
}

std::array<Mat, 3> make_triple(const std::string& id, int dim) {
  const LambdaBases lb = LambdaBases::standard();
  if (id == "lambda+" || id == "lambda-") {
    if (dim != 4)
      throw ConfigError("triple '" + id + "' requires a 4-dimensional chart");
    return id == "lambda+" ? lb.plus() : lb.minus();
  }
  if (id.rfind("product:", 0) == 0 && id.size() == 10) {
    if (dim != 8)
      throw ConfigError("triple '" + id + "' requires an 8-dimensional chart");
    const auto pick = [&lb](char c) {
      if (c == '+') return lb.plus();
      if (c == '-') return lb.minus();
      throw ConfigError("product triple signs must be '+' or '-'");
    };
    const auto t1 = pick(id[8]);
    const auto t2 = pick(id[9]);
    std::array<Mat, 3> out;
    for (int k = 0; k < 3; ++k) {
      Mat b = Mat::Zero(8, 8);
      b.block(0, 0, 4, 4) = t1[k];
      b.block(4, 4, 4, 4) = t2[k];
      out[k] = b;
    }
    return out;
  }
  throw ConfigError("unknown triple id '" + id + "'");
}

QuatStructure make_structure(const std::string& dplus, const std::string& dminus,
                             const AlgebraIso& f, int dim) {
  QuatStructure q;
  q.dplus = make_triple(dplus, dim);
  q.dminus = make_triple(dminus, dim);
  q.f = f;
  q.same_bundle = dplus == dminus;
  const double rel = q.triple_residual();
  if (rel > 1e-10)
    throw ConfigError("triples fail the quaternion relations (residual " +
                      std::to_string(rel) + ")");
  return q;
}

}  // namespace twistor

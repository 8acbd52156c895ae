#include "twistor/scenario.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

namespace twistor {

namespace {

constexpr double kPi = std::numbers::pi;

void require_keys(const json& j, const std::set<std::string>& allowed,
                  const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!allowed.count(key))
      throw ConfigError(where + ": unknown field '" + key + "'");
  }
}

json vec_to_json(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json witness_json(const Vec* point, const Vec3* sphere,
                  std::pair<int, int> const* pair) {
  json w;
  w["point"] = point ? vec_to_json(*point) : json(nullptr);
  w["sphere"] = sphere ? json({(*sphere)[0], (*sphere)[1], (*sphere)[2]})
                       : json(nullptr);
  w["pair"] = pair ? json({pair->first, pair->second}) : json(nullptr);
  return w;
}

}  // namespace

AlgebraIso resolve_f(const json& f_spec) {
  require_keys(f_spec, {"type", "angle", "axis", "matrix"}, "structure.f");
  const std::string type = f_spec.at("type").get<std::string>();
  if (type == "id") {
    require_keys(f_spec, {"type"}, "structure.f");
    return AlgebraIso::identity();
  }
  if (type == "theta") {
    require_keys(f_spec, {"type", "angle"}, "structure.f");
    return f_theta(f_spec.at("angle").get<double>());
  }
  if (type == "axis_angle") {
    require_keys(f_spec, {"type", "axis", "angle"}, "structure.f");
    const auto ax = f_spec.at("axis").get<std::vector<double>>();
    if (ax.size() != 3) throw ConfigError("structure.f.axis must have 3 entries");
    return AlgebraIso::from_axis_angle(Vec3(ax[0], ax[1], ax[2]),
                                       f_spec.at("angle").get<double>());
  }
  if (type == "matrix") {
    require_keys(f_spec, {"type", "matrix"}, "structure.f");
    const auto rows = f_spec.at("matrix").get<std::vector<std::vector<double>>>();
    if (rows.size() != 3 || rows[0].size() != 3 || rows[1].size() != 3 ||
        rows[2].size() != 3)
      throw ConfigError("structure.f.matrix must be 3x3");
    Mat3 m;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) m(r, c) = rows[r][c];
    return AlgebraIso::from_matrix(m);
  }
  throw ConfigError("unknown f type '" + type + "'");
}

Manifold resolve_manifold(const std::string& id, const json& params) {
  if (id == "flat_torus") {
    require_keys(params, {"dim"}, "manifold.params");
    return make_flat_torus(params.at("dim").get<int>());
  }
  if (id == "hyperelliptic") {
    require_keys(params, {"type"}, "manifold.params");
    return make_hyperelliptic(params.at("type").get<int>());
  }
  if (id == "s1_x_space_form") {
    require_keys(params, {"sign"}, "manifold.params");
    return make_s1_x_space_form(params.at("sign").get<int>());
  }
  if (id == "conformally_flat") {
    require_keys(params, {"factor"}, "manifold.params");
    return make_conformally_flat(params.at("factor").get<std::string>());
  }
  if (id == "s2_x_t2") {
    require_keys(params, {}, "manifold.params");
    return make_s2_x_t2();
  }
  throw ConfigError("unknown manifold id '" + id + "'");
}

namespace {

const std::set<std::string> kCheckIds = {
    "gacs_algebra",     "courant",      "torsion",       "prop3",
    "prop3_violation",  "gtensors",     "gtensors_nonzero", "thm1bis",
    "curvature_blocks", "prop7",        "prop56",        "twistor_types",
    "deck",             "verdict"};

}  // namespace

Scenario Scenario::from_json(const json& j) {
  require_keys(j, {"name", "manifold", "structure", "checks", "sampling"},
               "scenario");
  Scenario sc;
  if (j.contains("name")) sc.name = j.at("name").get<std::string>();

  const json& mani = j.at("manifold");
  require_keys(mani, {"id", "params"}, "manifold");
  sc.manifold_id = mani.at("id").get<std::string>();
  sc.manifold_params = mani.value("params", json::object());

  const json& st = j.at("structure");
  require_keys(st, {"dplus", "dminus", "f"}, "structure");
  sc.dplus = st.at("dplus").get<std::string>();
  sc.dminus = st.at("dminus").get<std::string>();
  sc.f_spec = st.at("f");

  for (const auto& c : j.at("checks")) {
    const std::string id = c.get<std::string>();
    if (!kCheckIds.count(id)) throw ConfigError("unknown check id '" + id + "'");
    sc.checks.push_back(id);
  }

  if (j.contains("sampling")) {
    const json& s = j.at("sampling");
    require_keys(s, {"points", "sphere", "h", "seed"}, "sampling");
    sc.sampling.points = s.value("points", 25);
    sc.sampling.sphere = s.value("sphere", 50);
    sc.sampling.h = s.value("h", kFirstStep);
    sc.sampling.seed = s.value("seed", std::uint64_t{42});
  }
  if (sc.sampling.points < 1 || sc.sampling.sphere < 1 || sc.sampling.h <= 0)
    throw ConfigError("invalid sampling parameters");

  // validates the manifold, the triples and f eagerly
  Manifold m = resolve_manifold(sc.manifold_id, sc.manifold_params);
  make_structure(sc.dplus, sc.dminus, resolve_f(sc.f_spec), m.dim());
  return sc;
}

Scenario Scenario::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError("scenario file '" + path + "' is not valid JSON: " +
                      e.what());
  }
  return from_json(j);
}

json Scenario::to_json() const {
  json j;
  j["name"] = name;
  j["manifold"] = {{"id", manifold_id}, {"params", manifold_params}};
  j["structure"] = {{"dplus", dplus}, {"dminus", dminus}, {"f", f_spec}};
  j["checks"] = checks;
  j["sampling"] = {{"points", sampling.points},
                   {"sphere", sampling.sphere},
                   {"h", sampling.h},
                   {"seed", sampling.seed}};
  return j;
}

json CheckResult::to_json() const {
  json j;
  j["name"] = name;
  j["max_residual"] = max_residual;
  j["witness"] = witness.is_null()
                     ? witness_json(nullptr, nullptr, nullptr)
                     : witness;
  j["threshold"] = threshold;
  j["pass"] = pass;
  if (at_least) j["direction"] = "ge";
  if (!error.empty()) j["error"] = error;
  return j;
}

// ---------------------------------------------------------------------------
// Scenario execution
// ---------------------------------------------------------------------------

namespace {

struct ScenarioState {
  const Scenario& sc;
  Manifold mani;
  QuatStructure q;
  Connection lc;
  std::vector<Vec> points;
  std::vector<Vec3> spheres;
  std::vector<GenQuatElement> elements;  // one per sphere sample
  double h1, hc;

  // lazily filled
  std::vector<CurvatureOperator> curv;
  std::vector<Dim4Blocks> blocks;
  bool have_curv = false, have_blocks = false;
  double prop3_max = -1.0;
  double gmax = -1.0, g1max = -1.0;
  json gwitness, g1witness;

  explicit ScenarioState(const Scenario& s)
      : sc(s),
        mani(resolve_manifold(s.manifold_id, s.manifold_params)),
        q(make_structure(s.dplus, s.dminus, resolve_f(s.f_spec), mani.dim())),
        lc(levi_civita(mani.frame, s.sampling.h)),
        h1(s.sampling.h),
        hc(s.sampling.curvature_step()) {
    points = halton_points(mani.frame.chart, s.sampling.points,
                           s.sampling.margin(), s.sampling.seed);
    spheres = sphere_samples(s.sampling.sphere);
    elements.reserve(spheres.size());
    for (const auto& abc : spheres)
      elements.push_back(assemble_df(q, abc[0], abc[1], abc[2]));
  }

  int dim() const { return mani.dim(); }

  Connection frozen_at(const Vec& p) const {
    const ChristoffelMats g0 = lc.christoffels(p);
    Connection c = lc;
    c.christoffels = [g0](const Vec&) { return g0; };
    return c;
  }

  void ensure_curvature() {
    if (have_curv) return;
    curv.reserve(points.size());
    for (const auto& p : points) curv.push_back(curvature(lc, p, hc));
    have_curv = true;
  }

  void ensure_blocks() {
    if (have_blocks) return;
    ensure_curvature();
    if (dim() == 4) {
      const LambdaBases lb = LambdaBases::standard();
      blocks.reserve(curv.size());
      for (const auto& r : curv) blocks.push_back(blocks_dim4(r, lb));
    }
    have_blocks = true;
  }

  double ensure_prop3() {
    if (prop3_max >= 0.0) return prop3_max;
    prop3_max = 0.0;
    for (const auto& p : points) {
      const Connection fc = frozen_at(p);
      prop3_max = std::max(prop3_max, prop3_residual(q, fc, p, h1).combined());
    }
    return prop3_max;
  }

  void ensure_gtensors() {
    if (gmax >= 0.0) return;
    ensure_curvature();
    gmax = 0.0;
    g1max = 0.0;
    Rng rng(sc.sampling.seed ^ 0x9e3779b97f4a7c15ull);
    const int d = dim();
    for (size_t ip = 0; ip < points.size(); ++ip) {
      // exhaustive frame pairs plus ten random unit combinations
      std::vector<std::pair<Vec, Vec>> dirs;
      std::vector<json> pair_tags;
      for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
          dirs.emplace_back(Vec::Unit(d, i), Vec::Unit(d, j));
          pair_tags.push_back(json{i, j});
        }
      for (int r = 0; r < 10; ++r) {
        dirs.emplace_back(rng.unit_vector(d), rng.unit_vector(d));
        pair_tags.push_back(json(nullptr));
      }

      for (size_t is = 0; is < spheres.size(); ++is) {
        const GenQuatElement& u = elements[is];
        for (size_t id = 0; id < dirs.size(); ++id) {
          const GTensors g = g_tensors(curv[ip], u.uplus, u.uminus,
                                       dirs[id].first, dirs[id].second);
          const double g1 = g.g1.norm();
          const double gm = std::max({g1, g.g2.norm(), g.g3.norm()});
          auto wit = [&]() {
            json w = witness_json(&points[ip], &spheres[is], nullptr);
            w["pair"] = pair_tags[id];
            return w;
          };
          if (gm > gmax) {
            gmax = gm;
            gwitness = wit();
          }
          if (g1 > g1max) {
            g1max = g1;
            g1witness = wit();
          }
        }
      }
    }
  }

  double r_restricted() {
    ensure_curvature();
    double worst = 0.0;
    if (dim() != 4) {
      for (const auto& r : curv) worst = std::max(worst, max_abs(r.lambda2));
      return worst;
    }
    const LambdaBases lb = LambdaBases::standard();
    const bool plus = sc.dplus == "lambda+";
    for (const auto& r : curv) {
      const Mat m6 = lambda2_in_pm_basis(r, lb);
      const Mat cols = plus ? m6.leftCols(3) : m6.rightCols(3);
      worst = std::max(worst, cols.norm());
    }
    return worst;
  }
};

std::vector<CheckResult> check_gacs_algebra(ScenarioState& st) {
  CheckResult r;
  r.name = "gacs_algebra";
  r.threshold = 1e-10;
  const Mat eta = eta_matrix(st.dim());
  for (size_t ip = 0; ip < st.points.size(); ++ip) {
    for (size_t is = 0; is < st.spheres.size(); ++is) {
      const Mat& m = st.elements[is].gen;
      const double sq = max_abs(m * m + Mat::Identity(m.rows(), m.cols()));
      const double et = max_abs(m.transpose() * eta * m - eta);
      const double res = std::max(sq, et);
      if (res > r.max_residual) {
        r.max_residual = res;
        r.witness = witness_json(&st.points[ip], &st.spheres[is], nullptr);
      }
    }
  }
  r.pass = r.max_residual <= r.threshold;
  return {r};
}

std::vector<CheckResult> check_courant(ScenarioState& st) {
  const int d = st.dim();
  const FrameField& frame = st.mani.frame;
  const Mat jpole = st.elements[0].gen;

  std::vector<std::pair<GenSection, GenSection>> pairs;
  GenSection a1{[d](const Vec& q) {
    GenVector v = gen_zero(d);
    v.vec[0] = 1.0 + 0.3 * std::sin(2.0 * kPi * q[0]);
    v.form[1] = 0.2;
    return v;
  }};
  GenSection b1{[d](const Vec& q) {
    GenVector v = gen_zero(d);
    v.vec[1] = 1.0;
    v.form[0] = 0.1 + 0.25 * std::sin(2.0 * kPi * q[1]);
    return v;
  }};
  GenSection a2 = frame_section(2 % d, d);
  GenSection b2{[d](const Vec& q) {
    GenVector v = gen_zero(d);
    v.form[3 % d] = 0.4 + 0.2 * std::cos(2.0 * kPi * q[0]);
    return v;
  }};
  GenSection a3{[jpole, a1](const Vec& q) {
    return GenVector::from_stacked(jpole * a1.fn(q).stacked());
  }};
  pairs.emplace_back(a1, b1);
  pairs.emplace_back(a2, b2);
  pairs.emplace_back(a3, b2);

  CheckResult anti, pr1;
  anti.name = "courant_antisym";
  anti.threshold = 1e-9;
  pr1.name = "courant_pr1";
  pr1.threshold = 1e-8;

  const size_t npts = std::min<size_t>(st.points.size(), 10);
  for (size_t ip = 0; ip < npts; ++ip) {
    const Vec& p = st.points[ip];
    for (const auto& [A, B] : pairs) {
      const GenVector ab = courant_bracket(frame, A, B, p, st.h1);
      const GenVector ba = courant_bracket(frame, B, A, p, st.h1);
      const double ares = (ab + ba).norm();
      if (ares > anti.max_residual) {
        anti.max_residual = ares;
        anti.witness = witness_json(&p, nullptr, nullptr);
      }

      auto af = A.fn, bf = B.fn;
      auto coeff = frame.coeff;
      VectorField xv{frame.chart,
                     [coeff, af](const Vec& q) { return Vec(coeff(q) * af(q).vec); }};
      VectorField yv{frame.chart,
                     [coeff, bf](const Vec& q) { return Vec(coeff(q) * bf(q).vec); }};
      const Vec lie = lie_bracket(xv, yv, p, st.h1);
      const Vec expected = frame.eval_unchecked(p).partialPivLu().solve(lie);
      const double pres = (ab.vec - expected).norm();
      if (pres > pr1.max_residual) {
        pr1.max_residual = pres;
        pr1.witness = witness_json(&p, nullptr, nullptr);
      }
    }
  }
  anti.pass = anti.max_residual <= anti.threshold;
  pr1.pass = pr1.max_residual <= pr1.threshold;
  return {anti, pr1};
}

std::vector<CheckResult> check_torsion(ScenarioState& st) {
  CheckResult r;
  r.name = "torsion";
  r.threshold = 1e-6;
  const int d = st.dim();
  std::vector<GenSection> sections;
  for (int i = 0; i < d; ++i) sections.push_back(frame_section(i, d));
  for (int i = 0; i < d; ++i) sections.push_back(coframe_section(i, d));

  const size_t npts = std::min<size_t>(st.points.size(), 3);
  for (size_t ip = 0; ip < npts; ++ip) {
    const Vec& p = st.points[ip];
    const Connection fc = st.frozen_at(p);
    for (size_t a = 0; a < sections.size(); ++a)
      for (size_t b = 0; b < sections.size(); ++b)
        for (size_t c = 0; c < sections.size(); ++c) {
          const double t = std::abs(
              gen_torsion(fc, sections[a], sections[b], sections[c], p, st.h1));
          if (t > r.max_residual) {
            r.max_residual = t;
            r.witness = witness_json(&p, nullptr, nullptr);
            r.witness["triple"] = {a, b, c};
          }
        }
  }
  r.pass = r.max_residual <= r.threshold;
  return {r};
}

double prop3_threshold_for(const std::string& manifold_id) {
  if (manifold_id == "flat_torus") return 1e-8;
  if (manifold_id == "hyperelliptic") return 1e-6;
  return 1e-4;
}

std::vector<CheckResult> check_prop3(ScenarioState& st) {
  CheckResult r;
  r.name = "prop3";
  r.threshold = prop3_threshold_for(st.sc.manifold_id);
  r.max_residual = st.ensure_prop3();
  r.witness = witness_json(st.points.empty() ? nullptr : &st.points[0], nullptr,
                           nullptr);
  r.pass = r.max_residual <= r.threshold;
  return {r};
}

std::vector<CheckResult> check_prop3_violation(ScenarioState& st) {
  CheckResult r;
  r.name = "prop3_violation";
  r.threshold = 1e-2;
  r.at_least = true;
  r.max_residual = st.ensure_prop3();
  r.witness = witness_json(st.points.empty() ? nullptr : &st.points[0], nullptr,
                           nullptr);
  r.pass = r.max_residual >= r.threshold;
  return {r};
}

double gtensor_threshold_for(const std::string& manifold_id) {
  return manifold_id == "flat_torus" ? 1e-8 : kVanishThreshold;
}

std::vector<CheckResult> check_gtensors(ScenarioState& st) {
  CheckResult r;
  r.name = "gtensors";
  r.threshold = gtensor_threshold_for(st.sc.manifold_id);
  st.ensure_gtensors();
  r.max_residual = st.gmax;
  r.witness = st.gwitness;
  r.pass = r.max_residual <= r.threshold;
  return {r};
}

std::vector<CheckResult> check_gtensors_nonzero(ScenarioState& st) {
  CheckResult r;
  r.name = "gtensors_nonzero";
  r.threshold = kNonzeroThreshold;
  r.at_least = true;
  st.ensure_gtensors();
  r.max_residual = st.g1max;
  r.witness = st.g1witness;
  r.pass = r.max_residual >= r.threshold;
  return {r};
}

std::vector<CheckResult> check_thm1bis(ScenarioState& st) {
  st.ensure_curvature();
  const int d = st.dim();

  CheckResult ident;
  ident.name = "thm1bis_identity";
  ident.threshold = 1e-8;
  CheckResult ratio;
  ratio.name = "thm1bis_ratio";
  ratio.threshold = 1.0;

  const size_t npts = std::min<size_t>(st.points.size(), 4);
  const std::vector<size_t> sidx = {0, 6};
  std::vector<std::pair<int, int>> prs = {{0, 1}, {2, 3}, {0, 2}};

  for (size_t ip = 0; ip < npts; ++ip) {
    for (size_t is : sidx) {
      if (is >= st.spheres.size()) continue;
      const GenQuatElement& u = st.elements[is];
      for (const auto& pr : prs) {
        // identity: the projected residual maximized over the frame
        // equals the commutator column norm up to the 8 sqrt(2) scale
        const Vec x = Vec::Unit(2 * d, pr.first);
        const Vec y = Vec::Unit(2 * d, pr.second);
        double worst_z = 0.0;
        for (int k = 0; k < 2 * d; ++k)
          worst_z = std::max(worst_z,
                             theorem1bis_residual(st.curv[ip], u.gen, x, y,
                                                  Vec(Vec::Unit(2 * d, k))));
        const Mat comm = gen_obstruction_commutator(st.curv[ip], u.gen, x, y);
        const double ires =
            std::abs(8.0 * std::sqrt(2.0) * worst_z - max_col_norm(comm));
        if (ires > ident.max_residual) {
          ident.max_residual = ires;
          ident.witness = witness_json(&st.points[ip], &st.spheres[is], &pr);
        }

        // matched two-route comparison
        const MatchedSample ms =
            matched_criteria_sample(st.curv[ip], u, pr.first, pr.second);
        double metric;
        if (ms.g_direct <= 1e-6) {
          metric = ms.t1b <= 1e-6 ? 0.0 : 1e9;
        } else {
          const double rr = ms.t1b / ms.g_direct;
          metric = std::max(rr, 1.0 / rr) / 10.0;
        }
        if (metric > ratio.max_residual) {
          ratio.max_residual = metric;
          ratio.witness = witness_json(&st.points[ip], &st.spheres[is], &pr);
          ratio.witness["t1b"] = ms.t1b;
          ratio.witness["g_direct"] = ms.g_direct;
        }
      }
    }
  }
  ident.pass = ident.max_residual <= ident.threshold;
  ratio.pass = ratio.max_residual <= ratio.threshold;
  return {ident, ratio};
}

std::vector<CheckResult> check_curvature_blocks(ScenarioState& st) {
  st.ensure_blocks();
  CheckResult r;
  r.name = "curvature_blocks";
  r.threshold = 1e-5;

  double sym_max = 0.0, imbalance = 0.0;
  double s_min = 0.0, s_max = 0.0, s_sum = 0.0;
  double wp = 0.0, wm = 0.0, b_min = 0.0, b_max = 0.0;
  for (size_t ip = 0; ip < st.curv.size(); ++ip) {
    const Mat& m = st.curv[ip].lambda2;
    const double sym = max_abs(m - m.transpose());
    if (sym > sym_max) {
      sym_max = sym;
      r.witness = witness_json(&st.points[ip], nullptr, nullptr);
    }
    if (st.dim() == 4) {
      const Dim4Blocks& b = st.blocks[ip];
      imbalance = std::max(imbalance,
                           std::abs(b.trace_plus - b.trace_minus));
      if (ip == 0) {
        s_min = s_max = b.s;
        b_min = b_max = b.b.norm();
      }
      s_min = std::min(s_min, b.s);
      s_max = std::max(s_max, b.s);
      s_sum += b.s;
      wp = std::max(wp, b.wplus.norm());
      wm = std::max(wm, b.wminus.norm());
      b_min = std::min(b_min, b.b.norm());
      b_max = std::max(b_max, b.b.norm());
    }
  }
  r.max_residual = std::max(sym_max, imbalance);
  r.pass = r.max_residual <= r.threshold;
  r.diagnostics["sym_max"] = sym_max;
  if (st.dim() == 4) {
    r.diagnostics["trace_imbalance"] = imbalance;
    r.diagnostics["s_mean"] = s_sum / double(st.curv.size());
    r.diagnostics["s_min"] = s_min;
    r.diagnostics["s_max"] = s_max;
    r.diagnostics["wplus_max"] = wp;
    r.diagnostics["wminus_max"] = wm;
    r.diagnostics["b_min"] = b_min;
    r.diagnostics["b_max"] = b_max;
  }
  return {r};
}

std::vector<CheckResult> check_prop7(ScenarioState& st) {
  st.ensure_blocks();
  CheckResult r;
  r.name = "prop7";
  r.threshold = 2e-3;
  if (st.dim() != 4) throw DimensionError("prop7 requires dim 4");
  for (size_t ip = 0; ip < st.blocks.size(); ++ip) {
    const Prop567Report rep =
        prop567_checks(st.blocks[ip], st.q.f, st.dim() / 4, st.q.same_bundle);
    const double rel = rep.b_norm > 1e-14
                           ? rep.prop7_residual / rep.b_norm
                           : (rep.prop7_residual > 1e-14 ? 1e9 : 0.0);
    if (rel > r.max_residual) {
      r.max_residual = rel;
      r.witness = witness_json(&st.points[ip], nullptr, nullptr);
      r.witness["b_norm"] = rep.b_norm;
      r.witness["abs_residual"] = rep.prop7_residual;
    }
  }
  r.pass = r.max_residual <= r.threshold;
  return {r};
}

std::vector<CheckResult> check_prop56(ScenarioState& st) {
  st.ensure_blocks();
  if (st.dim() != 4) throw DimensionError("prop56 requires dim 4");
  CheckResult r;
  r.name = "prop56";
  r.threshold = kCurvatureZeroTol;
  bool ok = true;
  bool applicable = false;
  double worst_s = 0.0;
  for (size_t ip = 0; ip < st.blocks.size(); ++ip) {
    const Prop567Report rep =
        prop567_checks(st.blocks[ip], st.q.f, st.dim() / 4, st.q.same_bundle);
    if (rep.dichotomy_applicable) {
      applicable = true;
      ok &= rep.dichotomy_ok;
      if (!rep.f_identity) worst_s = std::max(worst_s, std::abs(rep.s));
    }
  }
  r.max_residual = worst_s;
  r.pass = !applicable || ok;
  r.diagnostics["f_identity"] = st.q.f.is_identity();
  r.diagnostics["applicable"] = applicable;
  r.diagnostics["max_abs_s_when_f_twisted"] = worst_s;
  r.witness = witness_json(st.points.empty() ? nullptr : &st.points[0], nullptr,
                           nullptr);
  return {r};
}

std::vector<CheckResult> check_twistor_types(ScenarioState& st) {
  CheckResult r;
  r.name = "twistor_types";
  r.threshold = 0.0;
  const size_t npts = std::min<size_t>(st.points.size(), 2);
  json poles = json::array(), generic = json::array();
  double min_margin = 1.0;
  bool constant = true;
  int first_generic = -1;
  for (size_t ip = 0; ip < npts; ++ip) {
    const Vec& p = st.points[ip];
    json pole_row = json::array(), gen_row = json::array();
    for (size_t is = 0; is < st.spheres.size() && is < 16; ++is) {
      const TypeResult t = twistor_type(st.mani.frame, st.elements[is], p);
      min_margin = std::min(min_margin, t.min_kept_sv);
      if (is < 6) {
        pole_row.push_back(t.type);
      } else {
        gen_row.push_back(t.type);
        if (first_generic < 0) first_generic = t.type;
        if (t.type != first_generic) constant = false;
      }
    }
    poles.push_back(pole_row);
    generic.push_back(gen_row);
  }
  r.diagnostics["pole_types"] = poles;
  r.diagnostics["generic_types"] = generic;
  r.diagnostics["generic_constant"] = constant;
  r.diagnostics["min_kept_sv"] = min_margin;
  r.diagnostics["sv_threshold"] = 1e-8;
  r.pass = true;
  r.witness = witness_json(st.points.empty() ? nullptr : &st.points[0], nullptr,
                           nullptr);
  return {r};
}

std::vector<CheckResult> check_deck(ScenarioState& st) {
  CheckResult r;
  r.name = "deck";
  r.threshold = 1e-10;
  const auto pts = halton_points(st.mani.frame.chart, 20, 0.01,
                                 st.sc.sampling.seed + 7);
  for (const auto& g : st.mani.deck) {
    for (const auto& p : pts) {
      const Mat at_p = st.mani.frame.coeff(p);
      const Mat at_gp = st.mani.frame.coeff(g.apply(p));
      const double res = max_abs(at_gp - g.linear * at_p);
      if (res > r.max_residual) {
        r.max_residual = res;
        r.witness = witness_json(&p, nullptr, nullptr);
        r.witness["generator"] = g.label;
      }
    }
  }
  r.pass = r.max_residual <= r.threshold;
  return {r};
}

std::vector<CheckResult> check_verdict(ScenarioState& st,
                                       std::optional<Verdict>& verdict_out,
                                       json& inputs_out) {
  st.ensure_gtensors();
  ClassifyInput in;
  in.dim = st.dim();
  in.prop3 = st.ensure_prop3();
  in.prop3_threshold = prop3_threshold_for(st.sc.manifold_id);
  in.same_bundle = st.q.same_bundle;
  in.f_identity = st.q.f.is_identity();
  in.max_g = st.gmax;
  in.r_restricted_plus = st.r_restricted();
  if (in.dim == 4) {
    st.ensure_blocks();
    for (const auto& b : st.blocks) {
      in.wplus = std::max(in.wplus, b.wplus.norm());
      in.wminus = std::max(in.wminus, b.wminus.norm());
    }
  }
  const Verdict v = classify(in);
  verdict_out = v;
  inputs_out = {{"dim", in.dim},
                {"prop3", in.prop3},
                {"prop3_threshold", in.prop3_threshold},
                {"same_bundle", in.same_bundle},
                {"f_identity", in.f_identity},
                {"max_g", in.max_g},
                {"r_restricted_plus", in.r_restricted_plus},
                {"wplus", in.wplus},
                {"wminus", in.wminus},
                {"vanish_threshold", kVanishThreshold},
                {"nonzero_threshold", kNonzeroThreshold},
                {"curvature_zero_tol", kCurvatureZeroTol}};

  CheckResult r;
  r.name = "verdict";
  r.threshold = 0.0;
  r.max_residual = v.max_g;
  r.pass = v.agree;
  r.witness = st.gwitness;
  r.diagnostics["classification"] = v.branch_name();
  r.diagnostics["predicted_integrable"] = v.predicted_integrable;
  r.diagnostics["measured"] = v.measured_name();
  return {r};
}

json conventions_json() {
  return {
      {"curvature",
       "R(X,Y) = [nabla_Y, nabla_X] + nabla_{[X,Y]}; Lambda^2 matrix through "
       "g(phi(u), X^Y) = g(uX, Y); s = 2 tr(R|Lambda^2), positive on round "
       "spheres, orientation fixed by B = (s/12) f on the S1 x S3 product"},
      {"lambda_orientation",
       "I+ = t1^t2+t3^t4, J+ = t1^t3-t2^t4, K+ = t1^t4+t2^t3; I- = "
       "t1^t2-t3^t4, J- = t1^t3+t2^t4, K- = -t1^t4+t2^t3 (frame order)"},
      {"steps", "first derivatives use h, curvature differences 10 h"}};
}

}  // namespace

ScenarioReport run_scenario(const Scenario& sc) {
  const auto t0 = std::chrono::steady_clock::now();
  ScenarioReport rep;
  rep.scenario = sc;
  ScenarioState st(sc);

  for (const std::string& id : sc.checks) {
    std::vector<CheckResult> results;
    try {
      if (id == "gacs_algebra") results = check_gacs_algebra(st);
      else if (id == "courant") results = check_courant(st);
      else if (id == "torsion") results = check_torsion(st);
      else if (id == "prop3") results = check_prop3(st);
      else if (id == "prop3_violation") results = check_prop3_violation(st);
      else if (id == "gtensors") results = check_gtensors(st);
      else if (id == "gtensors_nonzero") results = check_gtensors_nonzero(st);
      else if (id == "thm1bis") results = check_thm1bis(st);
      else if (id == "curvature_blocks") results = check_curvature_blocks(st);
      else if (id == "prop7") results = check_prop7(st);
      else if (id == "prop56") results = check_prop56(st);
      else if (id == "twistor_types") results = check_twistor_types(st);
      else if (id == "deck") results = check_deck(st);
      else if (id == "verdict")
        results = check_verdict(st, rep.verdict, rep.verdict_inputs);
      else
        throw ConfigError("unknown check id '" + id + "'");
    } catch (const Error& e) {
      CheckResult r;
      r.name = id;
      r.error = e.what();
      r.pass = false;
      results = {r};
    }
    for (auto& r : results) rep.checks.push_back(std::move(r));
  }

  rep.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rep;
}

bool ScenarioReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

bool ScenarioReport::inconclusive() const {
  return verdict && verdict->branch == Verdict::Branch::Inconclusive;
}

json ScenarioReport::to_json() const {
  json j;
  j["scenario"] = scenario.to_json();
  j["conventions"] = conventions_json();
  j["checks"] = json::array();
  json diag = json::object();
  for (const auto& c : checks) {
    j["checks"].push_back(c.to_json());
    if (!c.diagnostics.is_null()) diag[c.name] = c.diagnostics;
  }
  if (verdict) {
    j["verdict"] = {{"classification", verdict->branch_name()},
                    {"predicted_integrable", verdict->predicted_integrable},
                    {"measured", verdict->measured_name()},
                    {"agree", verdict->agree},
                    {"max_g", verdict->max_g},
                    {"inputs", verdict_inputs}};
  } else {
    j["verdict"] = nullptr;
  }
  j["diagnostics"] = diag;
  j["seed"] = scenario.sampling.seed;
  j["h"] = scenario.sampling.h;
  j["engine_version"] = kEngineVersion;
  j["runtime_seconds"] = runtime_seconds;
  return j;
}

// ---------------------------------------------------------------------------
// Builtins
// ---------------------------------------------------------------------------

namespace {

json f_json_id() { return {{"type", "id"}}; }
json f_json_theta(double a) { return {{"type", "theta"}, {"angle", a}}; }

struct AngleTag {
  const char* tag;
  double value;
};
constexpr AngleTag kThetaTags[] = {
    {"0", 0.0}, {"0.7", 0.7}, {"pi2", kPi / 2.0}, {"pi", kPi}};

Scenario base_scenario(const std::string& name) {
  Scenario sc;
  sc.name = name;
  sc.sampling = SamplingConfig{};
  return sc;
}

}  // namespace

std::vector<std::string> builtin_names() {
  std::vector<std::string> names = {"classical-t4", "example2-twisted-t4"};
  for (int t = 1; t <= 7; ++t)
    for (const auto& a : kThetaTags)
      names.push_back("hyperelliptic-" + std::to_string(t) + "-ftheta-" +
                      a.tag);
  names.insert(names.end(),
               {"s1xs3-example6", "s1xh3-example6", "round-s4-classical",
                "round-s4-fpi2-negative", "s2xt2-negative", "flat-t8-thm2"});
  return names;
}

bool is_builtin(const std::string& name) {
  const auto names = builtin_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

Scenario builtin_scenario(const std::string& name) {
  if (!is_builtin(name)) throw ConfigError("unknown builtin '" + name + "'");
  Scenario sc = base_scenario(name);
  if (name == "classical-t4" || name == "example2-twisted-t4") {
    sc.manifold_id = "flat_torus";
    sc.manifold_params = {{"dim", 4}};
    sc.dplus = "lambda+";
    sc.dminus = "lambda+";
    sc.f_spec = name == "classical-t4" ? f_json_id() : f_json_theta(kPi);
    sc.checks = {"gacs_algebra", "courant",        "torsion",
                 "prop3",        "gtensors",       "thm1bis",
                 "curvature_blocks", "twistor_types", "verdict"};
    return sc;
  }
  if (name.rfind("hyperelliptic-", 0) == 0) {
    const std::string rest = name.substr(14);
    const auto dash = rest.find('-');
    if (dash == std::string::npos || rest.substr(dash + 1, 7) != "ftheta-")
      throw ConfigError("unknown builtin '" + name + "'");
    const int type = std::stoi(rest.substr(0, dash));
    const std::string tag = rest.substr(dash + 8);
    double angle = -1.0;
    for (const auto& a : kThetaTags)
      if (tag == a.tag) angle = a.value;
    if (angle < 0.0) throw ConfigError("unknown builtin '" + name + "'");
    sc.manifold_id = "hyperelliptic";
    sc.manifold_params = {{"type", type}};
    sc.dplus = "lambda+";
    sc.dminus = "lambda-";
    sc.f_spec = f_json_theta(angle);
    sc.checks = {"gacs_algebra", "deck",    "torsion", "prop3",
                 "gtensors",     "thm1bis", "curvature_blocks", "verdict"};
    sc.sampling.points = 12;
    return sc;
  }
  if (name == "s1xs3-example6" || name == "s1xh3-example6") {
    sc.manifold_id = "s1_x_space_form";
    sc.manifold_params = {{"sign", name == "s1xs3-example6" ? 1 : -1}};
    sc.dplus = "lambda+";
    sc.dminus = "lambda-";
    sc.f_spec = f_json_id();
    sc.checks = {"gacs_algebra", "courant", "torsion",          "prop3",
                 "gtensors",     "thm1bis", "curvature_blocks", "prop7",
                 "prop56",       "twistor_types", "verdict"};
    return sc;
  }
  if (name == "round-s4-classical") {
    sc.manifold_id = "conformally_flat";
    sc.manifold_params = {{"factor", "round_s4"}};
    sc.dplus = "lambda+";
    sc.dminus = "lambda+";
    sc.f_spec = f_json_id();
    sc.checks = {"gacs_algebra", "prop3",  "gtensors", "thm1bis",
                 "curvature_blocks", "prop56", "verdict"};
    return sc;
  }
  if (name == "round-s4-fpi2-negative") {
    sc.manifold_id = "conformally_flat";
    sc.manifold_params = {{"factor", "round_s4"}};
    sc.dplus = "lambda+";
    sc.dminus = "lambda+";
    sc.f_spec = f_json_theta(kPi / 2.0);
    sc.checks = {"gacs_algebra", "prop3_violation", "curvature_blocks",
                 "verdict"};
    return sc;
  }
  if (name == "s2xt2-negative") {
    sc.manifold_id = "s2_x_t2";
    sc.manifold_params = json::object();
    sc.dplus = "lambda+";
    sc.dminus = "lambda+";
    sc.f_spec = f_json_id();
    sc.checks = {"gacs_algebra", "prop3",           "gtensors_nonzero",
                 "thm1bis",      "curvature_blocks", "verdict"};
    return sc;
  }
  if (name == "flat-t8-thm2") {
    sc.manifold_id = "flat_torus";
    sc.manifold_params = {{"dim", 8}};
    sc.dplus = "product:++";
    sc.dminus = "product:--";
    sc.f_spec = {{"type", "axis_angle"}, {"axis", {1.0, 2.0, 2.0}},
                 {"angle", 0.9}};
    sc.checks = {"gacs_algebra", "courant", "torsion", "prop3",
                 "gtensors",     "thm1bis", "verdict"};
    sc.sampling.points = 10;
    return sc;
  }
  throw ConfigError("unknown builtin '" + name + "'");
}

namespace {

const CheckResult* find_check(const ScenarioReport& rep,
                              const std::string& name) {
  for (const auto& c : rep.checks)
    if (c.name == name) return &c;
  return nullptr;
}

bool expect(bool cond, const std::string& msg, std::string* why) {
  if (!cond && why && why->empty()) *why = msg;
  return cond;
}

bool approx(double value, double target, double rel, double abs_tol = 0.0) {
  return std::abs(value - target) <=
         std::max(rel * std::abs(target), abs_tol);
}

}  // namespace

bool golden_ok(const std::string& name, const ScenarioReport& rep,
               std::string* why) {
  bool ok = expect(rep.all_pass(), "a check failed", why);
  for (const auto& c : rep.checks)
    if (!c.error.empty())
      ok = expect(false, "check '" + c.name + "' errored: " + c.error, why);

  std::string branch = "?";
  if (rep.verdict) branch = rep.verdict->branch_name();

  auto expect_branch = [&](const std::string& b) {
    ok &= expect(branch == b, "verdict " + branch + ", expected " + b, why);
  };

  auto blocks_diag = [&]() -> json {
    const CheckResult* c = find_check(rep, "curvature_blocks");
    return c ? c->diagnostics : json::object();
  };

  if (name == "classical-t4" || name == "example2-twisted-t4") {
    expect_branch("Thm3a");
    const CheckResult* t = find_check(rep, "twistor_types");
    if (t) {
      const auto& poles = t->diagnostics["pole_types"][0];
      const auto& gen = t->diagnostics["generic_types"][0];
      if (name == "classical-t4") {
        for (const auto& v : poles)
          ok &= expect(v.get<int>() == 3, "classical pole type != 3", why);
        for (const auto& v : gen)
          ok &= expect(v.get<int>() == 3, "classical generic type != 3", why);
      } else {
        ok &= expect(poles[0].get<int>() == 3 && poles[1].get<int>() == 3,
                     "twisted +-I pole types != 3", why);
        for (size_t k = 2; k < poles.size(); ++k)
          ok &= expect(poles[k].get<int>() == 1,
                       "twisted J/K pole type != 1", why);
        for (const auto& v : gen)
          ok &= expect(v.get<int>() == 1, "twisted generic type != 1", why);
      }
    }
    return ok;
  }
  if (name.rfind("hyperelliptic-", 0) == 0) {
    expect_branch("Thm4");
    return ok;
  }
  if (name == "s1xs3-example6" || name == "s1xh3-example6") {
    expect_branch("Thm4");
    const json d = blocks_diag();
    const double s_expect = name == "s1xs3-example6" ? 6.0 : -6.0;
    ok &= expect(approx(d.value("s_mean", 0.0), s_expect, 0.02),
                 "s anchor missed", why);
    ok &= expect(d.value("wplus_max", 1.0) <= 1e-3, "W+ not ~0", why);
    ok &= expect(d.value("wminus_max", 1.0) <= 1e-3, "W- not ~0", why);
    ok &= expect(d.value("b_min", 0.0) > 1e-3, "B unexpectedly ~0", why);
    const CheckResult* t = find_check(rep, "twistor_types");
    if (t)
      for (const auto& row : t->diagnostics["pole_types"])
        for (const auto& v : row)
          ok &= expect(v.get<int>() == 2, "type != 2", why);
    return ok;
  }
  if (name == "round-s4-classical") {
    expect_branch("Thm3b");
    const json d = blocks_diag();
    ok &= expect(approx(d.value("s_mean", 0.0), 12.0, 0.02), "s != 12", why);
    ok &= expect(d.value("wplus_max", 1.0) <= 1e-3, "W+ not ~0", why);
    ok &= expect(d.value("b_max", 1.0) <= 1e-3, "B not ~0", why);
    return ok;
  }
  if (name == "round-s4-fpi2-negative") {
    expect_branch("NonApplicable");
    return ok;
  }
  if (name == "s2xt2-negative") {
    expect_branch("NonIntegrable");
    const json d = blocks_diag();
    ok &= expect(approx(d.value("s_mean", 0.0), 2.0, 0.02), "s != 2", why);
    ok &= expect(d.value("wplus_max", 0.0) >= 1e-2, "W+ not sizable", why);
    return ok;
  }
  if (name == "flat-t8-thm2") {
    expect_branch("Thm2");
    return ok;
  }
  ok = expect(false, "no golden expectation for '" + name + "'", why);
  return ok;
}

}  // namespace twistor

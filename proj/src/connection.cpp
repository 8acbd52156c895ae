#include "twistor/connection.hpp"

#include <cmath>

#include "twistor/quaternion.hpp"

namespace twistor {

ChristoffelMats christoffel(const FrameField& frame, const Vec& p, double h) {
  frame.chart.require_interior(p, 2.0 * h, "christoffel");
  const int d = frame.dim();
  const Mat m = frame.eval_unchecked(p);
  const auto lu = m.partialPivLu();

  std::vector<Mat> dm(d);  // dm[a] = d_a M
  for (int a = 0; a < d; ++a) {
    Vec pp = p, pm = p;
    pp[a] += h;
    pm[a] -= h;
    dm[a] = (frame.coeff(pp) - frame.coeff(pm)) / (2.0 * h);
  }

  // c[i][j][k]: [theta_i, theta_j] = c^k_{ij} theta_k
  std::vector<std::vector<Vec>> c(d, std::vector<Vec>(d));
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      Vec br = Vec::Zero(d);
      for (int a = 0; a < d; ++a)
        br += m(a, i) * dm[a].col(j) - m(a, j) * dm[a].col(i);
      c[i][j] = lu.solve(br);
      c[j][i] = -c[i][j];
    }
    c[i][i] = Vec::Zero(d);
  }

  ChristoffelMats gamma(d, Mat::Zero(d, d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        gamma[i](k, j) = 0.5 * (c[i][j][k] - c[j][k][i] + c[k][i][j]);
  return gamma;
}

Connection levi_civita(const FrameField& frame, double h) {
  Connection conn;
  conn.frame = frame;
  conn.inner_step = h;
  FrameField f = frame;
  conn.christoffels = [f, h](const Vec& p) { return christoffel(f, p, h); };
  return conn;
}

Connection with_cross_torsion(const Connection& base) {
  Connection conn = base;
  auto inner = base.christoffels;
  const int d = base.dim();
  conn.christoffels = [inner, d](const Vec& p) {
    ChristoffelMats g = inner(p);
    // (X x Y)^k = eps_{ijk} X^i Y^j on frame indices 1..3
    static const int eps[3][3][3] = {{{0, 0, 0}, {0, 0, 1}, {0, -1, 0}},
                                     {{0, 0, -1}, {0, 0, 0}, {1, 0, 0}},
                                     {{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}}};
    for (int i = 0; i < 3 && i < d; ++i)
      for (int j = 0; j < 3 && j < d; ++j)
        for (int k = 0; k < 3 && k < d; ++k) g[i](k, j) += eps[i][j][k];
    return g;
  };
  return conn;
}

Mat nabla_endo(const Connection& conn, const std::function<Mat(const Vec&)>& psi,
               int direction, const Vec& p, double h) {
  conn.frame.chart.require_interior(p, 2.0 * h, "nabla_endo");
  const int d = conn.dim();
  const Mat m = conn.frame.eval_unchecked(p);
  const ChristoffelMats gamma = conn.christoffels(p);

  Mat dir = Mat::Zero(d, d);
  for (int a = 0; a < d; ++a) {
    const double w = m(a, direction);
    if (w == 0.0) continue;
    Vec pp = p, pm = p;
    pp[a] += h;
    pm[a] -= h;
    dir += w * (psi(pp) - psi(pm)) / (2.0 * h);
  }
  return dir + commutator(gamma[direction], psi(p));
}

CurvatureOperator curvature(const Connection& conn, const Vec& p, double h) {
  conn.frame.chart.require_interior(p, 3.0 * h, "curvature");
  const int d = conn.dim();
  const Mat m = conn.frame.eval_unchecked(p);
  const ChristoffelMats g0 = conn.christoffels(p);

  // dg[a][i] = d_a Gamma_i (outer central difference on top of the
  // first-derivative step inside christoffels)
  std::vector<ChristoffelMats> dg(d);
  for (int a = 0; a < d; ++a) {
    Vec pp = p, pm = p;
    pp[a] += h;
    pm[a] -= h;
    const ChristoffelMats gp = conn.christoffels(pp);
    const ChristoffelMats gm = conn.christoffels(pm);
    dg[a].resize(d);
    for (int i = 0; i < d; ++i) dg[a][i] = (gp[i] - gm[i]) / (2.0 * h);
  }

  // dirg[j][i] = theta_j . Gamma_i
  std::vector<ChristoffelMats> dirg(d, ChristoffelMats(d, Mat::Zero(d, d)));
  for (int j = 0; j < d; ++j)
    for (int a = 0; a < d; ++a) {
      const double w = m(a, j);
      if (w == 0.0) continue;
      for (int i = 0; i < d; ++i) dirg[j][i] += w * dg[a][i];
    }

  CurvatureOperator R;
  R.dim = d;
  R.r4.assign(d, std::vector<Mat>(d, Mat::Zero(d, d)));
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      Mat r = dirg[j][i] - dirg[i][j] + g0[j] * g0[i] - g0[i] * g0[j];
      for (int mm = 0; mm < d; ++mm) {
        const double cm = g0[i](mm, j) - g0[j](mm, i);
        if (cm != 0.0) r += cm * g0[mm];
      }
      R.r4[i][j] = r;
      R.r4[j][i] = -r;
    }
  }

  const int nb = biv_count(d);
  R.lambda2.resize(nb, nb);
  int col = 0;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) R.lambda2.col(col++) = biv_from_skew(R.r4[i][j]);
  return R;
}

Mat lambda2_in_pm_basis(const CurvatureOperator& R, const LambdaBases& bases) {
  if (R.dim != 4) throw DimensionError("Lambda+- basis requires dim 4");
  const Mat q = bases.basis_matrix();
  return q.transpose() * R.lambda2 * q;
}

Dim4Blocks blocks_dim4(const Mat& m6) {
  if (m6.rows() != 6 || m6.cols() != 6)
    throw DimensionError("blocks_dim4 expects a 6x6 matrix");
  Dim4Blocks out;
  const Mat tl = m6.block(0, 0, 3, 3);
  const Mat br = m6.block(3, 3, 3, 3);
  out.b = m6.block(0, 3, 3, 3);
  out.bstar = m6.block(3, 0, 3, 3);
  out.trace_plus = tl.trace();
  out.trace_minus = br.trace();
  out.s = 2.0 * (out.trace_plus + out.trace_minus);
  const Mat tls = 0.5 * (tl + tl.transpose());
  const Mat brs = 0.5 * (br + br.transpose());
  out.asym = std::max(max_abs(tl - tls), max_abs(br - brs));
  out.wplus = tls - (out.trace_plus / 3.0) * Mat::Identity(3, 3);
  out.wminus = brs - (out.trace_minus / 3.0) * Mat::Identity(3, 3);
  return out;
}

Dim4Blocks blocks_dim4(const CurvatureOperator& R, const LambdaBases& bases) {
  return blocks_dim4(lambda2_in_pm_basis(R, bases));
}

Mat Dim4Blocks::reconstruct() const {
  Mat m = Mat::Zero(6, 6);
  m.block(0, 0, 3, 3) = wplus + (trace_plus / 3.0) * Mat::Identity(3, 3);
  m.block(3, 3, 3, 3) = wminus + (trace_minus / 3.0) * Mat::Identity(3, 3);
  m.block(0, 3, 3, 3) = b;
  m.block(3, 0, 3, 3) = bstar;
  return m;
}

double lemma1_residual(const CurvatureOperator& R, const Mat& I, const Mat& J,
                       const Mat& K, double s, int n, const Vec& X,
                       const Vec& Y) {
  const double c = s / (2.0 * n * (n + 2));
  const Mat rxy = R.apply_vectors(X, Y);
  const double gkxy = (K * X).dot(Y);
  const double gjxy = (J * X).dot(Y);
  return (commutator(I, rxy) + c * gkxy * J - c * gjxy * K).norm();
}

}  // namespace twistor

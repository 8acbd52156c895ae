#include "twistor/quaternion.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace twistor {

namespace {

Mat skew4(std::initializer_list<std::pair<std::pair<int, int>, double>> terms) {
  Vec b = Vec::Zero(6);
  for (const auto& t : terms) b[biv_index(t.first.first, t.first.second, 4)] = t.second;
  return skew_from_biv(b, 4);
}

}  // namespace

LambdaBases LambdaBases::standard() {
  LambdaBases lb;
  lb.ip = skew4({{{0, 1}, 1.0}, {{2, 3}, 1.0}});
  lb.jp = skew4({{{0, 2}, 1.0}, {{1, 3}, -1.0}});
  lb.kp = skew4({{{0, 3}, 1.0}, {{1, 2}, 1.0}});
  lb.im = skew4({{{0, 1}, 1.0}, {{2, 3}, -1.0}});
  lb.jm = skew4({{{0, 2}, 1.0}, {{1, 3}, 1.0}});
  lb.km = skew4({{{0, 3}, -1.0}, {{1, 2}, 1.0}});
  return lb;
}

Mat LambdaBases::basis_matrix() const {
  Mat q(6, 6);
  const Mat* elems[6] = {&ip, &jp, &kp, &im, &jm, &km};
  for (int c = 0; c < 6; ++c)
    q.col(c) = biv_from_skew(*elems[c]) / std::sqrt(2.0);
  return q;
}

AlgebraIso AlgebraIso::identity() { return AlgebraIso{}; }

AlgebraIso AlgebraIso::from_axis_angle(const Vec3& axis, double angle) {
  const double n = axis.norm();
  if (n < 1e-14) throw NotAlgebraIso("axis-angle isomorphism with zero axis");
  AlgebraIso out;
  out.F = Eigen::AngleAxisd(angle, axis / n).toRotationMatrix();
  return out;
}

AlgebraIso AlgebraIso::from_matrix(const Mat3& m, double tol) {
  const double ortho = (m.transpose() * m - Mat3::Identity()).cwiseAbs().maxCoeff();
  if (ortho > tol)
    throw NotAlgebraIso("f matrix is not orthogonal (residual " +
                        std::to_string(ortho) + ")");
  if (m.determinant() < 0.0)
    throw NotAlgebraIso("f matrix reverses orientation; quaternion relations "
                        "are not preserved");
  AlgebraIso out;
  out.F = m;
  return out;
}

bool AlgebraIso::is_identity(double tol) const {
  return (F - Mat3::Identity()).cwiseAbs().maxCoeff() <= tol;
}

AlgebraIso f_theta(double theta) {
  return AlgebraIso::from_axis_angle(Vec3(1, 0, 0), theta);
}

double QuatStructure::triple_residual() const {
  const int d = dim();
  const Mat id = Mat::Identity(d, d);
  double worst = 0.0;
  for (const auto* triple : {&dplus, &dminus}) {
    const Mat& i = (*triple)[0];
    const Mat& j = (*triple)[1];
    const Mat& k = (*triple)[2];
    worst = std::max({worst, max_abs(i * i + id), max_abs(j * j + id),
                      max_abs(k * k + id), max_abs(i * j - k)});
  }
  return worst;
}

Mat cplus_cminus_split(int dim) {
  const double r = 1.0 / std::sqrt(2.0);
  Mat p(2 * dim, 2 * dim);
  const Mat id = Mat::Identity(dim, dim);
  p.block(0, 0, dim, dim) = r * id;
  p.block(0, dim, dim, dim) = r * id;
  p.block(dim, 0, dim, dim) = r * id;
  p.block(dim, dim, dim, dim) = -r * id;
  return p;
}

Vec p_plus(const GenVector& v) { return v.vec; }
Vec p_minus(const GenVector& v) { return v.vec; }

GenQuatElement assemble_df(const QuatStructure& q, double a, double b,
                           double c) {
  const int d = q.dim();
  GenQuatElement out;
  out.abc = Vec3(a, b, c);
  out.uminus = a * q.dminus[0] + b * q.dminus[1] + c * q.dminus[2];
  const Vec3 plus_coords = q.f.F * out.abc;
  out.uplus = plus_coords[0] * q.dplus[0] + plus_coords[1] * q.dplus[1] +
              plus_coords[2] * q.dplus[2];
  // P diag(u+, u-) P with P the (self-inverse) C+- basis change:
  // blocks ((u+ + u-)/2, (u+ - u-)/2; (u+ - u-)/2, (u+ + u-)/2).
  const Mat sum = 0.5 * (out.uplus + out.uminus);
  const Mat diff = 0.5 * (out.uplus - out.uminus);
  out.gen = Mat::Zero(2 * d, 2 * d);
  out.gen.block(0, 0, d, d) = sum;
  out.gen.block(0, d, d, d) = diff;
  out.gen.block(d, 0, d, d) = diff;
  out.gen.block(d, d, d, d) = sum;
  return out;
}

namespace {

// D-coordinates of a (approximately in-span) endomorphism, plus the
// off-span remainder.
std::pair<Vec3, double> project_on_triple(const Mat& v,
                                          const std::array<Mat, 3>& triple) {
  const double nsq = triple[0].squaredNorm();
  Vec3 coords;
  for (int k = 0; k < 3; ++k)
    coords[k] = (triple[k].transpose() * v).trace() / nsq;
  Mat rem = v;
  for (int k = 0; k < 3; ++k) rem -= coords[k] * triple[k];
  return {coords, rem.norm()};
}

}  // namespace

Prop3Report prop3_residual(const QuatStructure& q, const Connection& conn,
                           const Vec& p, double h) {
  const int d = conn.dim();
  Prop3Report rep;
  for (int i = 0; i < d; ++i) {
    for (int m = 0; m < 3; ++m) {
      const Mat em = q.dminus[m];
      auto em_field = [em](const Vec&) { return em; };
      const Mat dm = nabla_endo(conn, em_field, i, p, h);
      const auto [cm, rm] = project_on_triple(dm, q.dminus);

      const Vec3 fp = q.f.F.col(m);  // f(e_m^-) coordinates on D+
      const Mat fe = fp[0] * q.dplus[0] + fp[1] * q.dplus[1] + fp[2] * q.dplus[2];
      auto fe_field = [fe](const Vec&) { return fe; };
      const Mat dp = nabla_endo(conn, fe_field, i, p, h);
      const auto [cp, rp] = project_on_triple(dp, q.dplus);

      const Vec3 fcm = q.f.F * cm;
      Mat mismatch = Mat::Zero(d, d);
      for (int k = 0; k < 3; ++k) mismatch += (cp[k] - fcm[k]) * q.dplus[k];
      const double inter = mismatch.norm();
      const double off = std::max(rm, rp);
      if (inter > rep.intertwine) {
        rep.intertwine = inter;
        rep.witness_direction = i;
        rep.witness_element = m;
      }
      rep.offspan = std::max(rep.offspan, off);
    }
  }
  return rep;
}

Lemma4Expansion lemma4_nabla(const ChristoffelMats& gamma, int direction) {
  const LambdaBases lb = LambdaBases::standard();
  // G(j, k) = Gamma_{ij}^k with 1-based j, k to keep the six lines
  // readable against the closed-form expansion
  const Mat& g = gamma[direction];
  auto G = [&g](int j, int k) { return g(k - 1, j - 1); };
  Lemma4Expansion e;
  e.dip = (G(1, 4) + G(2, 3)) * lb.jp + (-G(1, 3) + G(2, 4)) * lb.kp;
  e.djp = (G(3, 2) - G(1, 4)) * lb.ip + (G(3, 4) + G(1, 2)) * lb.kp;
  e.dkp = (G(4, 2) + G(1, 3)) * lb.ip + (G(4, 3) - G(1, 2)) * lb.jp;
  e.dim_ = (-G(1, 4) + G(2, 3)) * lb.jm + (-G(1, 3) - G(2, 4)) * lb.km;
  e.djm = (G(3, 2) + G(1, 4)) * lb.im + (-G(3, 4) + G(1, 2)) * lb.km;
  e.dkm = (-G(4, 2) + G(1, 3)) * lb.im + (-G(4, 3) - G(1, 2)) * lb.jm;
  return e;
}

namespace {

double triple_angle(const Mat& given_j, const Mat& frame_j, const Mat& frame_k) {
  const double cj = (frame_j.transpose() * given_j).trace() / 4.0;
  const double ck = (frame_k.transpose() * given_j).trace() / 4.0;
  return std::atan2(ck, cj);
}

Mat frame_lambda(const Mat& e, const Mat& std_elem) {
  return e * std_elem * e.transpose();
}

}  // namespace

Mat adapt_frame(const std::array<Mat, 3>& ip_triple,
                const std::array<Mat, 3>& im_triple, const AlgebraIso& f) {
  // Effective D+ triple: the image of the D- basis under f, so that the
  // f matrix in the adapted bases is the identity.
  std::array<Mat, 3> eff;
  for (int k = 0; k < 3; ++k)
    eff[k] = f.F(0, k) * ip_triple[0] + f.F(1, k) * ip_triple[1] +
             f.F(2, k) * ip_triple[2];

  const Mat t = eff[0] * im_triple[0];
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (t + t.transpose()));
  if (es.info() != Eigen::Success)
    throw DegenerateEigenspace("adapt_frame: eigensolver failed");
  const Vec ev = es.eigenvalues();
  for (int k = 0; k < 4; ++k)
    if (std::abs(std::abs(ev[k]) - 1.0) > 1e-6)
      throw DegenerateEigenspace("adapt_frame: I+I- eigenvalues are not +-1");

  if (std::abs(std::abs(ev.sum()) - 4.0) <= 1e-6) {
    // Both triples span the same bundle (I- is +-I+ up to the f image),
    // so there is no eigenspace splitting to exploit. The quaternionic
    // frame of the effective triple aligns the whole + family at once;
    // the - family lives in the same bundle and needs no adaptation.
    const Vec v = Vec::Unit(4, 0);
    Mat e(4, 4);
    e << v, eff[0] * v, eff[1] * v, eff[2] * v;
    return e;
  }
  if (!(ev[0] < 0 && ev[1] < 0 && ev[2] > 0 && ev[3] > 0))
    throw DegenerateEigenspace("adapt_frame: eigenvalue multiplicities wrong");

  Vec t1 = es.eigenvectors().col(0);
  Vec t2 = eff[0] * t1;
  Vec t3 = es.eigenvectors().col(2);
  Vec t4 = eff[0] * t3;
  Mat e(4, 4);
  e << t1, t2, t3, t4;

  const LambdaBases lb = LambdaBases::standard();
  const double beta_p =
      triple_angle(eff[1], frame_lambda(e, lb.jp), frame_lambda(e, lb.kp));
  const double beta_m =
      triple_angle(im_triple[1], frame_lambda(e, lb.jm), frame_lambda(e, lb.km));

  // A rotation in the E_{-1} plane shifts both angles the same way; one
  // in the E_{+1} plane shifts them oppositely. Solve for both.
  const double psi = 0.5 * (beta_p + beta_m);
  const double phi = 0.5 * (beta_p - beta_m);
  auto rotate_pair = [&e](int a, int b, double ang) {
    const Vec u = e.col(a), v = e.col(b);
    e.col(a) = std::cos(ang) * u + std::sin(ang) * v;
    e.col(b) = -std::sin(ang) * u + std::cos(ang) * v;
  };
  rotate_pair(0, 1, psi);
  rotate_pair(2, 3, phi);
  return e;
}

}  // namespace twistor

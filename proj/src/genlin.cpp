#include "twistor/genlin.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace twistor {

Vec GenVector::stacked() const {
  Vec s(vec.size() + form.size());
  s << vec, form;
  return s;
}

GenVector GenVector::from_stacked(const Vec& s) {
  const int d = static_cast<int>(s.size()) / 2;
  return GenVector{s.head(d), s.tail(d)};
}

GenVector GenVector::operator+(const GenVector& o) const {
  return {vec + o.vec, form + o.form};
}
GenVector GenVector::operator-(const GenVector& o) const {
  return {vec - o.vec, form - o.form};
}
GenVector GenVector::operator*(double a) const { return {vec * a, form * a}; }

GenVector gen_zero(int dim) { return {Vec::Zero(dim), Vec::Zero(dim)}; }
GenVector gen_vec(const Vec& v) { return {v, Vec::Zero(v.size())}; }
GenVector gen_form(const Vec& f) { return {Vec::Zero(f.size()), f}; }

double pairing(const GenVector& a, const GenVector& b) {
  if (a.dim() != b.dim())
    throw DimensionMismatch("pairing: dimensions differ");
  return 0.5 * (a.form.dot(b.vec) + b.form.dot(a.vec));
}

Mat eta_matrix(int dim) {
  Mat e = Mat::Zero(2 * dim, 2 * dim);
  e.block(0, dim, dim, dim) = 0.5 * Mat::Identity(dim, dim);
  e.block(dim, 0, dim, dim) = 0.5 * Mat::Identity(dim, dim);
  return e;
}

GenSection constant_section(const GenVector& v) {
  return GenSection{[v](const Vec&) { return v; }};
}

GenSection frame_section(int i, int dim) {
  GenVector v = gen_zero(dim);
  v.vec[i] = 1.0;
  return constant_section(v);
}

GenSection coframe_section(int i, int dim) {
  GenVector v = gen_zero(dim);
  v.form[i] = 1.0;
  return constant_section(v);
}

namespace {

struct CoordSection {
  // coordinate-basis components of a frame-coefficient section
  std::function<Vec(const Vec&)> vec, form;
};

CoordSection to_coord(const FrameField& frame, const GenSection& s) {
  auto coeff = frame.coeff;
  auto fn = s.fn;
  CoordSection out;
  out.vec = [coeff, fn](const Vec& q) -> Vec { return coeff(q) * fn(q).vec; };
  out.form = [coeff, fn](const Vec& q) -> Vec {
    return coeff(q).transpose().partialPivLu().solve(fn(q).form);
  };
  return out;
}

}  // namespace

GenVector courant_bracket(const FrameField& frame, const GenSection& A,
                          const GenSection& B, const Vec& p, double h) {
  frame.chart.require_interior(p, 2.0 * h, "courant_bracket");
  const int d = frame.chart.dim;
  const CoordSection a = to_coord(frame, A);
  const CoordSection b = to_coord(frame, B);

  const Vec xp = a.vec(p), yp = b.vec(p);

  Vec vec_c = Vec::Zero(d);
  Mat dxi(d, d), deta(d, d);  // (row a) = d_a of the form components
  for (int c = 0; c < d; ++c) {
    vec_c += xp[c] * partial_cd(b.vec, p, c, h) - yp[c] * partial_cd(a.vec, p, c, h);
    dxi.row(c) = partial_cd(a.form, p, c, h);
    deta.row(c) = partial_cd(b.form, p, c, h);
  }
  const Mat d_xi = dxi - dxi.transpose();    // (d xi)_{cj}
  const Mat d_eta = deta - deta.transpose();

  // i_X d_eta - i_Y d_xi + d(eta(X) - xi(Y)) / 2
  Vec form_c = d_eta.transpose() * xp - d_xi.transpose() * yp;
  auto phi = [&a, &b](const Vec& q) {
    return b.form(q).dot(a.vec(q)) - a.form(q).dot(b.vec(q));
  };
  for (int c = 0; c < d; ++c)
    form_c[c] += 0.5 * partial_cd_scalar(phi, p, c, h);

  const Mat m = frame.eval_unchecked(p);
  GenVector out;
  out.vec = m.partialPivLu().solve(vec_c);
  out.form = m.transpose() * form_c;
  return out;
}

Mat Gacs::eval(const Vec& p) const {
  frame.chart.require_interior(p, 0.0, "gacs eval");
  return matrix(p);
}

Gacs gacs_constant(const FrameField& frame, const Mat& m, std::string label) {
  return Gacs{frame, [m](const Vec&) { return m; }, std::move(label)};
}

Gacs gacs_from_complex(const FrameField& frame,
                       std::function<Mat(const Vec&)> J, std::string label) {
  const int d = frame.chart.dim;
  return Gacs{frame,
              [J, d](const Vec& p) {
                Mat m = Mat::Zero(2 * d, 2 * d);
                const Mat j = J(p);
                m.block(0, 0, d, d) = j;
                m.block(d, d, d, d) = -j.transpose();
                return m;
              },
              std::move(label)};
}

Gacs gacs_from_symplectic(const FrameField& frame,
                          std::function<Mat(const Vec&)> W, std::string label) {
  const int d = frame.chart.dim;
  return Gacs{frame,
              [W, d](const Vec& p) {
                Mat m = Mat::Zero(2 * d, 2 * d);
                const Mat w = W(p);
                m.block(0, d, d, d) = w.inverse();
                m.block(d, 0, d, d) = -w;
                return m;
              },
              std::move(label)};
}

double gacs_square_residual(const Gacs& J, const Vec& p) {
  const Mat m = J.eval(p);
  return max_abs(m * m + Mat::Identity(m.rows(), m.cols()));
}

double gacs_eta_residual(const Gacs& J, const Vec& p) {
  const Mat m = J.eval(p);
  const Mat e = eta_matrix(J.dim());
  return max_abs(m.transpose() * e * m - e);
}

TypeResult gacs_type(const Gacs& J, const Vec& p) {
  const int d = J.dim();
  const Mat m = J.eval(p);

  // The +i eigenspace as the null space of J - i Id. An SVD basis stays
  // orthonormal for the multiplicity-d eigenvalue, where plain
  // eigenvector extraction can return a nearly parallel set.
  const std::complex<double> iu(0.0, 1.0);
  CMat shifted = m.cast<std::complex<double>>();
  shifted.diagonal().array() -= iu;
  Eigen::JacobiSVD<CMat> null_svd(shifted, Eigen::ComputeFullV);
  const auto& dist = null_svd.singularValues();  // sorted descending
  const double eig_tol = 1e-8 * std::max(1.0, dist[0]);
  int count = 0;
  for (int k = 0; k < 2 * d; ++k)
    if (dist[k] <= eig_tol) ++count;
  if (count != d)
    throw DegenerateEigenspace("gacs_type: +i eigenspace has dimension " +
                               std::to_string(count) + ", expected " +
                               std::to_string(d));
  const CMat e = null_svd.matrixV().rightCols(d);

  const CMat pr1 = e.topRows(d);
  Eigen::JacobiSVD<CMat> svd(pr1);
  const auto& sv = svd.singularValues();
  const double cutoff = 1e-8 * sv[0];
  int rank = 0;
  double min_kept = 0.0;
  for (int k = 0; k < sv.size(); ++k) {
    if (sv[k] >= cutoff) {
      ++rank;
      min_kept = sv[k];
    }
  }
  TypeResult out;
  out.type = d - rank;
  out.min_kept_sv = sv[0] > 0 ? min_kept / sv[0] : 0.0;
  return out;
}

Mat eb_matrix(const Mat& bmat) {
  const int d = static_cast<int>(bmat.rows());
  Mat e = Mat::Identity(2 * d, 2 * d);
  e.block(d, 0, d, d) = -bmat;  // (i_X B)_k = B(theta_i, theta_k) X^i
  return e;
}

GenVector apply_eb(const Mat& bmat, const GenVector& v) {
  return GenVector::from_stacked(eb_matrix(bmat) * v.stacked());
}

Gacs b_transform(const Gacs& J, std::function<Mat(const Vec&)> bfield) {
  auto jm = J.matrix;
  return Gacs{J.frame,
              [jm, bfield](const Vec& p) {
                const Mat eb = eb_matrix(bfield(p));
                const Mat ebinv = eb_matrix(Mat(-bfield(p)));
                return Mat(ebinv * jm(p) * eb);
              },
              J.label + "+B"};
}

GenVector gen_nijenhuis(const Gacs& J, const GenSection& A, const GenSection& B,
                        const Vec& p, double h) {
  auto jm = J.matrix;
  auto ja = GenSection{[jm, A](const Vec& q) {
    return GenVector::from_stacked(jm(q) * A.fn(q).stacked());
  }};
  auto jb = GenSection{[jm, B](const Vec& q) {
    return GenVector::from_stacked(jm(q) * B.fn(q).stacked());
  }};
  const Mat jp = J.eval(p);
  auto japply = [&jp](const GenVector& v) {
    return GenVector::from_stacked(jp * v.stacked());
  };
  const GenVector t1 = courant_bracket(J.frame, ja, jb, p, h);
  const GenVector t2 = japply(courant_bracket(J.frame, ja, B, p, h));
  const GenVector t3 = japply(courant_bracket(J.frame, A, jb, p, h));
  const GenVector t4 = courant_bracket(J.frame, A, B, p, h);
  return t1 - t2 - t3 - t4;
}

GenVector nabla_gen(const Connection& conn, const Vec& direction_frame,
                    const GenSection& Y, const Vec& p, double h) {
  conn.frame.chart.require_interior(p, 2.0 * h, "nabla_gen");
  const int d = conn.dim();
  const Mat m = conn.frame.eval_unchecked(p);
  const ChristoffelMats gamma = conn.christoffels(p);

  const Vec w = m * direction_frame;  // coordinate direction
  GenVector dy = gen_zero(d);
  for (int a = 0; a < d; ++a) {
    if (w[a] == 0.0) continue;
    Vec pp = p, pm = p;
    pp[a] += h;
    pm[a] -= h;
    const GenVector diff = Y.fn(pp) - Y.fn(pm);
    dy = dy + diff * (w[a] / (2.0 * h));
  }

  Mat gdir = Mat::Zero(d, d);
  for (int i = 0; i < d; ++i)
    if (direction_frame[i] != 0.0) gdir += direction_frame[i] * gamma[i];

  const GenVector yp = Y.fn(p);
  dy.vec += gdir * yp.vec;
  dy.form -= gdir.transpose() * yp.form;
  return dy;
}

double gen_torsion(const Connection& conn, const GenSection& X1,
                   const GenSection& X2, const GenSection& X3, const Vec& p,
                   double h) {
  const GenVector x1 = X1.fn(p), x2 = X2.fn(p), x3 = X3.fn(p);
  const GenVector n12 = nabla_gen(conn, x1.vec, X2, p, h);
  const GenVector n21 = nabla_gen(conn, x2.vec, X1, p, h);
  const GenVector br = courant_bracket(conn.frame, X1, X2, p, h);
  const GenVector n31 = nabla_gen(conn, x3.vec, X1, p, h);
  const GenVector n32 = nabla_gen(conn, x3.vec, X2, p, h);
  return pairing(n12 - n21 - br, x3) +
         0.5 * (pairing(n31, x2) - pairing(n32, x1));
}

}  // namespace twistor

#include "twistor/chartfield.hpp"

#include <cmath>
#include <sstream>

namespace twistor {

Chart Chart::box(int dim, double lo, double hi, std::string label) {
  if (dim < 2 || dim % 2 != 0)
    throw DimensionError("chart dimension must be even and >= 2, got " +
                         std::to_string(dim));
  if (!(hi > lo)) throw ConfigError("empty chart box");
  Chart c;
  c.dim = dim;
  c.bounds.assign(dim, {lo, hi});
  c.label = std::move(label);
  return c;
}

bool Chart::contains(const Vec& p, double margin) const {
  if (p.size() != dim) return false;
  for (int a = 0; a < dim; ++a) {
    if (p[a] < bounds[a][0] + margin || p[a] > bounds[a][1] - margin)
      return false;
  }
  return true;
}

void Chart::require_interior(const Vec& p, double margin,
                             const char* who) const {
  if (!contains(p, margin)) {
    std::ostringstream os;
    os << who << ": point outside chart '" << label << "' (margin " << margin
       << ")";
    throw OutOfChart(os.str());
  }
}

double ScalarField::eval(const Vec& p) const {
  chart.require_interior(p, 0.0, "eval_field");
  return fn(p);
}

Vec VectorField::eval(const Vec& p) const {
  chart.require_interior(p, 0.0, "eval_field");
  return fn(p);
}

Vec OneFormField::eval(const Vec& p) const {
  chart.require_interior(p, 0.0, "eval_field");
  return fn(p);
}

Mat FrameField::eval(const Vec& p) const {
  chart.require_interior(p, 0.0, "frame eval");
  return eval_unchecked(p);
}

Mat FrameField::eval_unchecked(const Vec& p) const {
  Mat m = coeff(p);
  const double gram_det = std::abs((m.transpose() * m).determinant());
  if (gram_det < 1e-6)
    throw FrameDegenerate("frame '" + label + "' degenerate (Gram det " +
                          std::to_string(gram_det) + ")");
  return m;
}

Mat FrameField::metric(const Vec& p) const {
  const Mat m = eval(p);
  const Mat minv = m.inverse();
  return minv.transpose() * minv;
}

FrameField constant_frame(Chart chart, const Mat& coeff, std::string label) {
  return FrameField{std::move(chart), [coeff](const Vec&) { return coeff; },
                    std::move(label)};
}

Vec lie_bracket(const VectorField& X, const VectorField& Y, const Vec& p,
                double h) {
  X.chart.require_interior(p, 2.0 * h, "lie_bracket");
  const int dim = X.chart.dim;
  const Vec xp = X.fn(p);
  const Vec yp = Y.fn(p);
  Vec out = Vec::Zero(dim);
  for (int a = 0; a < dim; ++a) {
    const Vec dY = partial_cd(Y.fn, p, a, h);
    const Vec dX = partial_cd(X.fn, p, a, h);
    out += xp[a] * dY - yp[a] * dX;
  }
  return out;
}

Mat d_oneform(const OneFormField& xi, const Vec& p, double h) {
  xi.chart.require_interior(p, 2.0 * h, "d_oneform");
  const int dim = xi.chart.dim;
  Mat grad(dim, dim);  // grad(a, j) = d_a xi_j
  for (int a = 0; a < dim; ++a) grad.row(a) = partial_cd(xi.fn, p, a, h);
  return grad - grad.transpose();
}

}  // namespace twistor

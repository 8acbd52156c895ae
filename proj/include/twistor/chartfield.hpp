#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "twistor/linalg.hpp"

namespace twistor {

// Default finite-difference steps. First derivatives use kFirstStep;
// anything built from derivatives of Christoffel data (curvature) uses
// kCurvatureStep for the outer differentiation.
constexpr double kFirstStep = 1e-4;
constexpr double kCurvatureStep = 1e-3;

// A coordinate box. Fields are smooth on the closed box by contract;
// charts are chosen so that coordinate singularities stay outside the
// bounds (e.g. sphere charts exclude the poles).
struct Chart {
  int dim = 0;
  std::vector<std::array<double, 2>> bounds;  // per-coordinate [lo, hi]
  std::string label;

  static Chart box(int dim, double lo, double hi, std::string label);

  bool contains(const Vec& p, double margin = 0.0) const;
  void require_interior(const Vec& p, double margin, const char* who) const;
};

using ScalarFn = std::function<double(const Vec&)>;
using VectorFn = std::function<Vec(const Vec&)>;

// Components are expressed in the coordinate basis d/dx_i (vector
// fields) or dx_i (one-forms). Evaluation is a pure function of the
// point.
struct ScalarField {
  Chart chart;
  ScalarFn fn;
  double eval(const Vec& p) const;
};

struct VectorField {
  Chart chart;
  VectorFn fn;
  Vec eval(const Vec& p) const;
};

struct OneFormField {
  Chart chart;
  VectorFn fn;
  Vec eval(const Vec& p) const;
};

// 4n orthonormal frame vector fields on a chart, stored as the matrix of
// coordinate components (column i = theta_i). The frame *defines* the
// metric: g is the unique metric making theta orthonormal; the
// coordinate-basis components g = (M^T)^{-1} M^{-1} are only used for
// cross-checks.
struct FrameField {
  Chart chart;
  std::function<Mat(const Vec&)> coeff;
  std::string label;

  // Evaluates the frame matrix with bounds and degeneracy checks.
  Mat eval(const Vec& p) const;
  // Evaluation without the bounds check, for deck-transformation tests
  // whose images may leave the box (the coefficient formulas are global).
  Mat eval_unchecked(const Vec& p) const;

  int dim() const { return chart.dim; }
  // Coordinate components of the metric the frame defines.
  Mat metric(const Vec& p) const;
};

FrameField constant_frame(Chart chart, const Mat& coeff, std::string label);

// Central difference of an arbitrary vector-valued map along coordinate a.
template <typename F>
Vec partial_cd(F&& f, const Vec& p, int a, double h) {
  Vec pp = p, pm = p;
  pp[a] += h;
  pm[a] -= h;
  return (f(pp) - f(pm)) / (2.0 * h);
}

template <typename F>
double partial_cd_scalar(F&& f, const Vec& p, int a, double h) {
  Vec pp = p, pm = p;
  pp[a] += h;
  pm[a] -= h;
  return (f(pp) - f(pm)) / (2.0 * h);
}

// [X,Y]^k = X^i d_i Y^k - Y^i d_i X^k by central differences, O(h^2).
Vec lie_bracket(const VectorField& X, const VectorField& Y, const Vec& p,
                double h = kFirstStep);

// (d xi)_{ij} = d_i xi_j - d_j xi_i.
Mat d_oneform(const OneFormField& xi, const Vec& p, double h = kFirstStep);

}  // namespace twistor

#pragma once

#include <Eigen/Dense>
#include <complex>

#include "twistor/errors.hpp"

namespace twistor {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

inline int biv_count(int dim) { return dim * (dim - 1) / 2; }

// Lexicographic index of the basis bivector theta_i ^ theta_j, i < j.
inline int biv_index(int i, int j, int dim) {
  return i * dim - i * (i + 1) / 2 + (j - i - 1);
}

// Components of v ^ w in the lexicographic bivector basis.
template <typename VA, typename VB>
auto bivector(const VA& v, const VB& w) {
  using Scalar = decltype(v[0] * w[0]);
  const int dim = static_cast<int>(v.size());
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> b(biv_count(dim));
  int idx = 0;
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) b[idx++] = v[i] * w[j] - v[j] * w[i];
  return b;
}

// Skew endomorphism u with g(u theta_i, theta_j) = b[(i,j)]; inverse of
// biv_from_skew. (Both directions go through the identification
// g(phi(u), X ^ Y) = g(uX, Y) in an orthonormal frame.)
template <typename VB>
auto skew_from_biv(const VB& b, int dim) {
  using Scalar = typename VB::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> u =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(dim, dim);
  int idx = 0;
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) {
      u(j, i) = b[idx];
      u(i, j) = -b[idx];
      ++idx;
    }
  return u;
}

template <typename MU>
auto biv_from_skew(const MU& u) {
  using Scalar = typename MU::Scalar;
  const int dim = static_cast<int>(u.rows());
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> b(biv_count(dim));
  int idx = 0;
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) b[idx++] = u(j, i);
  return b;
}

inline Mat commutator(const Mat& a, const Mat& b) { return a * b - b * a; }

inline double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

// Largest Euclidean column norm; a cheap stand-in for the spectral norm
// (within a factor of sqrt(n) of it).
inline double max_col_norm(const Mat& m) {
  double best = 0.0;
  for (int j = 0; j < m.cols(); ++j) best = std::max(best, m.col(j).norm());
  return best;
}

}  // namespace twistor

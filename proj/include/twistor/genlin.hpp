#pragma once

#include <functional>
#include <string>

#include "twistor/connection.hpp"

namespace twistor {

// Element of TM + T*M at a point: vec in the frame basis, form in the
// dual coframe basis.
struct GenVector {
  Vec vec, form;

  int dim() const { return static_cast<int>(vec.size()); }
  Vec stacked() const;
  static GenVector from_stacked(const Vec& s);

  GenVector operator+(const GenVector& o) const;
  GenVector operator-(const GenVector& o) const;
  GenVector operator*(double a) const;
  double norm() const { return stacked().norm(); }
};

GenVector gen_zero(int dim);
GenVector gen_vec(const Vec& v);   // X + 0
GenVector gen_form(const Vec& f);  // 0 + xi

// <X+xi, Y+eta> = (xi(Y) + eta(X)) / 2
double pairing(const GenVector& a, const GenVector& b);

// Matrix of the pairing in the split (vec | form) basis: [[0, I], [I, 0]]/2.
Mat eta_matrix(int dim);

// An evaluable section of TM + T*M in frame coefficients.
struct GenSection {
  std::function<GenVector(const Vec&)> fn;
};

GenSection constant_section(const GenVector& v);
GenSection frame_section(int i, int dim);    // theta_i
GenSection coframe_section(int i, int dim);  // theta_i*

// [X+xi, Y+eta] = [X,Y] + L_X eta - L_Y xi - d(i_X eta - i_Y xi)/2.
// Sections are converted to the coordinate basis through the frame
// matrix before differencing and converted back at p.
GenVector courant_bracket(const FrameField& frame, const GenSection& A,
                          const GenSection& B, const Vec& p,
                          double h = kFirstStep);

// A generalized almost complex structure: a 2dim x 2dim matrix field in
// the (vec | form) frame basis with J^2 = -Id and J^T eta J = eta.
struct Gacs {
  FrameField frame;
  std::function<Mat(const Vec&)> matrix;
  std::string label;

  Mat eval(const Vec& p) const;
  int dim() const { return frame.chart.dim; }
};

Gacs gacs_constant(const FrameField& frame, const Mat& m, std::string label);
// [[J, 0], [0, -J^T]] from an almost complex structure field.
Gacs gacs_from_complex(const FrameField& frame,
                       std::function<Mat(const Vec&)> J, std::string label);
// [[0, W^{-1}], [-W, 0]] from a nondegenerate 2-form with frame
// components W(i,j) = w(theta_i, theta_j).
Gacs gacs_from_symplectic(const FrameField& frame,
                          std::function<Mat(const Vec&)> W, std::string label);

double gacs_square_residual(const Gacs& J, const Vec& p);
double gacs_eta_residual(const Gacs& J, const Vec& p);

// Codimension in TM (x) C of the tangent projection of the +i
// eigenspace. Eigenvalues must split into dim of them within 1e-8 of +i;
// singular values below 1e-8 of the largest count as zero.
struct TypeResult {
  int type = 0;
  double min_kept_sv = 0.0;  // smallest kept singular value / largest
  double sv_threshold = 1e-8;
};
TypeResult gacs_type(const Gacs& J, const Vec& p);

// e^B: X + xi -> X + xi + i_X B as a matrix in the split basis;
// bmat(i,j) = B(theta_i, theta_j).
Mat eb_matrix(const Mat& bmat);
GenVector apply_eb(const Mat& bmat, const GenVector& v);
Gacs b_transform(const Gacs& J, std::function<Mat(const Vec&)> bfield);

// N(X,Y) = [JX,JY] - J[JX,Y] - J[X,JY] - [X,Y]
GenVector gen_nijenhuis(const Gacs& J, const GenSection& A, const GenSection& B,
                        const Vec& p, double h = kFirstStep);

// Levi-Civita (or any frame connection) extended to TM + T*M by
// nabla_X Y := nabla_{vec part of X} Y.
GenVector nabla_gen(const Connection& conn, const Vec& direction_frame,
                    const GenSection& Y, const Vec& p, double h = kFirstStep);

// T(X1,X2,X3) = <nabla_{X1}X2 - nabla_{X2}X1 - [X1,X2], X3>
//             + (<nabla_{X3}X1, X2> - <nabla_{X3}X2, X1>) / 2
double gen_torsion(const Connection& conn, const GenSection& X1,
                   const GenSection& X2, const GenSection& X3, const Vec& p,
                   double h = kFirstStep);

}  // namespace twistor

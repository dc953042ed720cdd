#pragma once

// Dense singular-value helpers over OperatorMatrix.

#include <Eigen/SVD>
#include <vector>

#include "circleop/operator.hpp"

namespace circleop {

inline Eigen::VectorXd singular_values(const Eigen::MatrixXcd& A) {
  if (A.size() == 0) return {};
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(A);
  return svd.singularValues();
}

inline double largest_singular_value(const Eigen::MatrixXcd& A) {
  const Eigen::VectorXd s = singular_values(A);
  return s.size() ? s(0) : 0.0;
}

/// Smallest singular value; for wide matrices this is the (min dimension)-th value.
inline double smallest_singular_value(const Eigen::MatrixXcd& A) {
  const Eigen::VectorXd s = singular_values(A);
  return s.size() ? s(s.size() - 1) : 0.0;
}

/// Right singular vectors of T with singular value < tol (numerical kernel on the input window).
inline std::vector<CoeffVector> kernel_vectors(const OperatorMatrix& T, double tol) {
  std::vector<CoeffVector> out;
  if (T.entries.size() == 0) return out;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(T.entries, Eigen::ComputeFullV);
  const Eigen::VectorXd s = svd.singularValues();
  const Eigen::MatrixXcd& V = svd.matrixV();
  for (Eigen::Index k = 0; k < V.cols(); ++k) {
    // columns beyond the number of singular values span the trivial kernel of a wide matrix
    const double sk = k < s.size() ? s(k) : 0.0;
    if (sk < tol) out.emplace_back(T.in_window, V.col(k));
  }
  return out;
}

/// Largest singular value of A restricted to the input columns with |n| <= radius.
inline double interior_norm(const OperatorMatrix& A, int radius) {
  const int lo = std::max(A.in_window.lo, -radius);
  const int hi = std::min(A.in_window.hi, radius);
  if (hi < lo) return 0.0;
  return largest_singular_value(A.entries.middleCols(A.in_window.index(lo), hi - lo + 1));
}

/// Square matrices on the same window: sigma_max of (AB - BA) over interior input modes |n| <= M/2.
/// Rows are kept in full, so an edge column that leaks out of the window still shows up.
inline double interior_commutator(const OperatorMatrix& A, const OperatorMatrix& B) {
  if (!A.is_square() || !B.is_square() || !(A.in_window == B.in_window))
    throw PreconditionError("interior_commutator: matrices must be square on a common window");
  OperatorMatrix C{A.in_window, A.out_window, A.entries * B.entries - B.entries * A.entries};
  const int M = std::min(-A.in_window.lo, A.in_window.hi);
  return interior_norm(C, M / 2);
}

}  // namespace circleop

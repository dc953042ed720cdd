#pragma once

// L2 elements as Fourier coefficient vectors over a window of modes, the Riesz
// projections P and Q, the operators S_{alpha,beta} f = alpha Pf + beta Qf and
// their adjoints, and truncated matrices in the basis {z^n}.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "circleop/error.hpp"
#include "circleop/symbol.hpp"

namespace circleop {

/// Inclusive range of Fourier modes [lo, hi]. Empty when hi < lo.
struct ModeWindow {
  int lo = 0;
  int hi = -1;

  static ModeWindow symmetric(int radius) { return {-radius, radius}; }

  int size() const noexcept { return hi >= lo ? hi - lo + 1 : 0; }
  bool empty() const noexcept { return hi < lo; }
  bool contains(int mode) const noexcept { return mode >= lo && mode <= hi; }
  int index(int mode) const noexcept { return mode - lo; }
  int mode(int index) const noexcept { return lo + index; }

  ModeWindow hull(const ModeWindow& other) const {
    if (empty()) return other;
    if (other.empty()) return *this;
    return {std::min(lo, other.lo), std::max(hi, other.hi)};
  }

  friend bool operator==(const ModeWindow&, const ModeWindow&) = default;
};

class CoeffVector {
 public:
  CoeffVector() = default;
  explicit CoeffVector(ModeWindow window) : window_(window), entries_(Eigen::VectorXcd::Zero(window.size())) {}
  CoeffVector(ModeWindow window, Eigen::VectorXcd entries) : window_(window), entries_(std::move(entries)) {
    if (entries_.size() != window_.size()) throw PreconditionError("CoeffVector: entry count does not match window");
  }

  static CoeffVector monomial(int mode, cplx c = 1.0) {
    CoeffVector v({mode, mode});
    v.entries_(0) = c;
    return v;
  }

  static CoeffVector from_symbol(const Symbol& s) {
    if (s.is_zero()) return CoeffVector({0, 0});
    CoeffVector v({s.lo(), s.hi()});
    for (const auto& [n, c] : s.coeffs()) v.at(n) = c;
    return v;
  }

  const ModeWindow& window() const noexcept { return window_; }
  const Eigen::VectorXcd& entries() const noexcept { return entries_; }
  Eigen::VectorXcd& entries() noexcept { return entries_; }

  /// Coefficient of z^mode; zero outside the window.
  cplx operator[](int mode) const { return window_.contains(mode) ? entries_(window_.index(mode)) : cplx{}; }
  cplx& at(int mode) {
    if (!window_.contains(mode)) throw PreconditionError("CoeffVector: mode " + std::to_string(mode) + " outside window");
    return entries_(window_.index(mode));
  }

  double norm() const { return entries_.norm(); }

  /// Same vector on a larger window (zero padded) or restricted to a smaller one.
  CoeffVector on_window(ModeWindow w) const {
    CoeffVector out(w);
    for (int m = std::max(w.lo, window_.lo); m <= std::min(w.hi, window_.hi); ++m) out.at(m) = (*this)[m];
    return out;
  }

  Symbol to_symbol(double chop = 0.0) const {
    std::vector<std::pair<int, cplx>> terms;
    for (int m = window_.lo; m <= window_.hi; ++m)
      if (std::abs((*this)[m]) > chop) terms.emplace_back(m, (*this)[m]);
    return make_symbol(terms);
  }

  friend CoeffVector operator+(const CoeffVector& a, const CoeffVector& b) {
    const ModeWindow w = a.window_.hull(b.window_);
    CoeffVector out = a.on_window(w);
    out.entries_ += b.on_window(w).entries_;
    return out;
  }
  friend CoeffVector operator-(const CoeffVector& a, const CoeffVector& b) { return a + cplx{-1.0} * b; }
  friend CoeffVector operator*(cplx k, const CoeffVector& a) { return {a.window_, k * a.entries_}; }

 private:
  ModeWindow window_{0, -1};
  Eigen::VectorXcd entries_;
};

/// <f, g> = sum_n f_n conj(g_n), the L2 inner product for normalized measure.
inline cplx inner(const CoeffVector& f, const CoeffVector& g) {
  cplx acc{};
  const int lo = std::max(f.window().lo, g.window().lo);
  const int hi = std::min(f.window().hi, g.window().hi);
  for (int m = lo; m <= hi; ++m) acc += f[m] * std::conj(g[m]);
  return acc;
}

/// Largest coefficient difference over the union of the windows.
inline double max_abs_difference(const CoeffVector& a, const CoeffVector& b) {
  const ModeWindow w = a.window().hull(b.window());
  double d = 0.0;
  for (int m = w.lo; m <= w.hi; ++m) d = std::max(d, std::abs(a[m] - b[m]));
  return d;
}

/// Exact product s*f; the result window covers every mode the product can reach.
inline CoeffVector multiply(const Symbol& s, const CoeffVector& f) {
  if (s.is_zero() || f.window().empty()) return CoeffVector(f.window());
  CoeffVector out({f.window().lo + s.lo(), f.window().hi + s.hi()});
  for (int n = f.window().lo; n <= f.window().hi; ++n) {
    const cplx fn = f[n];
    if (fn == cplx{}) continue;
    for (const auto& [k, c] : s.coeffs()) out.at(n + k) += c * fn;
  }
  return out;
}

/// Riesz projection onto H^2: keeps modes n >= 0.
inline CoeffVector riesz_p(const CoeffVector& f) {
  CoeffVector out = f;
  for (int m = f.window().lo; m <= std::min(-1, f.window().hi); ++m) out.at(m) = 0.0;
  return out;
}

/// Projection onto the orthogonal complement of H^2: keeps modes n < 0.
inline CoeffVector riesz_q(const CoeffVector& f) {
  CoeffVector out = f;
  for (int m = std::max(0, f.window().lo); m <= f.window().hi; ++m) out.at(m) = 0.0;
  return out;
}

/// S_{alpha,beta} f = alpha Pf + beta Qf, exact (no truncation).
inline CoeffVector apply(const Symbol& alpha, const Symbol& beta, const CoeffVector& f) {
  return multiply(alpha, riesz_p(f)) + multiply(beta, riesz_q(f));
}

/// S*_{alpha,beta} f = P(conj(alpha) f) + Q(conj(beta) f), exact.
inline CoeffVector apply_adjoint(const Symbol& alpha, const Symbol& beta, const CoeffVector& f) {
  return riesz_p(multiply(alpha.conj(), f)) + riesz_q(multiply(beta.conj(), f));
}

/// n-th power of S_{z,zbar}: z^n Pf + zbar^n Qf.
inline CoeffVector shift_power(int n, const CoeffVector& f) {
  if (n < 0) throw PreconditionError("shift_power: negative power " + std::to_string(n));
  return multiply(Symbol::monomial(n), riesz_p(f)) + multiply(Symbol::monomial(-n), riesz_q(f));
}

/// Truncated matrix, entry (m, n) = <T z^n, z^m> for output mode m and input mode n.
struct OperatorMatrix {
  ModeWindow in_window;
  ModeWindow out_window;
  Eigen::MatrixXcd entries;

  cplx entry(int m, int n) const {
    if (!out_window.contains(m) || !in_window.contains(n)) return {};
    return entries(out_window.index(m), in_window.index(n));
  }
  cplx& at(int m, int n) { return entries(out_window.index(m), in_window.index(n)); }

  bool is_square() const { return in_window == out_window; }

  CoeffVector column(int n) const { return {out_window, entries.col(in_window.index(n))}; }

  /// Matrix-vector product; modes of f outside in_window are ignored.
  CoeffVector operator*(const CoeffVector& f) const {
    return {out_window, entries * f.on_window(in_window).entries()};
  }
};

/// Assembles a matrix from exact column images T z^n, n in `in`; the output window is the hull of all columns.
inline OperatorMatrix matrix_from_columns(ModeWindow in, const std::function<CoeffVector(int)>& column) {
  std::vector<CoeffVector> cols;
  cols.reserve(in.size());
  ModeWindow out = in;
  for (int n = in.lo; n <= in.hi; ++n) {
    cols.push_back(column(n));
    out = out.hull(cols.back().window());
  }
  OperatorMatrix T{in, out, Eigen::MatrixXcd::Zero(out.size(), in.size())};
  for (int n = in.lo; n <= in.hi; ++n) T.entries.col(in.index(n)) = cols[in.index(n)].on_window(out).entries();
  return T;
}

/// Square compression onto `window` of a matrix whose windows contain it.
inline OperatorMatrix compress(const OperatorMatrix& T, ModeWindow window) {
  OperatorMatrix out{window, window, Eigen::MatrixXcd::Zero(window.size(), window.size())};
  for (int n = window.lo; n <= window.hi; ++n)
    for (int m = window.lo; m <= window.hi; ++m) out.at(m, n) = T.entry(m, n);
  return out;
}

enum class Truncation {
  exact,   ///< rectangular; output window enlarged so polynomial symbols lose nothing
  square,  ///< compression to [-M, M] x [-M, M]
};

/// Matrix of S_{alpha,beta} on input modes [-M, M]: entry (m, n) is alpha^(m-n) for n >= 0 and beta^(m-n) for n <= -1.
inline OperatorMatrix build_matrix(const Symbol& alpha, const Symbol& beta, int M, Truncation mode) {
  if (M < 0) throw PreconditionError("build_matrix: negative window radius");
  const int r = std::max(alpha.radius(), beta.radius());
  const ModeWindow in = ModeWindow::symmetric(M);
  ModeWindow out = in;
  if (mode == Truncation::exact) {
    if (M < r)
      throw PreconditionError("build_matrix: M=" + std::to_string(M) + " below symbol support radius " +
                              std::to_string(r));
    out = ModeWindow::symmetric(M + r);
  }
  OperatorMatrix T{in, out, Eigen::MatrixXcd::Zero(out.size(), in.size())};
  for (int n = in.lo; n <= in.hi; ++n) {
    const Symbol& s = n >= 0 ? alpha : beta;
    for (const auto& [k, c] : s.coeffs())
      if (out.contains(n + k)) T.at(n + k, n) = c;
  }
  return T;
}

struct StructureWitness {
  int m = 0;
  int n = 0;
  cplx expected;
  cplx actual;
};

struct StructureVerdict {
  bool is_singular_integral = false;  ///< true: the matrix is S_{alpha,beta} within tolerance
  Symbol alpha;                       ///< reconstructed on acceptance
  Symbol beta;
  std::optional<StructureWitness> witness;  ///< worst violating entry on rejection
  double max_deviation = 0.0;
};

/// Decides whether T has the S_{alpha,beta} diagonal structure. Candidate a_k come from
/// column 0 (alpha = T1) and b_k from column -1 (beta = z T zbar); offsets those two
/// columns cannot see are read from the first column on the same diagonal. Every entry
/// is then checked against the candidates.
inline StructureVerdict verify_structure(const OperatorMatrix& T, double tol = kEqTol) {
  const ModeWindow& in = T.in_window;
  const ModeWindow& out = T.out_window;
  if (in.lo > -2 || in.hi < 2 || !out.contains(0) || !out.contains(-1))
    throw PreconditionError("verify_structure: window radius must be at least 2");

  std::map<int, cplx> a;
  std::map<int, cplx> b;
  for (int m = out.lo; m <= out.hi; ++m) {
    a[m] = T.entry(m, 0);
    b[m + 1] = T.entry(m, -1);
  }
  for (int n = 1; n <= in.hi; ++n)
    for (int m = out.lo; m <= out.hi; ++m) a.try_emplace(m - n, T.entry(m, n));
  for (int n = -2; n >= in.lo; --n)
    for (int m = out.lo; m <= out.hi; ++m) b.try_emplace(m - n, T.entry(m, n));

  StructureVerdict v;
  for (int n = in.lo; n <= in.hi; ++n) {
    const auto& coeffs = n >= 0 ? a : b;
    for (int m = out.lo; m <= out.hi; ++m) {
      const cplx expected = coeffs.at(m - n);
      const cplx actual = T.entry(m, n);
      const double dev = std::abs(expected - actual);
      if (dev > v.max_deviation) {
        v.max_deviation = dev;
        v.witness = StructureWitness{m, n, expected, actual};
      }
    }
  }
  v.is_singular_integral = v.max_deviation <= tol;
  if (v.is_singular_integral) {
    v.witness.reset();
    auto to_symbol = [tol](const std::map<int, cplx>& c) {
      std::vector<std::pair<int, cplx>> terms;
      for (const auto& [k, value] : c)
        if (std::abs(value) > tol) terms.emplace_back(k, value);
      return make_symbol(terms);
    };
    v.alpha = to_symbol(a);
    v.beta = to_symbol(b);
  }
  return v;
}

/// Square matrix on [-M, M] of the operator T z^n = z^n + zbar^(n+1) (n >= 0), T z^n = 0 (n < 0).
/// It commutes with S_{z,zbar} but is not of the form S_{alpha,beta}.
inline OperatorMatrix build_remark_operator(int M) {
  if (M < 2) throw PreconditionError("build_remark_operator: M must be at least 2");
  const ModeWindow w = ModeWindow::symmetric(M);
  OperatorMatrix T{w, w, Eigen::MatrixXcd::Zero(w.size(), w.size())};
  for (int n = 0; n <= M; ++n) {
    T.at(n, n) = 1.0;
    if (w.contains(-n - 1)) T.at(-n - 1, n) = 1.0;
  }
  return T;
}

}  // namespace circleop

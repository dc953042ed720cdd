#pragma once

// Invariant and reducing subspaces of S_{z,zbar} built from finite Blaschke products,
// non-compactness witnesses, numerical kernels and the zero-set injectivity classification.

#include <Eigen/QR>
#include <Eigen/SVD>
#include <optional>
#include <string>
#include <vector>

#include "circleop/error.hpp"
#include "circleop/linalg.hpp"
#include "circleop/operator.hpp"
#include "circleop/symbol.hpp"

namespace circleop {

inline constexpr double kBlaschkeUnimodularTol = 1e-8;
inline constexpr double kReducingTol = 1e-8;
inline constexpr double kGramTol = 1e-10;
inline constexpr double kKernelTolPolynomial = 1e-8;
inline constexpr double kKernelTolMollified = 1e-2;

/// c z^power prod_j (z - z_j) / (1 - conj(z_j) z).
struct BlaschkeProduct {
  cplx constant = 1.0;
  int power = 0;
  std::vector<cplx> zeros;

  int degree() const { return power + static_cast<int>(zeros.size()); }

  void validate() const {
    if (std::abs(std::abs(constant) - 1.0) > 1e-12) throw PreconditionError("BlaschkeProduct: |constant| must be 1");
    if (power < 0) throw PreconditionError("BlaschkeProduct: negative power");
    for (cplx a : zeros)
      if (!(std::abs(a) < 1.0 - 1e-9)) throw PreconditionError("BlaschkeProduct: zero on or outside the unit circle");
  }

  /// Closed-form boundary value at e^{i theta}.
  cplx operator()(double theta) const {
    const cplx z = std::polar(1.0, theta);
    cplx v = constant * std::pow(z, power);
    for (cplx a : zeros) v *= (z - a) / (1.0 - std::conj(a) * z);
    return v;
  }
};

namespace detail {

/// Taylor coefficients 0..degree, no accuracy check.
inline std::vector<cplx> blaschke_series(const BlaschkeProduct& b, int degree) {
  std::vector<cplx> acc(static_cast<std::size_t>(degree) + 1, cplx{});
  if (b.power <= degree) acc[b.power] = b.constant;
  for (cplx a : b.zeros) {
    // (z - a)/(1 - conj(a) z) = -a + sum_{k>=1} (1 - |a|^2) conj(a)^{k-1} z^k
    std::vector<cplx> f(acc.size());
    f[0] = -a;
    cplx p = 1.0 - std::norm(a);
    for (int k = 1; k <= degree; ++k, p *= std::conj(a)) f[k] = p;
    std::vector<cplx> next(acc.size(), cplx{});
    for (int i = 0; i <= degree; ++i) {
      if (acc[i] == cplx{}) continue;
      for (int k = 0; i + k <= degree; ++k) next[i + k] += acc[i] * f[k];
    }
    acc = std::move(next);
  }
  return acc;
}

inline double unimodularity_defect(const std::vector<cplx>& c, int n_points) {
  double worst = 0.0;
  for (int j = 0; j < n_points; ++j) {
    const cplx z = std::polar(1.0, kTwoPi * j / n_points);
    cplx v{};
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * z + *it;
    worst = std::max(worst, std::abs(std::abs(v) - 1.0));
  }
  return worst;
}

inline int unimodularity_grid(int degree) {
  int n = 256;
  while (n <= 4 * degree) n *= 2;
  return n;
}

}  // namespace detail

/// Taylor polynomial of b to `degree`; rejected when its boundary values miss |b| = 1 by more than 1e-8.
inline Symbol blaschke_coeffs(const BlaschkeProduct& b, int degree) {
  b.validate();
  if (degree < b.degree())
    throw PreconditionError("blaschke_coeffs: degree " + std::to_string(degree) + " below Blaschke degree " +
                            std::to_string(b.degree()));
  const auto c = detail::blaschke_series(b, degree);
  if (detail::unimodularity_defect(c, detail::unimodularity_grid(degree)) > kBlaschkeUnimodularTol) {
    int need = degree;
    while (need < (1 << 16)) {
      need *= 2;
      if (detail::unimodularity_defect(detail::blaschke_series(b, need), detail::unimodularity_grid(need)) <=
          kBlaschkeUnimodularTol)
        break;
    }
    // bisect between the failing degree and the first passing one
    int lo = degree, hi = need;
    while (hi - lo > 1) {
      const int mid = (lo + hi) / 2;
      if (detail::unimodularity_defect(detail::blaschke_series(b, mid), detail::unimodularity_grid(mid)) <=
          kBlaschkeUnimodularTol)
        hi = mid;
      else
        lo = mid;
    }
    throw PreconditionError("blaschke_coeffs: a zero is too close to the circle for degree " + std::to_string(degree) +
                            "; degree >= " + std::to_string(hi) + " required");
  }
  std::vector<std::pair<int, cplx>> terms;
  for (int k = 0; k <= degree; ++k) terms.emplace_back(k, c[k]);
  return make_symbol(terms);
}

/// Orthonormal basis (columns) of a subspace of the coefficient space on a window.
class SubspaceBasis {
 public:
  SubspaceBasis(ModeWindow window, Eigen::MatrixXcd q) : window_(window), q_(std::move(q)) {
    if (q_.rows() != window_.size()) throw PreconditionError("SubspaceBasis: row count does not match window");
    if (gram_error() > kGramTol) throw PreconditionError("SubspaceBasis: vectors are not orthonormal");
  }

  /// Orthonormalizes the span of `vectors` restricted to `window`; dependent directions are dropped.
  static SubspaceBasis span(ModeWindow window, const std::vector<CoeffVector>& vectors, double rank_tol = 1e-10) {
    if (vectors.empty()) return {window, Eigen::MatrixXcd(window.size(), 0)};
    Eigen::MatrixXcd A(window.size(), static_cast<Eigen::Index>(vectors.size()));
    for (std::size_t k = 0; k < vectors.size(); ++k) A.col(static_cast<Eigen::Index>(k)) = vectors[k].on_window(window).entries();
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(A);
    qr.setThreshold(rank_tol);
    const Eigen::Index rank = qr.rank();
    Eigen::MatrixXcd Q = qr.householderQ() * Eigen::MatrixXcd::Identity(window.size(), rank);
    return {window, Q};
  }

  const ModeWindow& window() const noexcept { return window_; }
  const Eigen::MatrixXcd& matrix() const noexcept { return q_; }
  int dimension() const noexcept { return static_cast<int>(q_.cols()); }

  std::vector<CoeffVector> vectors() const {
    std::vector<CoeffVector> out;
    for (Eigen::Index k = 0; k < q_.cols(); ++k) out.emplace_back(window_, q_.col(k));
    return out;
  }

  double gram_error() const {
    if (q_.cols() == 0) return 0.0;
    const Eigen::MatrixXcd G = q_.adjoint() * q_;
    return (G - Eigen::MatrixXcd::Identity(q_.cols(), q_.cols())).cwiseAbs().maxCoeff();
  }

  /// Orthogonal projection of f (restricted to the window).
  CoeffVector project(const CoeffVector& f) const {
    const Eigen::VectorXcd x = f.on_window(window_).entries();
    if (q_.cols() == 0) return CoeffVector(window_);
    return {window_, q_ * (q_.adjoint() * x)};
  }

  /// Middle half of the window; edge effects of the truncation are confined outside it.
  ModeWindow interior() const {
    const int margin = (window_.size() - 1) / 4;
    return {window_.lo + margin, window_.hi - margin};
  }

 private:
  ModeWindow window_;
  Eigen::MatrixXcd q_;
};

inline SubspaceBasis modes_basis(ModeWindow window, ModeWindow modes) {
  std::vector<CoeffVector> v;
  for (int m = std::max(window.lo, modes.lo); m <= std::min(window.hi, modes.hi); ++m) v.push_back(CoeffVector::monomial(m));
  return SubspaceBasis::span(window, v);
}

inline SubspaceBasis zero_subspace(int M) { return {ModeWindow::symmetric(M), Eigen::MatrixXcd(2 * M + 1, 0)}; }
inline SubspaceBasis hardy_basis(int M) { return modes_basis(ModeWindow::symmetric(M), {0, M}); }
inline SubspaceBasis hardy_perp_basis(int M) { return modes_basis(ModeWindow::symmetric(M), {-M, -1}); }
inline SubspaceBasis full_basis(int M) { return modes_basis(ModeWindow::symmetric(M), ModeWindow::symmetric(M)); }

/// Window basis of phi H^2 (+) conj(psi) H^{2,perp}: phi z^k and conj(psi) zbar^{k+1}, 0 <= k <= M/2.
inline SubspaceBasis invariant_subspace_basis(const BlaschkeProduct& phi, const BlaschkeProduct& psi, int M) {
  phi.validate();
  psi.validate();
  if (M < 2 || M < 4 * (phi.degree() + psi.degree()))
    throw PreconditionError("invariant_subspace_basis: M must be at least 4x the Blaschke degrees");
  const ModeWindow w = ModeWindow::symmetric(M);
  const auto ph = detail::blaschke_series(phi, M);
  const auto ps = detail::blaschke_series(psi, M);
  std::vector<CoeffVector> gens;
  for (int k = 0; k <= M / 2; ++k) {
    CoeffVector a(w), b(w);
    for (int j = 0; j + k <= M; ++j) a.at(j + k) = ph[j];
    for (int j = 0; j + k + 1 <= M; ++j) b.at(-(j + k + 1)) = std::conj(ps[j]);
    gens.push_back(std::move(a));
    gens.push_back(std::move(b));
  }
  return SubspaceBasis::span(w, gens);
}

namespace detail {

inline double interior_residual(const SubspaceBasis& B, const std::function<CoeffVector(const CoeffVector&)>& op) {
  const ModeWindow mid = B.interior();
  double worst = 0.0;
  for (const CoeffVector& v : B.vectors()) {
    const CoeffVector w = op(v).on_window(B.window());
    const CoeffVector r = (w - B.project(w)).on_window(mid);
    worst = std::max(worst, r.norm());
  }
  return worst;
}

}  // namespace detail

/// max over basis vectors v of |(I - Pi_B) S_{alpha,beta} v| on the interior modes.
inline double invariance_residual(const SubspaceBasis& B, const Symbol& alpha, const Symbol& beta) {
  return detail::interior_residual(B, [&](const CoeffVector& v) { return apply(alpha, beta, v); });
}

inline double adjoint_invariance_residual(const SubspaceBasis& B, const Symbol& alpha, const Symbol& beta) {
  return detail::interior_residual(B, [&](const CoeffVector& v) { return apply_adjoint(alpha, beta, v); });
}

struct ReducingVerdict {
  bool reducing = false;
  double forward_residual = 0.0;
  double adjoint_residual = 0.0;
  std::optional<CoeffVector> witness;  ///< basis vector whose image leaves the subspace
};

/// Reducing for S_{z,zbar}: invariant under the operator and its adjoint.
inline ReducingVerdict reducing_check(const SubspaceBasis& B, double tol = kReducingTol) {
  const Symbol z = Symbol::z(), zb = Symbol::zbar();
  ReducingVerdict v;
  v.forward_residual = invariance_residual(B, z, zb);
  v.adjoint_residual = adjoint_invariance_residual(B, z, zb);
  v.reducing = v.forward_residual <= tol && v.adjoint_residual <= tol;
  if (!v.reducing) {
    const bool forward = v.forward_residual > tol;
    double worst = -1.0;
    for (const CoeffVector& b : B.vectors()) {
      const CoeffVector w = (forward ? apply(z, zb, b) : apply_adjoint(z, zb, b)).on_window(B.window());
      const double r = (w - B.project(w)).on_window(B.interior()).norm();
      if (r > worst) {
        worst = r;
        v.witness = b;
      }
    }
  }
  return v;
}

struct NoncompactnessWitness {
  std::vector<double> analytic;    ///< |S z^n|, n = 0..10
  std::vector<double> coanalytic;  ///< |S zbar^{n+1}|, n = 0..10
};

/// Column norms of the exact truncation on an orthonormal sequence: they do not decay.
inline NoncompactnessWitness noncompactness_witness(const Symbol& alpha, const Symbol& beta, int M) {
  const int r = std::max(alpha.radius(), beta.radius());
  if (M < r + 10 || M < 11) throw PreconditionError("noncompactness_witness: M below support + 10");
  const OperatorMatrix T = build_matrix(alpha, beta, M, Truncation::exact);
  NoncompactnessWitness w;
  for (int n = 0; n <= 10; ++n) {
    w.analytic.push_back(T.column(n).norm());
    w.coanalytic.push_back(T.column(-(n + 1)).norm());
  }
  return w;
}

/// |S - K| / |S| on the exact truncation, K given on windows inside it.
inline double compact_distance_ratio(const Symbol& alpha, const Symbol& beta, const OperatorMatrix& K, int M) {
  const OperatorMatrix S = build_matrix(alpha, beta, M, Truncation::exact);
  if (K.in_window.size() && (K.in_window.lo < S.in_window.lo || K.in_window.hi > S.in_window.hi ||
                             K.out_window.lo < S.out_window.lo || K.out_window.hi > S.out_window.hi))
    throw PreconditionError("compact_distance_ratio: K must live inside the truncation windows");
  Eigen::MatrixXcd D = S.entries;
  for (int n = K.in_window.lo; n <= K.in_window.hi; ++n)
    for (int m = K.out_window.lo; m <= K.out_window.hi; ++m)
      D(S.out_window.index(m), S.in_window.index(n)) -= K.entry(m, n);
  const double s = largest_singular_value(S.entries);
  if (s == 0.0) throw PreconditionError("compact_distance_ratio: zero operator");
  return largest_singular_value(D) / s;
}

/// Exact column images of S* on input modes [-M, M].
inline OperatorMatrix adjoint_matrix(const Symbol& alpha, const Symbol& beta, int M) {
  return matrix_from_columns(ModeWindow::symmetric(M),
                             [&](int n) { return apply_adjoint(alpha, beta, CoeffVector::monomial(n)); });
}

/// Right singular vectors of the exact rectangular truncation (of S, or of S* when `adjoint`) below tol.
inline std::vector<CoeffVector> kernel_basis(const Symbol& alpha, const Symbol& beta, int M, double tol,
                                             bool adjoint = false) {
  const int r = std::max(alpha.radius(), beta.radius());
  if (M < r) throw PreconditionError("kernel_basis: M below symbol support radius");
  return kernel_vectors(adjoint ? adjoint_matrix(alpha, beta, M) : build_matrix(alpha, beta, M, Truncation::exact),
                        tol);
}

enum class InjectivityCase { CaseI, CaseII_SInjective, CaseIII_AdjointInjective, CaseIII_AdjointNotInjective, Unclassified };

inline std::string to_string(InjectivityCase c) {
  switch (c) {
    case InjectivityCase::CaseI: return "CaseI";
    case InjectivityCase::CaseII_SInjective: return "CaseII_SInjective";
    case InjectivityCase::CaseIII_AdjointInjective: return "CaseIII_AdjointInjective";
    case InjectivityCase::CaseIII_AdjointNotInjective: return "CaseIII_AdjointNotInjective";
    case InjectivityCase::Unclassified: return "Unclassified";
  }
  return "?";
}

struct ZeroSetMeasures {
  double alpha = 0, beta = 0, alpha_only = 0, beta_only = 0, common = 0;
};

struct InjectivityVerdict {
  InjectivityCase verdict = InjectivityCase::Unclassified;
  ZeroSetMeasures measures;
  std::optional<CoeffVector> witness;  ///< indicator of the common zero set
  std::optional<double> witness_ratio;  ///< |S* g| / |g|
};

namespace detail {

/// Fourier coefficients |n| <= N/2 of the indicator of the grid cells centred at the flagged points.
inline CoeffVector cell_indicator(const std::vector<bool>& flags) {
  const int N = static_cast<int>(flags.size());
  const int K = N / 2;
  const double h = kTwoPi / N;
  CoeffVector g(ModeWindow::symmetric(K));
  std::vector<int> idx;
  for (int j = 0; j < N; ++j)
    if (flags[j]) idx.push_back(j);
  for (int n = -K; n <= K; ++n) {
    if (n == 0) {
      g.at(0) = static_cast<double>(idx.size()) / N;
      continue;
    }
    cplx acc{};
    for (int j : idx) acc += std::polar(1.0, -static_cast<double>((static_cast<long long>(n) * j) % N) * h);
    g.at(n) = acc * std::sin(n * h / 2) / (n * std::numbers::pi);
  }
  return g;
}

}  // namespace detail

/// Zero sets measured on the grid (|value| < tol). A measure below 3/N counts as null, at least
/// max(0.01, 3/N) as positive; anything between is Unclassified. The clause (iii) witness is the
/// indicator of the common zero set paired with the degree N/4 band-limited symbols. That witness is
/// a demonstration for the constructed continuous symbols sharing an open zero arc, not a general
/// statement about equal zero sets.
inline InjectivityVerdict injectivity_classifier(const GridSampling& a, const GridSampling& b, double tol) {
  if (a.n_points != b.n_points) throw PreconditionError("injectivity_classifier: grids differ");
  if (a.max_abs() == 0.0 || b.max_abs() == 0.0) throw PreconditionError("injectivity_classifier: zero symbol");
  if (!(tol > 0.0)) throw PreconditionError("injectivity_classifier: tol must be positive");
  const int N = a.n_points;
  std::vector<bool> za(N), zb(N), common(N);
  ZeroSetMeasures m;
  for (int j = 0; j < N; ++j) {
    za[j] = std::abs(a.values[j]) < tol;
    zb[j] = std::abs(b.values[j]) < tol;
    common[j] = za[j] && zb[j];
    m.alpha += za[j];
    m.beta += zb[j];
    m.alpha_only += za[j] && !zb[j];
    m.beta_only += zb[j] && !za[j];
    m.common += common[j];
  }
  for (double* x : {&m.alpha, &m.beta, &m.alpha_only, &m.beta_only, &m.common}) *x /= N;

  InjectivityVerdict v;
  v.measures = m;
  const double null_below = 3.0 / N;
  const double positive_from = std::max(0.01, null_below);
  auto gray = [&](double x) { return x >= null_below && x < positive_from; };
  auto positive = [&](double x) { return x >= positive_from; };
  for (double x : {m.alpha, m.beta, m.alpha_only, m.beta_only, m.common})
    if (gray(x)) return v;

  if (!positive(m.alpha) && !positive(m.beta)) {
    v.verdict = InjectivityCase::CaseI;
  } else if (positive(m.alpha_only) || positive(m.beta_only)) {
    v.verdict = InjectivityCase::CaseII_SInjective;
  } else if (positive(m.common)) {
    v.verdict = InjectivityCase::CaseIII_AdjointNotInjective;
    const Symbol alpha = from_samples(a, N / 4);
    const Symbol beta = from_samples(b, N / 4);
    CoeffVector g = detail::cell_indicator(common);
    v.witness_ratio = apply_adjoint(alpha, beta, g).norm() / g.norm();
    v.witness = std::move(g);
  } else {
    v.verdict = InjectivityCase::CaseIII_AdjointInjective;
  }
  return v;
}

inline InjectivityVerdict injectivity_classifier(const Symbol& alpha, const Symbol& beta, double tol, int N) {
  if (alpha.is_zero() || beta.is_zero()) throw PreconditionError("injectivity_classifier: zero symbol");
  return injectivity_classifier(sample(alpha, N), sample(beta, N), tol);
}

}  // namespace circleop

// circleop: command-line front end for the singular integral operator toolkit.
//
// Exit codes: 0 ok, 1 failed selftest or precondition error, 2 parse error, 3 non-convergence.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "circleop/acceptance.hpp"
#include "circleop/algebra.hpp"
#include "circleop/io.hpp"
#include "circleop/literal.hpp"
#include "circleop/norm.hpp"
#include "circleop/spectral.hpp"
#include "circleop/structure.hpp"

using namespace circleop;
using nlohmann::ordered_json;

namespace {

constexpr int kExitPrecondition = 1;
constexpr int kExitParse = 2;
constexpr int kExitNonConvergence = 3;

struct Config {
  std::string alpha = "one", beta = "one", alpha2 = "one", beta2 = "one";
  std::string symbol = "z";
  std::string at = "0";
  std::string grid = "-2,2,-2,2,41";
  std::string format;
  std::string out;
  std::string truncation = "exact";
  std::string half;
  std::string phi_zeros, psi_zeros;
  std::string criteria;
  int phi_power = 0, psi_power = 0;
  int M = -1, N = 1024, deg = 4, iters = 2000;
  double eps = 1e-3, tol = -1.0;
  bool adjoint = false;
  unsigned seed = 42;
};

// Symbol flags are parsed with their flag name so the error can say which one failed.
class FlagParseError : public std::runtime_error {
 public:
  FlagParseError(const std::string& flag, const ParseError& e)
      : std::runtime_error("--" + flag + ": " + e.what()), flag_(flag), position_(e.position()) {}
  const std::string& flag() const { return flag_; }
  std::size_t position() const { return position_; }

 private:
  std::string flag_;
  std::size_t position_;
};

Symbol symbol_flag(const std::string& flag, const std::string& text) {
  try {
    return parse_symbol(text);
  } catch (const ParseError& e) {
    throw FlagParseError(flag, e);
  }
}

cplx complex_flag(const std::string& flag, const std::string& text) {
  try {
    return parse_complex(text);
  } catch (const ParseError& e) {
    throw FlagParseError(flag, e);
  }
}

GridSpec grid_flag(const std::string& text, double eps) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string cell;
  std::size_t pos = 0;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw FlagParseError("grid", ParseError("malformed grid value '" + cell + "'", pos));
    }
    pos += cell.size() + 1;
  }
  if (v.size() != 5 || v[4] < 1 || v[4] != std::floor(v[4]))
    throw FlagParseError("grid", ParseError("expected re0,re1,im0,im1,n", 0));
  return {v[0], v[1], v[2], v[3], static_cast<int>(v[4]), eps};
}

std::vector<cplx> zeros_flag(const std::string& flag, const std::string& text) {
  std::vector<cplx> zs;
  if (text.empty()) return zs;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(';', start);
    if (end == std::string::npos) end = text.size();
    try {
      zs.push_back(parse_complex(std::string_view(text).substr(start, end - start), start));
    } catch (const ParseError& e) {
      throw FlagParseError(flag, e);
    }
    start = end + 1;
  }
  return zs;
}

ordered_json cplx_json(cplx c) { return ordered_json::array({c.real(), c.imag()}); }

ordered_json vector_json(const CoeffVector& v, double chop = 1e-14) {
  ordered_json out = ordered_json::array();
  for (int m = v.window().lo; m <= v.window().hi; ++m)
    if (std::abs(v[m]) > chop) out.push_back({{"mode", m}, {"value", cplx_json(v[m])}});
  return out;
}

ordered_json envelope(const std::string& command) { return {{"schema", 1}, {"command", command}}; }

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void emit_json(const Config& c, const ordered_json& j) {
  Output out(c.out);
  out.stream() << j.dump(2) << '\n';
}

int run_matrix(const Config& c) {
  const Symbol a = symbol_flag("alpha", c.alpha), b = symbol_flag("beta", c.beta);
  if (c.truncation != "exact" && c.truncation != "square")
    throw FlagParseError("truncation", ParseError("expected exact or square", 0));
  const OperatorMatrix T =
      build_matrix(a, b, c.M < 0 ? 8 : c.M, c.truncation == "square" ? Truncation::square : Truncation::exact);
  if (c.format == "json") {
    ordered_json j = envelope("matrix");
    j["out_modes"] = {T.out_window.lo, T.out_window.hi};
    j["in_modes"] = {T.in_window.lo, T.in_window.hi};
    ordered_json rows = ordered_json::array();
    for (int r = 0; r < T.entries.rows(); ++r) {
      ordered_json row = ordered_json::array();
      for (int k = 0; k < T.entries.cols(); ++k) row.push_back(cplx_json(T.entries(r, k)));
      rows.push_back(row);
    }
    j["entries"] = rows;
    emit_json(c, j);
  } else {
    Output out(c.out);
    write_matrix_csv(out.stream(), T);
  }
  return 0;
}

int run_norm(const Config& c) {
  const Symbol a = symbol_flag("alpha", c.alpha), b = symbol_flag("beta", c.beta);
  const int r = std::max(a.radius(), b.radius());
  const int M = c.M < 0 ? std::max(128, 4 * r) : c.M;
  const NormEstimate est = operator_norm(a, b, M);
  const NormBounds bounds = norm_bounds(a, b, std::max(c.N, default_grid(a.conj() * b)));
  const NormCaseVerdict cls = norm_case_classifier(a, b);
  NyOptions opt;
  opt.seed = c.seed;
  const NyEstimate ny = ny_norm_estimate(a, b, c.deg, std::max(c.N, default_grid(a.conj() * b)), c.iters, opt);

  ordered_json j = envelope("norm");
  j["alpha"] = format_symbol(a);
  j["beta"] = format_symbol(b);
  j["svd_estimate"] = est.value;
  j["M"] = est.M;
  j["converged"] = est.converged;
  j["bounds"] = {{"lower", bounds.lower}, {"upper", bounds.upper}};
  j["case"] = to_string(cls.verdict);
  if (cls.verdict != NormCase::Unclassified) j["implied_norm"] = cls.implied_norm;
  j["ny_estimate"] = std::sqrt(ny.value);
  j["ny_objective"] = ny.value;
  j["ny_degree"] = c.deg;
  j["ny_certified"] = ny.certified;
  j["ny_evaluations"] = ny.evaluations;
  j["seed"] = c.seed;
  if (!est.converged) {
    j["diagnostic"] = "truncation estimate changed by more than 1e-4 between M/2 and M; increase --M";
    emit_json(c, j);
    return kExitNonConvergence;
  }
  emit_json(c, j);
  return 0;
}

int run_spectrum(const Config& c) {
  const GridSpec grid = grid_flag(c.grid, c.eps);
  const int probe = c.M < 0 ? 0 : c.M;
  SpectrumReport rep;
  if (c.half.empty()) {
    rep = spectrum_continuous(symbol_flag("alpha", c.alpha), symbol_flag("beta", c.beta), grid, c.N, probe);
  } else if (c.half == "alpha") {
    rep = half_spectrum(symbol_flag("alpha", c.alpha), HalfSide::AlphaZeroBeta, grid, c.N, probe);
  } else if (c.half == "beta") {
    rep = half_spectrum(symbol_flag("beta", c.beta), HalfSide::BetaZeroAlpha, grid, c.N, probe);
  } else {
    throw FlagParseError("half", ParseError("expected alpha or beta", 0));
  }
  auto opt_int = [](const std::optional<int>& v) { return v ? std::to_string(*v) : std::string(); };
  if (c.format == "json") {
    ordered_json j = envelope("spectrum");
    j["grid"] = {grid.re0, grid.re1, grid.im0, grid.im1, grid.n};
    j["eps"] = grid.eps;
    ordered_json pts = ordered_json::array();
    for (const auto& p : rep.points) {
      ordered_json q = {{"re", p.lambda.real()}, {"im", p.lambda.imag()}, {"in_range_a", p.in_range_a},
                        {"in_range_b", p.in_range_b}, {"ind_a", nullptr}, {"ind_b", nullptr},
                        {"in_spectrum", p.in_spectrum}, {"flagged", p.flagged}};
      if (p.ind_a) q["ind_a"] = *p.ind_a;
      if (p.ind_b) q["ind_b"] = *p.ind_b;
      if (p.min_sv) q["min_sv"] = *p.min_sv;
      pts.push_back(q);
    }
    j["points"] = pts;
    emit_json(c, j);
    return 0;
  }
  Output out(c.out);
  std::ostream& os = out.stream();
  os << "re,im,in_range_a,in_range_b,ind_a,ind_b,in_spectrum,min_sv\n";
  char buf[64];
  for (const auto& p : rep.points) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g", p.lambda.real(), p.lambda.imag());
    os << buf << ',' << p.in_range_a << ',' << p.in_range_b << ',' << opt_int(p.ind_a) << ',' << opt_int(p.ind_b)
       << ',' << p.in_spectrum << ',';
    if (p.min_sv) {
      std::snprintf(buf, sizeof buf, "%.17g", *p.min_sv);
      os << buf;
    }
    os << '\n';
  }
  return 0;
}

int run_product(const Config& c) {
  const Symbol a1 = symbol_flag("alpha", c.alpha), b1 = symbol_flag("beta", c.beta);
  const Symbol a2 = symbol_flag("alpha2", c.alpha2), b2 = symbol_flag("beta2", c.beta2);
  const ProductVerdict p = product_form(a1, b1, a2, b2);
  const ZeroProductVerdict z = zero_product_class(a1, b1, a2, b2, c.seed);
  ordered_json j = envelope("product");
  j["is_product"] = p.is_product;
  if (p.is_product) {
    j["alpha"] = format_symbol(p.alpha);
    j["beta"] = format_symbol(p.beta);
  }
  j["zero_class"] = to_string(z.verdict);
  if (z.verdict == ZeroClass::NonZero) {
    j["witness_norm"] = z.witness_norm;
    j["certified"] = z.certified;
  }
  j["seed"] = c.seed;
  emit_json(c, j);
  return 0;
}

int run_commute(const Config& c) {
  const Symbol a1 = symbol_flag("alpha", c.alpha), b1 = symbol_flag("beta", c.beta);
  const Symbol a2 = symbol_flag("alpha2", c.alpha2), b2 = symbol_flag("beta2", c.beta2);
  const CommuteVerdict v = commute_check(a1, b1, a2, b2);
  ordered_json j = envelope("commute");
  j["verdict"] = to_string(v.verdict);
  if (v.clause_iii)
    j["clause_iii"] = {{"a", cplx_json(v.clause_iii->a)}, {"b", cplx_json(v.clause_iii->b)}, {"c", cplx_json(v.clause_iii->c)}};
  const int r = std::max({a1.radius(), b1.radius(), a2.radius(), b2.radius()});
  j["residual"] = commutator_residual(a1, b1, a2, b2, c.M < 0 ? std::max(32, 4 * r) : c.M);
  emit_json(c, j);
  return v.verdict == CommuteKind::Unclassified ? kExitNonConvergence : 0;
}

int run_kernel(const Config& c) {
  const Symbol a = symbol_flag("alpha", c.alpha), b = symbol_flag("beta", c.beta);
  const int M = c.M < 0 ? std::max(32, 2 * std::max(a.radius(), b.radius())) : c.M;
  const double tol = c.tol > 0 ? c.tol : kKernelTolPolynomial;
  const auto k = kernel_basis(a, b, M, tol, c.adjoint);
  ordered_json j = envelope("kernel");
  j["operator"] = c.adjoint ? "adjoint" : "S";
  j["M"] = M;
  j["tol"] = tol;
  j["dimension"] = k.size();
  ordered_json vs = ordered_json::array();
  for (const auto& v : k) vs.push_back(vector_json(v));
  j["vectors"] = vs;
  if (!a.is_zero() && !b.is_zero()) {
    const int N = std::max(c.N, default_grid(a));
    const auto inj = injectivity_classifier(a, b, 1e-3, std::max(N, default_grid(b)));
    j["injectivity"] = {{"verdict", to_string(inj.verdict)},
                        {"measure_alpha", inj.measures.alpha},
                        {"measure_beta", inj.measures.beta},
                        {"measure_common", inj.measures.common}};
    if (inj.witness_ratio) j["injectivity"]["witness_ratio"] = *inj.witness_ratio;
  }
  emit_json(c, j);
  return 0;
}

int run_subspace(const Config& c) {
  const BlaschkeProduct phi{1.0, c.phi_power, zeros_flag("phi-zeros", c.phi_zeros)};
  const BlaschkeProduct psi{1.0, c.psi_power, zeros_flag("psi-zeros", c.psi_zeros)};
  const int M = c.M < 0 ? 32 : c.M;
  const SubspaceBasis B = invariant_subspace_basis(phi, psi, M);
  const ReducingVerdict red = reducing_check(B);
  ordered_json j = envelope("subspace");
  j["M"] = M;
  j["dimension"] = B.dimension();
  j["invariance_residual"] = red.forward_residual;
  j["adjoint_residual"] = red.adjoint_residual;
  j["reducing"] = red.reducing;
  if (red.witness) j["witness"] = vector_json(*red.witness);
  emit_json(c, j);
  return 0;
}

int run_winding(const Config& c) {
  const Symbol s = symbol_flag("symbol", c.symbol);
  const cplx a = complex_flag("at", c.at);
  const int w = winding_number_adaptive(s, a, std::max(c.N, default_grid(s)));
  if (c.format == "json") {
    ordered_json j = envelope("winding");
    j["symbol"] = format_symbol(s);
    j["at"] = cplx_json(a);
    j["winding"] = w;
    if (a == cplx{} && !s.is_zero()) {
      try {
        j["index_via_roots"] = index_via_roots(s);
      } catch (const PreconditionError&) {
        j["index_via_roots"] = nullptr;
      }
    }
    emit_json(c, j);
  } else {
    Output out(c.out);
    out.stream() << w << '\n';
  }
  return 0;
}

int run_selftest(const Config& c) {
  std::vector<int> ids;
  if (!c.criteria.empty()) {
    std::stringstream ss(c.criteria);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        ids.push_back(std::stoi(item));
      } catch (const std::exception&) {
        throw FlagParseError("criteria", ParseError("malformed criterion id '" + item + "'", 0));
      }
    }
  }
  ordered_json rows = ordered_json::array();
  bool all = true;
  run_acceptance(ids, [&](const CriterionResult& r) {
    all = all && r.passed;
    if (c.format == "json") {
      rows.push_back({{"criterion", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail},
                      {"seconds", r.seconds}});
    } else {
      std::printf("%2d  %-4s  %-45s  %s\n", r.id, r.passed ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
      std::fflush(stdout);
    }
  });
  if (c.format == "json") {
    ordered_json j = envelope("selftest");
    j["results"] = rows;
    j["all_passed"] = all;
    emit_json(c, j);
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"circleop: singular integral operators alpha P + beta Q on L2 of the circle"};
  app.require_subcommand(1);
  Config c;

  auto symbols = [&](CLI::App* s, bool second) {
    s->add_option("--alpha", c.alpha, "alpha symbol (one, z, zbar, zero, or mode:value;...)");
    s->add_option("--beta", c.beta, "beta symbol");
    if (second) {
      s->add_option("--alpha2", c.alpha2, "second operator's alpha");
      s->add_option("--beta2", c.beta2, "second operator's beta");
    }
  };
  auto common = [&](CLI::App* s) {
    s->add_option("--out", c.out, "write output to this file instead of stdout");
    s->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv", "text"}));
    s->add_option("--seed", c.seed, "random seed")->capture_default_str();
  };

  std::map<std::string, std::function<int(const Config&)>> handlers;
  auto sub = [&](const std::string& name, const std::string& help, std::function<int(const Config&)> fn) {
    handlers[name] = std::move(fn);
    CLI::App* s = app.add_subcommand(name, help);
    common(s);
    return s;
  };

  auto* matrix = sub("matrix", "truncated matrix of S_{alpha,beta} (CSV by default)", run_matrix);
  symbols(matrix, false);
  matrix->add_option("--M", c.M, "input modes [-M, M] (default 8)");
  matrix->add_option("--truncation", c.truncation, "exact (rectangular) or square")->capture_default_str();

  auto* norm = sub("norm", "operator norm: truncation SVD, bounds, infimum formula", run_norm);
  symbols(norm, false);
  norm->add_option("--M", c.M, "truncation radius (default max(128, 4 x support))");
  norm->add_option("--N", c.N, "circle samples")->capture_default_str();
  norm->add_option("--deg", c.deg, "degree of the analytic polynomial in the infimum search")->capture_default_str();
  norm->add_option("--iters", c.iters, "simplex iterations per round")->capture_default_str();

  auto* spectrum = sub("spectrum", "spectrum classification on a grid (CSV by default)", run_spectrum);
  symbols(spectrum, false);
  spectrum->add_option("--grid", c.grid, "re0,re1,im0,im1,n")->capture_default_str();
  spectrum->add_option("--eps", c.eps, "essential-range tolerance")->capture_default_str();
  spectrum->add_option("--M", c.M, "also report the resolvent oracle at this truncation");
  spectrum->add_option("--N", c.N, "circle samples")->capture_default_str();
  spectrum->add_option("--half", c.half, "spectrum of S_{alpha,0} (alpha) or S_{0,beta} (beta)");

  auto* product = sub("product", "product form and zero-product class of S1 S2", run_product);
  symbols(product, true);

  auto* commute = sub("commute", "commutation verdict for S1, S2", run_commute);
  symbols(commute, true);
  commute->add_option("--M", c.M, "truncation radius for the residual");

  auto* kernel = sub("kernel", "numerical kernel of S (or S*) and the zero-set injectivity verdict", run_kernel);
  symbols(kernel, false);
  kernel->add_option("--M", c.M, "truncation radius");
  kernel->add_option("--tol", c.tol, "singular value threshold (default 1e-8)");
  kernel->add_flag("--adjoint", c.adjoint, "kernel of the adjoint");
  kernel->add_option("--N", c.N, "circle samples for zero-set measures")->capture_default_str();

  auto* subspace = sub("subspace", "invariant subspace phi H2 + conj(psi) H2perp of S_{z,zbar}", run_subspace);
  subspace->add_option("--phi-zeros", c.phi_zeros, "zeros of phi, e.g. \"0.5;0.2+0.1i\"");
  subspace->add_option("--phi-power", c.phi_power, "power of z in phi");
  subspace->add_option("--psi-zeros", c.psi_zeros, "zeros of psi");
  subspace->add_option("--psi-power", c.psi_power, "power of z in psi");
  subspace->add_option("--M", c.M, "window radius (default 32)");

  auto* winding = sub("winding", "winding number of a symbol around a point", run_winding);
  winding->add_option("--symbol", c.symbol, "symbol literal")->capture_default_str();
  winding->add_option("--at", c.at, "point, e.g. 0 or 0.5-1i")->capture_default_str();
  winding->add_option("--N", c.N, "initial circle samples")->capture_default_str();

  auto* selftest = sub("selftest", "run the acceptance suite; nonzero exit on any failure", run_selftest);
  selftest->add_option("--criteria", c.criteria, "comma-separated criterion numbers (default all)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    return handlers.at(name)(c);
  } catch (const FlagParseError& e) {
    ordered_json j = envelope(name);
    j["error"] = "parse";
    j["flag"] = e.flag();
    j["position"] = e.position();
    j["message"] = e.what();
    std::cerr << j.dump() << '\n';
    return kExitParse;
  } catch (const PreconditionError& e) {
    std::cerr << ordered_json{{"schema", 1}, {"command", name}, {"error", "precondition"}, {"message", e.what()}}.dump()
              << '\n';
    return kExitPrecondition;
  } catch (const WindingError& e) {
    std::cerr << ordered_json{{"schema", 1}, {"command", name}, {"error", "winding"}, {"message", e.what()}}.dump()
              << '\n';
    return kExitNonConvergence;
  }
}

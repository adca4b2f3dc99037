// Command line front end: analyze, expand, simulate, counterexample, search,
// suite. Exit codes: 0 success, 1 usage error, 2 precondition refusal,
// 3 runtime failure.
#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "rkstab/acceptance.hpp"
#include "rkstab/catalog.hpp"
#include "rkstab/expansion.hpp"
#include "rkstab/search.hpp"
#include "rkstab/simulate.hpp"

namespace {

using namespace rkstab;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRefusal = 2;
constexpr int kExitRuntime = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ButcherTableau method_or_usage(const std::string& name) {
  try {
    return resolve_method(name);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

std::string join(const std::vector<int>& stages) {
  std::string s;
  for (size_t i = 0; i < stages.size(); ++i)
    s += (i ? "," : "") + std::to_string(stages[i] + 1);  // print 1-based
  return s.empty() ? "-" : s;
}

const char* verdict_key(const SignConditionVerdict& v) {
  switch (v.status) {
    case SignConditionVerdict::Status::proved_negative_all_k: return "proved_negative_all_k";
    case SignConditionVerdict::Status::violated_at_k: return "violated_at_k";
    default: return "negative_up_to_K_inconclusive";
  }
}

int cmd_analyze(const std::string& method, int K, int pmax, const std::string& format) {
  ButcherTableau tab = method_or_usage(method);
  auto val = validate(tab);
  auto rep = structural_report(tab);
  int order = val.consistent ? order_of_accuracy(tab, pmax) : 0;
  bool alg = is_algebraically_stable(tab);
  auto verdict = sign_condition_verdict(tab, K);
  auto fots = first_order_term_sign(tab);

  StabilityPolynomial phi;
  ImaginaryAxisReport axis;
  bool have_phi = tab.is_explicit();
  if (have_phi) {
    phi = stability_polynomial(tab);
    axis = imaginary_axis_report(phi);
  }

  if (format == "machine") {
    std::cout << "method=" << tab.name << "\n";
    std::cout << "s=" << tab.s << "\n";
    std::cout << "explicit=" << (rep.is_explicit ? 1 : 0) << "\n";
    std::cout << "consistent=" << (val.consistent ? 1 : 0) << "\n";
    std::cout << "row_sums=" << (val.row_sums_hold ? 1 : 0) << "\n";
    std::cout << "order=" << order << "\n";
    std::cout << "confluent=" << (rep.nodes.is_confluent ? 1 : 0) << "\n";
    std::cout << "unique_nodes=" << join(rep.nodes.unique_nodes) << "\n";
    std::cout << "quadrature_nodes=" << join(rep.nodes.quadrature_nodes) << "\n";
    std::cout << "unique_quadrature_nodes=" << join(rep.nodes.unique_quadrature_nodes)
              << "\n";
    std::cout << "shift_free_quadrature_nodes="
              << join(rep.nodes.integer_shift_free_quadrature_nodes) << "\n";
    std::cout << "b_nonnegative="
              << (fots == FirstOrderTermSign::nonpositive_guaranteed ? 1 : 0) << "\n";
    std::cout << "algebraically_stable=" << (alg ? 1 : 0) << "\n";
    std::cout << "unique_max_node=" << (rep.unique_max_node ? 1 : 0) << "\n";
    std::cout << "sign_verdict=" << verdict_key(verdict) << "\n";
    std::cout << "sign_tested_K=" << verdict.tested_K << "\n";
    if (verdict.status == SignConditionVerdict::Status::violated_at_k)
      std::cout << "sign_witness_k=" << verdict.witness_k << "\n";
    if (verdict.status == SignConditionVerdict::Status::proved_negative_all_k)
      std::cout << "sign_proved_from_k=" << verdict.proved_from_k << "\n";
    std::cout << "sign_value_k1=" << sign_condition_value(tab, 1) << "\n";
    if (have_phi) {
      std::cout << "phi=";
      for (size_t j = 0; j < phi.coeff.size(); ++j)
        std::cout << (j ? " " : "") << phi.coeff[j];
      std::cout << "\n";
      std::cout << "imaginary_axis_lowest_power=" << axis.lowest_power << "\n";
      std::cout << "imaginary_axis_lowest_coeff=" << axis.lowest_coeff << "\n";
      std::cout << "imaginary_axis_sign=" << axis.sign << "\n";
    }
    return kExitOk;
  }

  std::cout << "method: " << tab.name << " (" << tab.s << " stages, "
            << (rep.is_explicit ? "explicit" : "implicit") << ")\n";
  std::cout << "consistent: " << (val.consistent ? "yes" : "no")
            << "   row sums: " << (val.row_sums_hold ? "hold" : "violated")
            << "   order: " << order << "\n";
  std::cout << "nodes: " << (rep.nodes.is_confluent ? "confluent" : "non-confluent")
            << "; unique " << join(rep.nodes.unique_nodes) << "; quadrature "
            << join(rep.nodes.quadrature_nodes) << "; unique quadrature "
            << join(rep.nodes.unique_quadrature_nodes) << "; shift-free quadrature "
            << join(rep.nodes.integer_shift_free_quadrature_nodes) << "\n";
  std::cout << "first-order energy term: "
            << (fots == FirstOrderTermSign::nonpositive_guaranteed
                    ? "nonpositive for semibounded f (all b_i >= 0)"
                    : "indefinite (some b_i < 0)")
            << "\n";
  std::cout << "algebraically stable: " << (alg ? "yes" : "no") << "\n";
  if (rep.is_explicit) {
    std::cout << "unique quadrature node: "
              << (rep.has_unique_quadrature_node
                      ? "yes -> not energy stable for time-dependent linear "
                        "semibounded problems (spike construction applies)"
                      : "no -> the spike construction does not apply")
              << "\n";
    std::cout << "shift-free quadrature node: "
              << (rep.has_shift_free_quadrature_node
                      ? "yes -> a semibounded problem exists with monotone "
                        "unbounded energy growth"
                      : "no")
              << "\n";
  }
  std::cout << "unique max |c| node with b != 0: "
            << (rep.unique_max_node ? "yes" : "no");
  if (rep.unique_max_node && order >= 2)
    std::cout << " -> sign condition must fail for some k (order >= 2)";
  std::cout << "\n";
  std::cout << "sign condition: ";
  switch (verdict.status) {
    case SignConditionVerdict::Status::proved_negative_all_k:
      std::cout << "proved negative for all k (settled from k = "
                << verdict.proved_from_k << ", value at k=1 is "
                << sign_condition_value(tab, 1) << ")";
      break;
    case SignConditionVerdict::Status::violated_at_k:
      std::cout << "violated at k = " << verdict.witness_k << " (value "
                << sign_condition_value(tab, verdict.witness_k)
                << " > 0) -> not energy stable for autonomous semibounded "
                   "problems when the order is >= 2";
      break;
    default:
      std::cout << "negative up to K = " << verdict.tested_K << ", inconclusive";
      if (!verdict.note.empty()) std::cout << " (" << verdict.note << ")";
  }
  std::cout << "\n";
  if (have_phi) {
    std::cout << "stability polynomial: ";
    bool first_term = true;
    for (size_t j = 0; j < phi.coeff.size(); ++j) {
      if (phi.coeff[j].is_zero()) continue;
      if (first_term)
        std::cout << (phi.coeff[j].sign() < 0 ? "-" : "");
      else
        std::cout << (phi.coeff[j].sign() < 0 ? " - " : " + ");
      std::cout << phi.coeff[j].abs();
      if (j >= 1) std::cout << " z^" << j;
      first_term = false;
    }
    std::cout << "\n";
    std::cout << "imaginary axis: |phi(iy)|^2 - 1 has lowest term "
              << axis.lowest_coeff << " y^" << 2 * axis.lowest_power << " (sign "
              << (axis.sign > 0 ? "+" : axis.sign < 0 ? "-" : "0") << ")";
    if (axis.global == ImaginaryAxisReport::Global::positive_all_y)
      std::cout << "; |phi(iy)| > 1 for every nonzero y (coefficient certificate)";
    else if (axis.sign > 0)
      std::cout << "; growth for skew-symmetric problems at small steps";
    else if (axis.sign < 0)
      std::cout << "; dissipative on the imaginary axis near zero";
    std::cout << "\n";
  }
  return kExitOk;
}

int cmd_expand(const std::string& method, int n_tot, const std::string& format) {
  ButcherTableau tab = method_or_usage(method);
  EnergyExpansion exp = expansion_coefficients(tab, n_tot);
  if (format == "machine") {
    for (const auto& row : expansion_machine_rows(exp)) std::cout << row << "\n";
  } else {
    std::cout << render_expansion(exp) << "\n";
  }
  return kExitOk;
}

template <class Real>
int run_simulation(const ButcherTableau& tab, const std::string& problem_name, Real dt,
                   Real T, long stride, const std::string& out_path,
                   const std::string& dt_text, Real eps) {
  Problem<Real> prob = resolve_problem<Real>(problem_name, dt, eps);
  auto trace = integrate<Real>(tab, prob, prob.default_u0, dt, T, stride);
  std::string path = out_path.empty()
                         ? trace_file_name(tab.name, prob.name, dt_text)
                         : out_path;
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open output file '" + path + "'");
  write_trace_csv(os, trace);
  std::cout << "verdict=" << verdict_name(trace.verdict);
  if (trace.verdict == VerdictKind::increasing_detected)
    std::cout << " first_increase_step=" << trace.first_increase_step;
  std::cout.precision(std::numeric_limits<Real>::max_digits10);
  std::cout << " steps=" << trace.steps << " initial=" << trace.initial_energy
            << " final=" << trace.final_energy << " csv=" << path << "\n";
  return kExitOk;
}

int cmd_counterexample(const std::string& method, int k, double dt, double eps,
                       bool multi, long steps) {
  ButcherTableau tab = method_or_usage(method);
  auto sp = spike_rotation<double>(tab, k - 1, dt, eps, multi);
  std::cout << "problem: L(t) = lambda(t) J, lambda a hat of height " << eps
            << " centered at c_k dt = " << sp.center << " with half width "
            << sp.half_width << (multi ? ", repeated every step" : "")
            << "; Lipschitz constant " << eps / sp.half_width << "\n";

  Vec<double> u0{1.0, 0.0};
  double e0 = energy(sp.problem, u0);
  auto u1 = rk_step<double>(tab, sp.problem, 0.0, u0, dt);
  double measured = energy_difference(sp.problem, u1, u0);
  double predicted = sp.predicted_one_step_growth(e0);
  double rel = std::abs(measured - predicted) / std::abs(predicted);
  std::cout.precision(12);
  std::cout << "one-step energy growth: predicted " << predicted << ", measured "
            << measured << ", relative difference " << rel << "\n";
  if (rel > 1e-10) {
    std::cout << "mismatch beyond 1e-10\n";
    return kExitRuntime;
  }
  if (multi) {
    auto rk = RkCoefficients<double>::from(tab);
    StepWorkspace<double> ws;
    ws.resize(rk.s, 2);
    Vec<double> u = u0, next(2);
    double e_prev = e0;
    bool strict = true;
    for (long n = 0; n < steps; ++n) {
      rk_step<double>(rk, sp.problem, n * dt, u, dt, next, ws);
      u.swap(next);
      double e_now = energy(sp.problem, u);
      if (!(e_now > e_prev)) strict = false;
      e_prev = e_now;
    }
    std::cout << "multi-step: " << steps << " steps, energy "
              << (strict ? "strictly increased every step" : "NOT strictly increasing")
              << ", final/initial = " << e_prev / e0 << "\n";
    if (!strict) return kExitRuntime;
  }
  return kExitOk;
}

int cmd_search(const std::string& nodes_text, int order, int K, std::uint64_t seed,
               long max_iter, const std::string& out_path) {
  SearchSpec spec;
  spec.target_order = order;
  spec.K = K;
  spec.seed = seed;
  spec.max_iterations = max_iter;
  std::stringstream ss(nodes_text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    try {
      spec.nodes.push_back(Rational::from_string(tok));
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("bad node '") + tok + "': " + e.what());
    }
  }
  if (spec.nodes.empty()) throw UsageError("no nodes given");

  auto out = construct_candidate(spec);
  if (out.refused) {
    std::cout << out.message << "\n";
    return kExitRefusal;
  }
  if (!out.tableau) {
    std::cout << out.message << "\n";
    return kExitRuntime;
  }
  std::cout << "found at iteration " << out.found_at_iteration << " of "
            << out.iterations_used << "\n";
  auto rep = verify_candidate(*out.tableau, order, K);
  std::cout << "verified: order " << rep.order << ", sign verdict "
            << verdict_key(rep.verdict) << ", restricted sum " << rep.restricted_sum
            << "\n";
  std::string text = serialize_tableau(*out.tableau);
  if (!out_path.empty()) {
    std::ofstream os(out_path);
    if (!os) throw std::runtime_error("cannot open output file '" + out_path + "'");
    os << text;
    std::cout << "written to " << out_path << "\n";
  } else {
    std::cout << text;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy stability analysis of explicit Runge-Kutta methods"};
  app.require_subcommand(1);

  std::string method, problem, format = "text", out_path, nodes_text, filter;
  int K = 64, pmax = 6, n_tot = 4, stage = 1, order = 2;
  double dt = 0.01, T = 1.0, eps = 1e-3;
  std::string dt_text;
  long stride = 1, steps = 1000, max_iter = 100000;
  std::uint64_t seed = 1;
  bool extended = false, multi = false, fast = false;

  auto* analyze = app.add_subcommand("analyze", "full stability report for a method");
  analyze->add_option("method", method)->required();
  analyze->add_option("--K", K, "sign condition scan depth");
  analyze->add_option("--pmax", pmax, "order-of-accuracy cap");
  analyze->add_option("--format", format)->check(CLI::IsMember({"text", "machine"}));

  auto* expand = app.add_subcommand("expand", "energy expansion coefficients");
  expand->add_option("method", method)->required();
  expand->add_option("n_tot", n_tot, "total order cap (2..8)")->required();
  expand->add_option("--format", format)->check(CLI::IsMember({"text", "machine"}));

  auto* simulate = app.add_subcommand("simulate", "fixed-step integration with energy trace");
  simulate->add_option("method", method)->required();
  simulate->add_option("problem", problem)->required();
  simulate->add_option("dt", dt_text)->required();
  simulate->add_option("T", T)->required();
  simulate->add_option("--stride", stride, "record every n-th step");
  simulate->add_option("--out", out_path, "csv path (default <method>_<problem>_<dt>.csv)");
  simulate->add_option("--eps", eps, "spike amplitude for spike problems");
  simulate->add_flag("--extended", extended, "80-bit extended precision");

  auto* counterex = app.add_subcommand("counterexample",
                                       "spike construction and growth measurement");
  counterex->add_option("method", method)->required();
  counterex->add_option("k", stage, "protected stage (1-based)")->required();
  counterex->add_option("dt", dt)->required();
  counterex->add_option("eps", eps)->required();
  counterex->add_flag("--multi", multi, "repeat the spike every step");
  counterex->add_option("--steps", steps, "multi-step count");

  auto* search = app.add_subcommand("search", "construct an energy stable candidate");
  search->add_option("--nodes", nodes_text, "comma separated rational nodes")->required();
  search->add_option("--order", order, "target order (2 or 3)");
  search->add_option("--K", K, "sign condition scan depth");
  search->add_option("--seed", seed);
  search->add_option("--max-iter", max_iter);
  search->add_option("--out", out_path, "write the found tableau here");

  auto* suite = app.add_subcommand("suite", "run the acceptance criteria");
  suite->add_option("--filter", filter, "run criteria whose name contains this");
  suite->add_flag("--fast", fast, "short advection variant only");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (std::getenv("RKSTAB_EXTENDED") != nullptr) extended = true;

  try {
    if (*analyze) return cmd_analyze(method, K, pmax, format);
    if (*expand) return cmd_expand(method, n_tot, format);
    if (*simulate) {
      ButcherTableau tab = method_or_usage(method);
      double dtv = 0;
      try {
        size_t used = 0;
        dtv = std::stod(dt_text, &used);
        if (used != dt_text.size() || !(dtv > 0)) throw std::invalid_argument(dt_text);
      } catch (const std::exception&) {
        throw UsageError("bad dt '" + dt_text + "'");
      }
      if (extended)
        return run_simulation<long double>(tab, problem, static_cast<long double>(dtv),
                                           static_cast<long double>(T), stride, out_path,
                                           dt_text, static_cast<long double>(eps));
      return run_simulation<double>(tab, problem, dtv, T, stride, out_path, dt_text, eps);
    }
    if (*counterex) return cmd_counterexample(method, stage, dt, eps, multi, steps);
    if (*search) return cmd_search(nodes_text, order, K, seed, max_iter, out_path);
    if (*suite) {
      auto results = rkstab::acceptance::run({filter, fast});
      int failures = rkstab::acceptance::print_results(results, std::cout);
      return failures == 0 ? kExitOk : kExitRuntime;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return kExitRefusal;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

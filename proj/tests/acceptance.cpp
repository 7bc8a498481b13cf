// Acceptance gate: one integration check per release criterion, one
// printed pass/fail line each, nonzero exit when any criterion fails.

#include "hardsum/fit.hpp"
#include "hardsum/instance.hpp"
#include "hardsum/oracle.hpp"
#include "hardsum/solvers.hpp"
#include "hardsum/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace hardsum;

namespace {

int g_failures = 0;

double now_sec() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

void report(int index, const std::string& name, bool passed, double elapsed,
            const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%.1fs)%s%s\n", passed ? "PASS" : "FAIL",
              index, name.c_str(), elapsed,
              detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!passed) ++g_failures;
}

template <typename Fn>
void criterion(int index, const std::string& name, Fn&& body) {
  const double t0 = now_sec();
  bool passed = false;
  std::string detail;
  try {
    passed = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  report(index, name, passed, now_sec() - t0, detail);
}

// ---------------------------------------------------------------------------
// 1. Property suite over the full parameter grid, under two minutes.

bool run_property_suite(std::string& detail) {
  const double t0 = now_sec();
  const SuiteReport rep = run_suite(SuiteGrid{});
  const double elapsed = now_sec() - t0;
  int passed_cases = 0;
  std::string first_failure;
  for (const auto& r : rep.results) {
    if (r.passed)
      ++passed_cases;
    else if (first_failure.empty())
      first_failure = r.id + ": " + r.witness;
  }
  std::ostringstream os;
  os << passed_cases << "/" << rep.results.size() << " cases";
  if (!first_failure.empty()) os << "; first failure " << first_failure;
  if (elapsed >= 120.0) os << "; over the 120s limit";
  detail = os.str();
  return rep.all_passed() && elapsed < 120.0;
}

// ---------------------------------------------------------------------------
// 2. Certified floors dominate the target, and measured residuals dominate
//    the floors, at every oracle count below the certified horizon.

bool run_floor_audit(std::string& detail) {
  const double kSlack = 1e-10;
  const std::vector<Family> families = {Family::SC,     Family::CVX,
                                        Family::AVG_NC, Family::IND_NC,
                                        Family::OMEGA_N, Family::OMEGA_N_CVX};
  int checked_points = 0;
  for (Family f : families) {
    const bool omega = f == Family::OMEGA_N || f == Family::OMEGA_N_CVX;
    const int n = 8, T = omega ? 1 : 16;
    const FiniteSumInstance inst = make_chain_instance(f, n, T, 0.25);
    const double eps = inst.meta.target_epsilon;
    // Chains certify up to n*T/2 calls; the inner-product instances up to
    // the point where half the coordinates can be hot.
    const std::int64_t horizon = omega ? n - n / 2 : std::int64_t(n) * T / 2;
    for (const std::string& sname : bundled_solver_names()) {
      auto solver = make_solver({sname, {}, 7});
      OracleSession session(inst, 7);
      const RunResult rr = run(*solver, session, horizon, -1.0);
      for (std::size_t k = 0; k < rr.residual_curve.size(); ++k) {
        const auto [ifo, res] = rr.residual_curve[k];
        if (ifo >= horizon) continue;
        const double floor = rr.certificate_curve[k].floor_value;
        ++checked_points;
        if (floor < eps - kSlack || res < floor - kSlack) {
          std::ostringstream os;
          os << family_name(f) << "/" << sname << " at ifo " << ifo
             << ": floor " << floor << ", eps " << eps << ", residual " << res;
          detail = os.str();
          return false;
        }
      }
    }
  }
  detail = std::to_string(checked_points) + " committed iterates audited";
  return true;
}

// ---------------------------------------------------------------------------
// 3. Full sweep: every successful run pays at least the certified bound.

struct SweepSetting {
  double L, sigma_or_B, Delta;
};

bool run_bound_sweep(std::string& detail) {
  const double t0 = now_sec();
  const std::vector<int> ns = {8, 16, 32, 64};
  const std::vector<std::uint64_t> seeds = {1, 2, 3};
  const int budget_multiplier = 20;

  struct Grid {
    Family family;
    std::vector<SweepSetting> settings; // two (sigma-or-B, L) pairs
    std::vector<double> epsilons;       // two target accuracies
  };
  const std::vector<Grid> grids = {
      {Family::SC, {{1.0, 0.01, 1.0}, {1.0, 0.03, 1.0}}, {1e-3, 2e-3}},
      {Family::CVX, {{1.0, 1.0, 1.0}, {2.0, 1.0, 1.0}}, {1e-3, 2e-3}},
      {Family::AVG_NC, {{1.0, 1.0, 1.0}, {2.0, 2.0, 2.0}}, {5e-4, 1e-3}},
      {Family::IND_NC, {{1.0, 1.0, 1.0}, {2.0, 2.0, 2.0}}, {5e-4, 1e-3}},
      {Family::OMEGA_N, {{1.0, 0.0, 1.0}, {2.0, 0.0, 2.0}}, {0.1, 0.05}},
      {Family::OMEGA_N_CVX, {{1.0, 1.0, 0.0}, {2.0, 1.0, 0.0}}, {0.1, 0.05}},
  };

  std::int64_t runs = 0, successes = 0, violations = 0;
  std::string first_violation;
  for (const Grid& grid : grids)
    for (int n : ns)
      for (const SweepSetting& s : grid.settings)
        for (double eps : grid.epsilons) {
          FiniteSumInstance inst;
          switch (grid.family) {
            case Family::SC:
              inst = make_sc_instance(n, s.L, s.sigma_or_B, s.Delta, eps);
              break;
            case Family::CVX:
              inst = make_cvx_instance(n, s.L, s.sigma_or_B, eps);
              break;
            case Family::AVG_NC:
              inst = make_avg_nc_instance(n, s.L, s.sigma_or_B, s.Delta, eps);
              break;
            case Family::IND_NC:
              inst = make_ind_nc_instance(n, s.L, s.sigma_or_B, s.Delta, eps);
              break;
            case Family::OMEGA_N:
              inst = make_omega_n_instance(n, s.L, s.Delta, OmegaVariant::SC, eps);
              break;
            case Family::OMEGA_N_CVX:
              inst = make_omega_n_instance(n, s.L, s.sigma_or_B,
                                           OmegaVariant::CVX, eps);
              break;
          }
          const std::int64_t bound = inst.meta.lower_bound_ifo;
          for (const std::string& sname : bundled_solver_names())
            for (std::uint64_t seed : seeds) {
              ++runs;
              auto solver = make_solver({sname, {}, seed});
              OracleSession session(inst, seed);
              const RunResult rr =
                  run(*solver, session, budget_multiplier * bound, eps);
              if (rr.status != RunStatus::Success) continue;
              ++successes;
              if (*rr.ifo_to_target < bound) {
                ++violations;
                if (first_violation.empty()) {
                  std::ostringstream os;
                  os << family_name(grid.family) << "/" << sname << " n=" << n
                     << " eps=" << eps << ": ifo " << *rr.ifo_to_target
                     << " < bound " << bound;
                  first_violation = os.str();
                }
              }
            }
        }
  const double elapsed = now_sec() - t0;
  std::ostringstream os;
  os << runs << " runs, " << successes << " successes, " << violations
     << " bound violations";
  if (!first_violation.empty()) os << "; first: " << first_violation;
  if (elapsed >= 600.0) os << "; over the 600s limit";
  detail = os.str();
  return violations == 0 && successes > 0 && elapsed < 600.0;
}

// ---------------------------------------------------------------------------
// 4. Inner-product instances: no solver closes a quarter of the gap before
//    half the coordinates have been touched; the support certificate says so.

bool run_omega_n_criterion(std::string& detail) {
  int checked_points = 0;
  for (Family f : {Family::OMEGA_N, Family::OMEGA_N_CVX})
    for (int n : {16, 64, 256}) {
      const FiniteSumInstance inst =
          f == Family::OMEGA_N
              ? make_omega_n_instance(n, 1.0, 1.0, OmegaVariant::SC)
              : make_omega_n_instance(n, 1.0, 1.0, OmegaVariant::CVX);
      const double quarter = inst.meta.delta_bound / 4.0;
      for (const std::string& sname : bundled_solver_names()) {
        auto solver = make_solver({sname, {}, 11});
        OracleSession session(inst, 11);
        const RunResult rr = run(*solver, session, 2 * n, -1.0);
        for (std::size_t k = 0; k < rr.residual_curve.size(); ++k) {
          const auto [ifo, res] = rr.residual_curve[k];
          if (ifo >= n / 2) continue;
          const Certificate& cert = rr.certificate_curve[k];
          ++checked_points;
          const bool ok = res >= quarter &&
                          cert.kind == Certificate::Kind::SUPPORT &&
                          cert.floor_value > quarter;
          if (!ok) {
            std::ostringstream os;
            os << family_name(f) << "/" << sname << " n=" << n << " at ifo "
               << ifo << ": residual " << res << ", floor "
               << cert.floor_value << ", quarter gap " << quarter;
            detail = os.str();
            return false;
          }
        }
      }
    }
  detail = std::to_string(checked_points) + " early iterates held the gap";
  return true;
}

// ---------------------------------------------------------------------------
// 5. Fitted log-log slopes of the certified lower-bound curves.

bool run_rate_shape_fits(std::string& detail) {
  struct SlopeCase {
    std::string label;
    double slope, expected, tol;
  };
  std::vector<SlopeCase> cases;
  cases.reserve(8);
  auto add = [&](const std::string& label, Family f, FitPredictor pred,
                 const std::vector<double>& values, double n, double L,
                 double sigma_or_B, double Delta, double eps, double expected,
                 double tol) {
    const auto curve =
        bound_curve(f, pred, values, n, L, sigma_or_B, Delta, eps);
    cases.push_back({label, fit_loglog(values, curve).slope, expected, tol});
  };

  const std::vector<double> ns = {16, 64, 256, 1024};
  const std::vector<double> eps_grid = {1e-5, 1e-4, 1e-3, 1e-2};
  add("SC vs n (log-compensated)", Family::SC, FitPredictor::N, ns, 0, 1.0,
      1e-4, 1.0, 1e-6, 0.75, 0.02);
  add("CVX vs n", Family::CVX, FitPredictor::N, ns, 0, 1.0, 1.0, 0.0, 1e-6,
      0.75, 1e-10);
  add("CVX vs eps", Family::CVX, FitPredictor::Eps, eps_grid, 64, 1.0, 1.0,
      0.0, 0.0, -0.5, 1e-10);
  add("AVG-NC vs n (sigma branch)", Family::AVG_NC, FitPredictor::N, ns, 0,
      1.0, 1e-4, 1.0, 1e-4, 0.75, 1e-8);
  add("AVG-NC vs n (L branch)", Family::AVG_NC, FitPredictor::N, ns, 0, 1e-4,
      10.0, 1.0, 1e-4, 0.50, 1e-8);
  add("AVG-NC vs eps", Family::AVG_NC, FitPredictor::Eps, eps_grid, 64, 1.0,
      1e-4, 1.0, 0.0, -2.0, 1e-10);
  add("IND-NC vs eps", Family::IND_NC, FitPredictor::Eps, eps_grid, 64, 1.0,
      1e-4, 1.0, 0.0, -2.0, 1e-10);

  std::ostringstream os;
  bool all_ok = true;
  for (const auto& c : cases) {
    const bool ok = std::abs(c.slope - c.expected) <= c.tol;
    if (!ok) {
      all_ok = false;
      if (os.tellp() > 0) os << "; ";
      os << c.label << " slope " << c.slope << " != " << c.expected;
    }
  }
  if (all_ok) os << cases.size() << " slopes match the rate table";
  detail = os.str();
  return all_ok;
}

// ---------------------------------------------------------------------------
// 6. Mean-square smoothness and semi-stochastic variance bounds by sampling.

bool run_variance_audit(std::string& detail) {
  const int kSamples = 10000;
  struct Case {
    std::string label;
    FiniteSumInstance inst;
  };
  const std::vector<Case> cases = {
      {"SC", make_sc_instance(8, 1.0, 0.01, 1.0, 1e-3)},
      {"CVX", make_cvx_instance(8, 1.0, 1.0, 1e-3)},
      {"AVG-NC", make_avg_nc_instance(8, 1.0, 1.0, 1.0, 1e-3)},
      {"IND-NC", make_ind_nc_instance(8, 1.0, 1.0, 1.0, 1e-3)},
      {"OMEGA-N", make_omega_n_instance(8, 1.0, 1.0, OmegaVariant::SC)},
      {"OMEGA-N-CVX", make_omega_n_instance(8, 1.0, 1.0, OmegaVariant::CVX)},
  };
  std::mt19937_64 rng(20190410);
  std::normal_distribution<double> unit(0.0, 1.0);
  for (const auto& c : cases) {
    Vector xhat(c.inst.dim());
    for (int j = 0; j < xhat.size(); ++j) xhat[j] = 0.5 * unit(rng);
    const VarianceReport rep =
        variance_check(c.inst, xhat, kSamples, rng());
    if (!rep.passed()) {
      std::ostringstream os;
      os << c.label << ": " << rep.violations_avg_smooth
         << " smoothness / " << rep.violations_variance
         << " variance violations, worst ratios " << rep.worst_ratio_avg_smooth
         << " / " << rep.worst_ratio_variance;
      detail = os.str();
      return false;
    }
  }
  detail = std::to_string(cases.size()) + " instances x " +
           std::to_string(kSamples) + " pairs, zero violations";
  return true;
}

// ---------------------------------------------------------------------------
// 7. Span audit: honest traces pass, a corrupted trace fails at its step.

bool run_span_audit(std::string& detail) {
  const FiniteSumInstance inst = make_chain_instance(Family::SC, 4, 8, 0.25);
  std::vector<std::pair<Vector, Vector>> honest_log;
  for (const std::string& sname : bundled_solver_names()) {
    auto solver = make_solver({sname, {}, 3});
    OracleSession session(inst, 3, /*audit_mode=*/true);
    (void)run(*solver, session, 200, -1.0);
    const SpanAuditReport rep = span_audit(session);
    if (!rep.audited || !rep.passed) {
      detail = sname + ": honest trace failed the span audit (" +
               std::to_string(rep.violations.size()) + " violations)";
      return false;
    }
    if (sname == "gd") honest_log = session.audit_log();
  }

  const std::int64_t kCorruptStep = 9;
  std::vector<std::pair<Vector, Vector>> corrupted = honest_log;
  corrupted[kCorruptStep].first[inst.dim() - 1] += 1.0;
  const SpanAuditReport rep = span_audit(corrupted);
  if (rep.passed || rep.violations.size() != 1 ||
      rep.violations.front() != kCorruptStep) {
    std::ostringstream os;
    os << "corrupted trace: expected a single violation at step "
       << kCorruptStep << ", got " << rep.violations.size() << " violations";
    if (!rep.violations.empty()) os << " starting at " << rep.violations.front();
    detail = os.str();
    return false;
  }
  detail = std::to_string(bundled_solver_names().size()) +
           " honest traces pass; corrupted step pinpointed";
  return true;
}

} // namespace

int main() {
  criterion(1, "property suite over the full grid", run_property_suite);
  criterion(2, "certified floors below the oracle horizon", run_floor_audit);
  criterion(3, "sweep obeys the certified lower bounds", run_bound_sweep);
  criterion(4, "linear-in-n gap retention on inner-product instances",
            run_omega_n_criterion);
  criterion(5, "lower-bound curve slopes match the rate table",
            run_rate_shape_fits);
  criterion(6, "average smoothness and variance bounds", run_variance_audit);
  criterion(7, "linear-span audit of solver traces", run_span_audit);
  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all 7 criteria passed\n");
  return 0;
}

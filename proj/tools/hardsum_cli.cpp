// Command-line front end: build instances, run solvers against the counting
// oracle, audit traces, sweep parameter grids into CSV, and fit log-log rate
// exponents.

#include "hardsum/fit.hpp"
#include "hardsum/oracle.hpp"
#include "hardsum/solvers.hpp"
#include "hardsum/verify.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hardsum;

namespace {

struct CommonFlags {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  int jobs = 0;
  std::string family = "SC";
  int n = 16;
  double sigma = 0.01; // doubles as B for the convex family
  double L = 1.0;
  double delta = 1.0;
  double eps = 1e-3;
  std::string solver = "gd";
  double budget_multiplier = 20.0;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "config file path");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--seed", f.seed, "RNG seed");
  cmd->add_option("--jobs", f.jobs, "worker count (0 = hardware)");
  cmd->add_option("--family", f.family,
                  "SC | CVX | AVG-NC | IND-NC | OMEGA-N | OMEGA-N-CVX");
  cmd->add_option("--n", f.n, "number of components");
  cmd->add_option("--sigma", f.sigma, "sigma (B for the CVX family)");
  cmd->add_option("--L", f.L, "smoothness");
  cmd->add_option("--delta", f.delta, "initial gap budget");
  cmd->add_option("--eps", f.eps, "target accuracy");
  cmd->add_option("--solver", f.solver, "gd | agd | sgd | svrg | spider");
  cmd->add_option("--budget-multiplier", f.budget_multiplier,
                  "IFO budget as a multiple of the certified bound");
}

FiniteSumInstance build_instance(const std::string& family, int n, double L,
                                 double sigma_or_B, double delta, double eps) {
  switch (family_from_name(family)) {
    case Family::SC: return make_sc_instance(n, L, sigma_or_B, delta, eps);
    case Family::CVX: return make_cvx_instance(n, L, sigma_or_B, eps);
    case Family::AVG_NC: return make_avg_nc_instance(n, L, sigma_or_B, delta, eps);
    case Family::IND_NC: return make_ind_nc_instance(n, L, sigma_or_B, delta, eps);
    case Family::OMEGA_N:
      return make_omega_n_instance(n, L, delta, OmegaVariant::SC, eps);
    case Family::OMEGA_N_CVX:
      return make_omega_n_instance(n, L, sigma_or_B, OmegaVariant::CVX, eps);
  }
  throw std::logic_error("unreachable");
}

void write_file(const std::string& dir, const std::string& name,
                const std::string& content) {
  fs::create_directories(dir);
  std::ofstream os(fs::path(dir) / name);
  os << content;
  if (!os) throw std::runtime_error("cannot write " + name + " under " + dir);
}

const char* status_name(RunStatus s) {
  switch (s) {
    case RunStatus::Success: return "success";
    case RunStatus::Exhausted: return "exhausted";
    case RunStatus::Aborted: return "aborted";
    case RunStatus::CertificateConflict: return "cert_conflict";
  }
  return "?";
}

int cmd_verify(const CommonFlags& f) {
  SuiteGrid grid;
  grid.seed = f.seed ? f.seed : grid.seed;
  const SuiteReport report = run_suite(grid, f.jobs);
  std::cout << report.text();
  if (!f.out.empty()) write_file(f.out, "verify.json", report.json());
  return report.all_passed() ? 0 : 1;
}

int cmd_make_instance(const CommonFlags& f) {
  FiniteSumInstance inst =
      build_instance(f.family, f.n, f.L, f.sigma, f.delta, f.eps);
  inst.seed = f.seed;
  const std::string text = inst.to_json_string();
  if (f.out.empty())
    std::cout << text << "\n";
  else
    write_file(f.out, "instance.json", text);
  return 0;
}

struct SingleRun {
  RunResult result;
  FiniteSumInstance inst;
  std::int64_t budget = 0;
};

SingleRun run_one(const FiniteSumInstance& inst, const std::string& solver_name,
                  std::uint64_t seed, double budget_multiplier, bool audit,
                  std::string* trace_out) {
  SingleRun out;
  out.inst = inst;
  out.budget = static_cast<std::int64_t>(budget_multiplier *
                                         double(inst.meta.lower_bound_ifo));
  OracleSession session(inst, seed, audit);
  SolverSpec spec;
  spec.name = solver_name;
  spec.seed = seed;
  auto solver = make_solver(spec);
  out.result = run(*solver, session, out.budget, inst.meta.target_epsilon);
  if (trace_out) *trace_out = session.trace_jsonl();
  if (audit) {
    const SpanAuditReport rep = span_audit(session);
    if (rep.audited && !rep.passed)
      out.result.status = RunStatus::Aborted;
  }
  return out;
}

int cmd_run(const CommonFlags& f, bool audit) {
  FiniteSumInstance inst;
  if (!f.config.empty()) {
    std::ifstream is(f.config);
    std::stringstream ss;
    ss << is.rdbuf();
    inst = FiniteSumInstance::from_json_string(ss.str());
  } else {
    inst = build_instance(f.family, f.n, f.L, f.sigma, f.delta, f.eps);
  }
  std::string trace;
  const SingleRun r = run_one(inst, f.solver, f.seed, f.budget_multiplier,
                              audit, f.out.empty() ? nullptr : &trace);
  json j;
  j["family"] = family_name(inst.family);
  j["solver"] = f.solver;
  j["status"] = status_name(r.result.status);
  j["budget"] = r.budget;
  j["lower_bound"] = inst.meta.lower_bound_ifo;
  j["target_epsilon"] = inst.meta.target_epsilon;
  j["final_residual"] = r.result.final_residual;
  if (r.result.ifo_to_target) {
    j["ifo_to_target"] = *r.result.ifo_to_target;
    j["ratio"] = double(*r.result.ifo_to_target) /
                 double(std::max<std::int64_t>(1, inst.meta.lower_bound_ifo));
  }
  std::cout << j.dump(2) << "\n";
  if (!f.out.empty()) {
    write_file(f.out, "result.json", j.dump(2));
    write_file(f.out, "trace.jsonl", trace);
  }
  if (r.result.status == RunStatus::CertificateConflict) return 1;
  if (r.result.ifo_to_target &&
      *r.result.ifo_to_target < inst.meta.lower_bound_ifo)
    return 1;
  return 0;
}

int cmd_audit(const CommonFlags& f) {
  if (f.config.empty()) {
    std::cerr << "audit: --config <trace.jsonl> required\n";
    return 2;
  }
  std::ifstream is(f.config);
  if (!is) {
    std::cerr << "audit: cannot read " << f.config << "\n";
    return 2;
  }
  std::vector<std::pair<Vector, Vector>> log;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    if (!j.contains("point") || !j.contains("grad")) {
      std::cerr << "audit: trace has no stored points (re-run with --audit)\n";
      return 2;
    }
    const auto p = j["point"].get<std::vector<double>>();
    const auto g = j["grad"].get<std::vector<double>>();
    log.emplace_back(Eigen::Map<const Vector>(p.data(), p.size()),
                     Eigen::Map<const Vector>(g.data(), g.size()));
  }
  const SpanAuditReport rep = span_audit(log);
  json out;
  out["audited"] = rep.audited;
  out["passed"] = rep.passed;
  out["violations"] = rep.violations;
  out["tolerance"] = rep.tolerance;
  std::cout << out.dump(2) << "\n";
  return rep.audited && rep.passed ? 0 : 1;
}

struct SweepRow {
  std::string family, solver, status;
  int n = 0;
  double L = 0, sigma = 0, delta = 0, eps = 0;
  std::uint64_t seed = 0;
  std::optional<std::int64_t> ifo;
  std::int64_t lower_bound = 0;
};

std::string csv_of(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "family,n,L,sigma,delta,eps,solver,seed,ifo_to_target,lower_bound,"
        "ratio,status\n";
  for (const auto& r : rows) {
    os << r.family << ',' << r.n << ',' << r.L << ',' << r.sigma << ','
       << r.delta << ',' << r.eps << ',' << r.solver << ',' << r.seed << ',';
    if (r.ifo) os << *r.ifo;
    os << ',' << r.lower_bound << ',';
    if (r.ifo && r.lower_bound > 0)
      os << double(*r.ifo) / double(r.lower_bound);
    os << ',' << r.status << "\n";
  }
  return os.str();
}

int cmd_sweep(const CommonFlags& f) {
  json cfg;
  if (!f.config.empty()) {
    std::ifstream is(f.config);
    if (!is) {
      std::cerr << "sweep: cannot read " << f.config << "\n";
      return 2;
    }
    is >> cfg;
  } else {
    cfg = {{"families", {f.family}},  {"n", {f.n}},
           {"L", {f.L}},              {"sigma", {f.sigma}},
           {"delta", {f.delta}},      {"eps", {f.eps}},
           {"solvers", {f.solver}},   {"seeds", {f.seed}},
           {"budget_multiplier", f.budget_multiplier}};
  }
  const double mult = cfg.value("budget_multiplier", f.budget_multiplier);
  std::vector<SweepRow> rows;
  std::vector<std::optional<FiniteSumInstance>> instances;
  // either one flat grid, or a list of independent grids under "grids"
  std::vector<json> grids;
  if (cfg.contains("grids"))
    for (const auto& g : cfg["grids"]) grids.push_back(g);
  else
    grids.push_back(cfg);
  for (const auto& grid : grids)
    for (const auto& family : grid.at("families"))
    for (const auto& n : grid.at("n"))
      for (const auto& L : grid.at("L"))
        for (const auto& sigma : grid.at("sigma"))
          for (const auto& delta : grid.at("delta"))
            for (const auto& eps : grid.at("eps"))
              for (const auto& solver : grid.at("solvers"))
                for (const auto& seed : grid.at("seeds")) {
                  SweepRow row;
                  row.family = family.get<std::string>();
                  row.n = n.get<int>();
                  row.L = L.get<double>();
                  row.sigma = sigma.get<double>();
                  row.delta = delta.get<double>();
                  row.eps = eps.get<double>();
                  row.solver = solver.get<std::string>();
                  row.seed = seed.get<std::uint64_t>();
                  std::optional<FiniteSumInstance> inst;
                  try {
                    inst = build_instance(row.family, row.n, row.L, row.sigma,
                                          row.delta, row.eps);
                    row.lower_bound = inst->meta.lower_bound_ifo;
                  } catch (const std::invalid_argument& e) {
                    row.status = "skipped";
                    std::cerr << "skip " << row.family << " n=" << row.n
                              << " eps=" << row.eps << ": " << e.what() << "\n";
                  }
                  rows.push_back(row);
                  instances.push_back(std::move(inst));
                }

  const int jobs = f.jobs > 0 ? f.jobs
                              : std::max(1u, std::thread::hardware_concurrency());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t k = next.fetch_add(1);
      if (k >= rows.size()) return;
      if (!instances[k]) continue;
      const SingleRun r =
          run_one(*instances[k], rows[k].solver, rows[k].seed, mult, false,
                  nullptr);
      rows[k].status = status_name(r.result.status);
      rows[k].ifo = r.result.ifo_to_target;
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  const std::string csv = csv_of(rows);
  if (f.out.empty())
    std::cout << csv;
  else
    write_file(f.out, "results.csv", csv);

  int violations = 0;
  for (const auto& r : rows)
    if (r.ifo && *r.ifo < r.lower_bound) ++violations;
  if (violations > 0) {
    std::cerr << "sweep: " << violations << " run(s) beat the certified bound\n";
    return 1;
  }
  return 0;
}

int cmd_fit(const CommonFlags& f, const std::string& predictor,
            std::vector<double> values, const std::string& csv_path) {
  const Family family = family_from_name(f.family);
  const FitPredictor pred =
      predictor == "eps" ? FitPredictor::Eps : FitPredictor::N;
  if (values.empty())
    values = pred == FitPredictor::N
                 ? std::vector<double>{16, 64, 256, 1024}
                 : std::vector<double>{1e-6, 1e-5, 1e-4, 1e-3};
  json out;
  const auto curve = bound_curve(family, pred, values, f.n, f.L, f.sigma,
                                 f.delta, f.eps);
  const FitResult bound_fit = fit_loglog(values, curve);
  out["bound"] = {{"slope", bound_fit.slope},
                  {"intercept", bound_fit.intercept},
                  {"stderr", bound_fit.stderr_slope},
                  {"points", bound_fit.points}};
  if (!csv_path.empty()) {
    std::ifstream is(csv_path);
    if (!is) {
      std::cerr << "fit: cannot read " << csv_path << "\n";
      return 2;
    }
    std::string line;
    std::getline(is, line); // header
    std::vector<double> xs, ys;
    while (std::getline(is, line)) {
      std::vector<std::string> cells;
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ',')) cells.push_back(cell);
      if (cells.size() < 12 || cells[11] != "success") continue;
      if (cells[0] != f.family) continue;
      xs.push_back(pred == FitPredictor::N ? std::stod(cells[1])
                                           : std::stod(cells[5]));
      ys.push_back(std::stod(cells[8]));
    }
    if (xs.size() >= 4) {
      const FitResult measured = fit_loglog(xs, ys);
      out["measured"] = {{"slope", measured.slope},
                         {"intercept", measured.intercept},
                         {"stderr", measured.stderr_slope},
                         {"points", measured.points}};
    } else {
      out["measured"] = nullptr;
    }
  }
  std::cout << out.dump(2) << "\n";
  if (!f.out.empty()) write_file(f.out, "fit.json", out.dump(2));
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"hard finite-sum instances, oracle testbed, lower-bound auditor"};
  app.require_subcommand(1);

  CommonFlags fl;
  bool run_audit = false;
  std::string fit_predictor = "n";
  std::vector<double> fit_values;
  std::string fit_csv;

  add_common(app.add_subcommand("verify", "run the property suite"), fl);
  add_common(app.add_subcommand("make-instance", "emit instance JSON"), fl);
  auto* sub_run = app.add_subcommand("run", "single solver run");
  add_common(sub_run, fl);
  sub_run->add_flag("--audit", run_audit, "store points for span auditing");
  add_common(app.add_subcommand("audit", "span audit of a trace"), fl);
  add_common(app.add_subcommand("sweep", "grid sweep to CSV"), fl);
  auto* sub_fit = app.add_subcommand("fit", "log-log exponent fit");
  add_common(sub_fit, fl);
  sub_fit->add_option("--predictor", fit_predictor, "n | eps");
  sub_fit->add_option("--values", fit_values, "predictor grid");
  sub_fit->add_option("--csv", fit_csv, "sweep CSV with measured runs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("verify")) return cmd_verify(fl);
    if (app.got_subcommand("make-instance")) return cmd_make_instance(fl);
    if (app.got_subcommand("run")) return cmd_run(fl, run_audit);
    if (app.got_subcommand("audit")) return cmd_audit(fl);
    if (app.got_subcommand("sweep")) return cmd_sweep(fl);
    if (app.got_subcommand("fit"))
      return cmd_fit(fl, fit_predictor, fit_values, fit_csv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

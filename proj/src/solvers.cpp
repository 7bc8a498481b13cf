#include "hardsum/solvers.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace hardsum {
namespace {

double hyper(const SolverSpec& spec, const std::string& key, double fallback) {
  auto it = spec.hyperparameters.find(key);
  return it == spec.hyperparameters.end() ? fallback : it->second;
}

// Full gradient through the oracle: n IFO calls.
Vector full_gradient_via(OracleSession& s, const Vector& x) {
  const int n = s.instance().n;
  Vector g = Vector::Zero(x.size());
  for (int i = 0; i < n; ++i) g += s.query(i, x).grad;
  return g / static_cast<double>(n);
}

class GradientDescent final : public Solver {
 public:
  explicit GradientDescent(const SolverSpec& spec) : spec_(spec) {}
  const std::string& name() const override { return name_; }

  void minimize(OracleSession& s, const IterateCallback& cb) override {
    const double L = s.instance().meta.avg_smooth_L;
    const double eta = hyper(spec_, "eta", 1.0 / L);
    Vector x = Vector::Zero(s.instance().dim());
    while (true) {
      x -= eta * full_gradient_via(s, x);
      if (cb(x)) return;
    }
  }

 private:
  SolverSpec spec_;
  std::string name_ = "gd";
};

class AcceleratedGradient final : public Solver {
 public:
  explicit AcceleratedGradient(const SolverSpec& spec) : spec_(spec) {}
  const std::string& name() const override { return name_; }

  void minimize(OracleSession& s, const IterateCallback& cb) override {
    const auto& meta = s.instance().meta;
    const double L = meta.avg_smooth_L;
    const double eta = hyper(spec_, "eta", 1.0 / L);
    const double mu = hyper(spec_, "mu", meta.f_lo > 0.0 ? meta.f_lo : 0.0);
    const int dim = s.instance().dim();
    Vector x = Vector::Zero(dim), y = Vector::Zero(dim);
    for (std::int64_t k = 0;; ++k) {
      Vector x_next = y - eta * full_gradient_via(s, y);
      double theta;
      if (mu > 0.0) {
        const double r = std::sqrt(mu * eta);
        theta = (1.0 - r) / (1.0 + r);
      } else {
        theta = static_cast<double>(k) / static_cast<double>(k + 3);
      }
      y = x_next + theta * (x_next - x);
      x = x_next;
      if (cb(x)) return;
    }
  }

 private:
  SolverSpec spec_;
  std::string name_ = "agd";
};

class Sgd final : public Solver {
 public:
  explicit Sgd(const SolverSpec& spec) : spec_(spec) {}
  const std::string& name() const override { return name_; }

  void minimize(OracleSession& s, const IterateCallback& cb) override {
    const double L = s.instance().meta.avg_smooth_L;
    const double eta = hyper(spec_, "eta", 0.5 / L);
    const int n = s.instance().n;
    std::mt19937_64 rng(spec_.seed);
    std::uniform_int_distribution<int> pick(0, n - 1);
    Vector x = Vector::Zero(s.instance().dim());
    while (true) {
      x -= eta * s.query(pick(rng), x).grad;
      if (cb(x)) return;
    }
  }

 private:
  SolverSpec spec_;
  std::string name_ = "sgd";
};

class Svrg final : public Solver {
 public:
  explicit Svrg(const SolverSpec& spec) : spec_(spec) {}
  const std::string& name() const override { return name_; }

  void minimize(OracleSession& s, const IterateCallback& cb) override {
    const double L = s.instance().meta.avg_smooth_L;
    const double eta = hyper(spec_, "eta", 1.0 / (3.0 * L));
    const int n = s.instance().n;
    const auto inner =
        static_cast<std::int64_t>(hyper(spec_, "epoch_length", 2.0 * n));
    std::mt19937_64 rng(spec_.seed);
    std::uniform_int_distribution<int> pick(0, n - 1);
    Vector x = Vector::Zero(s.instance().dim());
    while (true) {
      const Vector snapshot = x;
      const Vector g_snap = full_gradient_via(s, snapshot);
      for (std::int64_t k = 0; k < inner; ++k) {
        const int i = pick(rng);
        const Vector v =
            s.query(i, x).grad - s.query(i, snapshot).grad + g_snap;
        x -= eta * v;
        if (cb(x)) return;
      }
    }
  }

 private:
  SolverSpec spec_;
  std::string name_ = "svrg";
};

// SpiderBoost: recursive gradient estimator, full refresh every n steps,
// constant step 1/(2L).
class Spider final : public Solver {
 public:
  explicit Spider(const SolverSpec& spec) : spec_(spec) {}
  const std::string& name() const override { return name_; }

  void minimize(OracleSession& s, const IterateCallback& cb) override {
    const double L = s.instance().meta.avg_smooth_L;
    const double eta = hyper(spec_, "eta", 0.5 / L);
    const int n = s.instance().n;
    const auto period =
        static_cast<std::int64_t>(hyper(spec_, "refresh_period", double(n)));
    std::mt19937_64 rng(spec_.seed);
    std::uniform_int_distribution<int> pick(0, n - 1);
    Vector x = Vector::Zero(s.instance().dim());
    Vector v;
    for (std::int64_t k = 0;; ++k) {
      if (k % period == 0) {
        v = full_gradient_via(s, x);
      } else {
        const int i = pick(rng);
        v += s.query(i, x).grad - s.query(i, x_prev_).grad;
      }
      x_prev_ = x;
      x -= eta * v;
      if (cb(x)) return;
    }
  }

 private:
  SolverSpec spec_;
  Vector x_prev_;
  std::string name_ = "spider";
};

} // namespace

std::unique_ptr<Solver> make_solver(const SolverSpec& spec) {
  if (spec.name == "gd") return std::make_unique<GradientDescent>(spec);
  if (spec.name == "agd") return std::make_unique<AcceleratedGradient>(spec);
  if (spec.name == "sgd") return std::make_unique<Sgd>(spec);
  if (spec.name == "svrg") return std::make_unique<Svrg>(spec);
  if (spec.name == "spider") return std::make_unique<Spider>(spec);
  throw std::invalid_argument("unknown solver: " + spec.name);
}

std::vector<std::string> bundled_solver_names() {
  return {"gd", "agd", "sgd", "svrg", "spider"};
}

RunResult run(Solver& solver, OracleSession& session, std::int64_t budget,
              double target) {
  RunResult result;
  session.set_budget(budget);
  const auto& inst = session.instance();

  const Vector x0 = Vector::Zero(inst.dim());
  double res0 = inst.residual(x0);
  result.final_residual = res0;
  result.residual_curve.emplace_back(session.ifo_count(), res0);
  result.certificate_curve.push_back(session.certificate(x0));
  if (res0 <= target) {
    const auto& c = result.certificate_curve.back();
    result.status = c.floor_value > target ? RunStatus::CertificateConflict
                                           : RunStatus::Success;
    result.ifo_to_target = session.ifo_count();
    return result;
  }

  bool done = false;
  auto cb = [&](const Vector& x) {
    const double res = inst.residual(x);
    result.final_residual = res;
    result.residual_curve.emplace_back(session.ifo_count(), res);
    Certificate cert = session.certificate(x);
    result.certificate_curve.push_back(cert);
    if (res <= target) {
      if (cert.floor_value > target) {
        result.status = RunStatus::CertificateConflict;
      } else {
        result.status = RunStatus::Success;
        result.ifo_to_target = session.ifo_count();
      }
      done = true;
    }
    return done;
  };

  try {
    solver.minimize(session, cb);
    if (!done) result.status = RunStatus::Aborted;
  } catch (const BudgetExhausted&) {
    result.status = RunStatus::Exhausted;
  }
  return result;
}

VarianceReport variance_check(const FiniteSumInstance& inst, const Vector& xhat,
                              int samples, std::uint64_t seed, double radius) {
  VarianceReport report;
  report.samples = samples;
  const int n = inst.n;
  const double L = inst.meta.avg_smooth_L;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> unit(0.0, 1.0);

  std::vector<Vector> grad_hat(n);
  for (int i = 0; i < n; ++i) grad_hat[i] = inst.component(i, xhat).grad;
  Vector g_hat = Vector::Zero(inst.dim());
  for (const auto& g : grad_hat) g_hat += g;
  g_hat /= static_cast<double>(n);

  for (int s = 0; s < samples; ++s) {
    Vector x = xhat;
    for (int d = 0; d < x.size(); ++d) x[d] += radius * unit(rng);
    const double dist2 = (x - xhat).squaredNorm();
    if (dist2 == 0.0) continue;

    Vector g_full = Vector::Zero(inst.dim());
    std::vector<Vector> grad_x(n);
    for (int i = 0; i < n; ++i) {
      grad_x[i] = inst.component(i, x).grad;
      g_full += grad_x[i];
    }
    g_full /= static_cast<double>(n);

    double variance = 0.0, avg_smooth = 0.0;
    for (int i = 0; i < n; ++i) {
      const Vector diff = grad_x[i] - grad_hat[i];
      avg_smooth += diff.squaredNorm();
      variance += (diff + g_hat - g_full).squaredNorm();
    }
    variance /= static_cast<double>(n);
    avg_smooth /= static_cast<double>(n);

    const double r_var = variance / (2.0 * L * L * dist2);
    const double r_avg = avg_smooth / (L * L * dist2);
    report.worst_ratio_variance = std::max(report.worst_ratio_variance, r_var);
    report.worst_ratio_avg_smooth =
        std::max(report.worst_ratio_avg_smooth, r_avg);
    if (r_var > 1.0 + 1e-9) ++report.violations_variance;
    if (r_avg > 1.0 + 1e-9) ++report.violations_avg_smooth;
  }
  return report;
}

} // namespace hardsum

#pragma once

// Reference linear-span first-order algorithms driven exclusively through
// the oracle, the run driver that records residual and certificate curves,
// and the variance-bound checks for semi-stochastic gradients.

#include "hardsum/oracle.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>

namespace hardsum {

struct SolverSpec {
  std::string name;                               // gd | agd | sgd | svrg | spider | katx
  std::map<std::string, double> hyperparameters;  // explicit overrides
  std::uint64_t seed = 0;
};

// Invoked at every iterate the solver commits to; return true to stop.
using IterateCallback = std::function<bool(const Vector&)>;

class Solver {
 public:
  virtual ~Solver() = default;
  virtual const std::string& name() const = 0;
  // Runs until the callback asks to stop or the session budget runs out
  // (BudgetExhausted propagates to the caller).
  virtual void minimize(OracleSession& session, const IterateCallback& cb) = 0;
};

std::unique_ptr<Solver> make_solver(const SolverSpec& spec);
std::vector<std::string> bundled_solver_names(); // the five required ones

enum class RunStatus { Success, Exhausted, Aborted, CertificateConflict };

struct RunResult {
  RunStatus status = RunStatus::Exhausted;
  std::optional<std::int64_t> ifo_to_target;
  std::vector<std::pair<std::int64_t, double>> residual_curve; // (ifo, residual)
  std::vector<Certificate> certificate_curve;
  double final_residual = 0.0;
};

// Drives `solver` until the exact residual drops to `target` or `budget`
// IFO calls are spent. Success is refused while a live certificate floor
// exceeds the target.
RunResult run(Solver& solver, OracleSession& session, std::int64_t budget,
              double target);

struct VarianceReport {
  int samples = 0;
  int violations_variance = 0;     // E|v - grad F|^2 <= 2 L^2 |x - xhat|^2
  int violations_avg_smooth = 0;   // E|grad f_i(x) - grad f_i(xhat)|^2 <= L^2 |x-xhat|^2
  double worst_ratio_variance = 0.0;
  double worst_ratio_avg_smooth = 0.0;
  bool passed(double rel_slack = 1e-9) const {
    return violations_variance == 0 && violations_avg_smooth == 0 &&
           worst_ratio_variance <= 1.0 + rel_slack &&
           worst_ratio_avg_smooth <= 1.0 + rel_slack;
  }
};

// Exact full-sum check of the semi-stochastic variance bound around the
// snapshot xhat, at `samples` random points. Does not use a session: the
// bound is a property of the instance, not of a run.
VarianceReport variance_check(const FiniteSumInstance& inst, const Vector& xhat,
                              int samples, std::uint64_t seed,
                              double radius = 1.0);

} // namespace hardsum

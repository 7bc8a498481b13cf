#pragma once

// The incremental first-order oracle: every function access goes through a
// session that counts calls, tracks per-block activated prefixes, logs a
// trace, and can emit construction-backed residual lower bounds.

#include "hardsum/instance.hpp"

#include <unordered_map>
#include <vector>

namespace hardsum {

struct TraceRecord {
  std::int64_t t = 0;    // step index (= IFO count before this call)
  int component = 0;     // i_t
  std::int64_t point_id = 0;
  double grad_norm = 0.0;
  std::uint64_t prefix_digest = 0; // FNV over the prefix profile after this call
};

struct Certificate {
  enum class Kind { GAP, GRADNORM, SUPPORT };
  std::int64_t t = 0;
  Kind kind = Kind::GAP;
  double floor_value = 0.0;
  int blocks_below_threshold = 0;
};

Certificate::Kind certificate_kind(Family f);

struct ComponentQuery {
  int index = 0; // 0-based
  Vector point;
};

class ZeroChainViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BudgetExhausted : public std::runtime_error {
 public:
  BudgetExhausted() : std::runtime_error("IFO budget exhausted") {}
};

class OracleSession {
 public:
  explicit OracleSession(const FiniteSumInstance& inst, std::uint64_t seed = 0,
                         bool audit_mode = false);

  // IFO call: returns (f_i(x), grad f_i(x)), updates counters, trace, and
  // the activated-prefix profile of the queried block; asserts the
  // zero-chain step bound.
  Eval query(int i, const Vector& x);
  Eval query(const ComponentQuery& q) { return query(q.index, q.point); }

  // Construction-backed residual lower bound for the given iterate.
  Certificate certificate(const Vector& x) const;

  const FiniteSumInstance& instance() const { return *inst_; }
  std::int64_t ifo_count() const { return ifo_count_; }
  const std::vector<std::int64_t>& per_component_counts() const { return per_component_; }
  const std::vector<int>& prefix_profile() const { return prefix_; }
  const std::vector<TraceRecord>& trace() const { return trace_; }
  bool audit_mode() const { return audit_mode_; }
  std::uint64_t seed() const { return seed_; }

  // Queried point / returned gradient pairs; populated in audit mode only.
  const std::vector<std::pair<Vector, Vector>>& audit_log() const { return audit_log_; }

  void set_budget(std::int64_t budget) { budget_ = budget; }
  std::int64_t budget_remaining() const;
  void close() { closed_ = true; }
  bool closed() const { return closed_; }

  // Activation threshold; 0 means exactly nonzero. The constructions
  // propagate exact zeros for the bundled solvers.
  void set_activation_tol(double tol) { activation_tol_ = tol; }
  double activation_tol() const { return activation_tol_; }

  std::string trace_jsonl() const;

 private:
  std::int64_t intern_point(const Vector& x);

  const FiniteSumInstance* inst_;
  std::uint64_t seed_;
  bool audit_mode_;
  double activation_tol_ = 0.0;
  bool closed_ = false;
  std::int64_t ifo_count_ = 0;
  std::int64_t budget_ = -1; // < 0: unlimited
  std::vector<std::int64_t> per_component_;
  std::vector<int> prefix_;
  std::vector<TraceRecord> trace_;
  std::vector<std::pair<Vector, Vector>> audit_log_;
  std::unordered_map<std::uint64_t, std::vector<std::pair<Vector, std::int64_t>>> point_ids_;
  std::int64_t next_point_id_ = 0;
};

struct SpanAuditReport {
  bool audited = false; // false: refused (no stored points)
  bool passed = false;
  std::vector<std::int64_t> violations; // step indices failing the span test
  double tolerance = 1e-8;
};

// Least-squares audit of the linear-span constraint: the point of call t
// must lie in the span of the origin and all gradients returned before t.
SpanAuditReport span_audit(const std::vector<std::pair<Vector, Vector>>& log,
                           double tol = 1e-8);
SpanAuditReport span_audit(const OracleSession& session, double tol = 1e-8);

} // namespace hardsum

#include "hardsum/oracle.hpp"

#include <nlohmann/json.hpp>

#include <cstring>
#include <limits>
#include <sstream>

namespace hardsum {

Certificate::Kind certificate_kind(Family f) {
  switch (f) {
    case Family::SC:
    case Family::CVX: return Certificate::Kind::GAP;
    case Family::AVG_NC:
    case Family::IND_NC: return Certificate::Kind::GRADNORM;
    case Family::OMEGA_N:
    case Family::OMEGA_N_CVX: return Certificate::Kind::SUPPORT;
  }
  return Certificate::Kind::GAP;
}

OracleSession::OracleSession(const FiniteSumInstance& inst, std::uint64_t seed,
                             bool audit_mode)
    : inst_(&inst),
      seed_(seed),
      audit_mode_(audit_mode),
      per_component_(inst.n, 0),
      prefix_(inst.n, 0) {}

std::int64_t OracleSession::budget_remaining() const {
  if (budget_ < 0) return std::numeric_limits<std::int64_t>::max();
  return std::max<std::int64_t>(0, budget_ - ifo_count_);
}

namespace {

std::uint64_t fnv1a(const double* data, std::size_t count) {
  std::uint64_t h = 1469598103934665603ull;
  const unsigned char* bytes = reinterpret_cast<const unsigned char*>(data);
  for (std::size_t b = 0; b < count * sizeof(double); ++b) {
    h ^= bytes[b];
    h *= 1099511628211ull;
  }
  return h;
}

} // namespace

std::int64_t OracleSession::intern_point(const Vector& x) {
  const std::uint64_t h = fnv1a(x.data(), static_cast<std::size_t>(x.size()));
  auto& bucket = point_ids_[h];
  for (const auto& [stored, id] : bucket)
    if (stored.size() == x.size() && stored == x) return id;
  bucket.emplace_back(x, next_point_id_);
  return next_point_id_++;
}

Eval OracleSession::query(int i, const Vector& x) {
  if (closed_) throw std::logic_error("query on closed session");
  if (budget_ >= 0 && ifo_count_ >= budget_) throw BudgetExhausted();
  const int act = inst_->block_activation(i, x, activation_tol_); // also validates i, x
  if (act > prefix_[i] + 1)
    throw ZeroChainViolation(
        "zero-chain violation: component " + std::to_string(i) + " activation " +
        std::to_string(act) + " exceeds prefix " + std::to_string(prefix_[i]) + " + 1");
  Eval out = inst_->component(i, x);
  prefix_[i] = std::max(prefix_[i], act);
  TraceRecord rec;
  rec.t = ifo_count_;
  rec.component = i;
  rec.point_id = intern_point(x);
  rec.grad_norm = out.grad.norm();
  {
    std::vector<double> as_d(prefix_.begin(), prefix_.end());
    rec.prefix_digest = fnv1a(as_d.data(), as_d.size());
  }
  trace_.push_back(rec);
  if (audit_mode_) audit_log_.emplace_back(x, out.grad);
  ++per_component_[i];
  ++ifo_count_;
  return out;
}

Certificate OracleSession::certificate(const Vector& x) const {
  Certificate c;
  c.t = ifo_count_;
  c.kind = certificate_kind(inst_->family);
  const int thresh = inst_->meta.progress_threshold;
  int cold = 0;
  for (int i = 0; i < inst_->n; ++i)
    if (inst_->block_activation(i, x, activation_tol_) < thresh) ++cold;
  c.blocks_below_threshold = cold;
  c.floor_value = inst_->certified_floor(cold);
  return c;
}

std::string OracleSession::trace_jsonl() const {
  std::ostringstream os;
  std::size_t next_audit = 0;
  for (const auto& rec : trace_) {
    nlohmann::json j;
    j["t"] = rec.t;
    j["i"] = rec.component;
    j["point_id"] = rec.point_id;
    j["grad_norm"] = rec.grad_norm;
    j["prefix_digest"] = rec.prefix_digest;
    if (audit_mode_ && next_audit < audit_log_.size()) {
      const auto& [pt, grad] = audit_log_[next_audit++];
      j["point"] = std::vector<double>(pt.data(), pt.data() + pt.size());
      j["grad"] = std::vector<double>(grad.data(), grad.data() + grad.size());
    }
    os << j.dump() << "\n";
  }
  return os.str();
}

SpanAuditReport span_audit(const std::vector<std::pair<Vector, Vector>>& log,
                           double tol) {
  SpanAuditReport rep;
  rep.tolerance = tol;
  rep.audited = true;
  rep.passed = true;
  if (log.empty()) return rep;
  const Eigen::Index d = log.front().first.size();
  if (d > 4096) {
    rep.audited = false;
    rep.passed = false;
    return rep;
  }
  // Incremental Gram-Schmidt basis of {gradients returned so far}; the
  // origin start point contributes nothing to the span.
  std::vector<Vector> basis;
  auto residual_of = [&](const Vector& v) {
    Vector r = v;
    for (int pass = 0; pass < 2; ++pass)
      for (const Vector& b : basis) r -= b.dot(r) * b;
    return r;
  };
  std::int64_t t = 0;
  for (const auto& [point, grad] : log) {
    const Vector r = residual_of(point);
    if (r.norm() > tol * std::max(point.norm(), 1e-300)) {
      rep.violations.push_back(t);
      rep.passed = false;
    }
    if (static_cast<Eigen::Index>(basis.size()) < d) {
      Vector g = residual_of(grad);
      const double gn = g.norm();
      if (gn > 1e-12 * std::max(grad.norm(), 1.0)) basis.push_back(g / gn);
    }
    ++t;
  }
  return rep;
}

SpanAuditReport span_audit(const OracleSession& session, double tol) {
  if (!session.audit_mode()) {
    SpanAuditReport rep;
    rep.audited = false;
    rep.passed = false;
    rep.tolerance = tol;
    return rep;
  }
  return span_audit(session.audit_log(), tol);
}

} // namespace hardsum

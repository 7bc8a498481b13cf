#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hardsum/oracle.hpp"

#include <nlohmann/json.hpp>

#include <random>
#include <sstream>

using namespace hardsum;

namespace {

FiniteSumInstance small_sc() {
  return make_chain_instance(Family::SC, 4, 3, 0.25);
}

} // namespace

TEST_CASE("session counts calls per component") {
  const FiniteSumInstance inst = small_sc();
  OracleSession s(inst);
  const Vector zero = Vector::Zero(inst.dim());
  s.query(0, zero);
  s.query(0, zero);
  s.query(2, zero);
  CHECK(s.ifo_count() == 3);
  CHECK(s.per_component_counts()[0] == 2);
  CHECK(s.per_component_counts()[1] == 0);
  CHECK(s.per_component_counts()[2] == 1);
  CHECK(s.trace().size() == 3);
}

TEST_CASE("queries agree with direct component evaluation") {
  const FiniteSumInstance inst = small_sc();
  OracleSession s(inst);
  Vector x = Vector::Zero(inst.dim());
  x[0] = 0.3;
  const Eval via = s.query(0, x);
  const Eval direct = inst.component(0, x);
  CHECK(via.value == direct.value);
  CHECK((via.grad - direct.grad).norm() == 0.0);
}

TEST_CASE("activated prefix grows by at most one per call") {
  const FiniteSumInstance inst = small_sc();
  OracleSession s(inst);
  const int a = inst.embedding.block_dim;
  Vector x = Vector::Zero(inst.dim());

  // activation 1 from a fresh prefix is allowed
  x[0] = 0.5;
  s.query(0, x);
  CHECK(s.prefix_profile()[0] == 1);

  // jumping straight to activation 3 is not
  Vector bad = Vector::Zero(inst.dim());
  bad[2] = 1.0;
  CHECK_THROWS_AS(s.query(0, bad), ZeroChainViolation);

  // stepping 2 then 3 is
  x[1] = 0.5;
  s.query(0, x);
  x[2] = 0.5;
  s.query(0, x);
  CHECK(s.prefix_profile()[0] == 3);

  // other components have independent prefixes
  Vector other = Vector::Zero(inst.dim());
  other[a + 1] = 1.0; // activation 2 in component 1
  CHECK_THROWS_AS(s.query(1, other), ZeroChainViolation);
}

TEST_CASE("a rejected query does not advance the session") {
  const FiniteSumInstance inst = small_sc();
  OracleSession s(inst);
  Vector bad = Vector::Zero(inst.dim());
  bad[2] = 1.0;
  CHECK_THROWS_AS(s.query(0, bad), ZeroChainViolation);
  CHECK(s.ifo_count() == 0);
  CHECK(s.prefix_profile()[0] == 0);
}

TEST_CASE("budget exhaustion throws and the session survives") {
  const FiniteSumInstance inst = small_sc();
  OracleSession s(inst);
  s.set_budget(2);
  const Vector zero = Vector::Zero(inst.dim());
  s.query(0, zero);
  s.query(1, zero);
  CHECK(s.budget_remaining() == 0);
  CHECK_THROWS_AS(s.query(2, zero), BudgetExhausted);
  s.set_budget(3);
  s.query(2, zero);
  CHECK(s.ifo_count() == 3);
}

TEST_CASE("closed sessions refuse queries") {
  const FiniteSumInstance inst = small_sc();
  OracleSession s(inst);
  s.close();
  CHECK_THROWS_AS(s.query(0, Vector::Zero(inst.dim())), std::logic_error);
}

TEST_CASE("certificate reflects the cold-block count of the iterate") {
  const FiniteSumInstance inst = small_sc();
  OracleSession s(inst);
  const Vector zero = Vector::Zero(inst.dim());
  const Certificate c0 = s.certificate(zero);
  CHECK(c0.kind == Certificate::Kind::GAP);
  CHECK(c0.blocks_below_threshold == 4);
  CHECK(c0.floor_value == doctest::Approx(inst.certified_floor(4)));
  CHECK(c0.floor_value >= inst.meta.target_epsilon);

  // warm up one block fully: still 3 cold, certificate persists
  Vector x = Vector::Zero(inst.dim());
  x[0] = x[1] = x[2] = 1.0;
  const Certificate c1 = s.certificate(x);
  CHECK(c1.blocks_below_threshold == 3);
  CHECK(c1.floor_value == doctest::Approx(inst.certified_floor(3)));

  // warm the majority: no certificate
  Vector y = x;
  y[3] = y[4] = y[5] = 1.0;
  CHECK(s.certificate(y).floor_value == 0.0);
}

TEST_CASE("certificates are sound against the exact residual") {
  const FiniteSumInstance inst = small_sc();
  OracleSession s(inst);
  std::mt19937_64 rng(21);
  std::normal_distribution<double> gauss(0.0, 0.4);
  for (int trial = 0; trial < 50; ++trial) {
    Vector x(inst.dim());
    for (int j = 0; j < inst.dim(); ++j) x[j] = gauss(rng);
    for (int i = 0; i < inst.n; ++i)
      if (trial % 2 == 0 || i % 2 == 0)
        x[(i + 1) * inst.embedding.block_dim - 1] = 0.0;
    const Certificate c = s.certificate(x);
    CHECK(inst.residual(x) >= c.floor_value - 1e-12);
  }
}

TEST_CASE("trace is JSONL with stable point interning") {
  const FiniteSumInstance inst = small_sc();
  OracleSession s(inst);
  Vector x = Vector::Zero(inst.dim());
  s.query(0, x);
  s.query(1, x);
  x[0] = 0.5;
  s.query(0, x);
  const std::string jsonl = s.trace_jsonl();
  std::istringstream is(jsonl);
  std::string line;
  int lines = 0;
  std::vector<std::int64_t> ids;
  while (std::getline(is, line)) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j.contains("t"));
    CHECK(j.contains("i"));
    CHECK(j.contains("grad_norm"));
    CHECK(j.contains("prefix_digest"));
    ids.push_back(j["point_id"].get<std::int64_t>());
    ++lines;
  }
  CHECK(lines == 3);
  CHECK(ids[0] == ids[1]); // same point, same id
  CHECK(ids[2] != ids[0]);
  // digests change when the prefix profile changes
  CHECK(s.trace()[0].prefix_digest == s.trace()[1].prefix_digest);
  CHECK(s.trace()[2].prefix_digest != s.trace()[1].prefix_digest);
}

TEST_CASE("span audit passes an honest gradient-span walk") {
  const FiniteSumInstance inst = small_sc();
  OracleSession s(inst, 0, /*audit_mode=*/true);
  Vector x = Vector::Zero(inst.dim());
  for (int k = 0; k < 10; ++k) {
    Vector g = Vector::Zero(inst.dim());
    for (int i = 0; i < inst.n; ++i) g += s.query(i, x).grad;
    x -= (1.0 / inst.n) * g;
  }
  const SpanAuditReport rep = span_audit(s);
  CHECK(rep.audited);
  CHECK(rep.passed);
  CHECK(rep.violations.empty());
}

TEST_CASE("span audit flags exactly the corrupted step") {
  const FiniteSumInstance inst = small_sc();
  OracleSession s(inst, 0, true);
  Vector x = Vector::Zero(inst.dim());
  for (int k = 0; k < 6; ++k) {
    Vector g = Vector::Zero(inst.dim());
    for (int i = 0; i < inst.n; ++i) g += s.query(i, x).grad;
    x -= (1.0 / inst.n) * g;
  }
  auto log = s.audit_log();
  const std::int64_t corrupt_at = 9;
  log[corrupt_at].first[inst.dim() - 1] += 1.0; // outside any gradient span
  const SpanAuditReport rep = span_audit(log);
  CHECK(!rep.passed);
  REQUIRE(rep.violations.size() >= 1);
  CHECK(rep.violations.front() == corrupt_at);
}

TEST_CASE("span audit refuses sessions without stored points") {
  const FiniteSumInstance inst = small_sc();
  OracleSession s(inst); // not in audit mode
  s.query(0, Vector::Zero(inst.dim()));
  const SpanAuditReport rep = span_audit(s);
  CHECK(!rep.audited);
  CHECK(!rep.passed);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hardsum/verify.hpp"

#include <algorithm>
#include <set>

using namespace hardsum;

namespace {

SuiteGrid quick_grid() {
  SuiteGrid g;
  g.alphas = {0.04, 1.0};
  g.ms = {2, 5};
  g.ns = {1, 4};
  return g;
}

} // namespace

TEST_CASE("suite produces exactly the enumerated case ids") {
  const SuiteReport report = run_suite(quick_grid());
  std::set<std::string> got;
  for (const auto& r : report.results) got.insert(r.id);
  const auto expected = expected_case_ids();
  CHECK(got.size() == report.results.size()); // no duplicates
  CHECK(got == std::set<std::string>(expected.begin(), expected.end()));
}

TEST_CASE("suite passes on a reduced grid") {
  const SuiteReport report = run_suite(quick_grid());
  for (const auto& r : report.results) {
    INFO(r.id << ": " << r.witness);
    CHECK(r.passed);
  }
  CHECK(report.all_passed());
}

TEST_CASE("reports carry witnesses and serialize") {
  const SuiteReport report = run_suite(quick_grid(), 1);
  for (const auto& r : report.results) CHECK(!r.witness.empty());
  const std::string txt = report.text();
  CHECK(txt.find("PASS") != std::string::npos);
  CHECK(txt.find("P3.5-1") != std::string::npos);
  const std::string js = report.json();
  CHECK(js.find("\"status\"") != std::string::npos);
}

TEST_CASE("zero-chain check passes for all three base functions") {
  for (auto base : {ChainFunctionSpec::Base::NesterovSc,
                    ChainFunctionSpec::Base::NesterovC,
                    ChainFunctionSpec::Base::Carmon}) {
    const ZeroChainReport rep = zero_chain_check(base, 0.25, 9, 8, 77);
    INFO(rep.witness);
    CHECK(rep.passed);
    CHECK(rep.trials == 9 * 100);
  }
}

TEST_CASE("zero-chain check rejects too-short chains") {
  CHECK_THROWS_AS(
      zero_chain_check(ChainFunctionSpec::Base::NesterovSc, 0.25, 3, 5, 1),
      std::invalid_argument);
}

TEST_CASE("origin gradient of the strongly convex chain sits on coordinate 1") {
  ChainFunctionSpec spec;
  spec.base = ChainFunctionSpec::Base::NesterovSc;
  spec.alpha = 0.25;
  spec.m = 6;
  const Vector g = spec.eval(Vector::Zero(6)).grad;
  CHECK(g[0] != 0.0);
  for (int j = 1; j < 6; ++j) CHECK(g[j] == 0.0);
}

#pragma once

// Property suite: one case per structural claim about the chain functions,
// the embeddings, the scalings, and the inner-product instances. Each case
// runs over an explicit parameter grid with explicit tolerances and reports
// a witness on failure.

#include "hardsum/instance.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hardsum {

struct PropertyResult {
  std::string id;
  bool passed = false;
  std::string witness;     // failure detail, or a short summary when passing
  double tolerance = 0.0;
  double elapsed_sec = 0.0;
};

struct SuiteReport {
  std::vector<PropertyResult> results;
  bool all_passed() const;
  std::string text() const;
  std::string json() const;
};

struct SuiteGrid {
  std::vector<double> alphas = {0.01, 0.04, 0.25, 1.0};
  std::vector<int> ms = {2, 5, 20, 100};
  std::vector<int> ns = {1, 4, 16};
  std::uint64_t seed = 20190410;
};

// The full case-id list; the suite must produce exactly these.
std::vector<std::string> expected_case_ids();

// Runs every case, concurrently when jobs != 1.
SuiteReport run_suite(const SuiteGrid& grid = {}, int jobs = 0);

struct ZeroChainReport {
  bool passed = false;
  int trials = 0;
  std::string witness;
};

// Starting from the origin, random points supported on the first t
// coordinates must have gradients supported on the first t+1, with an
// exactly zero tail; checked for t = 0..t_max. Requires m >= t_max + 1.
ZeroChainReport zero_chain_check(ChainFunctionSpec::Base base, double alpha,
                                 int m, int t_max, std::uint64_t seed,
                                 int trials_per_step = 100);

} // namespace hardsum

#pragma once

// Ungar's pairing algorithm for zero-error adaptive group testing and a
// seeded Monte Carlo harness for its expected number of tests.

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "gtlab/entropy.hpp"
#include "gtlab/report.hpp"

namespace gtlab::adaptive {

/// Defect indicators of n items, 1 = defective.
struct DefectVector {
  std::vector<std::uint8_t> bits;

  std::size_t size() const noexcept { return bits.size(); }
  std::vector<std::size_t> defectives() const;
};

/// Bern(δ) draw of n items from `gen` (one 53-bit uniform per item).
DefectVector draw_defects(std::size_t items, const DefectModel& model, std::mt19937_64& gen);

struct RunResult {
  std::size_t tests_used = 0;
  /// Sorted indices declared defective.
  std::vector<std::size_t> recovered;
};

/// δ >= δ*: every item tested alone. Otherwise pairs (0,1), (2,3), ...: test
/// the pair; if positive test the first item; a negative first item makes
/// the second defective without a test, a positive one forces a test of the
/// second. An odd leftover item is tested alone. Throws DomainError for an
/// empty vector.
RunResult run_ungar(const DefectVector& truth, const DefectModel& model);

/// Expected tests per item, min(1, (1 + (1 − ζ²) + (1 − ζ))/2).
double expected_tests_formula(const DefectModel& model);

/// Exact expected tests per pair, 1 + (1 − ζ²) + (1 − ζ), with no cap.
double expected_pair_tests(const DefectModel& model);

struct SimConfig {
  std::size_t items = 1000;
  double delta = 0.2;
  std::size_t trials = 400;
  std::uint64_t seed = 7;
  /// 0 = hardware concurrency. Does not affect results.
  unsigned workers = 0;
};

struct SimReport {
  std::size_t items = 0;
  double delta = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double mean_tests_per_item = 0.0;
  /// Standard error of the mean over trials (0 for a single trial).
  double stderr_mean = 0.0;
  std::size_t error_count = 0;
  double formula_value = 0.0;

  /// (mean − formula) / stderr; 0 when both coincide with zero spread.
  double z_score() const noexcept;
  /// Zero decoding errors and |mean − formula| <= 4·stderr.
  std::vector<CheckRecord> records() const;
};

/// Trial i draws its defect vector from sub-stream i of `seed`, so the
/// report is bit-identical for a fixed config regardless of `workers`.
/// Throws DomainError for zero items or trials, or δ outside (0, 1).
SimReport simulate(const SimConfig& config);

}  // namespace gtlab::adaptive

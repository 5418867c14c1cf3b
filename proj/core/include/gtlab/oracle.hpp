#pragma once

// Exact small-instance ground truth for non-adaptive designs: joint laws of
// the test outcomes by enumeration over all 2^n defect vectors, the
// inclusion–exclusion form of P(all tests positive), and checks of the
// entropy inequalities the converse bounds rest on.
//
// Outcome convention: Y_l = 1 iff test l contains at least one defective.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gtlab/entropy.hpp"
#include "gtlab/report.hpp"

namespace gtlab::oracle {

inline constexpr std::size_t kMaxEnumerationItems = 24;
inline constexpr std::size_t kMaxInclExclRows = 20;
inline constexpr std::size_t kMaxSplitRows = 12;
inline constexpr std::size_t kMaxPlacementItems = 10;
inline constexpr std::size_t kMaxPlacementRows = 3;
inline constexpr std::size_t kMaxMtItems = 20;
inline constexpr std::size_t kMaxMtRows = 16;
/// Outcome patterns are 64-bit words.
inline constexpr std::size_t kMaxTests = 64;

using Row = std::vector<std::size_t>;

/// A non-adaptive design on n items: t >= 1 tests, each a nonempty set of
/// item indices in [0, n). Rows are stored sorted without repeats; duplicate
/// rows are allowed.
class TestMatrix {
 public:
  /// Throws StructureError on an empty design, an empty row or an index
  /// out of range.
  TestMatrix(std::size_t items, std::vector<Row> rows);

  std::size_t items() const noexcept { return items_; }
  std::size_t tests() const noexcept { return rows_.size(); }
  const std::vector<Row>& rows() const noexcept { return rows_; }
  const Row& row(std::size_t l) const { return rows_.at(l); }

  /// Common row weight, if every row has the same size.
  std::optional<std::size_t> constant_weight() const;

  /// "n=3;0,1|1,2" — used for digests and diagnostics.
  std::string canonical() const;

 private:
  std::size_t items_;
  std::vector<Row> rows_;
};

/// S_i for every item i: the indices of the tests containing it.
struct ColumnSupport {
  std::vector<std::vector<std::size_t>> tests_of_item;
};

ColumnSupport column_support(const TestMatrix& matrix);

/// Bit l set iff test l is positive.
using OutcomePattern = std::uint64_t;

/// Exact law of the outcome vector Y_[t]; only patterns of positive
/// probability are stored.
class JointDistribution {
 public:
  JointDistribution(std::size_t tests, std::map<OutcomePattern, double> probs);

  std::size_t tests() const noexcept { return tests_; }
  const std::map<OutcomePattern, double>& probs() const noexcept { return probs_; }
  double probability(OutcomePattern pattern) const;
  double total() const;
  /// Shannon entropy in bits.
  double entropy() const;
  /// Law of the listed tests; bit j of the result is test rows[j].
  JointDistribution marginal(std::span<const std::size_t> rows) const;
  /// P(every listed test positive).
  double prob_all_positive(std::span<const std::size_t> rows) const;

 private:
  std::size_t tests_;
  std::map<OutcomePattern, double> probs_;
};

/// Enumerates all 2^n defect vectors. Throws SizeError for n > 24 or t > 64.
JointDistribution enumerate_distribution(const TestMatrix& matrix, const DefectModel& model);

/// H(Y_S) in bits for the listed rows (all rows when `subset` is absent);
/// 0 for an empty subset.
double joint_entropy(const TestMatrix& matrix, const DefectModel& model,
                     std::optional<std::span<const std::size_t>> subset = std::nullopt);

/// P(Y_S = 1) = Σ_{U ⊆ S} (−1)^|U| (1−δ)^|∪_{l∈U} R_l|, working on set
/// unions only (no limit on n). Throws SizeError for |S| > 20.
double prob_all_positive_incl_excl(const TestMatrix& matrix, std::span<const std::size_t> rows,
                                   const DefectModel& model);

/// Signed-subset identity for P(Y_1 = 0, Y_[2,a] ≠ 1, Y_[a+1,s] = 1) and
/// the single-swap monotonicity step P(Y_S = 1) >= P(Y*_S = 1), where Y*
/// replaces an item shared by tests 1..a in test 1 by a fresh item.
struct SplitIdentityReport {
  std::size_t split = 0;
  double split_enumerated = 0.0;
  double split_signed_sum = 0.0;
  std::optional<std::size_t> shared_item;
  std::optional<std::size_t> fresh_item;
  std::optional<double> prob_all_positive;
  std::optional<double> prob_all_positive_swapped;
  std::vector<CheckRecord> records;
  bool passed() const;
};

/// `split` is the 1-based a of the identity, 1 <= a <= t. Requires t <= 12,
/// n <= 24. The swap step is checked only when a >= 2, some item lies in
/// tests 1..a, and an item in no test exists.
SplitIdentityReport verify_appendix_identities(const TestMatrix& matrix, std::size_t split,
                                               const DefectModel& model, double tolerance = 1e-12);

/// Minimum of P(all tests positive) over every placement of rows with the
/// given weights, against the disjoint placement and Π(1 − (1−δ)^{r_l}).
struct DisjointMinReport {
  std::size_t placements = 0;
  double exhaustive_min = 0.0;
  double disjoint_value = 0.0;
  double product = 0.0;
  std::vector<CheckRecord> records;
  bool passed() const;
};

/// Requires Σ weights <= n <= 10 and 1 to 3 rows of positive weight.
DisjointMinReport verify_lemma1_min(std::size_t items, std::span<const std::size_t> weights,
                                    const DefectModel& model, double tolerance = 1e-12);

/// H(Y_S) <= (1−δ)|S|H((1−δ)^{k−1}) + H(δ) − f_{δ,k}(|S|) for weight-k
/// tests sharing an item.
struct CommonItemReport {
  std::size_t weight = 0;
  std::size_t tests = 0;
  double exact = 0.0;
  double bound = 0.0;
  /// |exact − bound| <= 1e−9.
  bool equality = false;
  /// Rows minus their lowest common item are pairwise disjoint.
  bool reduced_rows_disjoint = false;
  std::vector<CheckRecord> records;
  bool passed() const;
};

CommonItemReport verify_thm3(const TestMatrix& matrix, const DefectModel& model, double tolerance = 1e-12);

/// H(X_i | Y_{S_i}) >= f_{δ,k}(|S_i|).
struct CondEntropyReport {
  std::size_t item = 0;
  std::size_t weight = 0;
  std::size_t support = 0;
  double exact = 0.0;
  double lower_bound = 0.0;
  std::vector<CheckRecord> records;
  bool passed() const;
};

CondEntropyReport verify_cond_entropy_lb(const TestMatrix& matrix, std::size_t item,
                                         const DefectModel& model, double tolerance = 1e-12);

/// H(Y_[t]) <= (1/k) Σ_i H(Y_{S_i}) for a constant-weight design.
struct MtReport {
  std::size_t weight = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  std::vector<CheckRecord> records;
  bool passed() const;
};

/// Requires constant row weight, n <= 20, t <= 16.
MtReport verify_mt_weak(const TestMatrix& matrix, const DefectModel& model, double tolerance = 1e-12);

/// Every placement of rows with the given weights on at most `items` items,
/// one representative per relabeling class generated in first-seen order
/// (items are numbered in the order they first appear).
std::vector<TestMatrix> canonical_placements(std::span<const std::size_t> weights, std::size_t items);

/// Every design of `tests` weight-k rows that all contain item 0, one per
/// relabeling class of the remaining items, using at most `max_items` items.
std::vector<TestMatrix> common_item_family(std::size_t weight, std::size_t tests,
                                           std::size_t max_items);

/// Random design with the given shape; each row weight is drawn uniformly
/// from [min_weight, max_weight] and its items uniformly without repeats.
TestMatrix random_matrix(std::uint64_t seed, std::size_t items, std::size_t tests,
                         std::size_t min_weight, std::size_t max_weight);

struct SuiteConfig {
  /// Largest item count used by any instance of the suite.
  std::size_t max_items = 12;
  std::size_t fuzz_cases = 500;
  std::uint64_t seed = 20170417;
  double tolerance = 1e-12;
  unsigned workers = 0;
};

/// Runs every oracle family (distribution sums and marginals,
/// inclusion–exclusion fuzz, split-event identities, exhaustive disjoint minimum,
/// common-item entropy family, conditional-entropy bound, weak Madiman–Tetali fuzz)
/// and returns one record per check in a deterministic order.
std::vector<CheckRecord> run_suite(const SuiteConfig& config);

}  // namespace gtlab::oracle

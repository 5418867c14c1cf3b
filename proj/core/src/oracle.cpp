#include "gtlab/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>

#include "gtlab/errors.hpp"
#include "gtlab/parallel.hpp"
#include "gtlab/rng.hpp"

namespace gtlab::oracle {

namespace {

// Neumaier compensated accumulator.
struct Accumulator {
  double sum = 0.0;
  double carry = 0.0;

  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + carry; }
};

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string describe(const TestMatrix& m, const DefectModel& model) {
  return m.canonical() + ";delta=" + fmt_double(model.delta());
}

void require_items(const TestMatrix& m, std::size_t limit, const char* what) {
  if (m.items() > limit) {
    throw SizeError(std::string(what) + ": n = " + std::to_string(m.items()) +
                    " exceeds the enumeration limit " + std::to_string(limit));
  }
}

void require_tests(const TestMatrix& m, std::size_t limit, const char* what) {
  if (m.tests() > limit) {
    throw SizeError(std::string(what) + ": t = " + std::to_string(m.tests()) +
                    " exceeds the limit " + std::to_string(limit));
  }
}

std::uint32_t row_mask(const Row& row) {
  std::uint32_t mask = 0;
  for (const auto i : row) mask |= std::uint32_t{1} << i;
  return mask;
}

// ζ^m for every union size m the enumeration can meet.
std::vector<double> zeta_powers(const DefectModel& model, std::size_t n) {
  std::vector<double> pw(n + 1);
  for (std::size_t m = 0; m <= n; ++m) pw[m] = std::pow(model.zeta(), static_cast<double>(m));
  return pw;
}

std::size_t common_item_count(const TestMatrix& m, std::size_t* lowest) {
  Row common = m.row(0);
  for (std::size_t l = 1; l < m.tests(); ++l) {
    Row next;
    std::set_intersection(common.begin(), common.end(), m.row(l).begin(), m.row(l).end(),
                          std::back_inserter(next));
    common = std::move(next);
  }
  if (!common.empty() && lowest != nullptr) *lowest = common.front();
  return common.size();
}

}  // namespace

// ---------------------------------------------------------------------------
// TestMatrix / JointDistribution

TestMatrix::TestMatrix(std::size_t items, std::vector<Row> rows) : items_(items), rows_(std::move(rows)) {
  if (rows_.empty()) throw StructureError("a design needs at least one test");
  for (auto& row : rows_) {
    if (row.empty()) throw StructureError("tests must contain at least one item");
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    if (row.back() >= items_) {
      throw StructureError("item index " + std::to_string(row.back()) + " out of range for n = " +
                           std::to_string(items_));
    }
  }
}

std::optional<std::size_t> TestMatrix::constant_weight() const {
  const std::size_t w = rows_.front().size();
  for (const auto& row : rows_) {
    if (row.size() != w) return std::nullopt;
  }
  return w;
}

std::string TestMatrix::canonical() const {
  std::string s = "n=" + std::to_string(items_) + ";";
  for (std::size_t l = 0; l < rows_.size(); ++l) {
    if (l > 0) s += '|';
    for (std::size_t j = 0; j < rows_[l].size(); ++j) {
      if (j > 0) s += ',';
      s += std::to_string(rows_[l][j]);
    }
  }
  return s;
}

ColumnSupport column_support(const TestMatrix& matrix) {
  ColumnSupport support;
  support.tests_of_item.resize(matrix.items());
  for (std::size_t l = 0; l < matrix.tests(); ++l) {
    for (const auto i : matrix.row(l)) support.tests_of_item[i].push_back(l);
  }
  return support;
}

JointDistribution::JointDistribution(std::size_t tests, std::map<OutcomePattern, double> probs)
    : tests_(tests), probs_(std::move(probs)) {
  if (tests_ > kMaxTests) throw SizeError("at most 64 tests per distribution");
  for (const auto& [pattern, p] : probs_) {
    if (!(p >= 0.0)) throw DomainError("probabilities must be nonnegative");
    if (tests_ < 64 && (pattern >> tests_) != 0) throw DomainError("pattern has bits beyond t");
  }
}

double JointDistribution::probability(OutcomePattern pattern) const {
  const auto it = probs_.find(pattern);
  return it == probs_.end() ? 0.0 : it->second;
}

double JointDistribution::total() const {
  Accumulator acc;
  for (const auto& [pattern, p] : probs_) acc.add(p);
  return acc.value();
}

double JointDistribution::entropy() const {
  Accumulator acc;
  for (const auto& [pattern, p] : probs_) {
    if (p > 0.0) acc.add(-p * std::log2(p));
  }
  return acc.value();
}

JointDistribution JointDistribution::marginal(std::span<const std::size_t> rows) const {
  for (const auto l : rows) {
    if (l >= tests_) throw StructureError("marginal row index out of range");
  }
  std::map<OutcomePattern, Accumulator> acc;
  for (const auto& [pattern, p] : probs_) {
    OutcomePattern projected = 0;
    for (std::size_t j = 0; j < rows.size(); ++j) {
      projected |= ((pattern >> rows[j]) & 1U) << j;
    }
    acc[projected].add(p);
  }
  std::map<OutcomePattern, double> out;
  for (const auto& [pattern, a] : acc) out.emplace(pattern, a.value());
  return JointDistribution(rows.size(), std::move(out));
}

double JointDistribution::prob_all_positive(std::span<const std::size_t> rows) const {
  OutcomePattern need = 0;
  for (const auto l : rows) {
    if (l >= tests_) throw StructureError("row index out of range");
    need |= OutcomePattern{1} << l;
  }
  Accumulator acc;
  for (const auto& [pattern, p] : probs_) {
    if ((pattern & need) == need) acc.add(p);
  }
  return acc.value();
}

// ---------------------------------------------------------------------------
// Enumeration

JointDistribution enumerate_distribution(const TestMatrix& matrix, const DefectModel& model) {
  require_items(matrix, kMaxEnumerationItems, "enumerate_distribution");
  require_tests(matrix, kMaxTests, "enumerate_distribution");
  const std::size_t n = matrix.items();
  const std::size_t t = matrix.tests();

  std::vector<std::uint32_t> masks;
  masks.reserve(t);
  for (const auto& row : matrix.rows()) masks.push_back(row_mask(row));

  // P(x) = δ^w ζ^(n−w) for a defect vector of weight w.
  std::vector<double> by_weight(n + 1);
  for (std::size_t w = 0; w <= n; ++w) {
    by_weight[w] = std::pow(model.delta(), static_cast<double>(w)) *
                   std::pow(model.zeta(), static_cast<double>(n - w));
  }

  const auto pattern_of = [&](std::uint32_t x) {
    OutcomePattern pattern = 0;
    for (std::size_t l = 0; l < t; ++l) {
      if ((x & masks[l]) != 0) pattern |= OutcomePattern{1} << l;
    }
    return pattern;
  };

  const std::uint64_t vectors = std::uint64_t{1} << n;
  std::map<OutcomePattern, double> out;
  if (t <= 20) {
    std::vector<Accumulator> dense(std::size_t{1} << t);
    for (std::uint64_t x = 0; x < vectors; ++x) {
      const auto xs = static_cast<std::uint32_t>(x);
      dense[pattern_of(xs)].add(by_weight[static_cast<std::size_t>(std::popcount(xs))]);
    }
    for (std::size_t p = 0; p < dense.size(); ++p) {
      const double v = dense[p].value();
      if (v > 0.0) out.emplace(p, v);
    }
  } else {
    std::unordered_map<OutcomePattern, Accumulator> sparse;
    for (std::uint64_t x = 0; x < vectors; ++x) {
      const auto xs = static_cast<std::uint32_t>(x);
      sparse[pattern_of(xs)].add(by_weight[static_cast<std::size_t>(std::popcount(xs))]);
    }
    for (const auto& [p, a] : sparse) {
      if (a.value() > 0.0) out.emplace(p, a.value());
    }
  }
  return JointDistribution(t, std::move(out));
}

double joint_entropy(const TestMatrix& matrix, const DefectModel& model,
                     std::optional<std::span<const std::size_t>> subset) {
  if (subset && subset->empty()) return 0.0;
  const auto dist = enumerate_distribution(matrix, model);
  if (!subset) return dist.entropy();
  return dist.marginal(*subset).entropy();
}

double prob_all_positive_incl_excl(const TestMatrix& matrix, std::span<const std::size_t> rows,
                                   const DefectModel& model) {
  if (rows.size() > kMaxInclExclRows) {
    throw SizeError("inclusion-exclusion over more than 20 tests");
  }
  const std::size_t words = (matrix.items() + 63) / 64;
  std::vector<std::vector<std::uint64_t>> sets;
  sets.reserve(rows.size());
  for (const auto l : rows) {
    if (l >= matrix.tests()) throw StructureError("row index out of range");
    std::vector<std::uint64_t> bits(words, 0);
    for (const auto i : matrix.row(l)) bits[i / 64] |= std::uint64_t{1} << (i % 64);
    sets.push_back(std::move(bits));
  }

  // The event "all tests in U negative" has probability ζ^|∪_U R_l|.
  std::vector<std::vector<std::uint64_t>> unions(rows.size() + 1, std::vector<std::uint64_t>(words, 0));
  Accumulator acc;
  std::function<void(std::size_t, bool)> visit = [&](std::size_t depth, bool odd) {
    if (depth == rows.size()) {
      std::size_t size = 0;
      for (const auto w : unions[depth]) size += static_cast<std::size_t>(std::popcount(w));
      const double term = std::pow(model.zeta(), static_cast<double>(size));
      acc.add(odd ? -term : term);
      return;
    }
    unions[depth + 1] = unions[depth];
    visit(depth + 1, odd);
    for (std::size_t w = 0; w < words; ++w) unions[depth + 1][w] = unions[depth][w] | sets[depth][w];
    visit(depth + 1, !odd);
  };
  visit(0, false);
  return acc.value();
}

// ---------------------------------------------------------------------------
// Split-event identities

bool SplitIdentityReport::passed() const {
  return std::all_of(records.begin(), records.end(), [](const auto& r) { return r.passed(); });
}

SplitIdentityReport verify_appendix_identities(const TestMatrix& matrix, std::size_t split,
                                               const DefectModel& model, double tolerance) {
  require_items(matrix, kMaxEnumerationItems, "verify_appendix_identities");
  require_tests(matrix, kMaxSplitRows, "verify_appendix_identities");
  const std::size_t s = matrix.tests();
  if (split < 1 || split > s) {
    throw StructureError("split index a must satisfy 1 <= a <= s = " + std::to_string(s));
  }

  SplitIdentityReport report;
  report.split = split;
  const auto dist = enumerate_distribution(matrix, model);
  const std::string inputs = describe(matrix, model) + ";a=" + std::to_string(split);

  // Zero-based: test 0 is Y_1, tests [1, a) are Y_[2,a], tests [a, s) are Y_[a+1,s].
  const OutcomePattern middle = ((OutcomePattern{1} << split) - 1) & ~OutcomePattern{1};
  const OutcomePattern tail = ((s == 64 ? ~OutcomePattern{0} : (OutcomePattern{1} << s) - 1)) &
                              ~((OutcomePattern{1} << split) - 1);
  Accumulator enumerated;
  for (const auto& [pattern, p] : dist.probs()) {
    const bool first_negative = (pattern & 1U) == 0;
    const bool middle_not_all = (pattern & middle) != middle;
    const bool tail_all = (pattern & tail) == tail;
    if (first_negative && middle_not_all && tail_all) enumerated.add(p);
  }
  report.split_enumerated = enumerated.value();

  // Σ over U ⊆ [2,s] meeting [2,a] of (−1)^(|U|+1) P(E_1 ∩ ∩_U E_l).
  std::vector<std::uint32_t> masks;
  for (const auto& row : matrix.rows()) masks.push_back(row_mask(row));
  const auto pw = zeta_powers(model, matrix.items());
  const std::uint32_t others = static_cast<std::uint32_t>(s - 1);
  const std::uint32_t middle_bits = (std::uint32_t{1} << (split - 1)) - 1;
  Accumulator signed_sum;
  for (std::uint32_t u = 0; u < (std::uint32_t{1} << others); ++u) {
    if ((u & middle_bits) == 0) continue;
    std::uint32_t covered = masks[0];
    for (std::uint32_t j = 0; j < others; ++j) {
      if ((u >> j) & 1U) covered |= masks[j + 1];
    }
    const double term = pw[static_cast<std::size_t>(std::popcount(covered))];
    signed_sum.add(std::popcount(u) % 2 == 1 ? term : -term);
  }
  report.split_signed_sum = signed_sum.value();
  report.records.push_back(make_check("split_identity.signed_sum", inputs, report.split_enumerated,
                                      report.split_signed_sum, Relation::equal, tolerance));

  // Swap step: move test 1 off an item shared by tests 1..a onto a fresh item.
  if (split >= 2) {
    std::uint32_t shared = masks[0];
    for (std::size_t l = 1; l < split; ++l) shared &= masks[l];
    std::uint32_t used = 0;
    for (const auto m : masks) used |= m;
    const std::uint32_t all_items = matrix.items() == 32 ? ~std::uint32_t{0}
                                                         : (std::uint32_t{1} << matrix.items()) - 1;
    const std::uint32_t fresh = all_items & ~used;
    if (shared != 0 && fresh != 0) {
      const auto item = static_cast<std::size_t>(std::countr_zero(shared));
      const auto fresh_item = static_cast<std::size_t>(std::countr_zero(fresh));
      std::vector<Row> swapped = matrix.rows();
      std::replace(swapped[0].begin(), swapped[0].end(), item, fresh_item);
      const TestMatrix modified(matrix.items(), std::move(swapped));

      std::vector<std::size_t> all(s);
      std::iota(all.begin(), all.end(), std::size_t{0});
      report.shared_item = item;
      report.fresh_item = fresh_item;
      report.prob_all_positive = dist.prob_all_positive(all);
      report.prob_all_positive_swapped = enumerate_distribution(modified, model).prob_all_positive(all);
      report.records.push_back(make_check("split_identity.swap_monotone", inputs, *report.prob_all_positive,
                                          *report.prob_all_positive_swapped,
                                          Relation::greater_equal, tolerance));
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Placement generators

namespace {

// Designs with the given ordered row weights, one per class under item
// relabeling. A class is fixed by how many items fall in each Venn region
// (the set of rows containing the item), so enumerate region counts and
// hand out labels region by region starting at `first_label`.
std::vector<std::vector<Row>> venn_designs(std::span<const std::size_t> weights, std::size_t capacity,
                                           std::size_t first_label) {
  const std::size_t r = weights.size();
  const std::uint32_t regions = (std::uint32_t{1} << r) - 1;
  std::vector<std::size_t> remaining(weights.begin(), weights.end());
  std::vector<std::size_t> count(regions + 1, 0);
  std::vector<std::vector<Row>> out;

  std::function<void(std::uint32_t, std::size_t)> fill = [&](std::uint32_t mask, std::size_t budget) {
    if (mask > regions) {
      if (std::any_of(remaining.begin(), remaining.end(), [](std::size_t w) { return w != 0; })) return;
      std::vector<Row> rows(r);
      std::size_t label = first_label;
      for (std::uint32_t m = 1; m <= regions; ++m) {
        for (std::size_t c = 0; c < count[m]; ++c, ++label) {
          for (std::size_t l = 0; l < r; ++l) {
            if ((m >> l) & 1U) rows[l].push_back(label);
          }
        }
      }
      out.push_back(std::move(rows));
      return;
    }
    std::size_t cap = budget;
    for (std::size_t l = 0; l < r; ++l) {
      if ((mask >> l) & 1U) cap = std::min(cap, remaining[l]);
    }
    for (std::size_t c = 0; c <= cap; ++c) {
      count[mask] = c;
      for (std::size_t l = 0; l < r; ++l) {
        if ((mask >> l) & 1U) remaining[l] -= c;
      }
      fill(mask + 1, budget - c);
      for (std::size_t l = 0; l < r; ++l) {
        if ((mask >> l) & 1U) remaining[l] += c;
      }
    }
    count[mask] = 0;
  };
  fill(1, capacity);
  return out;
}

}  // namespace

std::vector<TestMatrix> canonical_placements(std::span<const std::size_t> weights, std::size_t items) {
  std::vector<TestMatrix> out;
  for (auto& rows : venn_designs(weights, items, 0)) out.emplace_back(items, std::move(rows));
  return out;
}

std::vector<TestMatrix> common_item_family(std::size_t weight, std::size_t tests, std::size_t max_items) {
  if (weight < 1 || tests < 1) throw StructureError("weight and test count must be positive");
  if (max_items < weight) return {};
  // Item 0 sits in every row; the other weight − 1 items per row are placed
  // over labels 1.. up to the item budget.
  const std::vector<std::size_t> rest(tests, weight - 1);
  std::vector<TestMatrix> out;
  for (auto& rows : venn_designs(rest, max_items - 1, 1)) {
    std::size_t n = 1;
    for (auto& row : rows) {
      row.insert(row.begin(), 0);
      n = std::max(n, row.back() + 1);
    }
    out.emplace_back(n, std::move(rows));
  }
  return out;
}

TestMatrix random_matrix(std::uint64_t seed, std::size_t items, std::size_t tests,
                         std::size_t min_weight, std::size_t max_weight) {
  if (items < 1 || tests < 1 || min_weight < 1 || min_weight > max_weight || max_weight > items) {
    throw StructureError("random_matrix: invalid shape");
  }
  std::mt19937_64 gen(seed);
  std::vector<std::size_t> order(items);
  std::vector<Row> rows;
  rows.reserve(tests);
  for (std::size_t l = 0; l < tests; ++l) {
    const auto w = static_cast<std::size_t>(uniform_int(gen, min_weight, max_weight));
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t j = 0; j < w; ++j) {
      const auto pick = static_cast<std::size_t>(uniform_int(gen, j, items - 1));
      std::swap(order[j], order[pick]);
    }
    rows.emplace_back(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(w));
  }
  return TestMatrix(items, std::move(rows));
}

// ---------------------------------------------------------------------------
// Disjoint-placement minimum

bool DisjointMinReport::passed() const {
  return std::all_of(records.begin(), records.end(), [](const auto& r) { return r.passed(); });
}

DisjointMinReport verify_lemma1_min(std::size_t items, std::span<const std::size_t> weights,
                                    const DefectModel& model, double tolerance) {
  if (weights.empty() || weights.size() > kMaxPlacementRows) {
    throw SizeError("disjoint-minimum check takes 1 to 3 rows");
  }
  if (items > kMaxPlacementItems) throw SizeError("disjoint-minimum check takes n <= 10");
  std::size_t total = 0;
  for (const auto w : weights) {
    if (w == 0) throw StructureError("row weights must be positive");
    total += w;
  }
  if (total > items) throw StructureError("row weights must fit disjointly: sum > n");

  std::vector<std::size_t> all(weights.size());
  std::iota(all.begin(), all.end(), std::size_t{0});

  DisjointMinReport report;
  const auto placements = canonical_placements(weights, items);
  report.placements = placements.size();
  report.exhaustive_min = 1.0;
  for (const auto& m : placements) {
    report.exhaustive_min =
        std::min(report.exhaustive_min, enumerate_distribution(m, model).prob_all_positive(all));
  }

  std::vector<Row> disjoint;
  std::size_t next = 0;
  for (const auto w : weights) {
    Row row(w);
    std::iota(row.begin(), row.end(), next);
    next += w;
    disjoint.push_back(std::move(row));
  }
  report.disjoint_value =
      enumerate_distribution(TestMatrix(items, std::move(disjoint)), model).prob_all_positive(all);

  report.product = 1.0;
  for (const auto w : weights) report.product *= 1.0 - std::pow(model.zeta(), static_cast<double>(w));

  std::string inputs = "n=" + std::to_string(items) + ";w=";
  for (const auto w : weights) inputs += std::to_string(w) + ",";
  inputs += ";delta=" + fmt_double(model.delta());
  report.records.push_back(make_check("disjoint_min.min_eq_product", inputs, report.exhaustive_min,
                                      report.product, Relation::equal, tolerance));
  report.records.push_back(make_check("disjoint_min.disjoint_eq_product", inputs, report.disjoint_value,
                                      report.product, Relation::equal, tolerance));
  report.records.push_back(make_check("disjoint_min.all_ge_product", inputs, report.exhaustive_min,
                                      report.product, Relation::greater_equal, tolerance));
  return report;
}

// ---------------------------------------------------------------------------
// Entropy inequalities

bool CommonItemReport::passed() const {
  return std::all_of(records.begin(), records.end(), [](const auto& r) { return r.passed(); });
}

CommonItemReport verify_thm3(const TestMatrix& matrix, const DefectModel& model, double tolerance) {
  require_items(matrix, kMaxEnumerationItems, "verify_thm3");
  const auto weight = matrix.constant_weight();
  if (!weight) throw StructureError("verify_thm3 needs equal row weights");
  std::size_t shared = 0;
  if (common_item_count(matrix, &shared) == 0) {
    throw StructureError("verify_thm3 needs an item common to every test");
  }

  CommonItemReport report;
  report.weight = *weight;
  report.tests = matrix.tests();
  report.exact = enumerate_distribution(matrix, model).entropy();
  const double s = static_cast<double>(matrix.tests());
  const auto k = static_cast<std::int64_t>(*weight);
  report.bound = model.zeta() * s *
                     binary_entropy(std::pow(model.zeta(), static_cast<double>(k - 1))) +
                 binary_entropy(model.delta()) - f_dk(model, k, s);
  report.equality = std::abs(report.exact - report.bound) <= 1e-9;

  report.reduced_rows_disjoint = true;
  std::vector<bool> hit(matrix.items(), false);
  for (const auto& row : matrix.rows()) {
    for (const auto i : row) {
      if (i == shared) continue;
      if (hit[i]) report.reduced_rows_disjoint = false;
      hit[i] = true;
    }
  }

  report.records.push_back(make_check("common_item.entropy_bound", describe(matrix, model), report.exact,
                                      report.bound, Relation::less_equal, tolerance));
  return report;
}

bool CondEntropyReport::passed() const {
  return std::all_of(records.begin(), records.end(), [](const auto& r) { return r.passed(); });
}

CondEntropyReport verify_cond_entropy_lb(const TestMatrix& matrix, std::size_t item,
                                         const DefectModel& model, double tolerance) {
  require_items(matrix, kMaxEnumerationItems, "verify_cond_entropy_lb");
  if (item >= matrix.items()) throw StructureError("item index out of range");
  const auto support = column_support(matrix).tests_of_item[item];
  if (support.empty()) throw StructureError("item " + std::to_string(item) + " is in no test");
  const std::size_t k = matrix.row(support.front()).size();
  for (const auto l : support) {
    if (matrix.row(l).size() != k) throw StructureError("tests containing the item differ in weight");
  }
  if (support.size() + 1 > kMaxTests) throw SizeError("too many tests for the joint law");

  // X_i is the outcome of the singleton test {i}, so (X_i, Y_{S_i}) is the
  // outcome law of the tests S_i plus that singleton.
  std::vector<Row> rows;
  for (const auto l : support) rows.push_back(matrix.row(l));
  rows.push_back({item});
  const auto joint = enumerate_distribution(TestMatrix(matrix.items(), std::move(rows)), model);
  std::vector<std::size_t> tests_only(support.size());
  std::iota(tests_only.begin(), tests_only.end(), std::size_t{0});

  CondEntropyReport report;
  report.item = item;
  report.weight = k;
  report.support = support.size();
  report.exact = joint.entropy() - joint.marginal(tests_only).entropy();
  report.lower_bound =
      f_dk(model, static_cast<std::int64_t>(k), static_cast<double>(support.size()));
  report.records.push_back(make_check("cond_entropy.lower_bound",
                                      describe(matrix, model) + ";i=" + std::to_string(item),
                                      report.exact, report.lower_bound, Relation::greater_equal,
                                      tolerance));
  return report;
}

bool MtReport::passed() const {
  return std::all_of(records.begin(), records.end(), [](const auto& r) { return r.passed(); });
}

MtReport verify_mt_weak(const TestMatrix& matrix, const DefectModel& model, double tolerance) {
  require_items(matrix, kMaxMtItems, "verify_mt_weak");
  require_tests(matrix, kMaxMtRows, "verify_mt_weak");
  const auto weight = matrix.constant_weight();
  if (!weight) throw StructureError("verify_mt_weak needs equal row weights");

  const auto dist = enumerate_distribution(matrix, model);
  MtReport report;
  report.weight = *weight;
  report.lhs = dist.entropy();
  Accumulator rhs;
  for (const auto& support : column_support(matrix).tests_of_item) {
    if (!support.empty()) rhs.add(dist.marginal(support).entropy());
  }
  report.rhs = rhs.value() / static_cast<double>(*weight);
  report.records.push_back(make_check("mt_weak.cover_bound", describe(matrix, model), report.lhs,
                                      report.rhs, Relation::less_equal, tolerance));
  return report;
}

// ---------------------------------------------------------------------------
// Suite

namespace {

constexpr std::uint64_t kSplitStreams = 1'000'000;
constexpr std::uint64_t kMtStreams = 2'000'000;

template <typename Fn>
void run_cases(std::size_t count, unsigned workers, std::vector<CheckRecord>& out, Fn&& one_case) {
  std::vector<std::vector<CheckRecord>> per_case(count);
  detail::parallel_for(count, [&](std::size_t c) { per_case[c] = one_case(c); }, workers);
  for (auto& recs : per_case) {
    for (auto& r : recs) out.push_back(std::move(r));
  }
}

void append(std::vector<CheckRecord>& out, std::vector<CheckRecord> recs) {
  for (auto& r : recs) out.push_back(std::move(r));
}

void distribution_and_incl_excl(const SuiteConfig& cfg, std::vector<CheckRecord>& out) {
  const std::size_t n_cap = std::min<std::size_t>(12, cfg.max_items);
  if (n_cap == 0) return;
  run_cases(cfg.fuzz_cases, cfg.workers, out, [&](std::size_t c) {
    auto gen = make_stream(cfg.seed, c);
    const auto n = static_cast<std::size_t>(uniform_int(gen, 1, n_cap));
    const auto t = static_cast<std::size_t>(uniform_int(gen, 1, 6));
    const DefectModel model(0.05 + 0.9 * uniform01(gen));
    const auto m = random_matrix(gen(), n, t, 1, n);
    const auto subset_bits = uniform_int(gen, 1, (std::uint64_t{1} << t) - 1);
    std::vector<std::size_t> subset;
    for (std::size_t l = 0; l < t; ++l) {
      if ((subset_bits >> l) & 1U) subset.push_back(l);
    }

    std::vector<CheckRecord> recs;
    const auto dist = enumerate_distribution(m, model);
    std::string inputs = describe(m, model) + ";S=";
    for (const auto l : subset) inputs += std::to_string(l) + ",";
    recs.push_back(make_check("incl_excl.vs_enumeration", inputs, prob_all_positive_incl_excl(m, subset, model),
                              dist.prob_all_positive(subset), Relation::equal, cfg.tolerance));
    if (c < 50) {
      recs.push_back(make_check("dist.total", describe(m, model), dist.total(), 1.0, Relation::equal,
                                cfg.tolerance));
      double worst = 0.0;
      for (std::size_t l = 0; l < t; ++l) {
        const std::size_t one[] = {l};
        const double expected = 1.0 - std::pow(model.zeta(), static_cast<double>(m.row(l).size()));
        worst = std::max(worst, std::abs(dist.prob_all_positive(one) - expected));
      }
      recs.push_back(make_check("dist.marginals", describe(m, model), worst, 0.0, Relation::equal,
                                cfg.tolerance));
    }
    return recs;
  });
}

void split_identity_family(const SuiteConfig& cfg, std::vector<CheckRecord>& out) {
  const std::size_t n_cap = std::min<std::size_t>(12, cfg.max_items);
  if (n_cap >= 5) {
    const TestMatrix example(5, {{0, 1}, {0, 2}, {3}});
    append(out, verify_appendix_identities(example, 2, DefectModel(0.5), cfg.tolerance).records);
  }
  if (n_cap >= 2) {
    const TestMatrix twin(2, {{0}, {0}});
    append(out, verify_appendix_identities(twin, 2, DefectModel(0.5), cfg.tolerance).records);
  }
  if (n_cap < 3) return;

  const std::size_t cases = std::min<std::size_t>(100, cfg.fuzz_cases);
  run_cases(cases, cfg.workers, out, [&](std::size_t c) {
    auto gen = make_stream(cfg.seed, kSplitStreams + c);
    const auto n = static_cast<std::size_t>(uniform_int(gen, 3, n_cap));
    const auto t = static_cast<std::size_t>(uniform_int(gen, 2, 5));
    const auto a = static_cast<std::size_t>(uniform_int(gen, 2, t));
    const DefectModel model(0.05 + 0.9 * uniform01(gen));
    // Items [0, n−1) only, so item n−1 stays fresh; tests 1..a share item 0.
    auto base = random_matrix(gen(), n - 1, t, 1, n - 1);
    std::vector<Row> rows = base.rows();
    for (std::size_t l = 0; l < a; ++l) {
      if (!std::binary_search(rows[l].begin(), rows[l].end(), std::size_t{0})) rows[l].front() = 0;
    }
    const TestMatrix m(n, std::move(rows));
    std::vector<CheckRecord> recs;
    for (std::size_t split = 1; split <= t; ++split) {
      append(recs, verify_appendix_identities(m, split, model, cfg.tolerance).records);
    }
    return recs;
  });
}

void disjoint_min_family(const SuiteConfig& cfg, std::vector<CheckRecord>& out) {
  const std::size_t n_cap = std::min<std::size_t>({9, cfg.max_items, kMaxPlacementItems});
  const double deltas[] = {0.1, 0.3, 0.5};
  std::vector<std::vector<std::size_t>> tuples;
  for (std::size_t rows = 1; rows <= 3; ++rows) {
    std::vector<std::size_t> w(rows, 1);
    while (true) {
      tuples.push_back(w);
      std::size_t j = 0;
      while (j < rows && w[j] == 3) w[j++] = 1;
      if (j == rows) break;
      ++w[j];
    }
  }
  struct Case {
    std::vector<std::size_t> weights;
    std::size_t n;
    double delta;
  };
  std::vector<Case> cases;
  for (const auto& w : tuples) {
    const std::size_t total = std::accumulate(w.begin(), w.end(), std::size_t{0});
    for (std::size_t n = total; n <= n_cap; ++n) {
      for (const double d : deltas) cases.push_back({w, n, d});
    }
  }
  run_cases(cases.size(), cfg.workers, out, [&](std::size_t c) {
    return verify_lemma1_min(cases[c].n, cases[c].weights, DefectModel(cases[c].delta), cfg.tolerance)
        .records;
  });
}

void common_item_checks(const SuiteConfig& cfg, std::vector<CheckRecord>& out) {
  const std::size_t n_cap = std::min<std::size_t>(12, cfg.max_items);
  const double deltas[] = {0.1, 0.3, 0.5};
  std::vector<std::pair<TestMatrix, double>> cases;
  for (std::size_t k = 1; k <= 3; ++k) {
    for (std::size_t s = 1; s <= 4; ++s) {
      for (auto& m : common_item_family(k, s, n_cap)) {
        for (const double d : deltas) cases.emplace_back(m, d);
      }
    }
  }
  std::vector<int> mismatch(cases.size(), 0);
  run_cases(cases.size(), cfg.workers, out, [&](std::size_t c) {
    const DefectModel model(cases[c].second);
    auto thm = verify_thm3(cases[c].first, model, cfg.tolerance);
    mismatch[c] = thm.equality != thm.reduced_rows_disjoint ? 1 : 0;
    auto recs = std::move(thm.records);
    append(recs, verify_cond_entropy_lb(cases[c].first, 0, model, cfg.tolerance).records);
    return recs;
  });
  const double mismatches = std::accumulate(mismatch.begin(), mismatch.end(), 0.0);
  out.push_back(make_check("common_item.equality_iff_reduced_disjoint",
                           "family k<=3 s<=4 n<=" + std::to_string(n_cap), mismatches, 0.0,
                           Relation::equal, 0.0));
}

void mt_family(const SuiteConfig& cfg, std::vector<CheckRecord>& out) {
  if (cfg.max_items >= 3) {
    const TestMatrix worked(3, {{0, 1}, {1, 2}});
    append(out, verify_mt_weak(worked, DefectModel(0.5), cfg.tolerance).records);
  }
  {
    const std::size_t n = std::min<std::size_t>(4, std::max<std::size_t>(1, cfg.max_items));
    std::vector<Row> singletons;
    for (std::size_t i = 0; i < n; ++i) singletons.push_back({i});
    append(out, verify_mt_weak(TestMatrix(n, std::move(singletons)), DefectModel(0.3), cfg.tolerance)
                    .records);
  }
  const std::size_t n = std::min<std::size_t>(9, cfg.max_items);
  if (n == 0) return;
  const std::size_t w = std::min<std::size_t>(3, n);
  const double deltas[] = {0.2, 0.3, 0.4};
  run_cases(60, cfg.workers, out, [&](std::size_t c) {
    const DefectModel model(deltas[c / 20]);
    const auto m = random_matrix(stream_seed(cfg.seed, kMtStreams + c), n, 6, w, w);
    return verify_mt_weak(m, model, cfg.tolerance).records;
  });
}

}  // namespace

std::vector<CheckRecord> run_suite(const SuiteConfig& config) {
  if (!(config.tolerance >= 0.0)) throw DomainError("tolerance must be >= 0");
  std::vector<CheckRecord> out;
  distribution_and_incl_excl(config, out);
  split_identity_family(config, out);
  disjoint_min_family(config, out);
  common_item_checks(config, out);
  mt_family(config, out);
  return out;
}

}  // namespace gtlab::oracle

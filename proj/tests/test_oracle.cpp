#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gtlab/errors.hpp"
#include "gtlab/oracle.hpp"
#include "gtlab/rng.hpp"

using namespace gtlab;
using namespace gtlab::oracle;

namespace {

// Naive enumeration that rebuilds the outcome law from scratch, without
// compensated sums or the dense accumulator.
std::map<std::uint64_t, long double> naive_law(const TestMatrix& m, double delta) {
  std::map<std::uint64_t, long double> law;
  const std::size_t n = m.items();
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
    long double p = 1.0L;
    for (std::size_t i = 0; i < n; ++i) p *= ((x >> i) & 1U) ? delta : 1.0L - delta;
    std::uint64_t y = 0;
    for (std::size_t l = 0; l < m.tests(); ++l)
      for (std::size_t i : m.row(l))
        if ((x >> i) & 1U) y |= std::uint64_t{1} << l;
    law[y] += p;
  }
  return law;
}

long double naive_entropy(const std::map<std::uint64_t, long double>& law) {
  long double h = 0.0L;
  for (const auto& [y, p] : law)
    if (p > 0.0L) h -= p * std::log2(p);
  return h;
}

double H(double x) { return binary_entropy(x); }

}  // namespace

TEST_CASE("test matrix validation and canonical form") {
  CHECK_THROWS_AS(TestMatrix(3, {}), StructureError);
  CHECK_THROWS_AS(TestMatrix(3, {{}}), StructureError);
  CHECK_THROWS_AS(TestMatrix(3, {{0, 3}}), StructureError);
  const TestMatrix m(4, {{2, 1, 1}, {0, 3}});
  CHECK(m.row(0) == Row{1, 2});
  CHECK(m.canonical() == "n=4;1,2|0,3");
  CHECK(m.constant_weight() == std::optional<std::size_t>(2));
  CHECK_FALSE(TestMatrix(4, {{0}, {1, 2}}).constant_weight().has_value());
}

TEST_CASE("column support is the incidence dual") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto m = random_matrix(seed, 9, 6, 1, 4);
    const auto cs = column_support(m);
    REQUIRE(cs.tests_of_item.size() == m.items());
    for (std::size_t i = 0; i < m.items(); ++i)
      for (std::size_t l = 0; l < m.tests(); ++l) {
        const bool in_row = std::binary_search(m.row(l).begin(), m.row(l).end(), i);
        const auto& s = cs.tests_of_item[i];
        CHECK(in_row == (std::find(s.begin(), s.end(), l) != s.end()));
      }
  }
}

TEST_CASE("enumerate_distribution examples") {
  const auto one = enumerate_distribution(TestMatrix(1, {{0}}), DefectModel(0.5));
  CHECK(one.probability(1) == 0.5);
  CHECK(one.probability(0) == 0.5);

  const auto two = enumerate_distribution(TestMatrix(3, {{0, 1}, {1, 2}}), DefectModel(0.5));
  CHECK(two.probability(0b11) == doctest::Approx(5.0 / 8.0).epsilon(1e-15));
  CHECK(two.total() == doctest::Approx(1.0).epsilon(1e-15));

  for (std::size_t r = 1; r <= 8; ++r) {
    Row row(r);
    std::iota(row.begin(), row.end(), 0);
    const auto d = enumerate_distribution(TestMatrix(r, {row}), DefectModel(0.3));
    CHECK(d.probability(1) == doctest::Approx(1.0 - std::pow(0.7, static_cast<double>(r))).epsilon(1e-14));
  }
  CHECK_THROWS_AS(enumerate_distribution(TestMatrix(25, {{24}}), DefectModel(0.5)), SizeError);
}

TEST_CASE("enumeration matches a naive long-double enumeration") {
  for (std::uint64_t seed = 100; seed < 160; ++seed) {
    const auto m = random_matrix(seed, 10, 5, 1, 5);
    for (double d : {0.1, 0.37}) {
      const auto law = enumerate_distribution(m, DefectModel(d));
      const auto ref = naive_law(m, d);
      for (const auto& [y, p] : ref) CHECK(law.probability(y) == doctest::Approx(static_cast<double>(p)).epsilon(1e-13));
      CHECK(law.total() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(joint_entropy(m, DefectModel(d)) ==
            doctest::Approx(static_cast<double>(naive_entropy(ref))).epsilon(1e-12));
    }
  }
}

TEST_CASE("joint entropy examples") {
  std::vector<Row> singletons;
  for (std::size_t i = 0; i < 6; ++i) singletons.push_back({i});
  CHECK(joint_entropy(TestMatrix(6, singletons), DefectModel(0.2)) == doctest::Approx(6.0 * H(0.2)).epsilon(1e-13));
  // Outcome law (1/8, 1/8, 1/8, 5/8).
  CHECK(joint_entropy(TestMatrix(3, {{0, 1}, {0, 2}}), DefectModel(0.5)) ==
        doctest::Approx(1.5487949406953985).epsilon(1e-13));
  CHECK(joint_entropy(TestMatrix(2, {{0, 1}, {0, 1}}), DefectModel(0.5)) ==
        doctest::Approx(0.81127812445913286).epsilon(1e-13));
  const TestMatrix m(4, {{0, 1}, {1, 2}, {3}});
  const std::vector<std::size_t> none;
  CHECK(joint_entropy(m, DefectModel(0.3), std::span<const std::size_t>(none)) == 0.0);
}

TEST_CASE("joint entropy is invariant under row permutation and duplication") {
  std::mt19937_64 gen(99);
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto m = random_matrix(seed, 8, 5, 1, 4);
    const DefectModel model(0.15 + 0.005 * static_cast<double>(seed));
    const double h = joint_entropy(m, model);
    auto rows = m.rows();
    std::shuffle(rows.begin(), rows.end(), gen);
    rows.push_back(rows[uniform_int(gen, 0, rows.size() - 1)]);
    CHECK(joint_entropy(TestMatrix(m.items(), rows), model) == doctest::Approx(h).epsilon(1e-12));
  }
}

TEST_CASE("inclusion-exclusion examples") {
  const TestMatrix m(3, {{0, 1}, {1, 2}});
  const std::vector<std::size_t> both = {0, 1}, first = {0};
  CHECK(prob_all_positive_incl_excl(m, both, DefectModel(0.5)) == doctest::Approx(0.625).epsilon(1e-15));
  CHECK(prob_all_positive_incl_excl(m, first, DefectModel(0.3)) == doctest::Approx(1.0 - 0.49).epsilon(1e-15));
  const TestMatrix disjoint(9, {{0}, {1, 2}, {3, 4, 5}, {6, 7, 8}});
  const std::vector<std::size_t> all = {0, 1, 2, 3};
  const double prod = (1 - 0.7) * (1 - std::pow(0.7, 2)) * (1 - std::pow(0.7, 3)) * (1 - std::pow(0.7, 3));
  CHECK(prob_all_positive_incl_excl(disjoint, all, DefectModel(0.3)) == doctest::Approx(prod).epsilon(1e-14));
}

TEST_CASE("inclusion-exclusion matches enumeration on random designs") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto m = random_matrix(stream_seed(17, seed), 12, 6, 1, 6);
    const DefectModel model(0.05 + 0.9 * static_cast<double>(seed % 17) / 17.0);
    const auto law = enumerate_distribution(m, model);
    std::vector<std::size_t> all(m.tests());
    std::iota(all.begin(), all.end(), 0);
    CHECK(std::abs(prob_all_positive_incl_excl(m, all, model) - law.prob_all_positive(all)) <= 1e-12);
    const std::vector<std::size_t> sub = {0, m.tests() - 1};
    CHECK(std::abs(prob_all_positive_incl_excl(m, sub, model) - law.prob_all_positive(sub)) <= 1e-12);
  }
}

TEST_CASE("inclusion-exclusion size limit") {
  std::vector<Row> rows(21, Row{0});
  const TestMatrix m(1, rows);
  std::vector<std::size_t> all(21);
  std::iota(all.begin(), all.end(), 0);
  CHECK_THROWS_AS(prob_all_positive_incl_excl(m, all, DefectModel(0.5)), SizeError);
}

TEST_CASE("verify_appendix_identities examples") {
  const auto r1 = verify_appendix_identities(TestMatrix(1, {{0}, {0}}), 2, DefectModel(0.5));
  CHECK(r1.passed());
  CHECK(r1.split_enumerated == doctest::Approx(r1.split_signed_sum).epsilon(1e-15));

  const auto r2 = verify_appendix_identities(TestMatrix(4, {{0, 1}, {0, 2}, {3}}), 2, DefectModel(0.5));
  CHECK(r2.passed());
  CHECK(std::abs(r2.split_enumerated - r2.split_signed_sum) <= 1e-12);

  const TestMatrix disjoint(6, {{0, 1}, {2, 3}, {4, 5}});
  for (std::size_t a = 1; a <= 3; ++a) {
    const auto r = verify_appendix_identities(disjoint, a, DefectModel(0.3));
    CHECK(r.passed());
    CHECK_FALSE(r.shared_item.has_value());
  }
  CHECK_THROWS_AS(verify_appendix_identities(disjoint, 0, DefectModel(0.3)), StructureError);
  CHECK_THROWS_AS(verify_appendix_identities(disjoint, 4, DefectModel(0.3)), StructureError);
}

TEST_CASE("split-event identities hold on random designs for every split") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto m = random_matrix(stream_seed(5, seed), 9, 5, 1, 4);
    for (std::size_t a = 1; a <= m.tests(); ++a) {
      const auto r = verify_appendix_identities(m, a, DefectModel(0.25));
      CHECK(r.passed());
      if (r.prob_all_positive && r.prob_all_positive_swapped)
        CHECK(*r.prob_all_positive >= *r.prob_all_positive_swapped - 1e-12);
    }
  }
}

TEST_CASE("verify_lemma1_min examples") {
  const std::vector<std::size_t> w11 = {1, 1}, w22 = {2, 2}, w222 = {2, 2, 2};
  const auto a = verify_lemma1_min(2, w11, DefectModel(0.5));
  CHECK(a.passed());
  CHECK(a.exhaustive_min == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(a.placements == 2);

  const auto b = verify_lemma1_min(4, w22, DefectModel(0.5));
  CHECK(b.exhaustive_min == doctest::Approx(0.5625).epsilon(1e-15));

  const auto c = verify_lemma1_min(6, w222, DefectModel(0.3));
  CHECK(c.exhaustive_min == doctest::Approx(std::pow(1.0 - 0.49, 3)).epsilon(1e-14));
  CHECK(c.passed());

  const std::vector<std::size_t> w4 = {1, 1, 1, 1};
  CHECK_THROWS_AS(verify_lemma1_min(5, w4, DefectModel(0.3)), SizeError);
  CHECK_THROWS_AS(verify_lemma1_min(3, w222, DefectModel(0.3)), StructureError);
}

TEST_CASE("canonical placements: one per orbit of labelled placements under item relabelling") {
  const auto orbit_count = [](std::size_t n, const std::vector<std::size_t>& weights) {
    std::vector<std::uint32_t> masks;
    for (std::uint32_t m = 0; m < (1U << n); ++m) masks.push_back(m);
    std::set<std::vector<std::uint32_t>> orbits;
    std::vector<std::uint32_t> choice(weights.size(), 0);
    const auto recurse = [&](auto&& self, std::size_t row) -> void {
      if (row == weights.size()) {
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::vector<std::uint32_t> best;
        do {
          std::vector<std::uint32_t> image;
          for (std::uint32_t c : choice) {
            std::uint32_t t = 0;
            for (std::size_t i = 0; i < n; ++i)
              if ((c >> i) & 1U) t |= 1U << perm[i];
            image.push_back(t);
          }
          if (best.empty() || image < best) best = image;
        } while (std::next_permutation(perm.begin(), perm.end()));
        orbits.insert(best);
        return;
      }
      for (std::uint32_t m : masks) {
        if (static_cast<std::size_t>(std::popcount(m)) != weights[row]) continue;
        choice[row] = m;
        self(self, row + 1);
      }
    };
    recurse(recurse, 0);
    return orbits.size();
  };
  for (const auto& [n, w] : std::vector<std::pair<std::size_t, std::vector<std::size_t>>>{
           {2, {1, 1}}, {4, {2, 2}}, {5, {2, 2, 1}}, {6, {2, 2, 2}}, {6, {3, 1, 2}}}) {
    CAPTURE(n);
    const auto placements = canonical_placements(w, n);
    CHECK(placements.size() == orbit_count(n, w));
    std::set<std::string> distinct;
    for (const auto& m : placements) distinct.insert(m.canonical());
    CHECK(distinct.size() == placements.size());
  }
}

TEST_CASE("common-item family: every row holds item 0, classes are distinct") {
  // Two weight-2 rows through item 0: the other items coincide or differ.
  CHECK(common_item_family(2, 2, 12).size() == 2);
  CHECK(common_item_family(1, 4, 12).size() == 1);
  CHECK(common_item_family(3, 2, 3).size() == 1);
  for (std::size_t k = 1; k <= 3; ++k)
    for (std::size_t s = 1; s <= 4; ++s) {
      std::set<std::string> distinct;
      const auto family = common_item_family(k, s, 12);
      for (const auto& m : family) {
        distinct.insert(m.canonical());
        CHECK(m.tests() == s);
        CHECK(m.items() <= 12);
        for (const auto& row : m.rows()) {
          CHECK(row.size() == k);
          CHECK(row.front() == 0);
        }
      }
      CHECK(distinct.size() == family.size());
    }
}

TEST_CASE("verify_thm3 examples") {
  const auto eq = verify_thm3(TestMatrix(3, {{0, 1}, {0, 2}}), DefectModel(0.5));
  CHECK(eq.passed());
  CHECK(eq.exact == doctest::Approx(1.5487949406953985).epsilon(1e-12));
  CHECK(eq.bound == doctest::Approx(1.5487949406953985).epsilon(1e-12));
  CHECK(eq.equality);
  CHECK(eq.reduced_rows_disjoint);

  const auto strict = verify_thm3(TestMatrix(2, {{0, 1}, {0, 1}}), DefectModel(0.5));
  CHECK(strict.passed());
  CHECK(strict.exact == doctest::Approx(0.81127812445913286).epsilon(1e-12));
  CHECK(strict.bound == doctest::Approx(1.5487949406953985).epsilon(1e-12));
  CHECK_FALSE(strict.equality);

  const auto single = verify_thm3(TestMatrix(1, {{0}, {0}, {0}}), DefectModel(0.3));
  CHECK(single.exact == doctest::Approx(H(0.3)).epsilon(1e-13));
  CHECK(single.bound == doctest::Approx(H(0.3)).epsilon(1e-13));

  CHECK_THROWS_AS(verify_thm3(TestMatrix(3, {{0, 1}, {2}}), DefectModel(0.5)), StructureError);
  CHECK_THROWS_AS(verify_thm3(TestMatrix(4, {{0, 1}, {2, 3}}), DefectModel(0.5)), StructureError);
}

TEST_CASE("common-item family: bound holds, equality exactly when reduced rows are disjoint") {
  for (std::size_t k = 1; k <= 3; ++k)
    for (std::size_t s = 1; s <= 4; ++s)
      for (const auto& m : common_item_family(k, s, 10))
        for (double d : {0.1, 0.3, 0.5}) {
          const auto r = verify_thm3(m, DefectModel(d));
          CAPTURE(m.canonical());
          CHECK(r.passed());
          CHECK(r.equality == r.reduced_rows_disjoint);
        }
}

TEST_CASE("conditional entropy lower bound") {
  const auto single = verify_cond_entropy_lb(TestMatrix(1, {{0}}), 0, DefectModel(0.4));
  CHECK(single.exact == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(single.lower_bound == 0.0);

  const auto eq = verify_cond_entropy_lb(TestMatrix(3, {{0, 1}, {0, 2}}), 0, DefectModel(0.5));
  CHECK(eq.exact == doctest::Approx(0.45120505930460147).epsilon(1e-12));
  CHECK(eq.lower_bound == doctest::Approx(0.45120505930460147).epsilon(1e-13));
  CHECK(eq.passed());

  // Y is a single test on {0, 1}: H(X_0 | Y) = (3/4) H(2/3).
  const auto dup = verify_cond_entropy_lb(TestMatrix(2, {{0, 1}, {0, 1}}), 0, DefectModel(0.5));
  CHECK(dup.exact == doctest::Approx(0.75 * H(2.0 / 3.0)).epsilon(1e-13));
  CHECK(dup.exact > dup.lower_bound);

  CHECK_THROWS_AS(verify_cond_entropy_lb(TestMatrix(3, {{1, 2}}), 0, DefectModel(0.5)), StructureError);
  CHECK_THROWS_AS(verify_cond_entropy_lb(TestMatrix(3, {{0}, {0, 2}}), 0, DefectModel(0.5)), StructureError);
}

TEST_CASE("Madiman-Tetali weak form") {
  std::vector<Row> singletons;
  for (std::size_t i = 0; i < 5; ++i) singletons.push_back({i});
  const auto id = verify_mt_weak(TestMatrix(5, singletons), DefectModel(0.3));
  CHECK(id.lhs == doctest::Approx(5.0 * H(0.3)).epsilon(1e-13));
  CHECK(id.rhs == doctest::Approx(5.0 * H(0.3)).epsilon(1e-13));

  const auto ex = verify_mt_weak(TestMatrix(3, {{0, 1}, {1, 2}}), DefectModel(0.5));
  CHECK(ex.lhs == doctest::Approx(1.5487949406953985).epsilon(1e-12));
  // (H(0.75) + 1.5487949406953985 + H(0.75)) / 2
  CHECK(ex.rhs == doctest::Approx((2.0 * 0.81127812445913286 + 1.5487949406953985) / 2.0).epsilon(1e-12));
  CHECK(ex.passed());

  for (std::uint64_t seed = 0; seed < 20; ++seed)
    for (double d : {0.2, 0.3, 0.4}) {
      const auto m = random_matrix(stream_seed(3, seed), 9, 6, 3, 3);
      CHECK(verify_mt_weak(m, DefectModel(d)).passed());
    }
  CHECK_THROWS_AS(verify_mt_weak(TestMatrix(3, {{0}, {1, 2}}), DefectModel(0.5)), StructureError);
}

TEST_CASE("random matrices are reproducible") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    CHECK(random_matrix(seed, 9, 6, 2, 4).canonical() == random_matrix(seed, 9, 6, 2, 4).canonical());
    const auto m = random_matrix(seed, 9, 6, 2, 4);
    for (const auto& row : m.rows()) {
      CHECK(row.size() >= 2);
      CHECK(row.size() <= 4);
    }
  }
}

TEST_CASE("suite passes and is deterministic across worker counts") {
  SuiteConfig cfg;
  cfg.max_items = 6;
  cfg.fuzz_cases = 60;
  cfg.workers = 1;
  const auto a = run_suite(cfg);
  cfg.workers = 3;
  const auto b = run_suite(cfg);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].passed());
    CHECK(format_record(a[i]) == format_record(b[i]));
  }
}

TEST_CASE("suite rejects a negative tolerance") {
  SuiteConfig cfg;
  cfg.tolerance = -1.0;
  CHECK_THROWS_AS(run_suite(cfg), DomainError);
}

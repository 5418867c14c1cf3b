#include "gtlab/adaptive.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <span>
#include <string>

#include "gtlab/errors.hpp"
#include "gtlab/parallel.hpp"
#include "gtlab/rng.hpp"

namespace gtlab::adaptive {

namespace {

// Pooled test against the hidden truth; every call is one test.
class PoolTester {
 public:
  explicit PoolTester(const DefectVector& truth) : truth_(truth) {}

  bool test(std::span<const std::size_t> pool) {
    ++count_;
    for (const auto i : pool) {
      if (truth_.bits[i] != 0) return true;
    }
    return false;
  }
  bool test(std::size_t item) {
    const std::size_t pool[] = {item};
    return test(pool);
  }
  std::size_t count() const noexcept { return count_; }

 private:
  const DefectVector& truth_;
  std::size_t count_ = 0;
};

}  // namespace

std::vector<std::size_t> DefectVector::defectives() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != 0) out.push_back(i);
  }
  return out;
}

DefectVector draw_defects(std::size_t items, const DefectModel& model, std::mt19937_64& gen) {
  DefectVector x;
  x.bits.resize(items);
  for (auto& b : x.bits) b = uniform01(gen) < model.delta() ? 1 : 0;
  return x;
}

RunResult run_ungar(const DefectVector& truth, const DefectModel& model) {
  const std::size_t n = truth.size();
  if (n == 0) throw DomainError("run_ungar needs at least one item");
  PoolTester tester(truth);
  RunResult result;

  if (model.delta() >= kDeltaStar) {
    for (std::size_t i = 0; i < n; ++i) {
      if (tester.test(i)) result.recovered.push_back(i);
    }
    result.tests_used = tester.count();
    return result;
  }

  for (std::size_t first = 0; first + 1 < n; first += 2) {
    const std::size_t second = first + 1;
    const std::size_t pair[] = {first, second};
    if (!tester.test(pair)) continue;
    if (tester.test(first)) {
      result.recovered.push_back(first);
      if (tester.test(second)) result.recovered.push_back(second);
    } else {
      // Positive pair with a clean first item.
      result.recovered.push_back(second);
    }
  }
  if (n % 2 == 1 && tester.test(n - 1)) result.recovered.push_back(n - 1);
  result.tests_used = tester.count();
  return result;
}

double expected_pair_tests(const DefectModel& model) {
  const double z = model.zeta();
  return 1.0 + (1.0 - z * z) + (1.0 - z);
}

double expected_tests_formula(const DefectModel& model) {
  if (model.delta() >= kDeltaStar) return 1.0;
  return std::min(1.0, expected_pair_tests(model) / 2.0);
}

double SimReport::z_score() const noexcept {
  const double diff = mean_tests_per_item - formula_value;
  if (stderr_mean == 0.0) return diff == 0.0 ? 0.0 : std::copysign(INFINITY, diff);
  return diff / stderr_mean;
}

std::vector<CheckRecord> SimReport::records() const {
  char buf[128];
  std::snprintf(buf, sizeof buf, "n=%zu;delta=%.17g;trials=%zu;seed=%llu", items, delta, trials,
                static_cast<unsigned long long>(seed));
  std::vector<CheckRecord> out;
  out.push_back(make_check("simulate.decoding_errors", buf, static_cast<double>(error_count), 0.0,
                           Relation::equal, 0.0));
  out.push_back(make_check("simulate.mean_within_4se", buf,
                           std::abs(mean_tests_per_item - formula_value), 4.0 * stderr_mean,
                           Relation::less_equal, 1e-12));
  return out;
}

SimReport simulate(const SimConfig& config) {
  if (config.items == 0) throw DomainError("simulate needs n >= 1");
  if (config.trials == 0) throw DomainError("simulate needs trials >= 1");
  const DefectModel model(config.delta);

  std::vector<double> per_item(config.trials);
  std::vector<std::uint8_t> wrong(config.trials);
  detail::parallel_for(
      config.trials,
      [&](std::size_t trial) {
        auto gen = make_stream(config.seed, trial);
        const auto truth = draw_defects(config.items, model, gen);
        const auto run = run_ungar(truth, model);
        per_item[trial] = static_cast<double>(run.tests_used) / static_cast<double>(config.items);
        wrong[trial] = run.recovered != truth.defectives() ? 1 : 0;
      },
      config.workers);

  SimReport report;
  report.items = config.items;
  report.delta = config.delta;
  report.trials = config.trials;
  report.seed = config.seed;
  report.formula_value = expected_tests_formula(model);
  const double trials = static_cast<double>(config.trials);
  report.mean_tests_per_item = std::accumulate(per_item.begin(), per_item.end(), 0.0) / trials;
  if (config.trials > 1) {
    double ss = 0.0;
    for (const double v : per_item) {
      const double d = v - report.mean_tests_per_item;
      ss += d * d;
    }
    report.stderr_mean = std::sqrt(ss / (trials - 1.0) / trials);
  }
  report.error_count = static_cast<std::size_t>(std::accumulate(wrong.begin(), wrong.end(), 0));
  return report;
}

}  // namespace gtlab::adaptive

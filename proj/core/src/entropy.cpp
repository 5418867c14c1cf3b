#include "gtlab/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gtlab/errors.hpp"

namespace gtlab {

namespace {

// Below this magnitude x·log x is indistinguishable from its limit 0 and
// log(x) is at risk of underflow.
constexpr double kEntropyFloor = 1e-300;

void require_weight(std::int64_t k) {
  if (k < 1) throw DomainError("row weight k must be >= 1, got " + std::to_string(k));
}

double xlog2x(double x) { return x < kEntropyFloor ? 0.0 : x * std::log2(x); }

}  // namespace

DefectModel::DefectModel(double delta) : delta_(delta), zeta_(1.0 - delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw DomainError("defect probability must lie in (0, 1), got " + std::to_string(delta));
  }
}

double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("binary_entropy argument must lie in [0, 1], got " + std::to_string(x));
  }
  return -xlog2x(x) - xlog2x(1.0 - x);
}

double k0(const DefectModel& model) noexcept {
  return std::log(0.5) / std::log1p(-model.delta());
}

double p_dk(const DefectModel& model, std::int64_t k) {
  require_weight(k);
  if (k == 1) return 0.0;
  return 1.0 - std::pow(model.zeta(), static_cast<double>(k - 1));
}

double f_dk(const DefectModel& model, std::int64_t k, double s) {
  require_weight(k);
  if (!(s >= 0.0)) throw DomainError("multiplicity s must be >= 0");
  const double delta = model.delta();
  // 0^0 = 1: an item in no test keeps its full entropy.
  if (s == 0.0) return binary_entropy(delta);
  const double mass = delta + model.zeta() * std::pow(p_dk(model, k), s);
  return mass * binary_entropy(std::min(1.0, delta / mass));
}

double g_dk(const DefectModel& model, std::int64_t k, double rate) {
  require_weight(k);
  if (!(rate >= 0.0)) throw DomainError("rate T must be >= 0");
  const double h = binary_entropy(model.delta());
  if (k == 1) return rate * h;
  const double kd = static_cast<double>(k);
  const double test_term =
      model.zeta() * binary_entropy(std::pow(model.zeta(), kd - 1.0));
  return rate * test_term + (h - f_dk(model, k, kd * rate)) / kd;
}

double g_dk_inverse(const DefectModel& model, std::int64_t k, double target) {
  require_weight(k);
  if (!(target >= 0.0) || !std::isfinite(target)) {
    throw DomainError("entropy target must be finite and >= 0");
  }
  if (target == 0.0) return 0.0;
  if (k == 1) return target / binary_entropy(model.delta());

  double lo = 0.0;
  double hi = 1.0;
  // g grows at least linearly, so doubling terminates; the cap only guards
  // against a non-finite slope.
  for (int i = 0; i < 1100 && g_dk(model, k, hi) < target; ++i) {
    lo = hi;
    hi *= 2.0;
  }
  if (!std::isfinite(hi)) throw DomainError("could not bracket g inverse");

  double best = hi;
  double best_err = std::abs(g_dk(model, k, hi) - target);
  for (int i = 0; i < 200 && best_err > kInverseTolerance * 1e-2; ++i) {
    const double mid = std::midpoint(lo, hi);
    if (mid <= lo || mid >= hi) break;
    const double value = g_dk(model, k, mid);
    const double err = std::abs(value - target);
    if (err < best_err) {
      best = mid;
      best_err = err;
    }
    if (value < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return best;
}

}  // namespace gtlab

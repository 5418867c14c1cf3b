#include "gtlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "gtlab/errors.hpp"
#include "gtlab/parallel.hpp"

namespace gtlab::bounds {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Slack for "the main bound has reached its k = 1 cap".
constexpr double kCapSlack = 1e-9;
constexpr double kCrossoverScanStep = 0.0025;

BoundResult make(BoundKind kind, double value) {
  BoundResult r;
  r.kind = kind;
  r.value = value;
  return r;
}

}  // namespace

BoundQuery::BoundQuery(double delta, double epsilon) : model_(delta), epsilon_(epsilon) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) {
    throw DomainError("epsilon must lie in [0, 1), got " + std::to_string(epsilon));
  }
}

double BoundQuery::entropy_target() const { return binary_entropy(delta()) - epsilon_; }

std::string_view to_string(BoundKind kind) noexcept {
  switch (kind) {
    case BoundKind::counting: return "counting";
    case BoundKind::individual: return "individual";
    case BoundKind::quantization: return "quantization";
    case BoundKind::per_k: return "per_k";
    case BoundKind::main: return "main";
    case BoundKind::adaptive_rate: return "adaptive_rate";
    case BoundKind::best_lower: return "best_lower";
  }
  return "unknown";
}

BoundResult counting_bound(const BoundQuery& query) {
  return make(BoundKind::counting, std::max(0.0, query.entropy_target()));
}

BoundResult individual_testing_bound(const BoundQuery& query) {
  BoundResult r;
  r.kind = BoundKind::individual;
  r.applicable = query.delta() >= kDeltaStar;
  if (r.applicable) {
    r.value = std::max(0.0, 1.0 - query.epsilon() / binary_entropy(query.delta()));
  }
  return r;
}

QuantizationPeak quantization_peak(const DefectModel& model) {
  // H((1−δ)^k) is unimodal in k with its peak at the real k0.
  const double k_real = k0(model);
  const auto lo = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(k_real)));
  const auto hi = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(k_real)));
  QuantizationPeak best{lo, binary_entropy(std::pow(model.zeta(), static_cast<double>(lo)))};
  const double at_hi = binary_entropy(std::pow(model.zeta(), static_cast<double>(hi)));
  if (at_hi > best.entropy) best = {hi, at_hi};
  return best;
}

BoundResult quantization_bound(const BoundQuery& query) {
  const auto peak = quantization_peak(query.model());
  return make(BoundKind::quantization, std::max(0.0, query.entropy_target()) / peak.entropy);
}

BoundResult per_k_bound(const BoundQuery& query, std::int64_t k) {
  const double target = query.entropy_target();
  if (!(target > 0.0)) {
    throw DegenerateTarget("epsilon >= H(delta): the per-k bound is vacuous");
  }
  BoundResult r = make(BoundKind::per_k, g_dk_inverse(query.model(), k, target));
  r.argmin_k = k;
  return r;
}

double per_k_envelope(const BoundQuery& query, std::int64_t k) {
  if (k < 1) throw DomainError("row weight k must be >= 1");
  const double h = binary_entropy(query.delta());
  const double kd = static_cast<double>(k);
  const double numerator = query.entropy_target() - h / kd;
  if (k == 1) return numerator > 0.0 ? kInf : -kInf;
  const double slope = query.model().zeta() * binary_entropy(std::pow(query.model().zeta(), kd - 1.0));
  if (slope <= 0.0) return numerator > 0.0 ? kInf : -kInf;
  return numerator / slope;
}

BoundResult main_bound(const BoundQuery& query) {
  if (!(query.entropy_target() > 0.0)) {
    throw DegenerateTarget("epsilon >= H(delta): the main bound is vacuous");
  }
  const auto k_ceil = static_cast<std::int64_t>(std::ceil(k0(query.model())));
  // The envelope is increasing in k once k − 1 >= k0 + 1.
  const std::int64_t certify_from = k_ceil + 2;
  const std::int64_t ceiling = 10 * k_ceil + 50;

  BoundResult r;
  r.kind = BoundKind::main;
  r.certified = false;
  double best = kInf;
  std::int64_t best_k = 1;
  std::int64_t k = 1;
  for (; k <= ceiling; ++k) {
    if (k >= certify_from && per_k_envelope(query, k) > best) {
      r.certified = true;
      break;
    }
    const double value = per_k_bound(query, k).value.value();
    if (value < best) {
      best = value;
      best_k = k;
    }
  }
  r.value = best;
  r.argmin_k = best_k;
  r.k_scan_limit = std::min(k, ceiling);
  return r;
}

BoundResult adaptive_rate(const DefectModel& model) {
  // ζ + ζ² = 2 at δ*; rounding must not leave the capped value a hair below 1.
  if (model.delta() >= kDeltaStar) return make(BoundKind::adaptive_rate, 1.0);
  const double z = model.zeta();
  return make(BoundKind::adaptive_rate, std::min(1.0, (3.0 - z - z * z) / 2.0));
}

BoundResult best_lower_bound(const BoundQuery& query) {
  double best = std::max(counting_bound(query).value.value(), quantization_bound(query).value.value());
  if (const auto ind = individual_testing_bound(query); ind.applicable) {
    best = std::max(best, ind.value.value());
  }
  if (query.entropy_target() > 0.0) best = std::max(best, main_bound(query).value.value());
  return make(BoundKind::best_lower, best);
}

bool individual_testing_forced(const BoundQuery& query) {
  if (!(query.entropy_target() > 0.0)) return false;
  const double cap = per_k_bound(query, 1).value.value();
  return main_bound(query).value.value() >= cap - kCapSlack;
}

double crossover_delta(double epsilon, double tolerance) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in [0, 1)");
  if (!(tolerance > 0.0)) throw DomainError("tolerance must be positive");
  const auto qualifies = [epsilon](double delta) {
    return individual_testing_forced(BoundQuery(delta, epsilon));
  };

  // Bracket the switch on a grid: lo fails, hi qualifies.
  const auto steps = static_cast<int>(std::lround(0.5 / kCrossoverScanStep));
  double lo = 0.0;
  double hi = -1.0;
  for (int i = 1; i <= steps; ++i) {
    const double delta = i == steps ? 0.5 : i * kCrossoverScanStep;
    if (qualifies(delta)) {
      hi = delta;
      break;
    }
    lo = delta;
  }
  if (hi < 0.0) throw NotFound("main bound never reaches its k = 1 cap on (0, 0.5]");
  if (lo == 0.0) lo = hi * 1e-3;  // no information below the first grid point

  while (hi - lo > tolerance) {
    const double mid = std::midpoint(lo, hi);
    if (qualifies(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

std::optional<GapInterval> adaptivity_gap(double epsilon) {
  double lo = 0.0;
  try {
    lo = crossover_delta(epsilon);
  } catch (const NotFound&) {
    return std::nullopt;
  }
  if (lo >= kDeltaStar) return std::nullopt;
  if (epsilon == 0.0) return GapInterval{lo, kDeltaStar};

  // With ε > 0 the individual-testing cap 1 − ε/H(δ) sits below 1, so the
  // adaptive curve overtakes it before δ*.
  const auto margin = [epsilon](double delta) {
    return adaptive_rate(DefectModel(delta)).value.value() -
           best_lower_bound(BoundQuery(delta, epsilon)).value.value();
  };
  if (margin(lo) >= 0.0) return std::nullopt;
  double a = lo;
  double b = kDeltaStar;
  while (b - a > 1e-9) {
    const double mid = std::midpoint(a, b);
    if (margin(mid) < 0.0) {
      a = mid;
    } else {
      b = mid;
    }
  }
  if (lo >= a) return std::nullopt;
  return GapInterval{lo, a};
}

CurveRow evaluate_row(double delta, double epsilon) {
  CurveRow row;
  row.delta = delta;
  row.epsilon = epsilon;
  try {
    const BoundQuery query(delta, epsilon);
    row.counting = counting_bound(query).value.value();
    row.quantization = quantization_bound(query).value.value();
    if (const auto ind = individual_testing_bound(query); ind.applicable) {
      row.individual = ind.value;
    }
    row.adaptive_rate = adaptive_rate(query.model()).value.value();
    row.best_lower = std::max(row.counting, row.quantization);
    if (row.individual) row.best_lower = std::max(row.best_lower, *row.individual);

    if (query.entropy_target() > 0.0) {
      const auto main = main_bound(query);
      row.main = main.value;
      row.main_argmin_k = main.argmin_k;
      row.best_lower = std::max(row.best_lower, *row.main);
      const double cap = per_k_bound(query, 1).value.value();
      const bool forced = *row.main >= cap - kCapSlack;
      row.adaptive_below_main = row.adaptive_rate < *row.main;
      row.gap_flag = forced && row.adaptive_rate < row.best_lower;
    } else {
      row.vacuous = true;
      row.main = 0.0;
    }
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

std::vector<CurveRow> sweep(std::span<const double> delta_grid, double epsilon, unsigned workers) {
  std::vector<CurveRow> rows(delta_grid.size());
  detail::parallel_for(
      delta_grid.size(), [&](std::size_t i) { rows[i] = evaluate_row(delta_grid[i], epsilon); },
      workers);
  return rows;
}

namespace {

double simplex_objective(const DefectModel& model, double rate, std::span<const double> weights) {
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    total += g_dk(model, static_cast<std::int64_t>(i + 1), weights[i] * rate);
  }
  return total;
}

// Maximizes a concave φ on [0, width]: grid scan, then golden section on the
// two cells around the best grid point.
template <typename Fn>
double maximize_on_segment(Fn&& phi, double width, std::int64_t resolution) {
  std::int64_t best_i = 0;
  double best = phi(0.0);
  for (std::int64_t i = 1; i <= resolution; ++i) {
    const double v = phi(width * static_cast<double>(i) / static_cast<double>(resolution));
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  const double cell = width / static_cast<double>(resolution);
  double a = std::max(0.0, (static_cast<double>(best_i) - 1.0) * cell);
  double b = std::min(width, (static_cast<double>(best_i) + 1.0) * cell);
  constexpr double kInvPhi = 0.6180339887498949;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = phi(c);
  double fd = phi(d);
  for (int it = 0; it < 100 && b - a > 1e-15 * std::max(1.0, width); ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = phi(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = phi(d);
    }
  }
  const double x = std::midpoint(a, b);
  return phi(x) >= best ? x : width * static_cast<double>(best_i) / static_cast<double>(resolution);
}

}  // namespace

SimplexProbe simplex_probe(const DefectModel& model, double rate, std::int64_t kmax,
                           std::int64_t resolution) {
  if (kmax < 1) throw DomainError("kmax must be >= 1");
  if (resolution < 10) throw DomainError("resolution must be >= 10");
  if (!(rate >= 0.0) || !std::isfinite(rate)) throw DomainError("rate must be finite and >= 0");

  SimplexProbe probe;
  probe.vertex_max = -kInf;
  for (std::int64_t k = 1; k <= kmax; ++k) {
    const double v = g_dk(model, k, rate);
    if (v > probe.vertex_max) {
      probe.vertex_max = v;
      probe.vertex_argmax = k;
    }
  }

  // Start from the best vertex and only accept improving moves, so the
  // result can never fall below the vertex maximum.
  std::vector<double> alpha(static_cast<std::size_t>(kmax), 0.0);
  alpha[static_cast<std::size_t>(probe.vertex_argmax - 1)] = 1.0;
  double current = probe.vertex_max;

  for (int pass = 0; pass < 200; ++pass) {
    const double before = current;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      for (std::size_t j = i + 1; j < alpha.size(); ++j) {
        const double width = alpha[i] + alpha[j];
        if (width <= 0.0) continue;
        const auto ki = static_cast<std::int64_t>(i + 1);
        const auto kj = static_cast<std::int64_t>(j + 1);
        const auto phi = [&](double x) {
          return g_dk(model, ki, x * rate) + g_dk(model, kj, std::max(0.0, width - x) * rate);
        };
        const double old_pair = phi(alpha[i]);
        const double x = maximize_on_segment(phi, width, resolution);
        const double new_pair = phi(x);
        if (new_pair > old_pair) {
          alpha[i] = x;
          alpha[j] = std::max(0.0, width - x);
          current = simplex_objective(model, rate, alpha);
        }
      }
    }
    if (current - before < 1e-14) break;
  }

  probe.simplex_max = std::max(current, probe.vertex_max);
  probe.gap = probe.simplex_max - probe.vertex_max;
  probe.weights = std::move(alpha);
  return probe;
}

}  // namespace gtlab::bounds

#pragma once

// Converse bounds on the rate t/n of non-adaptive group testing under the
// i.i.d. Bernoulli defect model, the zero-error adaptive rate they are
// compared against, and the derived quantities (t/n = 1 crossover,
// adaptivity gap, curve sweeps).

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gtlab/entropy.hpp"

namespace gtlab::bounds {

/// Defect probability together with the tolerated decoding-error
/// probability ε ∈ [0, 1).
class BoundQuery {
 public:
  /// Throws DomainError unless 0 < delta < 1 and 0 <= epsilon < 1.
  BoundQuery(double delta, double epsilon);

  double delta() const noexcept { return model_.delta(); }
  double epsilon() const noexcept { return epsilon_; }
  const DefectModel& model() const noexcept { return model_; }

  /// H(δ) − ε, the per-item entropy the tests must carry.
  double entropy_target() const;

 private:
  DefectModel model_;
  double epsilon_;
};

enum class BoundKind { counting, individual, quantization, per_k, main, adaptive_rate, best_lower };

std::string_view to_string(BoundKind kind) noexcept;

struct BoundResult {
  BoundKind kind = BoundKind::counting;
  /// Rate t/n. Absent only when the bound is not applicable.
  std::optional<double> value;
  /// Minimizing row weight (per_k, main).
  std::optional<std::int64_t> argmin_k;
  /// Largest row weight examined by the main-bound scan.
  std::optional<std::int64_t> k_scan_limit;
  /// Whether the main-bound scan stopped on its envelope certificate rather
  /// than the safety ceiling.
  bool certified = true;
  bool applicable = true;
  /// ε >= H(δ): the bound carries no information and is reported as 0.
  bool vacuous = false;
};

/// max(0, H(δ) − ε).
BoundResult counting_bound(const BoundQuery& query);

/// 1 − ε/H(δ), valid only for δ >= δ*; otherwise applicable = false.
BoundResult individual_testing_bound(const BoundQuery& query);

/// max(0, H(δ) − ε) / max_k H((1−δ)^k), the maximizer being one of the two
/// integers adjacent to k0(δ).
BoundResult quantization_bound(const BoundQuery& query);

/// Integer row weight maximizing H((1−δ)^k) and the maximum itself.
struct QuantizationPeak {
  std::int64_t k;
  double entropy;
};
QuantizationPeak quantization_peak(const DefectModel& model);

/// g_{δ,k}^{-1}(H(δ) − ε). Throws DegenerateTarget when ε >= H(δ).
BoundResult per_k_bound(const BoundQuery& query, std::int64_t k);

/// min over k >= 1 of per_k_bound. The scan over k stops once the linear
/// envelope (H(δ) − ε − H(δ)/k) / ((1−δ)H((1−δ)^(k−1))), a lower bound on
/// every later per-k value, exceeds the best value found. Throws
/// DegenerateTarget when ε >= H(δ).
BoundResult main_bound(const BoundQuery& query);

/// Lower envelope of per_k_bound(query, k) used to certify the main scan.
double per_k_envelope(const BoundQuery& query, std::int64_t k);

/// Expected tests per item of the pairing algorithm, min(1, (3 − ζ − ζ²)/2).
BoundResult adaptive_rate(const DefectModel& model);

/// max of counting, quantization, individual (when applicable) and main
/// (0 when vacuous).
BoundResult best_lower_bound(const BoundQuery& query);

/// True when the k = 1 term is the active minimizer of the main bound, i.e.
/// non-adaptive designs are forced to individual testing.
bool individual_testing_forced(const BoundQuery& query);

/// Smallest δ in (0, 0.5] at which the main bound reaches its k = 1 cap
/// (for ε = 0: main >= 1 − 1e−9). Bisection to `tolerance` after a grid
/// scan that brackets the switch. Throws NotFound if no δ qualifies.
double crossover_delta(double epsilon, double tolerance = 1e-5);

struct GapInterval {
  double lo;
  double hi;
};

/// Open δ-interval on which zero-error adaptive testing beats every
/// non-adaptive scheme that the bounds allow. For ε = 0 this is
/// (crossover_delta(0), δ*). nullopt when the interval is empty.
std::optional<GapInterval> adaptivity_gap(double epsilon);

/// One point of the bound curves.
struct CurveRow {
  double delta = 0.0;
  double epsilon = 0.0;
  double counting = 0.0;
  double quantization = 0.0;
  std::optional<double> individual;
  std::optional<double> main;
  std::optional<std::int64_t> main_argmin_k;
  double adaptive_rate = 0.0;
  double best_lower = 0.0;
  /// adaptive_rate < best_lower while non-adaptive designs are forced to
  /// individual testing.
  bool gap_flag = false;
  /// adaptive_rate < main, regardless of which k is active.
  bool adaptive_below_main = false;
  bool vacuous = false;
  /// Non-empty when the row could not be evaluated.
  std::string error;
};

CurveRow evaluate_row(double delta, double epsilon);

/// One CurveRow per grid value, in grid order. Rows are evaluated
/// independently on up to `workers` threads (0 = hardware concurrency);
/// per-row failures are recorded in CurveRow::error.
std::vector<CurveRow> sweep(std::span<const double> delta_grid, double epsilon,
                            unsigned workers = 0);

struct SimplexProbe {
  /// max over k <= kmax of g_{δ,k}(T).
  double vertex_max = 0.0;
  std::int64_t vertex_argmax = 1;
  /// max of Σ_k g_{δ,k}(α_k T) over the probability simplex on k = 1..kmax.
  double simplex_max = 0.0;
  double gap = 0.0;
  /// Maximizing α, index 0 ↔ k = 1.
  std::vector<double> weights;
};

/// Compares the vertex maximum with a numerical maximum over the whole
/// simplex (pairwise coordinate ascent with grid-then-golden-section line
/// searches of `resolution` grid points). Throws DomainError unless
/// kmax >= 1, resolution >= 10 and rate >= 0.
SimplexProbe simplex_probe(const DefectModel& model, double rate, std::int64_t kmax,
                           std::int64_t resolution);

}  // namespace gtlab::bounds

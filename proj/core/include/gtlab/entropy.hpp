#pragma once

// Scalar function family for the converse bounds: binary entropy, the
// unbiased row weight k0, and the per-weight functions p, f and g together
// with a certified inverse of g in its rate argument.
//
// All logarithms are base 2.

#include <cstdint>

namespace gtlab {

/// Golden-ratio cutoff (3 − √5)/2 beyond which individual testing is optimal.
inline constexpr double kDeltaStar = 0.38196601125010515179541316563436;

/// Each item is defective independently with probability delta.
class DefectModel {
 public:
  /// Throws DomainError unless 0 < delta < 1.
  explicit DefectModel(double delta);

  double delta() const noexcept { return delta_; }
  double zeta() const noexcept { return zeta_; }

 private:
  double delta_;
  double zeta_;
};

/// H(x) = −x log x − (1−x) log(1−x), with H(0) = H(1) = 0.
/// Throws DomainError for x outside [0, 1].
double binary_entropy(double x);

/// Real row weight k with (1−δ)^k = 1/2.
double k0(const DefectModel& model) noexcept;

/// p_{δ,k} = 1 − (1−δ)^(k−1); the probability that k−1 items hold a defective.
double p_dk(const DefectModel& model, std::int64_t k);

/// f_{δ,k}(s) = m·H(δ/m) with m = δ + (1−δ)·p^s and 0⁰ = 1, so f(0) = H(δ).
/// Lower bound on H(X | Y_S) for an item shared by s weight-k tests.
double f_dk(const DefectModel& model, std::int64_t k, double s);

/// g_{δ,k}(T) = T(1−δ)H((1−δ)^(k−1)) + (H(δ) − f_{δ,k}(kT))/k for k ≥ 2 and
/// g_{δ,1}(T) = T·H(δ). Per-item entropy ceiling for weight-k designs at
/// rate T = t/n. Continuous, strictly increasing, concave, g(0) = 0.
double g_dk(const DefectModel& model, std::int64_t k, double rate);

/// Absolute tolerance on |g(T) − y| guaranteed by g_dk_inverse.
inline constexpr double kInverseTolerance = 1e-10;

/// The unique T ≥ 0 with g_{δ,k}(T) = y, by doubling a bracket from T = 1
/// and bisecting. Throws DomainError for y < 0 or non-finite y.
double g_dk_inverse(const DefectModel& model, std::int64_t k, double target);

}  // namespace gtlab

#pragma once

// Line-oriented check records shared by the oracle suite and the simulator:
//
//   CHECK <name>[<digest>] lhs=<v> rhs=<v> slack=<v> PASS|FAIL

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

namespace gtlab {

enum class Relation { equal, less_equal, greater_equal };

struct CheckRecord {
  std::string name;
  /// 16 hex digits identifying the inputs of the check.
  std::string digest;
  double lhs = 0.0;
  double rhs = 0.0;
  Relation relation = Relation::equal;
  double tolerance = 0.0;

  /// Margin by which the relation holds: rhs − lhs for <=, lhs − rhs for
  /// >=, −|lhs − rhs| for equality. Negative beyond the tolerance is a failure.
  double slack() const noexcept;
  bool passed() const noexcept;
};

/// FNV-1a 64 of a canonical input description, as 16 hex digits.
std::string input_digest(std::string_view canonical);

CheckRecord make_check(std::string name, std::string_view canonical_inputs, double lhs,
                       double rhs, Relation relation, double tolerance);

std::string format_record(const CheckRecord& record);

/// Writes one line per record; returns the number of failures. With
/// failures_only, passing records are not written.
std::size_t write_records(std::ostream& out, std::span<const CheckRecord> records,
                          bool failures_only = false);

}  // namespace gtlab

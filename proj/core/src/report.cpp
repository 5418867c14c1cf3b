#include "gtlab/report.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>

namespace gtlab {

double CheckRecord::slack() const noexcept {
  switch (relation) {
    case Relation::less_equal: return rhs - lhs;
    case Relation::greater_equal: return lhs - rhs;
    case Relation::equal: return -std::abs(lhs - rhs);
  }
  return 0.0;
}

bool CheckRecord::passed() const noexcept {
  const double s = slack();
  return std::isfinite(s) && s >= -tolerance;
}

std::string input_digest(std::string_view canonical) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const unsigned char c : canonical) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

CheckRecord make_check(std::string name, std::string_view canonical_inputs, double lhs,
                       double rhs, Relation relation, double tolerance) {
  return CheckRecord{std::move(name), input_digest(canonical_inputs), lhs, rhs, relation, tolerance};
}

std::string format_record(const CheckRecord& record) {
  char values[160];
  std::snprintf(values, sizeof values, " lhs=%.15g rhs=%.15g slack=%.6g ", record.lhs, record.rhs,
                record.slack() + 0.0);
  std::string line = "CHECK " + record.name + "[" + record.digest + "]" + values;
  line += record.passed() ? "PASS" : "FAIL";
  return line;
}

std::size_t write_records(std::ostream& out, std::span<const CheckRecord> records,
                          bool failures_only) {
  std::size_t failures = 0;
  for (const auto& r : records) {
    const bool ok = r.passed();
    if (!ok) ++failures;
    if (!ok || !failures_only) out << format_record(r) << '\n';
  }
  return failures;
}

}  // namespace gtlab

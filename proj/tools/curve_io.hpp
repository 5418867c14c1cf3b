#pragma once

#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "gtlab/bounds.hpp"

namespace gtlab::cli {

inline constexpr std::string_view kCsvHeader =
    "delta,epsilon,counting,quantization,individual,main,main_argmin_k,adaptive_rate,best_lower,"
    "gap_flag";

/// Evenly spaced grid min, min + step, ... up to max (inclusive within a
/// relative 1e−9 of a step). Throws DomainError on step <= 0, min > max or
/// values outside (0, 1).
std::vector<double> make_grid(double min, double max, double step);

/// Header plus one line per row; 9 significant digits, NA for absent values.
void write_csv(std::ostream& out, std::span<const bounds::CurveRow> rows);

/// Self-contained SVG line chart of the curve columns against δ, t/n
/// clipped to [0, 1.05].
void write_svg(std::ostream& out, std::span<const bounds::CurveRow> rows);

}  // namespace gtlab::cli

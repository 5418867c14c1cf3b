#include "curve_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <ostream>
#include <string>

#include "gtlab/errors.hpp"

namespace gtlab::cli {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string num(const std::optional<double>& v) { return v ? num(*v) : "NA"; }

std::string fixed(double v, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

struct Series {
  const char* name;
  const char* color;
  const char* dash;
  std::function<std::optional<double>(const bounds::CurveRow&)> value;
};

}  // namespace

std::vector<double> make_grid(double min, double max, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw DomainError("grid step must be positive");
  if (!(min <= max)) throw DomainError("grid min must not exceed max");
  if (!(min > 0.0 && max < 1.0)) throw DomainError("grid values must lie in (0, 1)");
  const double span = (max - min) / step;
  const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
  if (count > 10'000'000) throw DomainError("grid too large");
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) grid[i] = min + static_cast<double>(i) * step;
  return grid;
}

void write_csv(std::ostream& out, std::span<const bounds::CurveRow> rows) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << num(r.delta) << ',' << num(r.epsilon) << ',';
    if (!r.error.empty()) {
      out << "NA,NA,NA,NA,NA,NA,NA,NA\n";
      continue;
    }
    out << num(r.counting) << ',' << num(r.quantization) << ',' << num(r.individual) << ','
        << num(r.main) << ',' << (r.main_argmin_k ? std::to_string(*r.main_argmin_k) : "NA") << ','
        << num(r.adaptive_rate) << ',' << num(r.best_lower) << ','
        << (r.gap_flag ? "true" : "false") << '\n';
  }
}

void write_svg(std::ostream& out, std::span<const bounds::CurveRow> rows) {
  constexpr double kWidth = 800, kHeight = 520;
  constexpr double kLeft = 70, kRight = 190, kTop = 30, kBottom = 60;
  constexpr double kYMax = 1.05;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;

  double x_min = rows.empty() ? 0.0 : rows.front().delta;
  double x_max = rows.empty() ? 0.5 : rows.back().delta;
  if (x_max <= x_min) {
    x_min -= 0.01;
    x_max += 0.01;
  }
  const auto px = [&](double d) { return kLeft + (d - x_min) / (x_max - x_min) * plot_w; };
  const auto py = [&](double v) {
    return kTop + (1.0 - std::clamp(v, 0.0, kYMax) / kYMax) * plot_h;
  };

  const Series series[] = {
      {"counting", "#1b9e77", "6,3", [](const auto& r) { return std::optional<double>(r.counting); }},
      {"quantization", "#d01c8b", "none", [](const auto& r) { return std::optional<double>(r.quantization); }},
      {"individual", "#7570b3", "2,2", [](const auto& r) { return r.individual; }},
      {"main", "#e31a1c", "none", [](const auto& r) { return r.main; }},
      {"adaptive_rate", "#1f78b4", "none", [](const auto& r) { return std::optional<double>(r.adaptive_rate); }},
      {"best_lower", "#333333", "1,3", [](const auto& r) { return std::optional<double>(r.best_lower); }},
  };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // Axes, ticks and grid lines.
  out << "<g stroke=\"#000\" stroke-width=\"1\">\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << kLeft + plot_w << "\" y2=\""
      << kTop + plot_h << "\"/>\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kTop + plot_h
      << "\"/>\n</g>\n";
  for (int i = 0; i <= 5; ++i) {
    const double d = x_min + (x_max - x_min) * i / 5.0;
    out << "<line x1=\"" << fixed(px(d), 2) << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << fixed(px(d), 2)
        << "\" y2=\"" << kTop + plot_h + 5 << "\" stroke=\"#000\"/>\n"
        << "<text x=\"" << fixed(px(d), 2) << "\" y=\"" << kTop + plot_h + 20
        << "\" text-anchor=\"middle\">" << fixed(d, 3) << "</text>\n";
  }
  for (int i = 0; i <= 7; ++i) {
    const double v = 0.15 * i;
    out << "<line x1=\"" << kLeft << "\" y1=\"" << fixed(py(v), 2) << "\" x2=\"" << kLeft + plot_w
        << "\" y2=\"" << fixed(py(v), 2) << "\" stroke=\"#ddd\"/>\n"
        << "<text x=\"" << kLeft - 8 << "\" y=\"" << fixed(py(v) + 4, 2) << "\" text-anchor=\"end\">"
        << fixed(v, 2) << "</text>\n";
  }
  out << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 15
      << "\" text-anchor=\"middle\">delta</text>\n"
      << "<text x=\"18\" y=\"" << kTop + plot_h / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << kTop + plot_h / 2 << ")\">t/n</text>\n";

  // One polyline per contiguous run of defined values.
  for (const auto& s : series) {
    out << "<g fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.8\"";
    if (std::string_view(s.dash) != "none") out << " stroke-dasharray=\"" << s.dash << "\"";
    out << ">\n";
    std::string points;
    const auto flush = [&] {
      if (!points.empty()) out << "<polyline points=\"" << points << "\"/>\n";
      points.clear();
    };
    for (const auto& r : rows) {
      const auto v = r.error.empty() ? s.value(r) : std::nullopt;
      if (!v) {
        flush();
        continue;
      }
      if (!points.empty()) points += ' ';
      points += fixed(px(r.delta), 2) + "," + fixed(py(*v), 2);
    }
    flush();
    out << "</g>\n";
  }

  // Legend.
  const double lx = kLeft + plot_w + 20;
  double ly = kTop + 10;
  for (const auto& s : series) {
    out << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 30 << "\" y2=\"" << ly
        << "\" stroke=\"" << s.color << "\" stroke-width=\"1.8\"";
    if (std::string_view(s.dash) != "none") out << " stroke-dasharray=\"" << s.dash << "\"";
    out << "/>\n<text x=\"" << lx + 38 << "\" y=\"" << ly + 4 << "\">" << s.name << "</text>\n";
    ly += 22;
  }
  out << "</svg>\n";
}

}  // namespace gtlab::cli

#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "curve_io.hpp"
#include "gtlab/adaptive.hpp"
#include "gtlab/bounds.hpp"
#include "gtlab/errors.hpp"
#include "gtlab/oracle.hpp"
#include "gtlab/report.hpp"

namespace gtlab::cli {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string fixed5(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5f", v);
  return buf;
}

std::optional<std::uint64_t> env_seed() {
  const char* env = std::getenv(kSeedEnv);
  if (env == nullptr || *env == '\0') return std::nullopt;
  try {
    return std::stoull(env);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

struct BoundArgs {
  double delta = 0.2;
  double epsilon = 0.0;
};

struct SweepArgs {
  double min = 0.01;
  double max = 0.5;
  double step = 0.001;
  double epsilon = 0.0;
  std::string out;
  std::string format = "csv";
  unsigned workers = 0;
};

struct VerifyArgs {
  std::size_t max_n = 12;
  std::size_t fuzz_cases = 500;
  std::uint64_t seed = 20170417;
  double tolerance = 1e-12;
  bool failures_only = false;
  unsigned workers = 0;
};

struct SimulateArgs {
  std::size_t n = 1000;
  double delta = 0.2;
  std::size_t trials = 400;
  std::uint64_t seed = 7;
  unsigned workers = 0;
};

struct GapArgs {
  double epsilon = 0.0;
};

struct ProbeArgs {
  double delta = 0.3;
  double rate = 1.0;
  std::int64_t kmax = 6;
  std::int64_t resolution = 200;
};

int cmd_bound(const BoundArgs& a, std::ostream& out) {
  const bounds::BoundQuery q(a.delta, a.epsilon);
  out << "delta=" << num(a.delta) << " epsilon=" << num(a.epsilon) << '\n';
  out << "counting " << num(*bounds::counting_bound(q).value) << '\n';
  const auto peak = bounds::quantization_peak(q.model());
  out << "quantization " << num(*bounds::quantization_bound(q).value) << " peak_k=" << peak.k << '\n';
  const auto ind = bounds::individual_testing_bound(q);
  out << "individual " << (ind.applicable ? num(*ind.value) : "NA") << " applicable="
      << (ind.applicable ? "true" : "false") << '\n';
  if (q.entropy_target() > 0.0) {
    const auto main = bounds::main_bound(q);
    out << "main " << num(*main.value) << " argmin_k=" << *main.argmin_k
        << " k_scan_limit=" << *main.k_scan_limit << " certified=" << (main.certified ? "true" : "false")
        << '\n';
  } else {
    out << "main 0 vacuous=true\n";
  }
  const auto row = bounds::evaluate_row(a.delta, a.epsilon);
  out << "best_lower " << num(row.best_lower) << '\n';
  out << "adaptive_rate " << num(row.adaptive_rate) << '\n';
  out << "adaptive_below_main " << (row.adaptive_below_main ? "true" : "false") << '\n';
  out << "gap_flag " << (row.gap_flag ? "true" : "false") << '\n';
  return kOk;
}

int cmd_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
  const auto grid = make_grid(a.min, a.max, a.step);
  const auto rows = bounds::sweep(grid, a.epsilon, a.workers);

  if (a.out.empty()) {
    if (a.format == "svg") {
      write_svg(out, rows);
    } else {
      write_csv(out, rows);
    }
    return kOk;
  }

  const auto write_file = [&](const std::filesystem::path& path, auto&& writer) {
    std::ofstream file(path, std::ios::binary);
    if (!file) {
      err << "error: cannot open " << path.string() << " for writing\n";
      return false;
    }
    writer(file);
    file.flush();
    if (!file) {
      err << "error: failed writing " << path.string() << '\n';
      return false;
    }
    return true;
  };

  const std::filesystem::path csv_path(a.out);
  if (!write_file(csv_path, [&](std::ostream& f) { write_csv(f, rows); })) return kIoError;
  out << "wrote " << rows.size() << " rows to " << csv_path.string() << '\n';
  if (a.format == "svg") {
    auto svg_path = csv_path;
    svg_path.replace_extension(".svg");
    if (!write_file(svg_path, [&](std::ostream& f) { write_svg(f, rows); })) return kIoError;
    out << "wrote chart to " << svg_path.string() << '\n';
  }
  return kOk;
}

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  oracle::SuiteConfig cfg;
  cfg.max_items = a.max_n;
  cfg.fuzz_cases = a.fuzz_cases;
  cfg.seed = a.seed;
  cfg.tolerance = a.tolerance;
  cfg.workers = a.workers;
  const auto records = oracle::run_suite(cfg);
  const auto failures = write_records(out, records, a.failures_only);
  out << "SUMMARY checks=" << records.size() << " failed=" << failures << '\n';
  return failures == 0 ? kOk : kVerifyFailed;
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  adaptive::SimConfig cfg;
  cfg.items = a.n;
  cfg.delta = a.delta;
  cfg.trials = a.trials;
  cfg.seed = a.seed;
  cfg.workers = a.workers;
  const auto r = adaptive::simulate(cfg);
  out << "n=" << r.items << " delta=" << num(r.delta) << " trials=" << r.trials << " seed=" << r.seed
      << '\n'
      << "mean_tests_per_item " << num(r.mean_tests_per_item) << '\n'
      << "stderr " << num(r.stderr_mean) << '\n'
      << "formula_value " << num(r.formula_value) << '\n'
      << "z_score " << num(r.z_score()) << '\n'
      << "error_count " << r.error_count << '\n';
  write_records(out, r.records());
  return kOk;
}

int cmd_gap(const GapArgs& a, std::ostream& out) {
  const auto gap = bounds::adaptivity_gap(a.epsilon);
  if (!gap) {
    out << "empty interval: no adaptivity gap at epsilon=" << num(a.epsilon) << '\n';
    return kOk;
  }
  out << "delta_lo=" << fixed5(gap->lo) << " delta_hi=" << fixed5(gap->hi) << '\n';
  return kOk;
}

int cmd_probe(const ProbeArgs& a, std::ostream& out) {
  const auto p = bounds::simplex_probe(DefectModel(a.delta), a.rate, a.kmax, a.resolution);
  out << "vertex_max " << num(p.vertex_max) << " k=" << p.vertex_argmax << '\n'
      << "simplex_max " << num(p.simplex_max) << '\n'
      << "gap " << num(p.gap) << '\n'
      << "weights";
  for (std::size_t i = 0; i < p.weights.size(); ++i) out << (i == 0 ? " " : ",") << num(p.weights[i]);
  out << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Group-testing converse bounds: evaluation, sweeps, oracles and simulation", "gtlab"};
  app.require_subcommand(1);

  BoundArgs bound;
  auto* bound_cmd = app.add_subcommand("bound", "Evaluate every bound at one (delta, epsilon)");
  bound_cmd->add_option("--delta", bound.delta, "Defect probability")->required()->check(CLI::Range(0.0, 1.0));
  bound_cmd->add_option("--epsilon", bound.epsilon, "Tolerated error probability")
      ->check(CLI::Range(0.0, 1.0));

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep a delta grid into CSV (and optionally SVG)");
  sweep_cmd->add_option("--min", sweep.min, "First grid value")->check(CLI::Range(0.0, 1.0));
  sweep_cmd->add_option("--max", sweep.max, "Last grid value")->check(CLI::Range(0.0, 1.0));
  sweep_cmd->add_option("--step", sweep.step, "Grid step")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--epsilon", sweep.epsilon, "Tolerated error probability")
      ->check(CLI::Range(0.0, 1.0));
  sweep_cmd->add_option("--out", sweep.out, "CSV output path (stdout when omitted)");
  sweep_cmd->add_option("--format", sweep.format, "csv, or svg to also write <out>.svg")
      ->check(CLI::IsMember({"csv", "svg"}));
  sweep_cmd->add_option("--workers", sweep.workers, "Worker threads (0 = all cores)");

  VerifyArgs verify;
  verify.seed = env_seed().value_or(verify.seed);
  auto* verify_cmd = app.add_subcommand("verify", "Run the exact oracle suite");
  verify_cmd->add_option("--max-n", verify.max_n, "Largest item count used by any instance")
      ->check(CLI::Range(std::size_t{1}, oracle::kMaxEnumerationItems));
  verify_cmd->add_option("--fuzz-cases", verify.fuzz_cases, "Random matrices in the fuzz corpus")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1'000'000}));
  verify_cmd->add_option("--seed", verify.seed, "Master seed for the fuzz corpora");
  verify_cmd->add_option("--tolerance", verify.tolerance, "Absolute tolerance of every check")
      ->check(CLI::NonNegativeNumber);
  verify_cmd->add_flag("--failures-only", verify.failures_only, "Print failing records only");
  verify_cmd->add_option("--workers", verify.workers, "Worker threads (0 = all cores)");

  SimulateArgs sim;
  sim.seed = env_seed().value_or(sim.seed);
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo run of the adaptive pairing algorithm");
  sim_cmd->add_option("--n", sim.n, "Items per trial")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--delta", sim.delta, "Defect probability")->check(CLI::Range(0.0, 1.0));
  sim_cmd->add_option("--trials", sim.trials, "Number of trials")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--seed", sim.seed, std::string("Master seed (default from ") + kSeedEnv + ", else 7)");
  sim_cmd->add_option("--workers", sim.workers, "Worker threads (0 = all cores)");

  GapArgs gap;
  auto* gap_cmd = app.add_subcommand("gap", "Adaptivity-gap interval");
  gap_cmd->add_option("--epsilon", gap.epsilon, "Tolerated error probability")->check(CLI::Range(0.0, 1.0));

  ProbeArgs probe;
  auto* probe_cmd = app.add_subcommand("probe", "Vertex vs simplex maximum of the per-weight entropy sum");
  probe_cmd->add_option("--delta", probe.delta, "Defect probability")->check(CLI::Range(0.0, 1.0));
  probe_cmd->add_option("--T", probe.rate, "Rate t/n")->check(CLI::NonNegativeNumber);
  probe_cmd->add_option("--kmax", probe.kmax, "Largest row weight")->check(CLI::PositiveNumber);
  probe_cmd->add_option("--resolution", probe.resolution, "Line-search grid points (>= 10)")
      ->check(CLI::Range(std::int64_t{10}, std::int64_t{1'000'000}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return kUsage;
  }

  try {
    if (*bound_cmd) return cmd_bound(bound, out);
    if (*sweep_cmd) return cmd_sweep(sweep, out, err);
    if (*verify_cmd) return cmd_verify(verify, out);
    if (*sim_cmd) return cmd_simulate(sim, out);
    if (*gap_cmd) return cmd_gap(gap, out);
    if (*probe_cmd) return cmd_probe(probe, out);
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DegenerateTarget& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const SizeError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const StructureError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  }
  err << app.help();
  return kUsage;
}

}  // namespace gtlab::cli

#include "nntlab/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "nntlab/locallimit.hpp"
#include "nntlab/parallel.hpp"
#include "nntlab/quadrature.hpp"
#include "nntlab/rng.hpp"
#include "nntlab/simulate.hpp"
#include "nntlab/spaces.hpp"
#include "nntlab/verify.hpp"

#ifndef NNTLAB_VERSION
#define NNTLAB_VERSION "0.0.0"
#endif

namespace nntlab {

namespace {

using json = nlohmann::ordered_json;

struct RunConfig {
  std::string command;
  std::string space;
  int d = 0;
  std::string d_list;
  std::size_t n = 0;
  double side = 0.0;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
  double tol = 1e-8;
  std::string out_path;
  std::string format = "csv";
  unsigned workers = 0;
  bool quick = false;
  std::string fault;
};

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A result table: a CSV with a header and a trailer, or a JSON array of
// row objects with the same keys.
class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add(json row) { rows_.push_back(std::move(row)); }

  void write(std::ostream& os, const std::string& format, const std::string& config) const {
    if (format == "json") {
      json arr = json::array();
      for (const auto& row : rows_) arr.push_back(row);
      os << arr.dump(2) << '\n';
      return;
    }
    for (std::size_t c = 0; c < columns_.size(); ++c) os << (c ? "," : "") << columns_[c];
    os << '\n';
    for (const auto& row : rows_) {
      for (std::size_t c = 0; c < columns_.size(); ++c) {
        if (c) os << ',';
        os << cell(row.at(columns_[c]));
      }
      os << '\n';
    }
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx", fnv1a(config));
    os << "# nntlab " << version() << ", config " << hash << '\n';
  }

 private:
  static std::string cell(const json& v) {
    if (v.is_null()) return "";
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.15g", v.get<double>());
      return buf;
    }
    return v.dump();
  }

  std::vector<std::string> columns_;
  std::vector<json> rows_;
};

std::string canonical(const RunConfig& c) {
  std::ostringstream os;
  os << std::setprecision(17) << c.command;
  if (c.command == "simulate") {
    os << ";space=" << c.space << ";d=" << c.d << ";n=" << c.n << ";reps=" << c.reps << ";seed=" << c.seed;
  } else if (c.command == "quadrature") {
    os << ";d=" << c.d_list << ";tol=" << c.tol;
  } else if (c.command == "locallimit") {
    os << ";space=" << c.space << ";d=" << c.d << ";L=" << c.side << ";reps=" << c.reps << ";seed=" << c.seed;
  }
  return os.str();
}

double stderr_of(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double k = static_cast<double>(xs.size());
  return std::sqrt(ss / (k - 1.0) / k);
}

double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Space space = Space::rrt();
  if (cfg.space != "rrt") {
    if (cfg.d < 1) throw UsageError("--d is required for sphere and torus");
    space = cfg.space == "sphere" ? Space::sphere(cfg.d) : Space::torus(cfg.d);
  }
  if (cfg.n < 2) throw UsageError("--n must be >= 2");
  const unsigned workers = resolve_workers(cfg.workers);
  const SimulationSummary sim = simulate(space, cfg.n, cfg.reps, cfg.seed, workers);

  Table table({"seed", "space", "d", "n", "mean_siblings", "mean_sq_degree", "root_degree",
               "leaf_count", "depth_last"});
  const int d = space.kind() == SpaceKind::Rrt ? 0 : cfg.d;
  std::vector<std::vector<double>> cols(5);
  for (const auto& row : sim.rows) {
    const TreeStats& st = row.stats;
    table.add(json{{"seed", row.seed}, {"space", cfg.space}, {"d", d}, {"n", st.n},
                   {"mean_siblings", st.mean_siblings()}, {"mean_sq_degree", st.mean_sq_degree()},
                   {"root_degree", st.root_degree}, {"leaf_count", st.leaf_count},
                   {"depth_last", st.depth_last}});
    cols[0].push_back(st.mean_siblings());
    cols[1].push_back(st.mean_sq_degree());
    cols[2].push_back(static_cast<double>(st.root_degree));
    cols[3].push_back(static_cast<double>(st.leaf_count));
    cols[4].push_back(static_cast<double>(st.depth_last));
  }
  const char* names[5] = {"mean_siblings", "mean_sq_degree", "root_degree", "leaf_count", "depth_last"};
  json mean_row{{"seed", "mean"}, {"space", cfg.space}, {"d", d}, {"n", cfg.n}};
  json se_row{{"seed", "stderr"}, {"space", cfg.space}, {"d", d}, {"n", cfg.n}};
  for (int c = 0; c < 5; ++c) {
    mean_row[names[c]] = mean_of(cols[c]);
    se_row[names[c]] = stderr_of(cols[c]);
  }
  table.add(mean_row);
  table.add(se_row);

  // The first (up to) 2000 nodes of replicate 0 must match the naive builder.
  const std::size_t prefix = std::min<std::size_t>(cfg.n, 2000);
  const bool prefix_ok = prefix_matches_naive(space, cfg.n, prefix, derive_seed(cfg.seed, 0));

  std::ofstream file;
  std::ostream* sink = &out;
  if (!cfg.out_path.empty()) {
    file.open(cfg.out_path);
    if (!file) throw std::runtime_error("cannot open " + cfg.out_path);
    sink = &file;
  }
  table.write(*sink, cfg.format, canonical(cfg));

  err << "mean_siblings " << std::setprecision(8) << sim.mean_siblings << " +- " << sim.std_error
      << " (" << cfg.reps << " replicates)\n";
  if (!sim.identity_holds) {
    err << "error: squared-degree identity violated\n";
    return kExitFailure;
  }
  if (!prefix_ok) {
    err << "error: accelerated builder disagrees with the naive builder on the first " << prefix
        << " nodes\n";
    return kExitFailure;
  }
  err << "prefix check: first " << prefix << " nodes match the naive builder\n";
  return kExitOk;
}

int cmd_quadrature(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::vector<int> ds;
  try {
    ds = parse_int_list(cfg.d_list);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  for (int d : ds) {
    if (d < 1) throw UsageError("--d values must be >= 1");
  }
  std::vector<int> numeric;
  for (int d : ds) {
    if (d >= 2) numeric.push_back(d);
  }
  const auto rows = sd_table(numeric, cfg.tol, resolve_workers(cfg.workers));

  Table table({"d", "S_d", "err", "T_plus", "T_minus", "evaluations", "seconds"});
  bool consistent = true;
  std::size_t next = 0;
  for (int d : ds) {
    if (d == 1) {
      table.add(json{{"d", 1}, {"S_d", 1.0 + std::log(2.0)}, {"err", 0.0}, {"T_plus", nullptr},
                     {"T_minus", nullptr}, {"evaluations", 0}, {"seconds", 0.0}});
      err << "note: d=1 uses the closed form 1 + ln 2\n";
      continue;
    }
    const SdRow& row = rows[next++];
    table.add(json{{"d", row.d}, {"S_d", row.s_d.value}, {"err", row.err()},
                   {"T_plus", row.t_plus.value}, {"T_minus", row.t_minus.value},
                   {"evaluations", row.evaluations()}, {"seconds", row.seconds}});
    if (row.decomposition_excess() > 0.0) {
      consistent = false;
      err << "error: d=" << row.d << " S_d differs from 2 - T_plus + T_minus beyond the error estimates\n";
    }
  }

  std::ofstream file;
  std::ostream* sink = &out;
  if (!cfg.out_path.empty()) {
    file.open(cfg.out_path);
    if (!file) throw std::runtime_error("cannot open " + cfg.out_path);
    sink = &file;
  }
  table.write(*sink, cfg.format, canonical(cfg));
  if (rows.size() >= 2) err << monotone_trend(rows) << " (reported, not asserted)\n";
  return consistent ? kExitOk : kExitFailure;
}

int cmd_locallimit(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.d < 1) throw UsageError("--d must be >= 1");
  if (!(cfg.side > 0.0)) throw UsageError("--L must be > 0");
  const LocalMode mode = cfg.space == "rrt" ? LocalMode::Recursive : LocalMode::Geometric;
  const unsigned workers = resolve_workers(cfg.workers);
  const LocalEstimate base = estimate_S_local(cfg.d, cfg.side, cfg.reps, cfg.seed, mode, workers);
  // The doubled window uses its own replicate streams.
  const LocalEstimate doubled =
      estimate_S_local(cfg.d, 2.0 * cfg.side, cfg.reps, derive_seed(cfg.seed, 0x444f55424c45ULL), mode, workers);

  Table table({"d", "L", "reps", "estimate", "std_error"});
  for (const auto& [side, est] : {std::pair{cfg.side, base}, std::pair{2.0 * cfg.side, doubled}}) {
    table.add(json{{"d", cfg.d}, {"L", side}, {"reps", est.reps}, {"estimate", est.mean},
                   {"std_error", est.std_error}});
  }

  std::ofstream file;
  std::ostream* sink = &out;
  if (!cfg.out_path.empty()) {
    file.open(cfg.out_path);
    if (!file) throw std::runtime_error("cannot open " + cfg.out_path);
    sink = &file;
  }
  table.write(*sink, cfg.format, canonical(cfg));

  const double gap = std::abs(base.mean - doubled.mean);
  const double band = 3.0 * std::hypot(base.std_error, doubled.std_error);
  err << "window check: |S(L) - S(2L)| = " << std::setprecision(4) << gap << ", 3 sigma = " << band
      << (gap <= band ? " (consistent)" : " (finite-size bias suspected)") << '\n';
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& /*err*/) {
  VerifyOptions opts;
  opts.quick = cfg.quick;
  opts.workers = resolve_workers(cfg.workers);
  if (cfg.fault == "lens") {
    // Test hook: halve every lens ratio, which breaks its analytic lower bound.
    opts.lens = [](double z, double theta, int d) { return 0.5 * lens_ratio(z, theta, d); };
  } else if (!cfg.fault.empty()) {
    throw UsageError("unknown fault: " + cfg.fault);
  }
  const auto results = run_verify(opts);
  bool all = true;
  out << std::left << std::setw(20) << "check" << std::setw(6) << "status" << std::right
      << std::setw(9) << "seconds" << "  detail\n";
  for (const auto& r : results) {
    all = all && r.passed;
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.2f", r.seconds);
    out << std::left << std::setw(20) << r.name << std::setw(6) << (r.passed ? "PASS" : "FAIL")
        << std::right << std::setw(9) << secs << "  " << r.detail << '\n';
  }
  out << (all ? "all checks passed" : "some checks FAILED") << '\n';
  return all ? kExitOk : kExitFailure;
}

}  // namespace

const char* version() { return NNTLAB_VERSION; }

unsigned long long fnv1a(const std::string& text) {
  unsigned long long h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<int> parse_int_list(const std::string& text) {
  auto to_int = [&](const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad integer list: " + text);
    }
    if (used != s.size()) throw std::invalid_argument("bad integer list: " + text);
    return v;
  };
  std::vector<int> out;
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const int lo = to_int(text.substr(0, dots));
    const int hi = to_int(text.substr(dots + 2));
    if (hi < lo) throw std::invalid_argument("empty range: " + text);
    for (int d = lo; d <= hi; ++d) out.push_back(d);
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_int(item));
  if (out.empty()) throw std::invalid_argument("empty integer list");
  return out;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Nearest-neighbour tree sibling statistics", "nntlab"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);

  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out_path, "Write the table to this file");
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--workers", cfg.workers, "Worker threads (default: NNTLAB_WORKERS or all cores)")
        ->check(CLI::PositiveNumber);
  };

  auto* sim = app.add_subcommand("simulate", "Build replicated trees and report sibling statistics");
  sim->add_option("--space", cfg.space, "Point space")->required()->check(CLI::IsMember({"sphere", "torus", "rrt"}));
  sim->add_option("--d", cfg.d, "Dimension")->check(CLI::PositiveNumber);
  sim->add_option("--n", cfg.n, "Points per tree")->required()->check(CLI::PositiveNumber);
  sim->add_option("--reps", cfg.reps, "Replicates")->required()->check(CLI::PositiveNumber);
  sim->add_option("--seed", cfg.seed, "Base seed")->required();
  add_output(sim);

  auto* quad = app.add_subcommand("quadrature", "Tabulate S_d, T_plus and T_minus");
  quad->add_option("--d", cfg.d_list, "Dimension, range a..b or list a,b,c")->required();
  quad->add_option("--tol", cfg.tol, "Absolute tolerance")->check(CLI::PositiveNumber);
  add_output(quad);

  auto* loc = app.add_subcommand("locallimit", "Estimate S_d from Poisson trees on a periodic window");
  cfg.space = "torus";
  loc->add_option("--space", cfg.space, "torus (nearest older point) or rrt (uniform older point)")
      ->check(CLI::IsMember({"torus", "rrt"}));
  loc->add_option("--d", cfg.d, "Dimension")->required()->check(CLI::PositiveNumber);
  loc->add_option("--L", cfg.side, "Window side")->required()->check(CLI::PositiveNumber);
  loc->add_option("--reps", cfg.reps, "Replicates")->required()->check(CLI::PositiveNumber);
  loc->add_option("--seed", cfg.seed, "Base seed")->required();
  add_output(loc);

  auto* ver = app.add_subcommand("verify", "Run the property suite");
  ver->add_flag("--quick", cfg.quick, "Reduced suite");
  ver->add_option("--workers", cfg.workers, "Worker threads")->check(CLI::PositiveNumber);
  ver->add_option("--inject-fault", cfg.fault, "Test hook")->group("");

  std::vector<const char*> argv{"nntlab"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (sim->parsed()) {
      cfg.command = "simulate";
      return cmd_simulate(cfg, out, err);
    }
    if (quad->parsed()) {
      cfg.command = "quadrature";
      return cmd_quadrature(cfg, out, err);
    }
    if (loc->parsed()) {
      cfg.command = "locallimit";
      return cmd_locallimit(cfg, out, err);
    }
    cfg.command = "verify";
    return cmd_verify(cfg, out, err);
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace nntlab

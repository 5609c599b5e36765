// pdem-wigner: grids, tables, verification suites and figure data.
//
// Exit codes: 0 ok, 1 verification failure, 2 invalid parameters,
// 3 numerical failure.

#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "figures.hpp"
#include "io.hpp"
#include "pdem/errors.hpp"
#include "pdem/moments.hpp"
#include "pdem/parallel.hpp"
#include "pdem/verify.hpp"
#include "pdem/wigner.hpp"
#include "render.hpp"

#ifndef PDEM_WIGNER_VERSION
#define PDEM_WIGNER_VERSION "0.0.0"
#endif

namespace {

namespace fs = std::filesystem;
using namespace pdem;
using namespace pdem::cli;

constexpr int kExitVerify = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitNumerical = 3;

/// Bad user input detected after parsing.
struct InvalidArgument : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::pair<double, double> parse_range(const std::string& text, const char* what) {
  const auto colon = text.find(':');
  auto parse = [&](std::string_view s) {
    double v = 0.0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || end != s.data() + s.size() || !std::isfinite(v))
      throw InvalidArgument(std::string(what) + " must look like lo:hi, got '" + text + "'");
    return v;
  };
  if (colon == std::string::npos) throw InvalidArgument(std::string(what) + " must look like lo:hi, got '" + text + "'");
  const double lo = parse(std::string_view(text).substr(0, colon));
  const double hi = parse(std::string_view(text).substr(colon + 1));
  if (!(lo < hi)) throw InvalidArgument(std::string(what) + " needs lo < hi, got '" + text + "'");
  return {lo, hi};
}

Case parse_case(const std::string& s) { return (s == "I" || s == "LI") ? Case::LI : Case::LIII; }

std::string invocation(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) s += (i ? " " : "") + std::string(argv[i]);
  return s;
}

void commit_with_manifest(OutputSet files, RunManifest manifest, const fs::path& manifest_path, const Stopwatch& clock) {
  manifest.outputs = files.paths();
  manifest.wall_seconds = clock.seconds();
  files.add(manifest_path, manifest.render());
  files.commit();
}

// ---------------------------------------------------------------------------
// wdf
// ---------------------------------------------------------------------------

struct WdfArgs {
  std::string kind = "I";
  int n = 0;
  double l = 0.5;
  double alpha = 1.0;
  std::string x_range, p_range;
  std::size_t nx = 200, np = 200;
  int digits = 16;
  std::string out = "wdf.csv";
};

int run_wdf(const WdfArgs& a, unsigned threads, const std::string& argv_line) {
  const Stopwatch clock;
  const QuantumState s(parse_case(a.kind), a.n, a.l, MassProfile(a.alpha));
  const auto prec = PrecisionConfig::digits(a.digits);
  if (a.nx < 2 || a.np < 2) throw InvalidArgument("--nx and --np must be at least 2");

  std::optional<GridWindow> window;
  auto x = a.x_range.empty() ? std::pair<double, double>{} : parse_range(a.x_range, "--x");
  auto p = a.p_range.empty() ? std::pair<double, double>{} : parse_range(a.p_range, "--p");
  if (a.x_range.empty() || a.p_range.empty()) {
    window = default_window(s, threads);
    if (a.x_range.empty()) x = window->x;
    if (a.p_range.empty()) p = window->p;
  }
  const auto grid = evaluate_grid(s, x, p, a.nx, a.np, prec, threads);

  RunManifest m{"wdf", {}, PDEM_WIGNER_VERSION, std::to_string(a.digits), 0.0, {}, argv_line};
  m.set("case", to_string(s.kind()));
  m.set("n", std::to_string(a.n));
  m.set("l", format_double(a.l));
  m.set("alpha", format_double(a.alpha));
  m.set("branch", to_string(s.profile().branch()));
  m.set("x_range", format_double(x.first) + ":" + format_double(x.second));
  m.set("p_range", format_double(p.first) + ":" + format_double(p.second));
  m.set("nx", std::to_string(a.nx));
  m.set("np", std::to_string(a.np));
  m.set("max_imag_residue", format_double(grid.max_imag_seen));
  m.set("min_W", format_double(grid.min_value()));
  m.set("max_abs_W", format_double(grid.max_abs()));

  OutputSet files;
  files.add(a.out, grid_csv(grid));
  commit_with_manifest(std::move(files), std::move(m), manifest_path_for(a.out), clock);
  std::printf("wrote %s (%zu rows)\n", a.out.c_str(), grid.values.size());
  return 0;
}

// ---------------------------------------------------------------------------
// table1
// ---------------------------------------------------------------------------

struct TableArgs {
  std::vector<double> ls;
  int n_max = 8;
  std::optional<int> digits;
  std::string out = "table1.csv";
};

int run_table1(const TableArgs& a, unsigned threads, const std::string& argv_line) {
  const Stopwatch clock;
  std::vector<double> ls = a.ls.empty() ? std::vector<double>(kTable1Ls.begin(), kTable1Ls.end()) : a.ls;
  std::sort(ls.begin(), ls.end());
  for (double l : ls) {
    QuantumState(Case::LI, 0, l, MassProfile(1.0));
    QuantumState(Case::LIII, 0, l, MassProfile(1.0));
  }
  if (a.n_max < 0) throw InvalidArgument("--n-max must be nonnegative");
  std::optional<PrecisionConfig> prec;
  if (a.digits) prec = PrecisionConfig::digits(*a.digits);
  const auto rows = table1(ls, a.n_max, prec, threads);

  RunManifest m{"table1", {}, PDEM_WIGNER_VERSION, a.digits ? std::to_string(*a.digits) : "auto", 0.0, {}, argv_line};
  m.set("l", join_doubles(ls));
  m.set("n_max", std::to_string(a.n_max));
  OutputSet files;
  files.add(a.out, table_csv(rows, ls, a.n_max, a.digits.value_or(-1)));
  commit_with_manifest(std::move(files), std::move(m), manifest_path_for(a.out), clock);
  std::printf("wrote %s (%zu rows)\n", a.out.c_str(), rows.size());
  return 0;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

using verify::Check;

std::vector<std::pair<std::string, std::function<std::vector<Check>(unsigned)>>> suites() {
  return {
      {"wigner",
       [](unsigned t) {
         const auto states = verify::standard_states();
         const auto w = verify::wigner_properties(states, t);
         return std::vector<Check>{w.reality, w.normalization, w.bound, w.marginal, verify::wdf_oracle(states, t)};
       }},
      {"moments",
       [](unsigned t) {
         return std::vector<Check>{verify::table_reproduction(t),    verify::spot_values(),
                                   verify::heisenberg_floor(t),      verify::ground_state_bound(),
                                   verify::asymptote().monotone,     verify::precision_stability(t),
                                   verify::moment_oracle_agreement(t)};
       }},
      {"weyl",
       [](unsigned) {
         const auto w = verify::weyl_identities();
         return std::vector<Check>{w.identity, w.bracket};
       }},
      {"b1",
       [](unsigned) {
         const auto b = verify::b1_identity();
         return std::vector<Check>{b.equivalence, b.pi_case};
       }},
      {"se-residual",
       [](unsigned t) {
         const auto r = verify::se_residuals(t);
         return std::vector<Check>{r.size, r.order};
       }},
  };
}

int run_verify(const std::string& suite, unsigned threads) {
  int passed = 0, failed = 0;
  std::printf("%-12s %-6s %-11s %-9s %s\n", "suite", "result", "worst", "tolerance", "check");
  for (const auto& [name, fn] : suites()) {
    if (suite != "all" && suite != name) continue;
    for (const auto& c : fn(threads)) {
      (c.passed ? passed : failed)++;
      std::printf("%-12s %-6s %-11.3e %-9.1e %s\n", name.c_str(), c.passed ? "PASS" : "FAIL", c.worst, c.tolerance,
                  c.name.c_str());
      if (!c.detail.empty()) std::printf("%-12s        first failure: %s\n", "", c.detail.c_str());
      std::fflush(stdout);
    }
  }
  std::printf("summary suite=%s checks=%d passed=%d failed=%d status=%s\n", suite.c_str(), passed + failed, passed,
              failed, failed ? "fail" : "pass");
  return failed ? kExitVerify : 0;
}

// ---------------------------------------------------------------------------
// figure
// ---------------------------------------------------------------------------

int run_figure(int id, FigureOptions opt, const std::string& argv_line) {
  const Stopwatch clock;
  FigureResult res = id == 1   ? figure1(opt)
                     : id == 2 ? figure_wdf(Case::LI, opt)
                     : id == 3 ? figure_wdf(Case::LIII, opt)
                               : figure4(opt);
  const std::string name = "figure" + std::to_string(id);
  RunManifest m{name, res.parameters, PDEM_WIGNER_VERSION, id == 4 ? "auto" : "16", 0.0, {}, argv_line};
  m.set("out_dir", opt.out_dir.string());
  const auto count = res.files.paths().size();
  commit_with_manifest(std::move(res.files), std::move(m), opt.out_dir / (name + ".manifest.txt"), clock);
  std::printf("wrote %zu files to %s\n", count, opt.out_dir.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wigner functions, moments and uncertainty products for position-dependent-mass oscillators"};
  app.set_version_flag("--version", PDEM_WIGNER_VERSION);
  app.require_subcommand(1);
  unsigned threads = default_thread_count();
  app.add_option("--threads", threads, "Worker threads (default: PDEM_WIGNER_THREADS or hardware count)")
      ->check(CLI::PositiveNumber);

  const std::vector<std::string> cases = {"I", "III", "LI", "LIII"};

  WdfArgs wdf;
  auto* wdf_cmd = app.add_subcommand("wdf", "Evaluate the closed-form Wigner function on a grid");
  wdf_cmd->add_option("--case", wdf.kind, "Solution family")->check(CLI::IsMember(cases))->required();
  wdf_cmd->add_option("--n", wdf.n, "Quantum number n")->required();
  wdf_cmd->add_option("--l", wdf.l, "Parameter l")->required();
  wdf_cmd->add_option("--alpha", wdf.alpha, "Mass decay rate alpha")->required();
  wdf_cmd->add_option("--x", wdf.x_range, "Position range lo:hi (default: 1-1e-6 of the probability)");
  wdf_cmd->add_option("--p", wdf.p_range, "Momentum range lo:hi (default: 1-1e-6 of the momentum marginal)");
  wdf_cmd->add_option("--nx", wdf.nx, "Position samples")->capture_default_str();
  wdf_cmd->add_option("--np", wdf.np, "Momentum samples")->capture_default_str();
  wdf_cmd->add_option("--digits", wdf.digits, "Working precision for the coefficients")->capture_default_str();
  wdf_cmd->add_option("--out", wdf.out, "Output CSV")->capture_default_str();

  TableArgs table;
  auto* table_cmd = app.add_subcommand("table1", "Uncertainty products for both families");
  table_cmd->add_option("--l", table.ls, "l values (default: the 16-value reference grid)")->delimiter(',');
  table_cmd->add_option("--n-max", table.n_max, "Largest n")->capture_default_str();
  table_cmd->add_option("--digits", table.digits, "Fixed working precision (default: per-cell)");
  table_cmd->add_option("--out", table.out, "Output CSV")->capture_default_str();

  std::string suite = "all";
  auto* verify_cmd = app.add_subcommand("verify", "Run verification suites");
  verify_cmd->add_option("--suite", suite, "Suite to run")
      ->check(CLI::IsMember({"wigner", "moments", "weyl", "b1", "se-residual", "all"}))
      ->capture_default_str();

  int figure_id = 0;
  FigureOptions fig;
  std::string fig_dir = fig.out_dir.string(), fig_branch = "piecewise-abs";
  auto* figure_cmd = app.add_subcommand("figure", "Write figure data (CSV) and an SVG rendering");
  figure_cmd->add_option("--id", figure_id, "Figure number")->check(CLI::Range(1, 4))->required();
  figure_cmd->add_option("--out-dir", fig_dir, "Output directory")->capture_default_str();
  figure_cmd->add_option("--nx", fig.nx, "Heatmap position samples (figures 2, 3)")->capture_default_str();
  figure_cmd->add_option("--np", fig.np, "Heatmap momentum samples (figures 2, 3)")->capture_default_str();
  figure_cmd->add_option("--branch", fig_branch, "Mass branch for figure 1")
      ->check(CLI::IsMember({"piecewise-abs", "monotone"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  const std::string argv_line = invocation(argc, argv);
  try {
    if (*wdf_cmd) return run_wdf(wdf, threads, argv_line);
    if (*table_cmd) return run_table1(table, threads, argv_line);
    if (*verify_cmd) return run_verify(suite, threads);
    fig.out_dir = fig_dir;
    fig.threads = threads;
    fig.branch = fig_branch == "monotone" ? Branch::Monotone : Branch::PiecewiseAbs;
    if (fig.nx < 2 || fig.np < 2) throw InvalidArgument("--nx and --np must be at least 2");
    return run_figure(figure_id, fig, argv_line);
  } catch (const InvalidArgument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInvalid;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "error: invalid parameters: %s\n", e.what());
    return kExitInvalid;
  } catch (const PrecisionInsufficient& e) {
    std::fprintf(stderr, "error: precision insufficient: %s\n", e.what());
    return kExitNumerical;
  } catch (const RealityViolation& e) {
    std::fprintf(stderr, "error: reality invariant violated: %s\n", e.what());
    return kExitNumerical;
  } catch (const TruncationError& e) {
    std::fprintf(stderr, "error: truncation invariant violated: %s\n", e.what());
    return kExitNumerical;
  } catch (const NonConvergence& e) {
    std::fprintf(stderr, "error: quadrature did not converge: %s\n", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: numerical failure: %s\n", e.what());
    return kExitNumerical;
  }
}

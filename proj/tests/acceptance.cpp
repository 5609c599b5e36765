// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "pdem/parallel.hpp"
#include "pdem/verify.hpp"

namespace {

using pdem::verify::Check;

struct Criterion {
  std::string id;
  std::string title;
  std::vector<Check> checks;
  double seconds = 0.0;
};

template <class F>
Criterion run(std::string id, std::string title, F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  Criterion c{std::move(id), std::move(title), {}, 0.0};
  try {
    c.checks = f();
  } catch (const std::exception& e) {
    c.checks.push_back({"uncaught exception", false, 0.0, 0.0, e.what()});
  }
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return c;
}

bool report(const Criterion& c) {
  bool ok = true;
  for (const auto& k : c.checks) ok = ok && k.passed;
  std::printf("%s %s: %s (%.1fs)\n", ok ? "PASS" : "FAIL", c.id.c_str(), c.title.c_str(), c.seconds);
  for (const auto& k : c.checks) {
    std::printf("    [%s] %s  worst=%.3e tol=%.1e%s%s\n", k.passed ? "ok" : "FAILED", k.name.c_str(), k.worst,
                k.tolerance, k.detail.empty() ? "" : "  at ", k.detail.c_str());
  }
  std::fflush(stdout);
  return ok;
}

}  // namespace

int main() {
  namespace v = pdem::verify;
  const unsigned threads = pdem::default_thread_count();
  const auto states = v::standard_states();
  bool all = true;

  all &= report(run("AC1", "uncertainty table reproduction", [&] {
    return std::vector<Check>{v::table_reproduction(threads), v::spot_values()};
  }));
  all &= report(run("AC2", "large-l asymptote n + 1/2", [&] {
    const auto a = v::asymptote();
    return std::vector<Check>{a.limit_li, a.limit_liii, a.monotone};
  }));
  all &= report(run("AC3", "Wigner function properties", [&] {
    const auto w = v::wigner_properties(states, threads);
    return std::vector<Check>{w.reality, w.normalization, w.bound, w.marginal};
  }));
  all &= report(run("AC4", "oracle equivalence", [&] {
    return std::vector<Check>{v::wdf_oracle(states, threads), v::moment_oracle_agreement(threads)};
  }));
  all &= report(run("AC5", "Schroedinger residual", [&] {
    const auto r = v::se_residuals(threads);
    return std::vector<Check>{r.size, r.order};
  }));
  all &= report(run("AC6", "two-gamma master integral", [&] {
    const auto b = v::b1_identity();
    return std::vector<Check>{b.equivalence, b.pi_case};
  }));
  all &= report(run("AC7", "Weyl symbol identities", [&] {
    const auto w = v::weyl_identities();
    return std::vector<Check>{w.identity, w.bracket};
  }));
  all &= report(run("AC8", "ground-state product bound", [&] {
    return std::vector<Check>{v::ground_state_bound()};
  }));
  std::printf("%s\n", all ? "ALL CRITERIA PASSED" : "SOME CRITERIA FAILED");
  return all ? 0 : 1;
}

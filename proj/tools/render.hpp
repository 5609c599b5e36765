#pragma once

// CSV renderings of grids and tables, plus the default plotting window.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "io.hpp"
#include "pdem/eigenstates.hpp"
#include "pdem/moments.hpp"
#include "pdem/wigner.hpp"

namespace pdem::cli {

inline std::string grid_csv(const PhaseSpaceGrid& g) {
  const auto& s = g.state;
  std::string out;
  out.reserve(g.values.size() * 40 + 256);
  out += "# pdem-wigner grid v1\n";
  out += "# case=" + std::string(to_string(s.kind())) + " n=" + std::to_string(s.n()) + " l=" + format_double(s.l()) +
         " alpha=" + format_double(s.alpha()) + " branch=" + to_string(s.profile().branch()) +
         " digits=" + std::to_string(g.digits) + "\n";
  out += "# columns: x,p,W\n";
  for (std::size_t ix = 0; ix < g.x_axis.size(); ++ix) {
    const std::string x = format_double(g.x_axis[ix]);
    for (std::size_t ip = 0; ip < g.p_axis.size(); ++ip) {
      out += x;
      out += ',';
      out += format_double(g.p_axis[ip]);
      out += ',';
      out += format_double(g.at(ix, ip));
      out += '\n';
    }
  }
  return out;
}

inline std::string join_doubles(std::span<const double> v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
  return s;
}

/// digits < 0 means each cell used its default working precision.
inline std::string table_csv(const std::vector<Table1Row>& rows, std::span<const double> ls, int n_max, int digits) {
  std::string out = "# pdem-wigner table v1\n";
  out += "# case=I,III n=0.." + std::to_string(n_max) + " l=" + join_doubles(ls) +
         " alpha=any branch=monotone digits=" + (digits < 0 ? std::string("auto") : std::to_string(digits)) + "\n";
  out += "# columns: l,case,n,delta_mu,delta_pi,product,asymptote_gap\n";
  for (const auto& r : rows) {
    out += format_double(r.l) + "," + to_string(r.kind) + "," + std::to_string(r.n) + "," +
           format_double(r.result.delta_mu) + "," + format_double(r.result.delta_pi) + "," +
           format_double(r.result.product) + "," + format_double(r.result.asymptote_gap) + "\n";
  }
  return out;
}

struct GridWindow {
  std::pair<double, double> x;
  std::pair<double, double> p;
};

/// x interval holding 1 - mass of |psi|^2 and a symmetric p interval
/// holding 1 - mass of the momentum marginal (estimated on a probe grid).
inline GridWindow default_window(const QuantumState& s, unsigned threads, double mass = 1.0 - 1e-6) {
  const auto x = probability_interval(s, mass);
  const double p_max = phase_space_window(WignerClosedForm(s)).p_max;
  const auto probe = evaluate_grid(s, x, {-p_max, p_max}, 81, 257, {}, threads);
  const std::size_t np = probe.p_axis.size(), nx = probe.x_axis.size();
  const double dx = (x.second - x.first) / static_cast<double>(nx - 1);
  std::vector<double> marginal(np, 0.0);
  for (std::size_t ip = 0; ip < np; ++ip) {
    double acc = 0.0;
    for (std::size_t ix = 0; ix < nx; ++ix) acc += (ix == 0 || ix + 1 == nx ? 0.5 : 1.0) * probe.at(ix, ip);
    marginal[ip] = std::max(acc * dx, 0.0);
  }
  std::vector<double> cum(np, 0.0);
  for (std::size_t ip = 1; ip < np; ++ip)
    cum[ip] = cum[ip - 1] + 0.5 * (marginal[ip] + marginal[ip - 1]) * (probe.p_axis[ip] - probe.p_axis[ip - 1]);
  const double tail = 0.5 * (1.0 - mass) * cum.back();
  std::size_t lo = 0, hi = np - 1;
  while (lo + 1 < np && cum[lo + 1] <= tail) ++lo;
  while (hi > 0 && cum.back() - cum[hi - 1] <= tail) --hi;
  const double half = std::max(std::abs(probe.p_axis[lo]), std::abs(probe.p_axis[hi]));
  return {x, {-half, half}};
}

}  // namespace pdem::cli

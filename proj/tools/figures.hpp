#pragma once

// Data and SVG renderings for the four figures.

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "io.hpp"
#include "pdem/eigenstates.hpp"
#include "pdem/moments.hpp"
#include "pdem/wigner.hpp"
#include "render.hpp"
#include "svg.hpp"

namespace pdem::cli {

struct FigureOptions {
  std::filesystem::path out_dir = "figures";
  unsigned threads = 1;
  std::size_t nx = 160;
  std::size_t np = 160;
  Branch branch = Branch::PiecewiseAbs;  ///< figure 1 only
};

struct FigureResult {
  OutputSet files;
  std::vector<std::pair<std::string, std::string>> parameters;
};

namespace detail {

inline std::string tag(double v) {
  std::string s = format_double(v);
  std::replace(s.begin(), s.end(), '+', 'p');
  return s;
}

inline const std::array<const char*, 5> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

}  // namespace detail

// ---------------------------------------------------------------------------
// Figure 1: eigenfunctions inside their effective potentials
// ---------------------------------------------------------------------------

inline FigureResult figure1(const FigureOptions& opt) {
  constexpr int kMaxN = 8;
  constexpr std::size_t kPoints = 801;
  const std::array<std::pair<double, double>, 3> panels = {{{0.5, 1.5}, {1.2, 2.5}, {5.0, 3.5}}};
  FigureResult res;
  res.parameters.emplace_back("branch", to_string(opt.branch));
  res.parameters.emplace_back("n", "0..8");
  res.parameters.emplace_back("alpha_l_pairs", "0.5:1.5,1.2:2.5,5:3.5");

  const double panel_w = 300, panel_h = 220, margin = 40;
  Svg svg(margin + 3 * (panel_w + margin), margin + 2 * (panel_h + margin));

  int row = 0;
  for (Case c : {Case::LI, Case::LIII}) {
    int col = 0;
    for (const auto& [alpha, l] : panels) {
      // Extent: union of the monotone-branch probability windows; the
      // piecewise branch mirrors the x > 0 half onto the whole line.
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (int n = 0; n <= kMaxN; ++n) {
        const auto [a, b] = probability_interval(QuantumState(c, n, l, MassProfile(alpha)));
        lo = std::min(lo, a);
        hi = std::max(hi, b);
      }
      if (opt.branch == Branch::PiecewiseAbs) {
        hi = std::max(hi, 1.0);
        lo = -hi;
      }
      const auto xs = linspace(lo, hi, kPoints);
      const MassProfile profile(alpha, opt.branch);

      std::string csv = "# pdem-wigner figure1 v1\n# case=" + std::string(to_string(c)) + " n=0.." +
                        std::to_string(kMaxN) + " l=" + format_double(l) + " alpha=" + format_double(alpha) +
                        " branch=" + to_string(opt.branch) + " digits=16\n# columns: n,x,V,energy,psi\n";
      std::vector<std::vector<double>> psi(kMaxN + 1), pot(kMaxN + 1);
      std::vector<double> energies(kMaxN + 1);
      for (int n = 0; n <= kMaxN; ++n) {
        const QuantumState s(c, n, l, profile);
        energies[n] = energy(s);
        for (double x : xs) {
          psi[n].push_back(eigenfunction(s, x));
          pot[n].push_back(effective_potential(s, x));
          csv += std::to_string(n) + "," + format_double(x) + "," + format_double(pot[n].back()) + "," +
                 format_double(energies[n]) + "," + format_double(psi[n].back()) + "\n";
        }
      }
      const std::string stem = "figure1_case" + std::string(to_string(c)) + "_alpha" + detail::tag(alpha) + "_l" +
                               detail::tag(l);
      res.files.add(opt.out_dir / (stem + ".csv"), std::move(csv));
      res.parameters.emplace_back(stem + ".x_range", format_double(lo) + ":" + format_double(hi));

      const double gap = (energies[kMaxN] - energies[0]) / kMaxN;
      double v_min = energies[0] - gap;
      for (const auto& v : pot) v_min = std::min(v_min, *std::min_element(v.begin(), v.end()));
      const PanelMap map{margin + col * (panel_w + margin), margin + row * (panel_h + margin), panel_w, panel_h, lo,
                         hi, v_min, energies[kMaxN] + 1.5 * gap};
      svg.outline(map.left, map.top, map.width, map.height);
      svg.text(map.left, map.top - 6,
               "case " + std::string(to_string(c)) + ", alpha=" + format_double(alpha) + ", l=" + format_double(l));
      const int potentials = c == Case::LI ? 1 : kMaxN + 1;
      for (int n = 0; n < potentials; ++n) {
        std::vector<std::pair<double, double>> pts;
        for (std::size_t i = 0; i < xs.size(); ++i) pts.emplace_back(map.px(xs[i]), map.py(pot[n][i]));
        svg.polyline(pts, "#d62728", 0.8);
      }
      for (int n = 0; n <= kMaxN; ++n) {
        double peak = 0.0;
        for (double v : psi[n]) peak = std::max(peak, std::abs(v));
        const double amp = peak > 0.0 ? 0.4 * gap / peak : 0.0;
        std::vector<std::pair<double, double>> pts;
        for (std::size_t i = 0; i < xs.size(); ++i)
          pts.emplace_back(map.px(xs[i]), map.py(energies[n] + amp * psi[n][i]));
        svg.polyline(pts, "#1f77b4", 0.8);
      }
      ++col;
    }
    ++row;
  }
  res.files.add(opt.out_dir / "figure1.svg", svg.render());
  return res;
}

// ---------------------------------------------------------------------------
// Figures 2 and 3: WDF heatmaps
// ---------------------------------------------------------------------------

inline FigureResult figure_wdf(Case c, const FigureOptions& opt) {
  const std::array<double, 5> ls = {0.5, 2.0, 3.5, 5.0, 6.5};
  const std::string id = c == Case::LI ? "figure2" : "figure3";
  constexpr std::size_t kCells = 48;
  FigureResult res;
  res.parameters.emplace_back("case", to_string(c));
  res.parameters.emplace_back("alpha", "1");
  res.parameters.emplace_back("nx", std::to_string(opt.nx));
  res.parameters.emplace_back("np", std::to_string(opt.np));

  const double panel = 150, margin = 30;
  Svg svg(margin + ls.size() * (panel + margin), margin + 3 * (panel + margin));
  for (int n = 0; n <= 2; ++n) {
    for (std::size_t il = 0; il < ls.size(); ++il) {
      const QuantumState s(c, n, ls[il], MassProfile(1.0));
      const auto win = default_window(s, opt.threads);
      const auto g = evaluate_grid(s, win.x, win.p, opt.nx, opt.np, {}, opt.threads);
      const std::string stem = id + "_n" + std::to_string(n) + "_l" + detail::tag(ls[il]);
      res.files.add(opt.out_dir / (stem + ".csv"), grid_csv(g));
      res.parameters.emplace_back(stem + ".x_range", format_double(win.x.first) + ":" + format_double(win.x.second));
      res.parameters.emplace_back(stem + ".p_range", format_double(win.p.first) + ":" + format_double(win.p.second));

      // Block-averaged heatmap on a symmetric scale: zero is mid gray, so
      // negative regions show darker than the background.
      std::vector<double> cells(kCells * kCells, 0.0);
      std::vector<int> counts(kCells * kCells, 0);
      for (std::size_t ix = 0; ix < g.x_axis.size(); ++ix)
        for (std::size_t ip = 0; ip < g.p_axis.size(); ++ip) {
          const std::size_t cx = ix * kCells / g.x_axis.size(), cp = ip * kCells / g.p_axis.size();
          cells[cx * kCells + cp] += g.at(ix, ip);
          ++counts[cx * kCells + cp];
        }
      for (std::size_t k = 0; k < cells.size(); ++k) cells[k] /= std::max(counts[k], 1);
      double span = 1e-300;
      for (double v : cells) span = std::max(span, std::abs(v));
      const double left = margin + il * (panel + margin), top = margin + n * (panel + margin), cell = panel / kCells;
      for (std::size_t cx = 0; cx < kCells; ++cx)
        for (std::size_t cp = 0; cp < kCells; ++cp)
          svg.rect(left + cx * cell, top + (kCells - 1 - cp) * cell, cell + 0.05, cell + 0.05,
                   Svg::signed_gray(cells[cx * kCells + cp] / span));
      svg.outline(left, top, panel, panel);
      svg.text(left, top - 5, "n=" + std::to_string(n) + ", l=" + format_double(ls[il]), 9);
    }
  }
  res.files.add(opt.out_dir / (id + ".svg"), svg.render());
  return res;
}

// ---------------------------------------------------------------------------
// Figure 4: uncertainty products against n + 1/2
// ---------------------------------------------------------------------------

inline FigureResult figure4(const FigureOptions& opt) {
  constexpr int kMaxN = 15;
  const std::array<double, 5> ls = {0.0, 1.0, 10.0, 100.0, 1e5};
  FigureResult res;
  res.parameters.emplace_back("l", join_doubles(ls));
  res.parameters.emplace_back("n_max", std::to_string(kMaxN));
  const auto rows = table1(ls, kMaxN, std::nullopt, opt.threads);
  res.files.add(opt.out_dir / "figure4.csv", table_csv(rows, ls, kMaxN, -1));
  std::string ref = "# pdem-wigner figure4-limit v1\n# columns: n,limit\n";
  for (int n = 0; n <= kMaxN; ++n) ref += std::to_string(n) + "," + format_double(n + 0.5) + "\n";
  res.files.add(opt.out_dir / "figure4_limit.csv", std::move(ref));

  const double panel_w = 360, panel_h = 300, margin = 55;
  Svg svg(margin + 2 * (panel_w + margin), margin + panel_h + margin);
  int col = 0;
  for (Case c : {Case::LI, Case::LIII}) {
    const PanelMap map{margin + col * (panel_w + margin), margin, panel_w, panel_h, 0.0, kMaxN, 0.0, kMaxN + 1.5};
    svg.outline(map.left, map.top, map.width, map.height);
    svg.text(map.left, map.top - 8, c == Case::LI ? "(a) case I" : "(b) case III");
    axes(svg, map, {0, 5, 10, 15}, {0, 4, 8, 12, 16}, "n", "product");
    svg.polyline({{map.px(0), map.py(0.5)}, {map.px(kMaxN), map.py(kMaxN + 0.5)}}, "black", 1.0, true);
    svg.text(map.left + 8, map.top + 14 + 12 * ls.size(), "n + 1/2 (dashed)", 9);
    for (std::size_t il = 0; il < ls.size(); ++il) {
      std::vector<std::pair<double, double>> pts;
      for (const auto& r : rows)
        if (r.kind == c && r.l == ls[il]) pts.emplace_back(map.px(r.n), map.py(r.result.product));
      svg.polyline(pts, detail::kPalette[il], 1.2);
      svg.text(map.left + 8, map.top + 14 + 12 * il, "l=" + format_double(ls[il]), 9, detail::kPalette[il]);
    }
    ++col;
  }
  res.files.add(opt.out_dir / "figure4.svg", svg.render());
  return res;
}

}  // namespace pdem::cli

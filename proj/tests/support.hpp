#pragma once

// Shared fixtures and independent oracles for the test binaries.

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>

#include "sdri/analysis.hpp"
#include "sdri/elasticity.hpp"
#include "sdri/geometry.hpp"
#include "sdri/surface_energy.hpp"

namespace testing_support {

using namespace sdri;

inline SurfaceTensions iso_tensions(double f, double s, double fs) {
  return derive_regime_tensions(FinslerNorm::isotropic(f), FinslerNorm::isotropic(s), FinslerNorm::isotropic(fs));
}

/// 4x4 grid on (-1,1)^2, flat substrate at y = 0, film cells (1,2) and (2,2).
inline Configuration island_example() {
  const Grid g(1.0, 1.0, 4, 4);
  Configuration cfg = flat_configuration(g);
  cfg.composite.cells[g.cell(1, 2)] = 1;
  cfg.composite.cells[g.cell(2, 2)] = 1;
  return cfg;
}

inline Configuration full_box(const Grid& g) {
  HeightProfile p;
  p.levels.assign(g.nx, g.ny);
  return bare_configuration(g, p);
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline int below(std::mt19937_64& rng, int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); }

inline bool chance(std::mt19937_64& rng, double p) { return uniform(rng, 0.0, 1.0) < p; }

/// Random height profile with spikes on a given grid.
inline HeightProfile random_profile(std::mt19937_64& rng, const Grid& g, double spike_rate = 0.3) {
  HeightProfile p;
  for (int i = 0; i < g.nx; ++i) p.levels.push_back(g.zero_level() + below(rng, g.ny / 2 + 1));
  for (int line = 1; line < g.nx; ++line) {
    const int base = p.line_base(line);
    if (base < g.ny && chance(rng, spike_rate)) p.spikes.push_back({line, base + 1 + below(rng, g.ny - base)});
  }
  return p;
}

/// Random configuration that is structurally admissible by construction:
/// film layers and blobs over a random substrate, random cracks, slits and
/// anchored filaments.
inline Configuration random_configuration(std::mt19937_64& rng, int max_n = 16) {
  const int nx = 2 + below(rng, max_n - 1);
  const int ny = 2 * (1 + below(rng, max_n / 2));
  const Grid g(uniform(rng, 0.5, 2.0), uniform(rng, 0.5, 2.0), nx, ny);
  const HeightProfile p = random_profile(rng, g);
  EdgeSet cracks;
  for (EdgeId e = 0; e < g.edge_id_bound(); ++e) {
    if (crack_in_closure(g, p, e) && chance(rng, 0.08)) cracks.insert(e);
  }
  Configuration cfg = bare_configuration(g, p, cracks);
  cfg.composite.filaments.clear();
  for (int i = 0; i < g.nx; ++i) {
    if (!chance(rng, 0.6)) continue;
    const int level = p.levels[i];
    const int t = below(rng, g.ny - level + 1);
    for (int j = level; j < level + t; ++j) cfg.composite.cells[g.cell(i, j)] = 1;
  }
  for (int c = 0; c < g.cell_count(); ++c) {
    if (chance(rng, 0.05)) cfg.composite.cells[c] = 1;
  }
  for (EdgeId e = 0; e < g.edge_id_bound(); ++e) {
    if (!g.edge_valid(e) || g.on_domain_wall(e)) continue;
    const auto [a, b] = g.edge_cells(e);
    const bool both_a = cfg.composite.contains(a) && cfg.composite.contains(b);
    const bool int_s = cfg.substrate.contains(a) && cfg.substrate.contains(b) && !cracks.count(e);
    if (both_a && !int_s && chance(rng, 0.12)) cfg.composite.slits.insert(e);
  }
  std::vector<std::uint8_t> anchored(g.vertex_count(), 0);
  for (int c = 0; c < g.cell_count(); ++c) {
    if (!cfg.composite.contains(c)) continue;
    const int i = g.cell_col(c);
    const int j = g.cell_row(c);
    anchored[g.vertex(i, j)] = anchored[g.vertex(i + 1, j)] = anchored[g.vertex(i, j + 1)] =
        anchored[g.vertex(i + 1, j + 1)] = 1;
  }
  for (EdgeId e = 0; e < g.edge_id_bound(); ++e) {
    if (!g.edge_valid(e) || g.on_domain_wall(e)) continue;
    const auto [a, b] = g.edge_cells(e);
    if (cfg.composite.contains(a) || cfg.composite.contains(b)) continue;
    const auto [v0, v1] = g.edge_vertices(e);
    const bool spike = cfg.substrate.spike_edges.count(e) != 0;
    if (spike || ((anchored[v0] || anchored[v1]) && chance(rng, 0.1))) cfg.composite.filaments.insert(e);
  }
  return cfg;
}

/// Independent surface-energy enumerator: every term of the energy is an
/// integral over a set built from reduced boundaries and density points; the
/// edge is tested against each set separately and all matching terms are
/// summed. `matches` receives the number of terms each edge falls into.
struct OracleResult {
  double total = 0.0;
  std::vector<int> matches;  ///< indexed by edge id
  std::vector<double> per_term;
};

inline OracleResult oracle_energy(const Configuration& cfg, const SurfaceTensions& t) {
  const Grid& g = cfg.grid;
  OracleResult out;
  out.matches.assign(g.edge_id_bound(), 0);
  out.per_term.assign(kInterfaceClassCount, 0.0);
  for (EdgeId e = 0; e < g.edge_id_bound(); ++e) {
    const int v = e / 2;
    const int i = v % (g.nx + 1);
    const int j = v / (g.nx + 1);
    const bool horizontal = e % 2 == 0;
    if (horizontal && (i >= g.nx || j == 0 || j == g.ny)) continue;
    if (!horizontal && (j >= g.ny || i == 0 || i == g.nx)) continue;
    // the two neighbouring cells: below/above or left/right
    const int c0 = horizontal ? (j - 1) * g.nx + i : j * g.nx + (i - 1);
    const int c1 = j * g.nx + i;
    const bool A0 = cfg.composite.cells[c0] != 0;
    const bool A1 = cfg.composite.cells[c1] != 0;
    // substrate membership straight from the profile
    const auto& lv = cfg.substrate.profile.levels;
    const bool S0 = horizontal ? (j - 1) < lv[i] : j < lv[i - 1];
    const bool S1 = horizontal ? j < lv[i] : j < lv[i];
    bool spike = false;
    if (!horizontal) {
      for (const Spike& s : cfg.substrate.profile.spikes) {
        if (s.line == i && j >= std::max(lv[i - 1], lv[i]) && j < s.top) spike = true;
      }
    }
    const bool slit = cfg.composite.slits.count(e) != 0;
    const bool fil = cfg.composite.filaments.count(e) != 0;
    const bool crack = cfg.substrate.cracks.count(e) != 0;

    const bool redA = A0 != A1;
    const bool dA = redA || slit || fil;
    const bool A_one = A0 && A1;
    const bool A_zero = !A0 && !A1;
    const bool redS = S0 != S1;
    const bool dS = redS || crack || spike;
    const bool S_one = S0 && S1;
    const bool S_zero = !S0 && !S1;

    const double len = horizontal ? g.hx() : g.hy();
    const Vec2 mid = horizontal ? Vec2{-g.l + (i + 0.5) * g.hx(), -g.L + j * g.hy()}
                                : Vec2{-g.l + i * g.hx(), -g.L + (j + 0.5) * g.hy()};
    const Vec2 axis = horizontal ? Vec2{0.0, 1.0} : Vec2{1.0, 0.0};
    const Vec2 nuA = A0 ? axis : Vec2{-axis.x, -axis.y};
    const Vec2 nuS = S0 ? axis : Vec2{-axis.x, -axis.y};
    const double phiF_A = t.phi_F(mid, nuA);
    const double phi_A = t.phi(mid, nuA);
    double disputed = phiF_A;
    if (t.filament_on_film == FilamentOnFilmWeight::phi) disputed = phi_A;
    if (t.filament_on_film == FilamentOnFilmWeight::phi_plus_phi_FS) disputed = phi_A + t.phi_FS(mid, nuA);

    const std::array<std::pair<bool, double>, kInterfaceClassCount> terms{{
        {redA && !dS, phiF_A},
        {redA && redS, phi_A},
        {dA && !dS && A_one, 2.0 * t.phi_F(mid, axis)},
        {dA && !dS && A_zero, 2.0 * t.phi_prime(mid, axis)},
        {redS && !dA && A_one, t.phi_FS(mid, nuS)},
        {dS && dA && S_one, 2.0 * t.phi(mid, axis)},
        {dS && dA && A_zero, 2.0 * t.phi_prime(mid, axis)},
        {dS && redA && S_zero, disputed},
        {dS && !dA && (S_one || S_zero) && A_one, 2.0 * t.phi_FS(mid, axis)},
        {dA && redS && A_one, t.phi_F(mid, nuS) + t.phi(mid, nuS)},
        {dS && dA && S_zero && A_one, 2.0 * t.phi_F(mid, axis)},
    }};
    for (int k = 0; k < kInterfaceClassCount; ++k) {
      if (!terms[k].first) continue;
      ++out.matches[e];
      out.per_term[k] += terms[k].second * len;
      out.total += terms[k].second * len;
    }
  }
  return out;
}

/// Boundary components by breadth-first search over the vertex graph.
inline int oracle_component_count(const Grid& g, const EdgeSet& edges) {
  std::vector<std::vector<int>> adj(g.vertex_count());
  std::vector<std::uint8_t> used(g.vertex_count(), 0);
  for (EdgeId e : edges) {
    const int v = e / 2;
    const int w = (e % 2 == 0) ? v + 1 : v + g.nx + 1;
    adj[v].push_back(w);
    adj[w].push_back(v);
    used[v] = used[w] = 1;
  }
  std::vector<std::uint8_t> seen(g.vertex_count(), 0);
  int count = 0;
  for (int s = 0; s < g.vertex_count(); ++s) {
    if (!used[s] || seen[s]) continue;
    ++count;
    std::queue<int> q;
    q.push(s);
    seen[s] = 1;
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (int w : adj[v]) {
        if (!seen[w]) {
          seen[w] = 1;
          q.push(w);
        }
      }
    }
  }
  return count;
}

/// Var h by enumerating adjacent-column jumps and spike excursions.
struct OracleVariation {
  double variation = 0.0;
  double graph_length = 0.0;
};

inline OracleVariation oracle_variation(const Grid& g, const HeightProfile& p) {
  OracleVariation out;
  double jumps = 0.0;
  for (int i = 0; i + 1 < g.nx; ++i) jumps += std::abs(p.levels[i + 1] - p.levels[i]) * g.hy();
  double spikes = 0.0;
  for (const Spike& s : p.spikes) spikes += (s.top - std::max(p.levels[s.line - 1], p.levels[s.line])) * g.hy();
  out.variation = jumps + 2.0 * spikes;
  // horizontal pieces, then every vertical piece traversed
  out.graph_length = 2.0 * g.l + jumps + 2.0 * spikes;
  return out;
}

/// Cheapest 8-neighbour lattice path by plain Bellman-Ford relaxation.
inline double oracle_lattice_path(const FinslerNorm& phi, const Grid& g, std::array<int, 2> p, std::array<int, 2> q) {
  std::vector<double> d(g.vertex_count(), std::numeric_limits<double>::infinity());
  d[g.vertex(p[0], p[1])] = 0.0;
  for (bool changed = true; changed;) {
    changed = false;
    for (int i = 0; i <= g.nx; ++i) {
      for (int j = 0; j <= g.ny; ++j) {
        const double here = d[g.vertex(i, j)];
        if (!std::isfinite(here)) continue;
        for (int di = -1; di <= 1; ++di) {
          for (int dj = -1; dj <= 1; ++dj) {
            const int a = i + di;
            const int b = j + dj;
            if ((di == 0 && dj == 0) || a < 0 || b < 0 || a > g.nx || b > g.ny) continue;
            const double cand = here + phi.value({di * g.hx(), dj * g.hy()});
            if (cand < d[g.vertex(a, b)] - 1e-15) {
              d[g.vertex(a, b)] = cand;
              changed = true;
            }
          }
        }
      }
    }
  }
  return d[g.vertex(q[0], q[1])];
}

}  // namespace testing_support

#include "sdri/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

namespace sdri {

namespace {

constexpr std::array<std::string_view, 6> kSequenceNames{
    "neckpinch",        "vanishing-filament",   "island-shrink",
    "wetting-collapse", "delamination-closing", "substrate-crack-closing",
};

int ceil_div(int n, int k) { return (n + k - 1) / k; }

HeightProfile flat_profile(const Grid& g) {
  HeightProfile p;
  p.levels.assign(g.nx, g.zero_level());
  return p;
}

void set_film(Configuration& cfg, int i0, int i1, int j0, int j1, bool value = true) {
  for (int j = j0; j < j1; ++j) {
    for (int i = i0; i < i1; ++i) cfg.composite.cells[cfg.grid.cell(i, j)] = value ? 1 : 0;
  }
}

void require(bool ok, const std::string& what) {
  if (!ok) throw SequenceError(what);
}

// capacity = largest index with a distinct feature size of at least one cell
void check_count(int count, int capacity, std::string_view kind) {
  require(capacity >= 1, "grid too coarse for the " + std::string(kind) + " construction");
  if (count < 1 || count > capacity) {
    throw SequenceError("grid too coarse for index " + std::to_string(count) + " of " + std::string(kind) +
                        ": features fall below one cell past k = " + std::to_string(capacity));
  }
}

Configuration neckpinch_member(const Grid& g, int gap, int width, int bridge_row, int rows_top) {
  Configuration cfg = flat_configuration(g);
  const int z = g.zero_level();
  const int mid = g.nx / 2;
  const int left_end = mid - (gap + 1) / 2;
  const int right_start = mid + gap / 2;
  set_film(cfg, left_end - width, left_end, z + 1, rows_top);
  set_film(cfg, right_start, right_start + width, z + 1, rows_top);
  set_film(cfg, left_end, right_start, bridge_row, bridge_row + 1);
  if (gap == 0) {
    for (int j = z + 1; j < rows_top; ++j) {
      if (j != bridge_row) cfg.composite.slits.insert(g.vertical_edge(mid, j));
    }
  }
  return cfg;
}

}  // namespace

std::string_view sequence_name(SequenceKind k) { return kSequenceNames[static_cast<int>(k)]; }

std::optional<SequenceKind> sequence_from_name(std::string_view name) {
  for (SequenceKind k : kSequenceKinds) {
    if (sequence_name(k) == name) return k;
  }
  return std::nullopt;
}

Sequence generate_sequence(SequenceKind kind, int count, const Grid& g) {
  Sequence seq;
  seq.kind = kind;
  const int z = g.zero_level();
  const int mid = g.nx / 2;
  const auto name = sequence_name(kind);
  auto feature_schedule = [&](int n) {
    check_count(count, n, name);
    for (int k = 1; k <= count; ++k) seq.feature_cells.push_back(ceil_div(n, k));
  };

  switch (kind) {
    case SequenceKind::vanishing_filament: {
      require(g.nx >= 2, "vanishing-filament needs at least two columns");
      feature_schedule(g.ny / 2);
      for (int f : seq.feature_cells) {
        HeightProfile p = flat_profile(g);
        p.spikes.push_back({mid, z + f});
        seq.members.push_back(bare_configuration(g, p));
      }
      seq.limit = flat_configuration(g);
      break;
    }
    case SequenceKind::wetting_collapse: {
      feature_schedule(g.ny / 2 - 1);
      for (int f : seq.feature_cells) {
        Configuration cfg = flat_configuration(g);
        set_film(cfg, 0, g.nx, z, z + f);
        seq.members.push_back(std::move(cfg));
      }
      seq.limit = flat_configuration(g);
      break;
    }
    case SequenceKind::neckpinch: {
      const int G = g.nx / 2;
      const int width = g.nx / 2 - (G + 1) / 2 - 1;
      require(width >= 1 && g.ny >= 6, "neckpinch needs at least 8 columns and 6 rows");
      feature_schedule(G);
      const int rows_top = g.ny - 1;
      const int bridge_row = z + 1 + (rows_top - z - 1) / 2;
      for (int f : seq.feature_cells) seq.members.push_back(neckpinch_member(g, f, width, bridge_row, rows_top));
      seq.limit = neckpinch_member(g, 0, width, bridge_row, rows_top);
      seq.budget = {1, 2};
      break;
    }
    case SequenceKind::island_shrink: {
      feature_schedule(std::min(g.nx / 2 - 1, g.ny / 2 - 1));
      for (int f : seq.feature_cells) {
        Configuration cfg = flat_configuration(g);
        set_film(cfg, mid - f, mid + f, z, z + f);
        seq.members.push_back(std::move(cfg));
      }
      seq.limit = flat_configuration(g);
      break;
    }
    case SequenceKind::delamination_closing: {
      require(g.nx >= 4, "delamination-closing needs at least 4 columns");
      const int V = g.ny / 2 - 2;
      feature_schedule(V);
      const int i0 = g.nx / 4;
      const int i1 = g.nx - g.nx / 4;
      Configuration base = flat_configuration(g);
      set_film(base, 0, g.nx, z, z + V + 1);
      for (int f : seq.feature_cells) {
        Configuration cfg = base;
        set_film(cfg, i0, i1, z, z + f, false);
        seq.members.push_back(std::move(cfg));
      }
      seq.limit = base;
      for (int i = i0; i < i1; ++i) seq.limit.composite.slits.insert(g.horizontal_edge(i, z));
      seq.budget = {1, 2};
      break;
    }
    case SequenceKind::substrate_crack_closing: {
      require(g.nx >= 2, "substrate-crack-closing needs at least two columns");
      const int depth = g.ny / 2 - 1;
      const int top = z + depth;
      feature_schedule(g.nx / 2);
      for (int f : seq.feature_cells) {
        HeightProfile p = flat_profile(g);
        std::fill(p.levels.begin(), p.levels.end(), top);
        for (int i = mid - (f + 1) / 2; i < mid + f / 2; ++i) p.levels[i] = z;
        seq.members.push_back(bare_configuration(g, p));
      }
      HeightProfile p = flat_profile(g);
      std::fill(p.levels.begin(), p.levels.end(), top);
      EdgeSet cracks;
      for (int j = z; j < top; ++j) cracks.insert(g.vertical_edge(mid, j));
      seq.limit = bare_configuration(g, p, cracks);
      seq.limit.composite.slits = cracks;
      break;
    }
  }

  for (std::size_t k = 0; k < seq.members.size(); ++k) {
    const auto r = validate_configuration(seq.members[k], seq.budget);
    if (!r.admissible) {
      throw SequenceError(std::string(name) + " member " + std::to_string(k + 1) + " is inadmissible: " +
                          r.violations.front());
    }
  }
  const auto r = validate_configuration(seq.limit, seq.budget);
  if (!r.admissible) throw SequenceError(std::string(name) + " limit is inadmissible: " + r.violations.front());
  return seq;
}

namespace {

double edge_length_sum(const Grid& g, const EdgeSet& edges) {
  double s = 0.0;
  for (EdgeId e : edges) s += g.edge_length(e);
  return s;
}

}  // namespace

ConvergenceReport tau_convergence_report(const std::vector<Configuration>& members, const Configuration& limit,
                                         const std::vector<int>& feature_cells) {
  ConvergenceReport r;
  const Grid& g = limit.grid;
  const double diag = std::hypot(g.hx(), g.hy());
  const auto limit_A = sdist_field(g, composite_distance_region(limit));
  const auto limit_S = sdist_field(g, substrate_distance_region(limit));
  auto sup_gap = [](const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
  };
  for (std::size_t k = 0; k < members.size(); ++k) {
    const Configuration& cfg = members[k];
    if (!(cfg.grid == g)) throw SequenceError("sequence members must share the limit grid");
    r.gap_A.push_back(sup_gap(sdist_field(g, composite_distance_region(cfg)), limit_A));
    r.gap_S.push_back(sup_gap(sdist_field(g, substrate_distance_region(cfg)), limit_S));
    r.length_A.push_back(edge_length_sum(g, composite_boundary(cfg)));
    r.length_S.push_back(edge_length_sum(g, cfg.substrate.boundary));
    r.length_sup = std::max({r.length_sup, r.length_A.back(), r.length_S.back()});
    if (k < feature_cells.size()) {
      r.bound.push_back(feature_cells[k] * std::max(g.hx(), g.hy()) + diag);
      const double gap = std::max(r.gap_A.back(), r.gap_S.back());
      if (gap > r.bound.back() + 1e-12) r.within_bound = false;
    }
    if (k > 0) {
      const double prev = std::max(r.gap_A[k - 1], r.gap_S[k - 1]);
      const double cur = std::max(r.gap_A[k], r.gap_S[k]);
      if (cur > prev + diag + 1e-12) r.monotone = false;
    }
  }
  return r;
}

ConvergenceReport tau_convergence_report(const Sequence& seq) {
  return tau_convergence_report(seq.members, seq.limit, seq.feature_cells);
}

LscReport lsc_check(const std::vector<Configuration>& members, const Configuration& limit,
                    const SurfaceTensions& tensions, double tolerance, const ClassRelabel* limit_relabel) {
  LscReport r;
  r.tolerance = tolerance;
  r.limit_energy = surface_energy(limit, tensions, limit_relabel).surface;
  for (const auto& cfg : members) r.energies.push_back(surface_energy(cfg, tensions).surface);
  r.tail_min.resize(members.size());
  double running = std::numeric_limits<double>::infinity();
  for (std::size_t k = members.size(); k-- > 0;) {
    running = std::min(running, r.energies[k] - r.limit_energy);
    r.tail_min[k] = running;
  }
  r.margin = members.empty() ? 0.0 : r.tail_min.front();
  r.pass = std::all_of(r.tail_min.begin(), r.tail_min.end(), [&](double m) { return m >= -tolerance; });
  return r;
}

LscReport lsc_check(const Sequence& seq, const SurfaceTensions& tensions, double tolerance,
                    const ClassRelabel* limit_relabel) {
  return lsc_check(seq.members, seq.limit, tensions, tolerance, limit_relabel);
}

LscReport adversarial_lsc(const Grid& grid, int count, const SurfaceTensions& tensions) {
  const Sequence seq = generate_sequence(SequenceKind::delamination_closing, count, grid);
  ClassRelabel relabel{};
  relabel[static_cast<int>(InterfaceClass::coherent_interface)] = InterfaceClass::incoherent_interface;
  return lsc_check(seq, tensions, 1e-9, &relabel);
}

CompactnessReport compactness_bound_check(const Configuration& cfg, const SurfaceTensions& tensions) {
  const Grid& g = cfg.grid;
  const EdgeSet dA = composite_boundary(cfg);
  EdgeSet dS_only;
  std::set_difference(cfg.substrate.boundary.begin(), cfg.substrate.boundary.end(), dA.begin(), dA.end(),
                      std::inserter(dS_only, dS_only.end()));
  CompactnessReport r;
  r.lhs = tensions.bounds().first * (edge_length_sum(g, dA) + edge_length_sum(g, dS_only));
  r.rhs = 2.0 * surface_energy(cfg, tensions).surface;
  r.pass = r.lhs <= r.rhs + 1e-12;
  return r;
}

SegmentReport segment_minimality_check(const FinslerNorm& phi, std::array<int, 2> p, std::array<int, 2> q,
                                       const Grid& grid) {
  auto inside = [&](int i, int j) { return i >= 0 && i <= grid.nx && j >= 0 && j <= grid.ny; };
  if (!inside(p[0], p[1]) || !inside(q[0], q[1])) throw GeometryError("segment end points must be lattice vertices");
  if (p == q) throw GeometryError("segment end points must differ");
  std::vector<double> dist(grid.vertex_count(), std::numeric_limits<double>::infinity());
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  const int source = grid.vertex(p[0], p[1]);
  const int target = grid.vertex(q[0], q[1]);
  dist[source] = 0.0;
  queue.emplace(0.0, source);
  while (!queue.empty()) {
    const auto [d, v] = queue.top();
    queue.pop();
    if (d > dist[v]) continue;
    if (v == target) break;
    const int i = grid.vertex_col(v);
    const int j = grid.vertex_row(v);
    for (int di = -1; di <= 1; ++di) {
      for (int dj = -1; dj <= 1; ++dj) {
        if ((di == 0 && dj == 0) || !inside(i + di, j + dj)) continue;
        const double step = phi.value({di * grid.hx(), dj * grid.hy()});
        const int w = grid.vertex(i + di, j + dj);
        if (d + step < dist[w]) {
          dist[w] = d + step;
          queue.emplace(dist[w], w);
        }
      }
    }
  }
  SegmentReport r;
  r.path_cost = dist[target];
  r.chord_cost = phi.value({(q[0] - p[0]) * grid.hx(), (q[1] - p[1]) * grid.hy()});
  r.pass = r.path_cost >= r.chord_cost - 1e-12;
  return r;
}

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

FinslerNorm random_norm(std::mt19937_64& rng) {
  switch (rng() % 3) {
    case 0:
      return FinslerNorm::weighted_axis(uniform(rng, 0.5, 2.0), uniform(rng, 0.5, 2.0));
    case 1: {
      const double a = uniform(rng, 0.5, 2.0);
      const double b = uniform(rng, 0.5, 2.0);
      const double th = uniform(rng, 0.0, std::numbers::pi);
      const double c = std::cos(th);
      const double s = std::sin(th);
      return FinslerNorm::elliptic(a * a * c * c + b * b * s * s, (a * a - b * b) * c * s, a * a * s * s + b * b * c * c);
    }
    default: {
      const int m = 2 + static_cast<int>(rng() % 2);
      const double base = uniform(rng, 0.0, std::numbers::pi);
      std::vector<Vec2> support;
      for (int k = 0; k < m; ++k) {
        const double th = base + k * std::numbers::pi / m + uniform(rng, -0.2, 0.2);
        const double r = uniform(rng, 0.5, 2.0);
        support.push_back({r * std::cos(th), r * std::sin(th)});
        support.push_back({-r * std::cos(th), -r * std::sin(th)});
      }
      return FinslerNorm::crystalline(std::move(support));
    }
  }
}

SurfaceTensions random_admissible_tensions(std::mt19937_64& rng) {
  const Material material;
  for (;;) {
    SurfaceTensions t = derive_regime_tensions(random_norm(rng), random_norm(rng), random_norm(rng));
    if (validate_hypotheses(t, material).h2_holds) return t;
  }
}

}  // namespace sdri

#include "sdri/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "sdri/disjoint_set.hpp"

namespace sdri {

Grid::Grid(double half_width, double half_height, int columns, int rows)
    : l(half_width), L(half_height), nx(columns), ny(rows) {
  if (!(l > 0.0) || !(L > 0.0)) throw GeometryError("grid half-width and half-height must be positive");
  if (nx < 1) throw GeometryError("grid needs at least one column");
  if (ny < 2 || ny % 2 != 0) throw GeometryError("grid row count must be even and positive");
}

Vec2 Grid::vertex_point(int v) const { return vertex_point(vertex_col(v), vertex_row(v)); }

Vec2 Grid::cell_center(int c) const {
  return {-l + (cell_col(c) + 0.5) * hx(), -L + (cell_row(c) + 0.5) * hy()};
}

bool Grid::edge_valid(EdgeId e) const {
  if (e < 0 || e >= edge_id_bound()) return false;
  const int i = edge_col(e);
  const int j = edge_row(e);
  return edge_axis(e) == Axis::horizontal ? i < nx : j < ny;
}

std::array<int, 2> Grid::edge_vertices(EdgeId e) const {
  const int v = e >> 1;
  return {v, edge_axis(e) == Axis::horizontal ? v + 1 : v + nx + 1};
}

std::array<int, 2> Grid::edge_cells(EdgeId e) const {
  const int i = edge_col(e);
  const int j = edge_row(e);
  if (edge_axis(e) == Axis::horizontal) {
    return {j > 0 ? cell(i, j - 1) : -1, j < ny ? cell(i, j) : -1};
  }
  return {i > 0 ? cell(i - 1, j) : -1, i < nx ? cell(i, j) : -1};
}

bool Grid::on_domain_wall(EdgeId e) const {
  const auto cells = edge_cells(e);
  return cells[0] < 0 || cells[1] < 0;
}

Vec2 Grid::edge_midpoint(EdgeId e) const {
  const auto [a, b] = edge_vertices(e);
  const Vec2 p = vertex_point(a);
  const Vec2 q = vertex_point(b);
  return {0.5 * (p.x + q.x), 0.5 * (p.y + q.y)};
}

std::array<EdgeId, 4> Grid::cell_edges(int c) const {
  const int i = cell_col(c);
  const int j = cell_row(c);
  return {horizontal_edge(i, j), horizontal_edge(i, j + 1), vertical_edge(i, j), vertical_edge(i + 1, j)};
}

int HeightProfile::line_base(int line) const {
  const int n = static_cast<int>(levels.size());
  const int left = line > 0 ? levels[line - 1] : 0;
  const int right = line < n ? levels[line] : 0;
  return std::max(left, right);
}

const Spike* HeightProfile::spike_at(int line) const {
  auto it = std::lower_bound(spikes.begin(), spikes.end(), line,
                             [](const Spike& s, int v) { return s.line < v; });
  return (it != spikes.end() && it->line == line) ? &*it : nullptr;
}

namespace {

int snap_level(const Grid& grid, double height) {
  const double exact = (height + grid.L) / grid.hy();
  const double rounded = std::round(exact);
  if (std::abs(exact - rounded) > 1e-9 * std::max(1.0, std::abs(exact))) {
    std::ostringstream msg;
    msg << "height " << height << " does not lie on a grid line";
    throw GeometryError(msg.str());
  }
  return static_cast<int>(rounded);
}

void check_profile(const Grid& grid, const HeightProfile& profile) {
  if (static_cast<int>(profile.levels.size()) != grid.nx) {
    throw GeometryError("height profile must have one level per column");
  }
  for (int i = 0; i < grid.nx; ++i) {
    if (profile.levels[i] < 0 || profile.levels[i] > grid.ny) {
      throw GeometryError("column " + std::to_string(i) + " level outside the grid");
    }
  }
  int previous = 0;
  for (const Spike& s : profile.spikes) {
    if (s.line <= 0 || s.line >= grid.nx) {
      throw GeometryError("spike on grid line " + std::to_string(s.line) + " is not an interior line");
    }
    if (s.line <= previous) throw GeometryError("spikes must be sorted with one per line");
    previous = s.line;
    if (s.top > grid.ny || s.top <= profile.line_base(s.line)) {
      throw GeometryError("spike on line " + std::to_string(s.line) + " must rise above both columns");
    }
  }
}

}  // namespace

bool crack_in_closure(const Grid& grid, const HeightProfile& profile, EdgeId e) {
  if (!grid.edge_valid(e) || grid.on_domain_wall(e)) return false;
  const int i = grid.edge_col(e);
  const int j = grid.edge_row(e);
  if (grid.edge_axis(e) == Axis::horizontal) return j <= profile.levels[i];
  return j + 1 <= std::max(profile.levels[i - 1], profile.levels[i]);
}

std::string edge_name(const Grid& grid, EdgeId e) {
  std::ostringstream out;
  out << "edge " << e << " ("
      << (grid.edge_axis(e) == Axis::horizontal ? "horizontal" : "vertical") << " at vertex "
      << grid.edge_col(e) << "," << grid.edge_row(e) << ")";
  return out.str();
}

HeightProfile profile_from_heights(const Grid& grid, const std::vector<double>& heights,
                                   const std::vector<std::pair<int, double>>& spikes) {
  HeightProfile profile;
  profile.levels.reserve(heights.size());
  for (double h : heights) profile.levels.push_back(snap_level(grid, h));
  for (const auto& [line, top] : spikes) profile.spikes.push_back({line, snap_level(grid, top)});
  std::sort(profile.spikes.begin(), profile.spikes.end(),
            [](const Spike& a, const Spike& b) { return a.line < b.line; });
  check_profile(grid, profile);
  return profile;
}

std::size_t SubstrateRegion::cell_count() const {
  return static_cast<std::size_t>(std::count(cells.begin(), cells.end(), std::uint8_t{1}));
}

std::size_t CompositeRegion::cell_count() const {
  return static_cast<std::size_t>(std::count(cells.begin(), cells.end(), std::uint8_t{1}));
}

SubstrateRegion substrate_from_height(const Grid& grid, HeightProfile profile, EdgeSet cracks) {
  check_profile(grid, profile);
  for (EdgeId e : cracks) {
    if (!crack_in_closure(grid, profile, e)) {
      throw GeometryError("crack " + edge_name(grid, e) + " lies outside the closed subgraph");
    }
  }
  SubstrateRegion region;
  region.cells.assign(grid.cell_count(), 0);
  for (int i = 0; i < grid.nx; ++i) {
    for (int j = 0; j < profile.levels[i]; ++j) region.cells[grid.cell(i, j)] = 1;
  }
  for (const Spike& s : profile.spikes) {
    for (int j = profile.line_base(s.line); j < s.top; ++j) region.spike_edges.insert(grid.vertical_edge(s.line, j));
  }
  for (EdgeId e = 0; e < grid.edge_id_bound(); ++e) {
    if (!grid.edge_valid(e) || grid.on_domain_wall(e)) continue;
    const auto [a, b] = grid.edge_cells(e);
    const bool reduced = (region.cells[a] != 0) != (region.cells[b] != 0);
    if (reduced || cracks.count(e) || region.spike_edges.count(e)) region.boundary.insert(e);
  }
  region.profile = std::move(profile);
  region.cracks = std::move(cracks);
  return region;
}

double Configuration::composite_area() const {
  return static_cast<double>(composite.cell_count()) * grid.cell_area();
}

double Configuration::substrate_area() const {
  return static_cast<double>(substrate.cell_count()) * grid.cell_area();
}

Configuration bare_configuration(const Grid& grid, const HeightProfile& profile, EdgeSet cracks) {
  Configuration cfg;
  cfg.grid = grid;
  cfg.substrate = substrate_from_height(grid, profile, std::move(cracks));
  cfg.composite.cells = cfg.substrate.cells;
  // spikes in the vapour must be carried by the composite closure
  for (EdgeId e : cfg.substrate.spike_edges) {
    const auto [a, b] = grid.edge_cells(e);
    if (!cfg.composite.contains(a) && !cfg.composite.contains(b)) cfg.composite.filaments.insert(e);
  }
  return cfg;
}

Configuration flat_configuration(const Grid& grid) {
  HeightProfile profile;
  profile.levels.assign(grid.nx, grid.zero_level());
  return bare_configuration(grid, profile);
}

void refresh_substrate(Configuration& cfg) {
  cfg.substrate = substrate_from_height(cfg.grid, std::move(cfg.substrate.profile), std::move(cfg.substrate.cracks));
}

EdgeSet composite_boundary(const Configuration& cfg) {
  const Grid& grid = cfg.grid;
  EdgeSet out;
  for (EdgeId e = 0; e < grid.edge_id_bound(); ++e) {
    if (!grid.edge_valid(e) || grid.on_domain_wall(e)) continue;
    const auto [a, b] = grid.edge_cells(e);
    if (cfg.composite.contains(a) != cfg.composite.contains(b)) out.insert(e);
  }
  out.insert(cfg.composite.slits.begin(), cfg.composite.slits.end());
  out.insert(cfg.composite.filaments.begin(), cfg.composite.filaments.end());
  return out;
}

int ComponentLabels::label_of(EdgeId e) const {
  auto it = std::lower_bound(labels.begin(), labels.end(), e,
                             [](const std::pair<EdgeId, int>& p, EdgeId v) { return p.first < v; });
  return (it != labels.end() && it->first == e) ? it->second : -1;
}

ComponentLabels boundary_components(const Grid& grid, const EdgeSet& edges) {
  ComponentLabels result;
  if (edges.empty()) return result;
  const std::vector<EdgeId> list(edges.begin(), edges.end());
  const int n = static_cast<int>(list.size());
  DisjointSet sets(n);
  std::map<int, int> first_at_vertex;
  for (int k = 0; k < n; ++k) {
    for (int v : grid.edge_vertices(list[k])) {
      auto [it, inserted] = first_at_vertex.emplace(v, k);
      if (!inserted) sets.unite(it->second, k);
    }
  }
  // edges are visited in increasing id order, so the first edge of each
  // root is that component's smallest edge
  std::map<int, int> label_of_root;
  result.labels.reserve(n);
  for (int k = 0; k < n; ++k) {
    const int root = sets.find(k);
    auto [it, inserted] = label_of_root.emplace(root, result.count);
    if (inserted) ++result.count;
    result.labels.emplace_back(list[k], it->second);
  }
  return result;
}

AdmissibilityError::AdmissibilityError(AdmissibilityReport report)
    : GeometryError([&] {
        std::string msg = "inadmissible configuration";
        for (const auto& v : report.violations) msg += "; " + v;
        return msg;
      }()),
      report_(std::move(report)) {}

std::vector<std::string> structural_violations(const Configuration& cfg) {
  const Grid& grid = cfg.grid;
  std::vector<std::string> out;
  const auto& profile = cfg.substrate.profile;
  if (static_cast<int>(cfg.composite.cells.size()) != grid.cell_count() ||
      static_cast<int>(cfg.substrate.cells.size()) != grid.cell_count() ||
      static_cast<int>(profile.levels.size()) != grid.nx) {
    out.emplace_back("region sizes do not match the grid");
    return out;
  }
  for (int i = 0; i < grid.nx; ++i) {
    if (profile.levels[i] < grid.zero_level()) {
      out.push_back("substrate height below y=0 in column " + std::to_string(i));
    }
  }
  for (EdgeId e : cfg.substrate.cracks) {
    if (!crack_in_closure(grid, profile, e)) out.push_back("crack " + edge_name(grid, e) + " outside the closed subgraph");
  }
  for (int c = 0; c < grid.cell_count(); ++c) {
    if (cfg.substrate.contains(c) && !cfg.composite.contains(c)) {
      out.push_back("substrate cell " + std::to_string(c) + " outside the composite region (S not in closure of A)");
    }
  }
  for (EdgeId e : cfg.composite.slits) {
    if (!grid.edge_valid(e) || grid.on_domain_wall(e)) {
      out.push_back("slit " + std::to_string(e) + " is not an interior edge");
      continue;
    }
    const auto [a, b] = grid.edge_cells(e);
    if (!cfg.composite.contains(a) || !cfg.composite.contains(b)) {
      out.push_back("slit " + edge_name(grid, e) + " does not have the composite region on both sides");
    } else if (cfg.substrate.contains(a) && cfg.substrate.contains(b) && !cfg.substrate.cracks.count(e)) {
      out.push_back("∂A ∩ Int(S) ≠ ∅ at " + edge_name(grid, e));
    }
  }
  for (EdgeId e : cfg.composite.filaments) {
    if (!grid.edge_valid(e) || grid.on_domain_wall(e)) {
      out.push_back("filament " + std::to_string(e) + " is not an interior edge");
      continue;
    }
    const auto [a, b] = grid.edge_cells(e);
    if (cfg.composite.contains(a) || cfg.composite.contains(b)) {
      out.push_back("filament " + edge_name(grid, e) + " touches a composite cell");
    }
  }
  for (EdgeId e : cfg.substrate.spike_edges) {
    const auto [a, b] = grid.edge_cells(e);
    if (!cfg.composite.contains(a) && !cfg.composite.contains(b) && !cfg.composite.filaments.count(e)) {
      out.push_back("substrate spike " + edge_name(grid, e) + " outside the closure of the composite region");
    }
  }
  if (!cfg.composite.filaments.empty()) {
    std::vector<std::uint8_t> anchored(grid.vertex_count(), 0);
    for (int c = 0; c < grid.cell_count(); ++c) {
      if (!cfg.composite.contains(c)) continue;
      const int i = grid.cell_col(c);
      const int j = grid.cell_row(c);
      anchored[grid.vertex(i, j)] = anchored[grid.vertex(i + 1, j)] = 1;
      anchored[grid.vertex(i, j + 1)] = anchored[grid.vertex(i + 1, j + 1)] = 1;
    }
    const auto labels = boundary_components(grid, cfg.composite.filaments);
    std::vector<std::uint8_t> ok(labels.count, 0);
    for (const auto& [e, label] : labels.labels) {
      for (int v : grid.edge_vertices(e)) ok[label] |= anchored[v];
    }
    for (int k = 0; k < labels.count; ++k) {
      if (!ok[k]) out.push_back("filament component " + std::to_string(k) + " is detached from the composite cells");
    }
  }
  return out;
}

AdmissibilityReport validate_configuration(const Configuration& cfg, ComponentBudget m) {
  AdmissibilityReport report;
  report.budget = m;
  report.violations = structural_violations(cfg);
  if (report.violations.empty() || report.violations.front() != "region sizes do not match the grid") {
    report.substrate_components = boundary_components(cfg.grid, cfg.substrate.boundary).count;
    report.composite_components = boundary_components(cfg.grid, composite_boundary(cfg)).count;
    if (report.substrate_components > m.m0) {
      report.violations.push_back("∂S has " + std::to_string(report.substrate_components) +
                                  " components, budget m0 = " + std::to_string(m.m0));
    }
    if (report.composite_components > m.m1) {
      report.violations.push_back("∂A has " + std::to_string(report.composite_components) +
                                  " components, budget m1 = " + std::to_string(m.m1));
    }
  }
  report.admissible = report.violations.empty();
  return report;
}

VariationReport pointwise_variation(const Grid& grid, const HeightProfile& profile) {
  check_profile(grid, profile);
  long jumps = 0;
  long spikes = 0;
  for (int i = 1; i < grid.nx; ++i) jumps += std::abs(profile.levels[i] - profile.levels[i - 1]);
  for (const Spike& s : profile.spikes) spikes += s.top - profile.line_base(s.line);
  const double hy = grid.hy();
  VariationReport r;
  r.variation = static_cast<double>(jumps + 2 * spikes) * hy;
  r.graph_length = 2.0 * grid.l + r.variation;
  r.boundary_measure = 2.0 * grid.l + static_cast<double>(jumps + spikes) * hy;
  return r;
}

DistanceRegion composite_distance_region(const Configuration& cfg) {
  DistanceRegion r;
  r.cells = cfg.composite.cells;
  r.edges = cfg.composite.slits;
  r.edges.insert(cfg.composite.filaments.begin(), cfg.composite.filaments.end());
  return r;
}

DistanceRegion substrate_distance_region(const Configuration& cfg) {
  DistanceRegion r;
  r.cells = cfg.substrate.cells;
  r.edges = cfg.substrate.cracks;
  r.edges.insert(cfg.substrate.spike_edges.begin(), cfg.substrate.spike_edges.end());
  return r;
}

namespace {

struct Segment {
  Vec2 a;
  Vec2 b;
};

std::vector<Segment> region_segments(const Grid& grid, const DistanceRegion& region) {
  std::vector<Segment> segs;
  auto inside = [&](int c) { return c >= 0 && region.cells[c] != 0; };
  for (EdgeId e = 0; e < grid.edge_id_bound(); ++e) {
    if (!grid.edge_valid(e)) continue;
    const auto [c0, c1] = grid.edge_cells(e);
    if (inside(c0) != inside(c1) || region.edges.count(e)) {
      const auto [v0, v1] = grid.edge_vertices(e);
      segs.push_back({grid.vertex_point(v0), grid.vertex_point(v1)});
    }
  }
  if (segs.empty()) throw GeometryError("undefined signed distance: region boundary is empty");
  return segs;
}

double segment_distance(const Segment& s, Vec2 p) {
  const double cx = std::clamp(p.x, std::min(s.a.x, s.b.x), std::max(s.a.x, s.b.x));
  const double cy = std::clamp(p.y, std::min(s.a.y, s.b.y), std::max(s.a.y, s.b.y));
  return std::hypot(p.x - cx, p.y - cy);
}

double unsigned_distance(const std::vector<Segment>& segs, Vec2 p) {
  double d = std::numeric_limits<double>::infinity();
  for (const Segment& s : segs) d = std::min(d, segment_distance(s, p));
  return d;
}

}  // namespace

double sdist_at(const Grid& grid, const DistanceRegion& region, Vec2 point) {
  const auto segs = region_segments(grid, region);
  const double d = unsigned_distance(segs, point);
  if (d == 0.0) return 0.0;
  const bool in_domain = point.x >= -grid.l && point.x <= grid.l && point.y >= -grid.L && point.y <= grid.L;
  if (!in_domain) return d;
  const int i = std::clamp(static_cast<int>(std::floor((point.x + grid.l) / grid.hx())), 0, grid.nx - 1);
  const int j = std::clamp(static_cast<int>(std::floor((point.y + grid.L) / grid.hy())), 0, grid.ny - 1);
  return region.cells[grid.cell(i, j)] ? -d : d;
}

std::vector<double> sdist_field(const Grid& grid, const DistanceRegion& region) {
  const auto segs = region_segments(grid, region);
  std::vector<double> out(grid.cell_count());
  for (int c = 0; c < grid.cell_count(); ++c) {
    const double d = unsigned_distance(segs, grid.cell_center(c));
    out[c] = region.cells[c] ? -d : d;
  }
  return out;
}

namespace {

int exact_steps(double length, double step, const char* what) {
  const double ratio = length / step;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    throw GeometryError(std::string("blow-up ") + what + " is not a multiple of the cell size");
  }
  return static_cast<int>(rounded);
}

}  // namespace

Configuration blowup(const Configuration& cfg, Vec2 y0, double rho) {
  const Grid& g = cfg.grid;
  if (!(rho > 0.0)) throw GeometryError("blow-up scale must be positive");
  const int half_x = exact_steps(rho, g.hx(), "scale");
  const int half_y = exact_steps(rho, g.hy(), "scale");
  const int ci = exact_steps(y0.x + g.l, g.hx(), "centre");
  const int cj = exact_steps(y0.y + g.L, g.hy(), "centre");
  const int i0 = ci - half_x;
  const int j0 = cj - half_y;
  if (i0 < 0 || j0 < 0 || ci + half_x > g.nx || cj + half_y > g.ny) {
    throw GeometryError("blow-up window exceeds the domain");
  }
  Grid w(1.0, 1.0, 2 * half_x, 2 * half_y);

  HeightProfile profile;
  profile.levels.resize(w.nx);
  for (int i = 0; i < w.nx; ++i) {
    profile.levels[i] = std::clamp(cfg.substrate.profile.levels[i0 + i] - j0, 0, w.ny);
  }
  for (const Spike& s : cfg.substrate.profile.spikes) {
    const int line = s.line - i0;
    if (line <= 0 || line >= w.nx) continue;
    const int top = std::clamp(s.top - j0, 0, w.ny);
    if (top > profile.line_base(line)) profile.spikes.push_back({line, top});
  }

  // maps an edge into the window; -1 when it is not strictly inside
  auto map_edge = [&](EdgeId e) -> EdgeId {
    const int i = g.edge_col(e) - i0;
    const int j = g.edge_row(e) - j0;
    if (g.edge_axis(e) == Axis::horizontal) {
      return (i >= 0 && i < w.nx && j > 0 && j < w.ny) ? w.horizontal_edge(i, j) : -1;
    }
    return (i > 0 && i < w.nx && j >= 0 && j < w.ny) ? w.vertical_edge(i, j) : -1;
  };
  auto map_set = [&](const EdgeSet& in) {
    EdgeSet out;
    for (EdgeId e : in) {
      const EdgeId m = map_edge(e);
      if (m >= 0) out.insert(m);
    }
    return out;
  };

  Configuration out;
  out.grid = w;
  out.substrate = substrate_from_height(w, std::move(profile), map_set(cfg.substrate.cracks));
  out.composite.cells.assign(w.cell_count(), 0);
  for (int j = 0; j < w.ny; ++j) {
    for (int i = 0; i < w.nx; ++i) out.composite.cells[w.cell(i, j)] = cfg.composite.cells[g.cell(i0 + i, j0 + j)];
  }
  out.composite.slits = map_set(cfg.composite.slits);
  out.composite.filaments = map_set(cfg.composite.filaments);
  return out;
}

}  // namespace sdri

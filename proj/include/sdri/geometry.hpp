#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sdri {

/// Plain 2D vector used for points, normals and edge directions.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }

/// Lattice edge identifier: 2 * (vertex index) + axis, where axis 0 is the
/// horizontal edge leaving the vertex to the right and axis 1 the vertical
/// edge leaving it upwards.
using EdgeId = std::int32_t;
using EdgeSet = std::set<EdgeId>;

enum class Axis : int { horizontal = 0, vertical = 1 };

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rectangle (-l,l) x (-L,L) split into nx x ny cells. Cell (i,j) has its
/// lower-left corner at vertex (i,j); rows are counted from the bottom.
struct Grid {
  double l = 1.0;
  double L = 1.0;
  int nx = 1;
  int ny = 2;

  Grid() = default;
  Grid(double half_width, double half_height, int columns, int rows);

  double hx() const { return 2.0 * l / nx; }
  double hy() const { return 2.0 * L / ny; }
  double cell_area() const { return hx() * hy(); }
  int cell_count() const { return nx * ny; }
  int vertex_count() const { return (nx + 1) * (ny + 1); }
  int edge_id_bound() const { return 2 * vertex_count(); }
  int zero_level() const { return ny / 2; }

  int cell(int i, int j) const { return j * nx + i; }
  int cell_col(int c) const { return c % nx; }
  int cell_row(int c) const { return c / nx; }
  bool cell_in_range(int i, int j) const { return i >= 0 && i < nx && j >= 0 && j < ny; }

  int vertex(int i, int j) const { return j * (nx + 1) + i; }
  int vertex_col(int v) const { return v % (nx + 1); }
  int vertex_row(int v) const { return v / (nx + 1); }
  Vec2 vertex_point(int v) const;
  Vec2 vertex_point(int i, int j) const { return {-l + i * hx(), -L + j * hy()}; }
  Vec2 cell_center(int c) const;

  EdgeId horizontal_edge(int i, int j) const { return 2 * vertex(i, j); }
  EdgeId vertical_edge(int i, int j) const { return 2 * vertex(i, j) + 1; }
  bool edge_valid(EdgeId e) const;
  Axis edge_axis(EdgeId e) const { return static_cast<Axis>(e & 1); }
  int edge_col(EdgeId e) const { return vertex_col(e >> 1); }
  int edge_row(EdgeId e) const { return vertex_row(e >> 1); }
  std::array<int, 2> edge_vertices(EdgeId e) const;
  /// The two cells sharing the edge, -1 for outside the domain. Order:
  /// (below, above) for horizontal edges, (left, right) for vertical ones.
  std::array<int, 2> edge_cells(EdgeId e) const;
  bool on_domain_wall(EdgeId e) const;
  double edge_length(EdgeId e) const { return edge_axis(e) == Axis::horizontal ? hx() : hy(); }
  Vec2 edge_midpoint(EdgeId e) const;
  /// The four edges of a cell.
  std::array<EdgeId, 4> cell_edges(int c) const;

  friend bool operator==(const Grid&, const Grid&) = default;
};

struct Spike {
  int line = 0;  ///< interior vertical grid line index, 1..nx-1
  int top = 0;   ///< top level of the vertical filament segment
  friend bool operator==(const Spike&, const Spike&) = default;
};

/// Column heights of the substrate as grid levels counted from the bottom of
/// the grid, plus vertical filaments rising above both neighbouring columns.
/// The physical height is level * hy - L.
struct HeightProfile {
  std::vector<int> levels;
  std::vector<Spike> spikes;  ///< sorted by line, at most one per line

  /// Level of the upper semicontinuous envelope on a vertical line.
  int line_base(int line) const;
  const Spike* spike_at(int line) const;
  friend bool operator==(const HeightProfile&, const HeightProfile&) = default;
};

/// Builds a profile from physical heights (in [-L, L]) snapped to grid lines.
HeightProfile profile_from_heights(const Grid& grid, const std::vector<double>& heights,
                                   const std::vector<std::pair<int, double>>& spikes = {});

struct SubstrateRegion {
  HeightProfile profile;
  EdgeSet cracks;
  std::vector<std::uint8_t> cells;  ///< derived subgraph cells
  EdgeSet spike_edges;              ///< derived vertical filament edges
  EdgeSet boundary;                 ///< derived Ω-interior edges of ∂S

  bool contains(int c) const { return c >= 0 && cells[c] != 0; }
  std::size_t cell_count() const;
  friend bool operator==(const SubstrateRegion& a, const SubstrateRegion& b) {
    return a.profile == b.profile && a.cracks == b.cracks;
  }
};

/// Whether a crack edge lies in the closure of the interior of the subgraph.
bool crack_in_closure(const Grid& grid, const HeightProfile& profile, EdgeId e);
std::string edge_name(const Grid& grid, EdgeId e);

/// Subgraph substrate S_{h,K}. Throws GeometryError naming the first crack
/// edge that is not in the closure of the interior of the subgraph.
SubstrateRegion substrate_from_height(const Grid& grid, HeightProfile profile, EdgeSet cracks);

struct CompositeRegion {
  std::vector<std::uint8_t> cells;
  EdgeSet slits;      ///< ∂A edges with both neighbours inside (density 1)
  EdgeSet filaments;  ///< ∂A edges with no neighbour inside (density 0)

  bool contains(int c) const { return c >= 0 && cells[c] != 0; }
  std::size_t cell_count() const;
  friend bool operator==(const CompositeRegion&, const CompositeRegion&) = default;
};

struct Configuration {
  Grid grid;
  SubstrateRegion substrate;
  CompositeRegion composite;

  bool in_film(int c) const { return composite.contains(c) && !substrate.contains(c); }
  double composite_area() const;
  double substrate_area() const;
  friend bool operator==(const Configuration&, const Configuration&) = default;
};

/// A = S: the composite region is exactly the substrate.
Configuration bare_configuration(const Grid& grid, const HeightProfile& profile, EdgeSet cracks = {});
/// Flat substrate at y = 0 with no film.
Configuration flat_configuration(const Grid& grid);
/// Recomputes the derived substrate data after the profile or cracks changed.
void refresh_substrate(Configuration& cfg);

/// Ω-interior edges of ∂A (reduced boundary, slits and filaments).
EdgeSet composite_boundary(const Configuration& cfg);

struct ComponentLabels {
  int count = 0;
  std::vector<std::pair<EdgeId, int>> labels;  ///< sorted by edge id
  int label_of(EdgeId e) const;
};

/// Connected components of an edge set under "edges share a lattice vertex".
/// Labels are numbered in order of each component's smallest edge id.
ComponentLabels boundary_components(const Grid& grid, const EdgeSet& edges);

struct ComponentBudget {
  int m0 = 1;  ///< components of ∂S
  int m1 = 1;  ///< components of ∂A
};

struct AdmissibilityReport {
  bool admissible = true;
  int substrate_components = 0;
  int composite_components = 0;
  ComponentBudget budget;
  std::vector<std::string> violations;
};

/// Checks every structural invariant and the component budget. Violations
/// are collected, never thrown.
AdmissibilityReport validate_configuration(const Configuration& cfg, ComponentBudget m);
/// Structural invariants only (no component budget).
std::vector<std::string> structural_violations(const Configuration& cfg);

class AdmissibilityError : public GeometryError {
 public:
  explicit AdmissibilityError(AdmissibilityReport report);
  const AdmissibilityReport& report() const { return report_; }

 private:
  AdmissibilityReport report_;
};

struct VariationReport {
  double variation = 0.0;         ///< pointwise variation Var h
  double graph_length = 0.0;      ///< traversal length of the graph completion
  double boundary_measure = 0.0;  ///< H^1 of ∂S_h ∩ Ω (filaments counted once)
};

VariationReport pointwise_variation(const Grid& grid, const HeightProfile& profile);

/// Region for signed distances: a union of cells plus extra boundary edges.
struct DistanceRegion {
  std::vector<std::uint8_t> cells;
  EdgeSet edges;
};

DistanceRegion composite_distance_region(const Configuration& cfg);
DistanceRegion substrate_distance_region(const Configuration& cfg);

/// Signed distance from the boundary of the region (walls included):
/// negative inside, positive outside. Throws on an empty boundary.
double sdist_at(const Grid& grid, const DistanceRegion& region, Vec2 point);
/// Signed distances sampled at every cell centre.
std::vector<double> sdist_field(const Grid& grid, const DistanceRegion& region);

/// Restriction of the configuration to the square window of half-side rho
/// centred at y0, rescaled by 1/rho onto the grid (-1,1)^2.
Configuration blowup(const Configuration& cfg, Vec2 y0, double rho);

}  // namespace sdri

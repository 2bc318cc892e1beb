#include "sdri/surface_energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sdri {

namespace {

constexpr std::array<std::string_view, kInterfaceClassCount> kClassNames{
    "film_free",
    "exposed_substrate",
    "film_crack",
    "exposed_filament",
    "coherent_interface",
    "delaminated_substrate_crack",
    "exposed_substrate_filament",
    "substrate_filament_on_film_boundary",
    "bulk_substrate_crack_or_filament",
    "incoherent_interface",
    "delaminated_substrate_filament",
};

// representative points of the four modulation quadrants
constexpr std::array<Vec2, 4> kQuadrantPoints{Vec2{-1.0, -1.0}, Vec2{1.0, -1.0}, Vec2{-1.0, 1.0}, Vec2{1.0, 1.0}};

}  // namespace

std::string_view class_name(InterfaceClass c) { return kClassNames[static_cast<int>(c)]; }

std::optional<InterfaceClass> class_from_name(std::string_view name) {
  for (int k = 0; k < kInterfaceClassCount; ++k) {
    if (kClassNames[k] == name) return static_cast<InterfaceClass>(k);
  }
  return std::nullopt;
}

double SurfaceTensions::phi(Vec2 x, Vec2 xi) const { return std::min(phi_S(x, xi), phi_F(x, xi) + phi_FS(x, xi)); }

double SurfaceTensions::phi_prime(Vec2 x, Vec2 xi) const { return std::min(phi_F(x, xi), phi_S(x, xi)); }

SurfaceTensions SurfaceTensions::scaled(double s) const {
  SurfaceTensions t = *this;
  t.phi_F = phi_F.scaled(s);
  t.phi_S = phi_S.scaled(s);
  t.phi_FS = phi_FS.scaled(s);
  return t;
}

std::pair<double, double> SurfaceTensions::bounds() const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (Vec2 x : kQuadrantPoints) {
    for (Vec2 d : sample_directions()) {
      for (double v : {phi_F(x, d), phi(x, d), phi_FS(x, d), phi_prime(x, d)}) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
  }
  return {lo, hi};
}

SurfaceTensions derive_regime_tensions(FinslerNorm phi_F, FinslerNorm phi_S, FinslerNorm phi_FS) {
  SurfaceTensions t;
  t.phi_F = std::move(phi_F);
  t.phi_S = std::move(phi_S);
  t.phi_FS = std::move(phi_FS);
  return t;
}

HypothesisReport validate_hypotheses(const SurfaceTensions& tensions, const Material& material) {
  HypothesisReport r;
  std::tie(r.c1, r.c2) = tensions.bounds();
  r.continuous = !tensions.phi_F.modulated() && !tensions.phi_S.modulated() && !tensions.phi_FS.modulated();
  r.h2_worst_margin = std::numeric_limits<double>::infinity();
  for (Vec2 x : kQuadrantPoints) {
    for (Vec2 d : sample_directions()) {
      const double margin = tensions.phi(x, d) - std::abs(tensions.phi_FS(x, d) - tensions.phi_F(x, d));
      if (margin < r.h2_worst_margin) {
        r.h2_worst_margin = margin;
        r.h2_worst_point = x;
        r.h2_worst_direction = d;
      }
    }
  }
  r.h2_holds = r.h2_worst_margin >= -1e-12;
  r.c3_film = material.film.coercivity();
  r.c3_substrate = material.substrate.coercivity();
  if (!(r.c3_film > 0.0) || !(r.c3_substrate > 0.0)) {
    throw HypothesisError("elasticity tensor is not positive definite on symmetric matrices (c3 = " +
                          std::to_string(std::min(r.c3_film, r.c3_substrate)) + ")");
  }
  r.c3 = std::min(r.c3_film, r.c3_substrate);
  return r;
}

double LabeledBoundary::total_length() const {
  double s = 0.0;
  for (const auto& e : entries) s += e.length;
  return s;
}

double LabeledBoundary::length_of(InterfaceClass c) const {
  double s = 0.0;
  for (const auto& e : entries) {
    if (e.label == c) s += e.length;
  }
  return s;
}

std::optional<LabeledEdge> classify_edge(const Configuration& cfg, EdgeId e) {
  const Grid& grid = cfg.grid;
  if (!grid.edge_valid(e) || grid.on_domain_wall(e)) return std::nullopt;
  const auto [c0, c1] = grid.edge_cells(e);
  const bool a0 = cfg.composite.contains(c0);
  const bool a1 = cfg.composite.contains(c1);
  const bool s0 = cfg.substrate.contains(c0);
  const bool s1 = cfg.substrate.contains(c1);
  const int a = int(a0) + int(a1);
  const int s = int(s0) + int(s1);
  const bool slit = cfg.composite.slits.count(e) != 0;
  const bool filament = cfg.composite.filaments.count(e) != 0;
  const bool crack = cfg.substrate.cracks.count(e) != 0;
  const bool spike = cfg.substrate.spike_edges.count(e) != 0;
  const bool on_a = a == 1 || slit || filament;
  const bool on_s = s == 1 || crack || spike;
  if (!on_a && !on_s) return std::nullopt;

  const bool horizontal = grid.edge_axis(e) == Axis::horizontal;
  const Vec2 axis_normal = horizontal ? Vec2{0.0, 1.0} : Vec2{1.0, 0.0};
  // outward normal of a set containing exactly one of the two cells
  auto outward = [&](bool first_inside) { return first_inside ? axis_normal : -1.0 * axis_normal; };

  LabeledEdge out;
  out.edge = e;
  out.length = grid.edge_length(e);
  out.normal = axis_normal;
  auto fail = [&](const char* what) -> std::optional<LabeledEdge> {
    throw ClassificationError(std::string("unreachable interface stencil at edge ") + std::to_string(e) + ": " + what);
  };

  if (a == 1) {
    out.normal = outward(a0);
    if (!on_s) {
      out.label = InterfaceClass::film_free;
    } else if (s == 1) {
      out.label = InterfaceClass::exposed_substrate;
    } else if (s == 0) {
      out.label = InterfaceClass::substrate_filament_on_film_boundary;
    } else {
      return fail("substrate on both sides of a reduced composite boundary");
    }
  } else if (a == 2) {
    if (on_a) {
      if (!on_s) {
        out.label = InterfaceClass::film_crack;
      } else if (s == 1) {
        out.label = InterfaceClass::incoherent_interface;
        out.normal = outward(s0);
      } else if (s == 2) {
        out.label = InterfaceClass::delaminated_substrate_crack;
      } else {
        out.label = InterfaceClass::delaminated_substrate_filament;
      }
    } else if (s == 1) {
      out.label = InterfaceClass::coherent_interface;
      out.normal = outward(s0);
    } else {
      out.label = InterfaceClass::bulk_substrate_crack_or_filament;
    }
  } else {
    if (!on_a) return fail("substrate boundary outside the closure of the composite region");
    if (s != 0) return fail("substrate cell outside the composite region");
    out.label = on_s ? InterfaceClass::exposed_substrate_filament : InterfaceClass::exposed_filament;
  }
  return out;
}

LabeledBoundary classify_boundary(const Configuration& cfg) {
  LabeledBoundary out;
  for (EdgeId e = 0; e < cfg.grid.edge_id_bound(); ++e) {
    if (auto labeled = classify_edge(cfg, e)) out.entries.push_back(*labeled);
  }
  return out;
}

double class_weight(InterfaceClass c, const SurfaceTensions& t, Vec2 x, Vec2 n) {
  switch (c) {
    case InterfaceClass::film_free:
      return t.phi_F(x, n);
    case InterfaceClass::exposed_substrate:
      return t.phi(x, n);
    case InterfaceClass::film_crack:
      return 2.0 * t.phi_F(x, n);
    case InterfaceClass::exposed_filament:
      return 2.0 * t.phi_prime(x, n);
    case InterfaceClass::coherent_interface:
      return t.phi_FS(x, n);
    case InterfaceClass::delaminated_substrate_crack:
      return 2.0 * t.phi(x, n);
    case InterfaceClass::exposed_substrate_filament:
      return 2.0 * t.phi_prime(x, n);
    case InterfaceClass::substrate_filament_on_film_boundary:
      switch (t.filament_on_film) {
        case FilamentOnFilmWeight::phi_F:
          return t.phi_F(x, n);
        case FilamentOnFilmWeight::phi:
          return t.phi(x, n);
        case FilamentOnFilmWeight::phi_plus_phi_FS:
          return t.phi(x, n) + t.phi_FS(x, n);
      }
      return 0.0;
    case InterfaceClass::bulk_substrate_crack_or_filament:
      return 2.0 * t.phi_FS(x, n);
    case InterfaceClass::incoherent_interface:
      return t.phi_F(x, n) + t.phi(x, n);
    case InterfaceClass::delaminated_substrate_filament:
      return 2.0 * t.phi_F(x, n);
  }
  return 0.0;
}

namespace {

void require_structurally_admissible(const Configuration& cfg) {
  auto violations = structural_violations(cfg);
  if (!violations.empty()) {
    AdmissibilityReport report;
    report.admissible = false;
    report.violations = std::move(violations);
    throw AdmissibilityError(std::move(report));
  }
}

double edge_energy(const Configuration& cfg, const SurfaceTensions& t, const LabeledEdge& le,
                   const ClassRelabel* relabel) {
  InterfaceClass priced = le.label;
  if (relabel) {
    if (const auto& r = (*relabel)[static_cast<int>(le.label)]) priced = *r;
  }
  return class_weight(priced, t, cfg.grid.edge_midpoint(le.edge), le.normal) * le.length;
}

}  // namespace

EnergyBreakdown surface_energy(const Configuration& cfg, const SurfaceTensions& tensions, const ClassRelabel* relabel) {
  require_structurally_admissible(cfg);
  EnergyBreakdown out;
  for (const LabeledEdge& le : classify_boundary(cfg).entries) {
    const double v = edge_energy(cfg, tensions, le, relabel);
    out.per_class[static_cast<int>(le.label)] += v;
    out.surface += v;
  }
  out.total = out.surface;
  return out;
}

double surface_energy_of_edges(const Configuration& cfg, const SurfaceTensions& tensions, const EdgeSet& edges) {
  double s = 0.0;
  for (EdgeId e : edges) {
    if (auto le = classify_edge(cfg, e)) s += edge_energy(cfg, tensions, *le, nullptr);
  }
  return s;
}

namespace {

bool on_grid_line(double coord, double origin, double step) {
  const double r = (coord - origin) / step;
  return std::abs(r - std::round(r)) <= 1e-9 * std::max(1.0, std::abs(r));
}

}  // namespace

double localized_surface_energy(const Configuration& cfg, const SurfaceTensions& tensions, const Window& w) {
  const Grid& g = cfg.grid;
  const double tol = 1e-12 * std::max(g.l, g.L);
  if (!(w.x0 < w.x1) || !(w.y0 < w.y1) || w.x0 < -g.l - tol || w.x1 > g.l + tol || w.y0 < -g.L - tol ||
      w.y1 > g.L + tol) {
    throw GeometryError("localization window must be a nonempty rectangle inside the domain");
  }
  if (!on_grid_line(w.x0, -g.l, g.hx()) || !on_grid_line(w.x1, -g.l, g.hx()) || !on_grid_line(w.y0, -g.L, g.hy()) ||
      !on_grid_line(w.y1, -g.L, g.hy())) {
    throw GeometryError("localization window is not grid-aligned");
  }
  require_structurally_admissible(cfg);
  // quarter-cell slack absorbs rounding for midpoints lying on grid lines
  const double ex = 0.25 * g.hx();
  const double ey = 0.25 * g.hy();
  double s = 0.0;
  for (const LabeledEdge& le : classify_boundary(cfg).entries) {
    const Vec2 m = g.edge_midpoint(le.edge);
    const bool vertical = g.edge_axis(le.edge) == Axis::vertical;
    const bool in_x = vertical ? (m.x > w.x0 - ex && m.x < w.x1 - ex) : (m.x > w.x0 && m.x < w.x1);
    const bool in_y = vertical ? (m.y > w.y0 && m.y < w.y1) : (m.y > w.y0 - ey && m.y < w.y1 - ey);
    if (in_x && in_y) s += edge_energy(cfg, tensions, le, nullptr);
  }
  return s;
}

double reduced_energy(const Configuration& cfg, const SurfaceTensions& tensions, double elastic_energy) {
  if (!cfg.substrate.cracks.empty() || !cfg.substrate.profile.spikes.empty()) {
    throw GeometryError("F' defined only for fixed regular substrate");
  }
  const EnergyBreakdown s = surface_energy(cfg, tensions);
  double removed = 0.0;
  for (const LabeledEdge& le : classify_boundary(cfg).entries) {
    const auto [c0, c1] = cfg.grid.edge_cells(le.edge);
    const Vec2 x = cfg.grid.edge_midpoint(le.edge);
    const bool reduced_s = cfg.substrate.contains(c0) != cfg.substrate.contains(c1);
    if (reduced_s) {
      const Vec2 nu_s = cfg.substrate.contains(c0) ? (cfg.grid.edge_axis(le.edge) == Axis::horizontal ? Vec2{0, 1} : Vec2{1, 0})
                                                   : (cfg.grid.edge_axis(le.edge) == Axis::horizontal ? Vec2{0, -1} : Vec2{-1, 0});
      removed += tensions.phi_FS(x, nu_s) * le.length;
    } else if (le.label == InterfaceClass::exposed_filament) {
      removed += 2.0 * tensions.phi_prime(x, le.normal) * le.length;
    }
  }
  return s.surface + elastic_energy - removed;
}

}  // namespace sdri

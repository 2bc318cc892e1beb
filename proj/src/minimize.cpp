#include "sdri/minimize.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <random>

#include "sdri/analysis.hpp"
#include "sdri/disjoint_set.hpp"

namespace sdri {

namespace {

constexpr std::array<std::string_view, 11> kMoveNames{
    "add_film_cell", "remove_film_cell", "height_step", "toggle_delamination", "add_crack",   "remove_crack",
    "add_filament",  "remove_filament",  "shrink_island", "fill_void",         "open_grain",
};

bool adhesion_class(InterfaceClass c) {
  return c == InterfaceClass::coherent_interface || c == InterfaceClass::bulk_substrate_crack_or_filament;
}

bool contact_class(InterfaceClass c) {
  return c == InterfaceClass::exposed_substrate || c == InterfaceClass::delaminated_substrate_crack ||
         c == InterfaceClass::exposed_substrate_filament || c == InterfaceClass::incoherent_interface ||
         c == InterfaceClass::delaminated_substrate_filament;
}

std::vector<std::optional<InterfaceClass>> edge_labels(const Configuration& cfg) {
  std::vector<std::optional<InterfaceClass>> out(cfg.grid.edge_id_bound());
  for (EdgeId e = 0; e < cfg.grid.edge_id_bound(); ++e) {
    if (auto l = classify_edge(cfg, e)) out[e] = l->label;
  }
  return out;
}

// components of cells selected by `keep`, joined across edges off ∂A ∪ ∂S
std::vector<std::vector<int>> cell_components(const Configuration& cfg,
                                              const std::vector<std::optional<InterfaceClass>>& labels,
                                              const std::function<bool(int)>& keep) {
  const Grid& g = cfg.grid;
  DisjointSet ds(g.cell_count());
  for (int c = 0; c < g.cell_count(); ++c) {
    if (!keep(c)) continue;
    const int i = g.cell_col(c);
    const int j = g.cell_row(c);
    if (i + 1 < g.nx && keep(c + 1) && !labels[g.vertical_edge(i + 1, j)]) ds.unite(c, c + 1);
    if (j + 1 < g.ny && keep(c + g.nx) && !labels[g.horizontal_edge(i, j + 1)]) ds.unite(c, c + g.nx);
  }
  std::map<int, int> index;
  std::vector<std::vector<int>> out;
  for (int c = 0; c < g.cell_count(); ++c) {
    if (!keep(c)) continue;
    auto [it, inserted] = index.emplace(ds.find(c), static_cast<int>(out.size()));
    if (inserted) out.emplace_back();
    out[it->second].push_back(c);
  }
  return out;
}

EdgeSet touching_interface(const Configuration& cfg, const std::vector<std::optional<InterfaceClass>>& labels,
                           const std::vector<int>& cells, const EdgeSet& extra, bool (*pick)(InterfaceClass)) {
  EdgeSet out;
  for (int c : cells) {
    for (EdgeId e : cfg.grid.cell_edges(c)) {
      if (labels[e] && pick(*labels[e])) out.insert(e);
    }
  }
  for (EdgeId e : extra) {
    if (labels[e] && pick(*labels[e])) out.insert(e);
  }
  return out;
}

bool wall_cell(const Grid& g, int c) {
  const int i = g.cell_col(c);
  const int j = g.cell_row(c);
  return i == 0 || j == 0 || i == g.nx - 1 || j == g.ny - 1;
}

}  // namespace

std::string_view move_name(MoveKind k) { return kMoveNames[static_cast<int>(k)]; }

bool is_topology_move(MoveKind k) {
  switch (k) {
    case MoveKind::toggle_delamination:
    case MoveKind::add_crack:
    case MoveKind::remove_crack:
    case MoveKind::shrink_island:
    case MoveKind::fill_void:
    case MoveKind::open_grain:
      return true;
    default:
      return false;
  }
}

FeatureSet enumerate_features(const Configuration& cfg) {
  const Grid& g = cfg.grid;
  const auto labels = edge_labels(cfg);
  FeatureSet out;

  for (auto& cells : cell_components(cfg, labels, [&](int c) { return cfg.in_film(c); })) {
    Feature f;
    f.interface = touching_interface(cfg, labels, cells, {}, adhesion_class);
    if (boundary_components(g, f.interface).count != 1) continue;
    f.cells = std::move(cells);
    out.islands.push_back(std::move(f));
  }

  for (auto& cells : cell_components(cfg, labels, [&](int c) { return cfg.substrate.contains(c); })) {
    Feature f;
    f.interface = touching_interface(cfg, labels, cells, {}, adhesion_class);
    if (boundary_components(g, f.interface).count != 1) continue;
    f.cells = std::move(cells);
    out.grains.push_back(std::move(f));
  }

  // vapour cells and slit/filament chains; node ids: cells, then chain edges
  std::vector<EdgeId> chain(cfg.composite.slits.begin(), cfg.composite.slits.end());
  chain.insert(chain.end(), cfg.composite.filaments.begin(), cfg.composite.filaments.end());
  std::sort(chain.begin(), chain.end());
  const int ncell = g.cell_count();
  DisjointSet ds(ncell + static_cast<int>(chain.size()));
  auto vapour = [&](int i, int j) { return g.cell_in_range(i, j) && !cfg.composite.contains(g.cell(i, j)); };
  for (int c = 0; c < ncell; ++c) {
    if (cfg.composite.contains(c)) continue;
    const int i = g.cell_col(c);
    const int j = g.cell_row(c);
    if (vapour(i + 1, j)) ds.unite(c, c + 1);
    if (vapour(i, j + 1)) ds.unite(c, c + g.nx);
  }
  std::map<int, int> vertex_owner;  // vertex -> first chain node touching it
  for (std::size_t k = 0; k < chain.size(); ++k) {
    const int node = ncell + static_cast<int>(k);
    for (int v : g.edge_vertices(chain[k])) {
      auto [it, inserted] = vertex_owner.emplace(v, node);
      if (!inserted) ds.unite(it->second, node);
      const int vi = g.vertex_col(v);
      const int vj = g.vertex_row(v);
      for (auto [di, dj] : {std::pair{-1, -1}, {0, -1}, {-1, 0}, {0, 0}}) {
        if (vapour(vi + di, vj + dj)) ds.unite(node, g.cell(vi + di, vj + dj));
      }
    }
  }
  std::map<int, int> index;
  std::vector<Feature> candidates;
  std::vector<std::uint8_t> open;
  auto slot = [&](int node) {
    auto [it, inserted] = index.emplace(ds.find(node), static_cast<int>(candidates.size()));
    if (inserted) {
      candidates.emplace_back();
      open.push_back(0);
    }
    return it->second;
  };
  for (int c = 0; c < ncell; ++c) {
    if (cfg.composite.contains(c)) continue;
    const int s = slot(c);
    candidates[s].cells.push_back(c);
    if (wall_cell(g, c)) open[s] = 1;
  }
  for (std::size_t k = 0; k < chain.size(); ++k) candidates[slot(ncell + static_cast<int>(k))].edges.insert(chain[k]);
  for (std::size_t s = 0; s < candidates.size(); ++s) {
    if (open[s]) continue;
    Feature& f = candidates[s];
    f.interface = touching_interface(cfg, labels, f.cells, f.edges, contact_class);
    if (boundary_components(g, f.interface).count != 1) continue;
    out.voids.push_back(std::move(f));
  }
  return out;
}

namespace {

void normalize(Configuration& cfg) {
  const Grid& g = cfg.grid;
  auto& profile = cfg.substrate.profile;
  std::erase_if(profile.spikes, [&](const Spike& s) { return s.top <= profile.line_base(s.line); });
  std::erase_if(cfg.substrate.cracks, [&](EdgeId e) { return !crack_in_closure(g, profile, e); });
  refresh_substrate(cfg);
  std::erase_if(cfg.composite.slits, [&](EdgeId e) {
    const auto [a, b] = g.edge_cells(e);
    if (!cfg.composite.contains(a) || !cfg.composite.contains(b)) return true;
    return cfg.substrate.contains(a) && cfg.substrate.contains(b) && !cfg.substrate.cracks.count(e);
  });
  std::erase_if(cfg.composite.filaments, [&](EdgeId e) {
    const auto [a, b] = g.edge_cells(e);
    return cfg.composite.contains(a) || cfg.composite.contains(b);
  });
}

[[noreturn]] void reject(const std::string& why) { throw MoveRejected(why); }

void check_interior_edge(const Grid& g, EdgeId e) {
  if (!g.edge_valid(e) || g.on_domain_wall(e)) reject("edge " + std::to_string(e) + " is not an interior edge");
}

void check_cell(const Grid& g, int c) {
  if (c < 0 || c >= g.cell_count()) reject("cell " + std::to_string(c) + " is outside the grid");
}

// chord through the end points of the interface, rasterized per column
void apply_chord(Configuration& cfg, const EdgeSet& interface) {
  const Grid& g = cfg.grid;
  if (interface.empty()) return;
  Vec2 p{std::numeric_limits<double>::infinity(), 0.0};
  Vec2 q{-std::numeric_limits<double>::infinity(), 0.0};
  for (EdgeId e : interface) {
    for (int v : g.edge_vertices(e)) {
      const Vec2 x = g.vertex_point(v);
      if (x.x < p.x || (x.x == p.x && x.y < p.y)) p = x;
      if (x.x > q.x || (x.x == q.x && x.y < q.y)) q = x;
    }
  }
  auto& levels = cfg.substrate.profile.levels;
  for (int i = 0; i < g.nx; ++i) {
    const double xc = -g.l + (i + 0.5) * g.hx();
    if (xc <= p.x || xc >= q.x) continue;
    const double y = p.y + (q.y - p.y) * (xc - p.x) / (q.x - p.x);
    const int level = std::clamp(static_cast<int>(std::lround((y + g.L) / g.hy())), g.zero_level(), g.ny);
    const int old = levels[i];
    for (int j = level; j < old; ++j) cfg.composite.cells[g.cell(i, j)] = 0;
    for (int j = old; j < level; ++j) cfg.composite.cells[g.cell(i, j)] = 1;
    levels[i] = level;
  }
}

void apply_one(Configuration& cfg, const Move& mv, const FeatureSet* features) {
  const Grid& g = cfg.grid;
  auto& comp = cfg.composite;
  auto& profile = cfg.substrate.profile;
  switch (mv.kind) {
    case MoveKind::add_film_cell:
      check_cell(g, mv.target);
      if (comp.contains(mv.target)) reject("cell already in the composite region");
      comp.cells[mv.target] = 1;
      break;
    case MoveKind::remove_film_cell:
      check_cell(g, mv.target);
      if (!cfg.in_film(mv.target)) reject("cell is not a film cell");
      comp.cells[mv.target] = 0;
      break;
    case MoveKind::height_step: {
      if (mv.target < 0 || mv.target >= g.nx) reject("column outside the grid");
      int& level = profile.levels[mv.target];
      if (mv.step == 1) {
        if (level >= g.ny) reject("column already full");
        comp.cells[g.cell(mv.target, level)] = 1;
        ++level;
      } else if (mv.step == -1) {
        if (level <= g.zero_level()) reject("substrate height would drop below y=0");
        --level;
      } else {
        reject("height steps are +1 or -1");
      }
      break;
    }
    case MoveKind::toggle_delamination: {
      check_interior_edge(g, mv.target);
      const auto [a, b] = g.edge_cells(mv.target);
      if (!comp.contains(a) || !comp.contains(b) || cfg.substrate.contains(a) == cfg.substrate.contains(b)) {
        reject("edge is not a film/substrate interface");
      }
      if (!comp.slits.erase(mv.target)) comp.slits.insert(mv.target);
      break;
    }
    case MoveKind::add_crack:
      check_interior_edge(g, mv.target);
      if (cfg.substrate.cracks.count(mv.target)) reject("edge is already a crack");
      if (!crack_in_closure(g, profile, mv.target)) reject("crack outside the closed subgraph");
      cfg.substrate.cracks.insert(mv.target);
      break;
    case MoveKind::remove_crack:
      if (!cfg.substrate.cracks.erase(mv.target)) reject("edge is not a crack");
      break;
    case MoveKind::add_filament: {
      check_interior_edge(g, mv.target);
      const auto [a, b] = g.edge_cells(mv.target);
      if (comp.contains(a) || comp.contains(b)) reject("filament edge touches the composite region");
      if (!comp.filaments.insert(mv.target).second) reject("edge is already a filament");
      break;
    }
    case MoveKind::remove_filament:
      if (!comp.filaments.erase(mv.target)) reject("edge is not a filament");
      break;
    case MoveKind::shrink_island: {
      if (!features || mv.target < 0 || mv.target >= static_cast<int>(features->islands.size())) reject("no such island");
      const Feature& island = features->islands[mv.target];
      for (int c : island.cells) comp.cells[c] = 0;
      apply_chord(cfg, island.interface);
      break;
    }
    case MoveKind::fill_void: {
      if (!features || mv.target < 0 || mv.target >= static_cast<int>(features->voids.size())) reject("no such void");
      const Feature& v = features->voids[mv.target];
      for (int c : v.cells) comp.cells[c] = 1;
      for (EdgeId e : v.edges) {
        comp.slits.erase(e);
        comp.filaments.erase(e);
      }
      break;
    }
    case MoveKind::open_grain: {
      if (!features || mv.target < 0 || mv.target >= static_cast<int>(features->grains.size())) reject("no such grain");
      for (EdgeId e : features->grains[mv.target].interface) comp.slits.insert(e);
      break;
    }
  }
  // the cleanup of slits and filaments is the same for every move
  normalize(cfg);
}

Configuration try_apply(const Configuration& cfg, const std::vector<Move>& moves, ComponentBudget m,
                        AdmissibilityReport* report, const FeatureSet* features) {
  Configuration next = cfg;
  std::optional<FeatureSet> own;
  for (const Move& mv : moves) {
    const bool feature_move =
        mv.kind == MoveKind::shrink_island || mv.kind == MoveKind::fill_void || mv.kind == MoveKind::open_grain;
    if (feature_move && !features) {
      // feature ids refer to the configuration the move is applied to
      own = enumerate_features(next);
      apply_one(next, mv, &*own);
    } else {
      apply_one(next, mv, features);
    }
  }
  AdmissibilityReport r = validate_configuration(next, m);
  if (!r.admissible) {
    std::string msg = "inadmissible result";
    for (const auto& v : r.violations) msg += "; " + v;
    throw MoveRejected(msg);
  }
  if (report) *report = std::move(r);
  return next;
}

}  // namespace

Configuration apply_moves(const Configuration& cfg, const std::vector<Move>& moves, ComponentBudget m) {
  return try_apply(cfg, moves, m, nullptr, nullptr);
}

Configuration apply_move(const Configuration& cfg, const Move& move, ComponentBudget m) {
  return try_apply(cfg, {move}, m, nullptr, nullptr);
}

EdgeSet changed_edges(const Configuration& before, const Configuration& after) {
  const Grid& g = before.grid;
  EdgeSet out;
  for (int c = 0; c < g.cell_count(); ++c) {
    if (before.composite.contains(c) != after.composite.contains(c) ||
        before.substrate.contains(c) != after.substrate.contains(c)) {
      for (EdgeId e : g.cell_edges(c)) out.insert(e);
    }
  }
  auto symdiff = [&](const EdgeSet& a, const EdgeSet& b) {
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  };
  symdiff(before.composite.slits, after.composite.slits);
  symdiff(before.composite.filaments, after.composite.filaments);
  symdiff(before.substrate.cracks, after.substrate.cracks);
  symdiff(before.substrate.spike_edges, after.substrate.spike_edges);
  return out;
}

namespace {

// Portable draws so that a seed gives the same stream on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  int below(int n) { return static_cast<int>(engine_() % static_cast<std::uint64_t>(n)); }
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[below(static_cast<int>(v.size()))];
  }

 private:
  std::mt19937_64 engine_;
};

bool has_mismatch(const Material& m) {
  if (m.cell_mismatch) {
    return std::any_of(m.cell_mismatch->begin(), m.cell_mismatch->end(), [](const Strain& s) {
      return s[0] != 0.0 || s[1] != 0.0 || s[2] != 0.0;
    });
  }
  return std::any_of(m.m0.begin(), m.m0.end(), [](double v) { return v != 0.0; });
}

struct Proposal {
  MoveKind label;
  std::vector<Move> moves;
  std::string_view name;
};

class Annealer {
 public:
  Annealer(const Configuration& cfg0, const SurfaceTensions& tensions, const Material& material,
           const MinimizeParams& params, bool constrained, const AcceptHook& hook)
      : t_(tensions), mat_(material), p_(params), constrained_(constrained), hook_(hook), rng_(params.seed),
        elastic_(has_mismatch(material)), cur_(cfg0) {
    AdmissibilityReport r = validate_configuration(cur_, p_.m);
    if (!r.admissible) throw AdmissibilityError(r);
    comps_ = {r.substrate_components, r.composite_components};
    S_ = surface_energy(cur_, t_).surface;
    W_ = elastic_ ? equilibrium_energy(cur_, mat_) : 0.0;
  }

  Trajectory run() {
    Trajectory tr;
    record(tr, 0, "initial", true);
    tr.best = cur_;
    tr.best_F = tr.records.back().F;
    double temperature = p_.schedule.t0;
    for (int step = 1; step <= p_.schedule.steps; ++step) {
      temperature *= step == 1 ? 1.0 : p_.schedule.cooling;
      auto prop = propose();
      bool accepted = false;
      if (prop) {
        try {
          AdmissibilityReport report;
          Configuration next = try_apply(cur_, prop->moves, p_.m, &report, features_ ? &*features_ : nullptr);
          const EdgeSet touched = changed_edges(cur_, next);
          const double S_next =
              S_ + surface_energy_of_edges(next, t_, touched) - surface_energy_of_edges(cur_, t_, touched);
          const double W_next = elastic_ && p_.cadence <= 1 ? equilibrium_energy(next, mat_) : W_;
          const double dF = (S_next + W_next + penalty(next)) - (S_ + W_ + penalty(cur_));
          if (dF <= 0.0 || rng_.uniform() < std::exp(-dF / temperature)) {
            accepted = true;
            cur_ = std::move(next);
            S_ = S_next;
            W_ = W_next;
            comps_ = {report.substrate_components, report.composite_components};
            ++tr.accepted;
            if (elastic_ && p_.cadence > 1 && (tr.accepted % p_.cadence == 0 || is_topology_move(prop->label))) {
              W_ = equilibrium_energy(cur_, mat_);
              S_ = surface_energy(cur_, t_).surface;
            }
            if (hook_) hook_(cur_, tr.accepted);
          }
        } catch (const MoveRejected&) {
        }
      }
      features_.reset();
      if (p_.debug) check_state();
      record(tr, step, prop ? std::string(prop->name) : "none", accepted);
      if (tr.records.back().F < tr.best_F && elastic_ && p_.cadence > 1) {
        // a candidate best is never judged on a stale elastic energy
        W_ = equilibrium_energy(cur_, mat_);
        StepRecord& r = tr.records.back();
        r.W = W_;
        r.F = r.S + r.W + r.penalty;
      }
      if (tr.records.back().F < tr.best_F) {
        tr.best_F = tr.records.back().F;
        tr.best = cur_;
        tr.best_step = step;
      }
    }
    return tr;
  }

 private:
  double penalty(const Configuration& cfg) const {
    if (constrained_) return 0.0;
    return p_.lambda1 * std::abs(cfg.composite_area() - p_.v1) + p_.lambda0 * std::abs(cfg.substrate_area() - p_.v0);
  }

  void record(Trajectory& tr, int step, std::string move, bool accepted) {
    StepRecord r;
    r.step = step;
    r.move = std::move(move);
    r.accepted = accepted;
    r.S = S_;
    r.W = W_;
    r.penalty = penalty(cur_);
    r.F = r.S + r.W + r.penalty;
    r.substrate_area = cur_.substrate_area();
    r.composite_area = cur_.composite_area();
    r.substrate_components = comps_[0];
    r.composite_components = comps_[1];
    tr.records.push_back(std::move(r));
  }

  void check_state() const {
    const AdmissibilityReport r = validate_configuration(cur_, p_.m);
    if (!r.admissible) throw MinimizeError("trajectory left the admissible class");
    const double exact = surface_energy(cur_, t_).surface;
    if (std::abs(exact - S_) > 1e-9 * std::max(1.0, exact)) throw MinimizeError("incremental surface energy drifted");
    const auto bound = compactness_bound_check(cur_, t_);
    if (!bound.pass) throw MinimizeError("compactness bound violated on a trajectory state");
    if (constrained_ && (std::abs(cur_.composite_area() - p_.v1) > 1e-9 ||
                         std::abs(cur_.substrate_area() - p_.v0) > 1e-9)) {
      throw MinimizeError("constrained trajectory changed a volume");
    }
  }

  // --- candidate sets ---
  std::vector<int> film_cells() const {
    std::vector<int> out;
    for (int c = 0; c < cur_.grid.cell_count(); ++c) {
      if (cur_.in_film(c)) out.push_back(c);
    }
    return out;
  }

  std::vector<int> frontier_cells() const {
    const Grid& g = cur_.grid;
    std::vector<int> out;
    for (int c = 0; c < g.cell_count(); ++c) {
      if (cur_.composite.contains(c)) continue;
      const int i = g.cell_col(c);
      const int j = g.cell_row(c);
      auto in_a = [&](int ii, int jj) { return g.cell_in_range(ii, jj) && cur_.composite.contains(g.cell(ii, jj)); };
      if (in_a(i - 1, j) || in_a(i + 1, j) || in_a(i, j - 1) || in_a(i, j + 1)) out.push_back(c);
    }
    return out;
  }

  std::vector<int> interface_edges() const {
    const Grid& g = cur_.grid;
    std::vector<int> out;
    for (EdgeId e = 0; e < g.edge_id_bound(); ++e) {
      if (!g.edge_valid(e) || g.on_domain_wall(e)) continue;
      const auto [a, b] = g.edge_cells(e);
      if (cur_.composite.contains(a) && cur_.composite.contains(b) &&
          cur_.substrate.contains(a) != cur_.substrate.contains(b)) {
        out.push_back(e);
      }
    }
    return out;
  }

  std::vector<int> crack_sites() const {
    const Grid& g = cur_.grid;
    std::vector<int> out;
    for (EdgeId e = 0; e < g.edge_id_bound(); ++e) {
      if (!g.edge_valid(e) || g.on_domain_wall(e) || cur_.substrate.cracks.count(e)) continue;
      if (crack_in_closure(g, cur_.substrate.profile, e)) out.push_back(e);
    }
    return out;
  }

  std::vector<int> filament_sites() const {
    const Grid& g = cur_.grid;
    std::vector<std::uint8_t> anchored(g.vertex_count(), 0);
    for (int c = 0; c < g.cell_count(); ++c) {
      if (!cur_.composite.contains(c)) continue;
      const int i = g.cell_col(c);
      const int j = g.cell_row(c);
      anchored[g.vertex(i, j)] = anchored[g.vertex(i + 1, j)] = anchored[g.vertex(i, j + 1)] =
          anchored[g.vertex(i + 1, j + 1)] = 1;
    }
    std::vector<int> out;
    for (EdgeId e = 0; e < g.edge_id_bound(); ++e) {
      if (!g.edge_valid(e) || g.on_domain_wall(e) || cur_.composite.filaments.count(e)) continue;
      const auto [a, b] = g.edge_cells(e);
      if (cur_.composite.contains(a) || cur_.composite.contains(b)) continue;
      const auto [v0, v1] = g.edge_vertices(e);
      if (anchored[v0] || anchored[v1]) out.push_back(e);
    }
    return out;
  }

  template <class Set>
  static std::vector<int> as_vector(const Set& s) {
    return {s.begin(), s.end()};
  }

  std::optional<Proposal> single(MoveKind k, const std::vector<int>& candidates) {
    if (candidates.empty()) return std::nullopt;
    return Proposal{k, {Move{k, rng_.pick(candidates), 1}}, move_name(k)};
  }

  std::optional<Proposal> feature_move(bool area_neutral_only) {
    features_ = enumerate_features(cur_);
    std::vector<std::pair<MoveKind, int>> options;
    if (!area_neutral_only) {
      for (int k = 0; k < static_cast<int>(features_->islands.size()); ++k) options.emplace_back(MoveKind::shrink_island, k);
      for (int k = 0; k < static_cast<int>(features_->voids.size()); ++k) options.emplace_back(MoveKind::fill_void, k);
    }
    for (int k = 0; k < static_cast<int>(features_->grains.size()); ++k) options.emplace_back(MoveKind::open_grain, k);
    if (options.empty()) return std::nullopt;
    const auto [kind, id] = rng_.pick(options);
    return Proposal{kind, {Move{kind, id, 1}}, move_name(kind)};
  }

  std::optional<Proposal> propose() {
    if (rng_.uniform() < p_.feature_rate) return feature_move(constrained_);
    const Grid& g = cur_.grid;
    // weights of the elementary kinds
    static constexpr std::array<double, 8> kWeights{3.0, 3.0, 1.5, 1.0, 0.25, 0.25, 0.25, 0.25};
    double total = 0.0;
    for (double w : kWeights) total += w;
    double u = rng_.uniform() * total;
    int kind = 0;
    while (kind < 7 && u >= kWeights[kind]) u -= kWeights[kind++];
    switch (static_cast<MoveKind>(kind)) {
      case MoveKind::add_film_cell:
      case MoveKind::remove_film_cell: {
        if (constrained_) {
          const auto film = film_cells();
          const auto frontier = frontier_cells();
          if (film.empty() || frontier.empty()) return std::nullopt;
          const int out = rng_.pick(film);
          const int in = rng_.pick(frontier);
          return Proposal{MoveKind::add_film_cell,
                          {Move{MoveKind::remove_film_cell, out, 1}, Move{MoveKind::add_film_cell, in, 1}},
                          "move_film_cell"};
        }
        if (static_cast<MoveKind>(kind) == MoveKind::add_film_cell) return single(MoveKind::add_film_cell, frontier_cells());
        return single(MoveKind::remove_film_cell, film_cells());
      }
      case MoveKind::height_step: {
        if (constrained_) {
          std::vector<int> up;
          std::vector<int> down;
          for (int i = 0; i < g.nx; ++i) {
            const int level = cur_.substrate.profile.levels[i];
            if (level < g.ny && cur_.in_film(g.cell(i, level))) up.push_back(i);
            if (level > g.zero_level()) down.push_back(i);
          }
          if (up.empty() || down.empty()) return std::nullopt;
          const int a = rng_.pick(up);
          const int b = rng_.pick(down);
          if (a == b) return std::nullopt;
          return Proposal{MoveKind::height_step,
                          {Move{MoveKind::height_step, a, 1}, Move{MoveKind::height_step, b, -1}},
                          "paired_height_step"};
        }
        return Proposal{MoveKind::height_step,
                        {Move{MoveKind::height_step, rng_.below(g.nx), rng_.below(2) ? 1 : -1}},
                        move_name(MoveKind::height_step)};
      }
      case MoveKind::toggle_delamination:
        return single(MoveKind::toggle_delamination, interface_edges());
      case MoveKind::add_crack:
        return single(MoveKind::add_crack, crack_sites());
      case MoveKind::remove_crack:
        return single(MoveKind::remove_crack, as_vector(cur_.substrate.cracks));
      case MoveKind::add_filament:
        return single(MoveKind::add_filament, filament_sites());
      default:
        return single(MoveKind::remove_filament, as_vector(cur_.composite.filaments));
    }
  }

  const SurfaceTensions& t_;
  const Material& mat_;
  MinimizeParams p_;
  bool constrained_;
  AcceptHook hook_;
  Rng rng_;
  bool elastic_;
  Configuration cur_;
  std::optional<FeatureSet> features_;
  double S_ = 0.0;
  double W_ = 0.0;
  std::array<int, 2> comps_{0, 0};
};

void check_params(const Configuration& cfg, const MinimizeParams& p, bool volumes_used) {
  if (!(p.schedule.t0 > 0.0)) throw MinimizeError("initial temperature must be positive");
  if (!(p.schedule.cooling > 0.0 && p.schedule.cooling < 1.0)) throw MinimizeError("cooling factor must lie in (0, 1)");
  if (p.schedule.steps < 0) throw MinimizeError("step count must be non-negative");
  if (p.lambda0 < 0.0 || p.lambda1 < 0.0) throw MinimizeError("penalty weights must be non-negative");
  if (!volumes_used) return;
  const double area = 4.0 * cfg.grid.l * cfg.grid.L;
  if (p.v0 > p.v1) throw MinimizeError("target volumes must satisfy v0 <= v1");
  for (double v : {p.v0, p.v1}) {
    if (v < 0.5 * area || v >= area) throw MinimizeError("target volumes must lie in [area/2, area)");
  }
}

}  // namespace

Trajectory minimize_penalized(const Configuration& cfg0, const SurfaceTensions& tensions, const Material& material,
                              const MinimizeParams& params, const AcceptHook& hook) {
  check_params(cfg0, params, params.lambda0 > 0.0 || params.lambda1 > 0.0);
  return Annealer(cfg0, tensions, material, params, false, hook).run();
}

Trajectory minimize_constrained(const Configuration& cfg0, const SurfaceTensions& tensions, const Material& material,
                                const MinimizeParams& params, const AcceptHook& hook) {
  check_params(cfg0, params, true);
  const double cell = cfg0.grid.cell_area();
  if (std::abs(cfg0.composite_area() - params.v1) > cell + 1e-12 ||
      std::abs(cfg0.substrate_area() - params.v0) > cell + 1e-12) {
    throw MinimizeError("initial configuration does not match the target volumes within one cell");
  }
  MinimizeParams p = params;
  // volumes are exact invariants of the constrained moves
  p.v0 = cfg0.substrate_area();
  p.v1 = cfg0.composite_area();
  return Annealer(cfg0, tensions, material, p, true, hook).run();
}

}  // namespace sdri

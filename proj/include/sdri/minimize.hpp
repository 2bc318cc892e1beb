#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sdri/elasticity.hpp"
#include "sdri/geometry.hpp"
#include "sdri/surface_energy.hpp"

namespace sdri {

enum class MoveKind {
  add_film_cell,
  remove_film_cell,
  height_step,
  toggle_delamination,
  add_crack,
  remove_crack,
  add_filament,
  remove_filament,
  shrink_island,
  fill_void,
  open_grain,
};

std::string_view move_name(MoveKind k);

/// `target` is a cell, column, edge or feature index depending on the kind;
/// `step` is the height increment (+1 or -1) of a height step.
struct Move {
  MoveKind kind = MoveKind::add_film_cell;
  int target = 0;
  int step = 1;
};

/// Moves that change the cut structure of the composite region (and so the
/// elastic mesh topology) beyond a single cell.
bool is_topology_move(MoveKind k);

struct Feature {
  std::vector<int> cells;
  EdgeSet edges;      ///< slits and filaments carried by a void
  EdgeSet interface;  ///< the interface edges the feature touches
};

struct FeatureSet {
  std::vector<Feature> islands;
  std::vector<Feature> voids;
  std::vector<Feature> grains;
};

/// Islands: film components whose boundary meets the film/substrate adhesion
/// interface in exactly one curve. Voids: enclosed vapour components with
/// their slit and filament chains, plus isolated slit chains, whose boundary
/// meets the substrate contact set (exposed, incoherent and delaminated
/// edges) in one curve. Grains: substrate components whose boundary meets the
/// adhesion interface in one curve.
FeatureSet enumerate_features(const Configuration& cfg);

class MoveRejected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Applies the moves in order and validates the result once. Throws
/// MoveRejected (leaving `cfg` untouched) when a move is not applicable or
/// the result is not admissible for the budget.
Configuration apply_moves(const Configuration& cfg, const std::vector<Move>& moves, ComponentBudget m);
Configuration apply_move(const Configuration& cfg, const Move& move, ComponentBudget m);

/// Edges whose class may differ between two configurations on the same grid.
EdgeSet changed_edges(const Configuration& before, const Configuration& after);

struct Schedule {
  double t0 = 0.5;
  double cooling = 0.999;
  int steps = 2000;
};

struct MinimizeParams {
  ComponentBudget m;
  double v0 = 0.0;  ///< target substrate area
  double v1 = 0.0;  ///< target composite area
  double lambda0 = 0.0;
  double lambda1 = 0.0;
  Schedule schedule;
  std::uint64_t seed = 1;
  int cadence = 25;  ///< accepted moves between elastic re-solves
  bool debug = false;
  /// Relative frequency of feature moves (shrink, fill, open) among proposals.
  double feature_rate = 0.02;
};

struct StepRecord {
  int step = 0;
  std::string move;
  bool accepted = false;
  double F = 0.0;
  double S = 0.0;
  double W = 0.0;
  double penalty = 0.0;
  double substrate_area = 0.0;
  double composite_area = 0.0;
  int substrate_components = 0;
  int composite_components = 0;
};

struct Trajectory {
  std::vector<StepRecord> records;  ///< records[0] is the initial state
  Configuration best;
  double best_F = 0.0;
  int best_step = 0;
  int accepted = 0;
};

/// Called after every accepted move with the current state and the count of
/// accepted moves.
using AcceptHook = std::function<void(const Configuration&, int)>;

class MinimizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Metropolis annealing of F + λ₁|area(A) - v₁| + λ₀|area(S) - v₀|.
Trajectory minimize_penalized(const Configuration& cfg0, const SurfaceTensions& tensions, const Material& material,
                              const MinimizeParams& params, const AcceptHook& hook = {});

/// Metropolis annealing of F over volume-preserving moves only.
Trajectory minimize_constrained(const Configuration& cfg0, const SurfaceTensions& tensions, const Material& material,
                                const MinimizeParams& params, const AcceptHook& hook = {});

}  // namespace sdri

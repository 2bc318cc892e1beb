#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sdri/finsler.hpp"
#include "sdri/geometry.hpp"
#include "sdri/surface_energy.hpp"

namespace sdri {

enum class SequenceKind {
  neckpinch,
  vanishing_filament,
  island_shrink,
  wetting_collapse,
  delamination_closing,
  substrate_crack_closing,
};

inline constexpr std::array<SequenceKind, 6> kSequenceKinds{
    SequenceKind::neckpinch,        SequenceKind::vanishing_filament,   SequenceKind::island_shrink,
    SequenceKind::wetting_collapse, SequenceKind::delamination_closing, SequenceKind::substrate_crack_closing,
};

std::string_view sequence_name(SequenceKind k);
std::optional<SequenceKind> sequence_from_name(std::string_view name);

struct Sequence {
  SequenceKind kind = SequenceKind::neckpinch;
  std::vector<Configuration> members;  ///< members[k-1] is index k
  Configuration limit;
  ComponentBudget budget;
  /// Feature size of each member in cells; the sdist gap of member k is
  /// expected below feature_cells[k-1] * max(hx, hy) plus one cell diagonal.
  std::vector<int> feature_cells;
};

class SequenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Members 1..count on the given grid, feature size ceil(n / k) cells.
/// Throws SequenceError when the grid cannot hold the construction or count
/// exceeds the largest representable index.
Sequence generate_sequence(SequenceKind kind, int count, const Grid& grid);

struct ConvergenceReport {
  std::vector<double> gap_A;  ///< sup |sdist_A,k - sdist_A,∞| at cell centres
  std::vector<double> gap_S;
  std::vector<double> bound;
  std::vector<double> length_A;  ///< H¹(Ω ∩ ∂A_k)
  std::vector<double> length_S;  ///< H¹(Ω ∩ ∂S_k)
  double length_sup = 0.0;
  bool within_bound = true;
  bool monotone = true;  ///< non-increasing up to one cell diagonal
};

ConvergenceReport tau_convergence_report(const Sequence& seq);
ConvergenceReport tau_convergence_report(const std::vector<Configuration>& members, const Configuration& limit,
                                         const std::vector<int>& feature_cells = {});

struct LscReport {
  std::vector<double> energies;  ///< S_k
  double limit_energy = 0.0;     ///< S_∞
  std::vector<double> tail_min;  ///< min_{k >= K0} S_k - S_∞ per tail start K0
  double margin = 0.0;           ///< min over all tails
  double tolerance = 1e-9;
  bool pass = true;
};

/// Lower-semicontinuity check of the surface energy along a sequence.
/// `limit_relabel` re-prices classes of the limit only.
LscReport lsc_check(const std::vector<Configuration>& members, const Configuration& limit,
                    const SurfaceTensions& tensions, double tolerance = 1e-9,
                    const ClassRelabel* limit_relabel = nullptr);
LscReport lsc_check(const Sequence& seq, const SurfaceTensions& tensions, double tolerance = 1e-9,
                    const ClassRelabel* limit_relabel = nullptr);

/// The deliberately mispriced run: a delamination-closing sequence whose
/// limit prices its coherent interface as incoherent. Must fail.
LscReport adversarial_lsc(const Grid& grid, int count, const SurfaceTensions& tensions);

struct CompactnessReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = true;
};

/// c1 (H¹(Ω ∩ ∂A) + H¹(Ω ∩ ∂S \ ∂A)) <= 2 S.
CompactnessReport compactness_bound_check(const Configuration& cfg, const SurfaceTensions& tensions);

struct SegmentReport {
  double path_cost = 0.0;
  double chord_cost = 0.0;
  bool pass = true;
};

/// Cheapest lattice path from p to q (vertex coordinates) using axis and
/// diagonal steps weighted by φ of the step vector, against φ(q - p).
SegmentReport segment_minimality_check(const FinslerNorm& phi, std::array<int, 2> p, std::array<int, 2> q,
                                       const Grid& grid);

/// Random spatially uniform norm of a random kind.
FinslerNorm random_norm(std::mt19937_64& rng);
/// Random spatially uniform tension triple satisfying the tension
/// hypotheses (positivity and φ >= |φ_FS - φ_F| on sampled directions).
SurfaceTensions random_admissible_tensions(std::mt19937_64& rng);

}  // namespace sdri

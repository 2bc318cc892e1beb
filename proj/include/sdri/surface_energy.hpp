#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sdri/finsler.hpp"
#include "sdri/geometry.hpp"
#include "sdri/material.hpp"

namespace sdri {

/// The eleven interface classes of the composite surface tension, in the
/// order of the localized classifier. Domain-wall edges carry no energy and
/// are never labeled.
enum class InterfaceClass : int {
  film_free = 0,                        // ∂*A \ ∂S                    φ_F
  exposed_substrate,                    // ∂*A ∩ ∂*S                   φ
  film_crack,                           // (∂A \ ∂S) ∩ A1              2φ_F
  exposed_filament,                     // (∂A \ ∂S) ∩ A0              2φ'
  coherent_interface,                   // (∂*S \ ∂A) ∩ A1             φ_FS
  delaminated_substrate_crack,          // ∂S ∩ ∂A ∩ S1                2φ
  exposed_substrate_filament,           // ∂S ∩ ∂A ∩ A0                2φ'
  substrate_filament_on_film_boundary,  // ∂S ∩ ∂*A ∩ S0               φ_F (configurable)
  bulk_substrate_crack_or_filament,     // (∂S \ ∂A) ∩ (S1 ∪ S0) ∩ A1  2φ_FS
  incoherent_interface,                 // ∂A ∩ ∂*S ∩ A1               φ_F + φ
  delaminated_substrate_filament,       // ∂S ∩ ∂A ∩ S0 ∩ A1           2φ_F
};

inline constexpr int kInterfaceClassCount = 11;

std::string_view class_name(InterfaceClass c);
std::optional<InterfaceClass> class_from_name(std::string_view name);

/// Weight choice for substrate filaments lying on the reduced film boundary.
enum class FilamentOnFilmWeight { phi_F, phi, phi_plus_phi_FS };

/// Film/vapour, substrate/vapour and film/substrate tensions together with
/// the regime tensions φ = min{φ_S, φ_F + φ_FS} and φ' = min{φ_F, φ_S},
/// which are evaluated pointwise and never assumed convex.
struct SurfaceTensions {
  FinslerNorm phi_F;
  FinslerNorm phi_S;
  FinslerNorm phi_FS;
  FilamentOnFilmWeight filament_on_film = FilamentOnFilmWeight::phi_F;

  double phi(Vec2 x, Vec2 xi) const;
  double phi_prime(Vec2 x, Vec2 xi) const;
  SurfaceTensions scaled(double s) const;
  /// Bracketing constants c1 <= φ_F, φ, φ_FS, φ' <= c2 on sampled unit
  /// directions in every quadrant.
  std::pair<double, double> bounds() const;
};

SurfaceTensions derive_regime_tensions(FinslerNorm phi_F, FinslerNorm phi_S, FinslerNorm phi_FS);

struct HypothesisReport {
  double c1 = 0.0;
  double c2 = 0.0;
  bool continuous = true;  ///< false when a quadrant modulation is present
  bool h2_holds = true;
  double h2_worst_margin = 0.0;  ///< min of φ - |φ_FS - φ_F| over samples
  Vec2 h2_worst_point;
  Vec2 h2_worst_direction;
  double c3_film = 0.0;
  double c3_substrate = 0.0;
  double c3 = 0.0;
};

class HypothesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Samples the tension hypotheses on the four lattice normals plus 64
/// directions in every quadrant and computes c3 per phase. Throws
/// HypothesisError when a stiffness is not positive definite.
HypothesisReport validate_hypotheses(const SurfaceTensions& tensions, const Material& material);

struct LabeledEdge {
  EdgeId edge = 0;
  InterfaceClass label = InterfaceClass::film_free;
  Vec2 normal;
  double length = 0.0;
};

struct LabeledBoundary {
  std::vector<LabeledEdge> entries;  ///< sorted by edge id
  double total_length() const;
  double length_of(InterfaceClass c) const;
};

class ClassificationError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Class of a single Ω-interior edge, or nullopt when the edge is not on
/// ∂A ∪ ∂S. Throws ClassificationError for stencils an admissible
/// configuration cannot produce.
std::optional<LabeledEdge> classify_edge(const Configuration& cfg, EdgeId e);
LabeledBoundary classify_boundary(const Configuration& cfg);

/// Optional re-pricing: edges of class k are weighted as class price_as[k].
/// Used only to run deliberately mislabeled evaluations.
using ClassRelabel = std::array<std::optional<InterfaceClass>, kInterfaceClassCount>;

double class_weight(InterfaceClass c, const SurfaceTensions& tensions, Vec2 x, Vec2 normal);

struct EnergyBreakdown {
  std::array<double, kInterfaceClassCount> per_class{};
  double surface = 0.0;
  double elastic = 0.0;
  double penalty = 0.0;
  double total = 0.0;
};

/// Composite surface energy, summed in edge-id order. Throws
/// AdmissibilityError when the configuration violates a structural rule.
EnergyBreakdown surface_energy(const Configuration& cfg, const SurfaceTensions& tensions,
                               const ClassRelabel* relabel = nullptr);

/// Energy carried by the given edges only (edges off ∂A ∪ ∂S contribute 0).
double surface_energy_of_edges(const Configuration& cfg, const SurfaceTensions& tensions, const EdgeSet& edges);

/// Axis-aligned grid-aligned window [x0,x1) x [y0,y1); an edge belongs to
/// the window whose half-open extent contains its midpoint.
struct Window {
  double x0 = 0.0;
  double x1 = 0.0;
  double y0 = 0.0;
  double y1 = 0.0;
};

double localized_surface_energy(const Configuration& cfg, const SurfaceTensions& tensions, const Window& window);

/// Energy with the substrate held fixed: F - ∫_{∂*S} φ_FS - ∫_{(∂A\∂S)∩A0} 2φ'.
/// Only defined for substrates without cracks or spikes.
double reduced_energy(const Configuration& cfg, const SurfaceTensions& tensions, double elastic_energy);

}  // namespace sdri

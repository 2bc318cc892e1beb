#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "sdri/elasticity.hpp"
#include "sdri/geometry.hpp"
#include "sdri/surface_energy.hpp"

namespace sdri {

using Json = nlohmann::ordered_json;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Configuration document:
///   grid {l, L, nx, ny}; heights [per column]; spikes [[line, top]];
///   cracks, slits, filaments [[vertex, axis]]; cells [[[start, count], ...] per row].
/// Heights are physical values snapped to grid lines on read.
Json config_to_json(const Configuration& cfg);
Configuration config_from_json(const Json& doc);

/// Tension document: {"phi_F": norm, "phi_S": norm, "phi_FS": norm,
/// "filament_on_film": "phi_F" | "phi" | "phi_plus_phi_FS"}. A norm is a
/// number (isotropic) or {"kind": ..., parameters, "modulation": [4]}.
Json tensions_to_json(const SurfaceTensions& t);
SurfaceTensions tensions_from_json(const Json& doc);
Json norm_to_json(const FinslerNorm& n);
FinslerNorm norm_from_json(const Json& doc);

/// Material document: {"film": phase, "substrate": phase, "m0": [4],
/// "mismatch_everywhere": bool}; a phase is {"lambda", "mu"} or {"voigt": [9]}.
Json material_to_json(const Material& m);
Material material_from_json(const Json& doc);

Json breakdown_to_json(const EnergyBreakdown& b);
Json report_to_json(const AdmissibilityReport& r);

Json read_json(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace sdri

#pragma once

#include <array>
#include <optional>
#include <vector>

namespace sdri {

/// Stiffness of one phase in Voigt form: stress = D * (e11, e22, 2 e12).
struct Stiffness {
  std::array<double, 9> voigt{};  ///< row-major 3x3

  static Stiffness isotropic(double lambda, double mu);
  double operator()(int r, int c) const { return voigt[3 * r + c]; }
  /// Smallest c with C M : M >= 2 c M : M on symmetric matrices.
  double coercivity() const;
  friend bool operator==(const Stiffness&, const Stiffness&) = default;
};

/// Strain as (e11, e22, e12).
using Strain = std::array<double, 3>;

/// Elastic data: one stiffness per phase and the mismatch displacement
/// u0(x) = M0 x, whose symmetric gradient is the mismatch strain of the film.
/// The substrate is stress free unless `mismatch_everywhere` is set.
struct Material {
  Stiffness film = Stiffness::isotropic(1.0, 1.0);
  Stiffness substrate = Stiffness::isotropic(1.0, 1.0);
  std::array<double, 4> m0{0.0, 0.0, 0.0, 0.0};  ///< row-major 2x2
  bool mismatch_everywhere = false;
  /// Optional per-cell mismatch strain table (indexed by grid cell).
  std::optional<std::vector<Strain>> cell_mismatch;

  Strain film_mismatch() const { return {m0[0], m0[3], 0.5 * (m0[1] + m0[2])}; }
  friend bool operator==(const Material&, const Material&) = default;
};

}  // namespace sdri

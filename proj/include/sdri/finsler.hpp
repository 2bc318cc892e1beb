#pragma once

#include <array>
#include <vector>

#include "sdri/geometry.hpp"

namespace sdri {

/// Anisotropic surface tension φ(x, ξ). Three shapes are supported:
///   weighted_axis  w1|ξ1| + w2|ξ2|
///   elliptic       sqrt(ξᵀ M ξ), M symmetric positive definite
///   crystalline    max_i <v_i, ξ> over a finite set of support vectors
/// An optional multiplier per quadrant of the plane (x < 0 / x >= 0,
/// y < 0 / y >= 0) models piecewise-constant spatial dependence; points on
/// the axes belong to the non-negative side.
class FinslerNorm {
 public:
  enum class Kind { weighted_axis, elliptic, crystalline };

  /// Euclidean norm |ξ|.
  FinslerNorm() = default;

  static FinslerNorm isotropic(double scale);
  static FinslerNorm weighted_axis(double w1, double w2);
  static FinslerNorm elliptic(double m11, double m12, double m22);
  static FinslerNorm crystalline(std::vector<Vec2> support);

  Kind kind() const { return kind_; }
  const std::array<double, 3>& params() const { return params_; }
  const std::vector<Vec2>& support() const { return support_; }
  const std::array<double, 4>& modulation() const { return modulation_; }
  bool modulated() const;

  FinslerNorm with_modulation(std::array<double, 4> quadrant_multipliers) const;
  FinslerNorm scaled(double s) const;

  double operator()(Vec2 x, Vec2 xi) const;
  /// Value without the spatial multiplier.
  double value(Vec2 xi) const;

  static int quadrant(Vec2 x) { return (x.x >= 0.0 ? 1 : 0) + (x.y >= 0.0 ? 2 : 0); }

  friend bool operator==(const FinslerNorm&, const FinslerNorm&) = default;

 private:
  Kind kind_ = Kind::elliptic;
  std::array<double, 3> params_{1.0, 0.0, 1.0};
  std::vector<Vec2> support_;
  std::array<double, 4> modulation_{1.0, 1.0, 1.0, 1.0};
};

/// Sampled unit directions: the four lattice normals followed by `extra`
/// evenly spaced directions on the circle.
std::vector<Vec2> sample_directions(int extra = 64);

}  // namespace sdri

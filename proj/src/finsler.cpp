#include "sdri/finsler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace sdri {

FinslerNorm FinslerNorm::isotropic(double scale) {
  if (!(scale > 0.0)) throw GeometryError("isotropic tension must be positive");
  return elliptic(scale * scale, 0.0, scale * scale);
}

FinslerNorm FinslerNorm::weighted_axis(double w1, double w2) {
  if (!(w1 > 0.0) || !(w2 > 0.0)) throw GeometryError("weighted-axis weights must be positive");
  FinslerNorm n;
  n.kind_ = Kind::weighted_axis;
  n.params_ = {w1, w2, 0.0};
  return n;
}

FinslerNorm FinslerNorm::elliptic(double m11, double m12, double m22) {
  if (!(m11 > 0.0) || !(m11 * m22 - m12 * m12 > 0.0)) {
    throw GeometryError("elliptic tension matrix must be symmetric positive definite");
  }
  FinslerNorm n;
  n.kind_ = Kind::elliptic;
  n.params_ = {m11, m12, m22};
  return n;
}

FinslerNorm FinslerNorm::crystalline(std::vector<Vec2> support) {
  FinslerNorm n;
  n.kind_ = Kind::crystalline;
  n.support_ = std::move(support);
  if (n.support_.size() < 3) throw GeometryError("crystalline tension needs at least three support vectors");
  // positive on every direction iff the support vectors surround the origin
  for (const Vec2& d : sample_directions(360)) {
    if (!(n.value(d) > 1e-12)) throw GeometryError("crystalline support vectors do not surround the origin");
  }
  return n;
}

bool FinslerNorm::modulated() const {
  return std::any_of(modulation_.begin(), modulation_.end(), [&](double m) { return m != modulation_[0]; });
}

FinslerNorm FinslerNorm::with_modulation(std::array<double, 4> quadrant_multipliers) const {
  for (double m : quadrant_multipliers) {
    if (!(m > 0.0)) throw GeometryError("quadrant multipliers must be positive");
  }
  FinslerNorm n = *this;
  n.modulation_ = quadrant_multipliers;
  return n;
}

FinslerNorm FinslerNorm::scaled(double s) const {
  FinslerNorm n = *this;
  for (double& m : n.modulation_) m *= s;
  return n;
}

double FinslerNorm::value(Vec2 xi) const {
  switch (kind_) {
    case Kind::weighted_axis:
      return params_[0] * std::abs(xi.x) + params_[1] * std::abs(xi.y);
    case Kind::elliptic:
      return std::sqrt(params_[0] * xi.x * xi.x + 2.0 * params_[1] * xi.x * xi.y + params_[2] * xi.y * xi.y);
    case Kind::crystalline: {
      double best = -std::numeric_limits<double>::infinity();
      for (const Vec2& v : support_) best = std::max(best, v.x * xi.x + v.y * xi.y);
      return best;
    }
  }
  return 0.0;
}

double FinslerNorm::operator()(Vec2 x, Vec2 xi) const { return modulation_[quadrant(x)] * value(xi); }

std::vector<Vec2> sample_directions(int extra) {
  std::vector<Vec2> dirs{{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}};
  for (int k = 0; k < extra; ++k) {
    const double t = 2.0 * std::numbers::pi * (k + 0.5) / extra;
    dirs.push_back({std::cos(t), std::sin(t)});
  }
  return dirs;
}

}  // namespace sdri

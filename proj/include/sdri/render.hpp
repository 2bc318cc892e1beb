#pragma once

#include <string>

#include "sdri/geometry.hpp"

namespace sdri {

struct RenderStyle {
  double width_px = 480.0;
  std::string substrate_fill = "#5a5a5a";
  std::string film_fill = "#c8c8c8";
};

/// SVG drawing of a configuration: substrate in the darker gray, film in the
/// lighter one, coherent interface dashed, incoherent interface solid.
std::string render_svg(const Configuration& cfg, const RenderStyle& style = {});

}  // namespace sdri

#include "sdri/render.hpp"

#include <sstream>

#include "sdri/surface_energy.hpp"

namespace sdri {

std::string render_svg(const Configuration& cfg, const RenderStyle& style) {
  const Grid& g = cfg.grid;
  const double scale = style.width_px / (2.0 * g.l);
  const double height_px = 2.0 * g.L * scale;
  auto px = [&](double x) { return (x + g.l) * scale; };
  auto py = [&](double y) { return (g.L - y) * scale; };

  std::ostringstream out;
  out.precision(6);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << style.width_px << "\" height=\"" << height_px
      << "\" viewBox=\"0 0 " << style.width_px << ' ' << height_px << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << style.width_px << "\" height=\"" << height_px
      << "\" fill=\"white\" stroke=\"black\"/>\n";
  // one rectangle per horizontal run of equally filled cells
  for (int j = 0; j < g.ny; ++j) {
    int i = 0;
    while (i < g.nx) {
      const int c = g.cell(i, j);
      const int phase = cfg.substrate.contains(c) ? 2 : (cfg.composite.contains(c) ? 1 : 0);
      int end = i + 1;
      while (end < g.nx) {
        const int d = g.cell(end, j);
        if ((cfg.substrate.contains(d) ? 2 : (cfg.composite.contains(d) ? 1 : 0)) != phase) break;
        ++end;
      }
      if (phase != 0) {
        const Vec2 lo = g.vertex_point(i, j);
        const Vec2 hi = g.vertex_point(end, j + 1);
        out << "<rect x=\"" << px(lo.x) << "\" y=\"" << py(hi.y) << "\" width=\"" << px(hi.x) - px(lo.x)
            << "\" height=\"" << py(lo.y) - py(hi.y) << "\" fill=\""
            << (phase == 2 ? style.substrate_fill : style.film_fill) << "\"/>\n";
      }
      i = end;
    }
  }
  for (const auto& entry : classify_boundary(cfg).entries) {
    const auto [v0, v1] = g.edge_vertices(entry.edge);
    const Vec2 a = g.vertex_point(v0);
    const Vec2 b = g.vertex_point(v1);
    std::string stroke = "stroke=\"black\" stroke-width=\"1\"";
    switch (entry.label) {
      case InterfaceClass::coherent_interface:
        stroke = "stroke=\"black\" stroke-width=\"1.5\" stroke-dasharray=\"4 3\"";
        break;
      case InterfaceClass::incoherent_interface:
        stroke = "stroke=\"black\" stroke-width=\"2.5\"";
        break;
      case InterfaceClass::film_crack:
      case InterfaceClass::exposed_filament:
      case InterfaceClass::delaminated_substrate_crack:
      case InterfaceClass::exposed_substrate_filament:
      case InterfaceClass::bulk_substrate_crack_or_filament:
      case InterfaceClass::delaminated_substrate_filament:
      case InterfaceClass::substrate_filament_on_film_boundary:
        stroke = "stroke=\"black\" stroke-width=\"2\"";
        break;
      default:
        break;
    }
    out << "<line x1=\"" << px(a.x) << "\" y1=\"" << py(a.y) << "\" x2=\"" << px(b.x) << "\" y2=\"" << py(b.y)
        << "\" " << stroke << " data-class=\"" << class_name(entry.label) << "\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace sdri

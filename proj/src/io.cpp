#include "sdri/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace sdri {

namespace {

Json edge_list(const Grid& g, const EdgeSet& edges) {
  Json out = Json::array();
  for (EdgeId e : edges) out.push_back({e >> 1, static_cast<int>(g.edge_axis(e))});
  return out;
}

EdgeSet parse_edges(const Grid& g, const Json& doc, const char* field) {
  EdgeSet out;
  if (!doc.contains(field)) return out;
  for (const auto& item : doc.at(field)) {
    if (!item.is_array() || item.size() != 2) {
      throw FormatError(std::string(field) + " entries must be [vertex, axis] pairs");
    }
    const int v = item[0].get<int>();
    const int axis = item[1].get<int>();
    if (v < 0 || v >= g.vertex_count() || (axis != 0 && axis != 1)) {
      throw FormatError(std::string(field) + " entry refers to a vertex or axis outside the grid");
    }
    const EdgeId e = 2 * v + axis;
    if (!g.edge_valid(e)) throw FormatError(std::string(field) + " entry " + edge_name(g, e) + " leaves the grid");
    out.insert(e);
  }
  return out;
}

double get_number(const Json& doc, const char* key) {
  if (!doc.contains(key) || !doc.at(key).is_number()) throw FormatError(std::string("missing numeric field '") + key + "'");
  return doc.at(key).get<double>();
}

}  // namespace

Json config_to_json(const Configuration& cfg) {
  const Grid& g = cfg.grid;
  Json doc;
  doc["grid"] = {{"l", g.l}, {"L", g.L}, {"nx", g.nx}, {"ny", g.ny}};
  Json heights = Json::array();
  for (int level : cfg.substrate.profile.levels) heights.push_back(level * g.hy() - g.L);
  doc["heights"] = heights;
  Json spikes = Json::array();
  for (const Spike& s : cfg.substrate.profile.spikes) spikes.push_back({s.line, s.top * g.hy() - g.L});
  doc["spikes"] = spikes;
  doc["cracks"] = edge_list(g, cfg.substrate.cracks);
  Json rows = Json::array();
  for (int j = 0; j < g.ny; ++j) {
    Json runs = Json::array();
    int i = 0;
    while (i < g.nx) {
      if (!cfg.composite.contains(g.cell(i, j))) {
        ++i;
        continue;
      }
      const int start = i;
      while (i < g.nx && cfg.composite.contains(g.cell(i, j))) ++i;
      runs.push_back({start, i - start});
    }
    rows.push_back(runs);
  }
  doc["cells"] = rows;
  doc["slits"] = edge_list(g, cfg.composite.slits);
  doc["filaments"] = edge_list(g, cfg.composite.filaments);
  return doc;
}

Configuration config_from_json(const Json& doc) {
  try {
    const Json& gd = doc.at("grid");
    const Grid g(get_number(gd, "l"), get_number(gd, "L"), gd.at("nx").get<int>(), gd.at("ny").get<int>());
    std::vector<double> heights = doc.at("heights").get<std::vector<double>>();
    std::vector<std::pair<int, double>> spikes;
    if (doc.contains("spikes")) {
      for (const auto& s : doc.at("spikes")) spikes.emplace_back(s.at(0).get<int>(), s.at(1).get<double>());
    }
    HeightProfile profile = profile_from_heights(g, heights, spikes);
    Configuration cfg;
    cfg.grid = g;
    cfg.substrate = substrate_from_height(g, std::move(profile), parse_edges(g, doc, "cracks"));
    if (doc.contains("cells")) {
      const Json& rows = doc.at("cells");
      if (!rows.is_array() || static_cast<int>(rows.size()) != g.ny) throw FormatError("cells must list one row per grid row");
      cfg.composite.cells.assign(g.cell_count(), 0);
      for (int j = 0; j < g.ny; ++j) {
        for (const auto& run : rows[j]) {
          const int start = run.at(0).get<int>();
          const int count = run.at(1).get<int>();
          if (start < 0 || count < 0 || start + count > g.nx) throw FormatError("cell run leaves row " + std::to_string(j));
          for (int i = start; i < start + count; ++i) cfg.composite.cells[g.cell(i, j)] = 1;
        }
      }
    } else {
      cfg.composite.cells = cfg.substrate.cells;
    }
    cfg.composite.slits = parse_edges(g, doc, "slits");
    cfg.composite.filaments = parse_edges(g, doc, "filaments");
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed configuration: ") + e.what());
  }
}

Json norm_to_json(const FinslerNorm& n) {
  Json doc;
  switch (n.kind()) {
    case FinslerNorm::Kind::weighted_axis:
      doc["kind"] = "weighted_axis";
      doc["weights"] = {n.params()[0], n.params()[1]};
      break;
    case FinslerNorm::Kind::elliptic:
      doc["kind"] = "elliptic";
      doc["matrix"] = {n.params()[0], n.params()[1], n.params()[2]};
      break;
    case FinslerNorm::Kind::crystalline: {
      doc["kind"] = "crystalline";
      Json support = Json::array();
      for (const Vec2& v : n.support()) support.push_back({v.x, v.y});
      doc["support"] = support;
      break;
    }
  }
  const auto& mod = n.modulation();
  if (mod != std::array<double, 4>{1.0, 1.0, 1.0, 1.0}) doc["modulation"] = mod;
  return doc;
}

FinslerNorm norm_from_json(const Json& doc) {
  try {
    if (doc.is_number()) return FinslerNorm::isotropic(doc.get<double>());
    const std::string kind = doc.at("kind").get<std::string>();
    FinslerNorm n;
    if (kind == "isotropic") {
      n = FinslerNorm::isotropic(get_number(doc, "scale"));
    } else if (kind == "weighted_axis") {
      const auto w = doc.at("weights").get<std::array<double, 2>>();
      n = FinslerNorm::weighted_axis(w[0], w[1]);
    } else if (kind == "elliptic") {
      const auto m = doc.at("matrix").get<std::array<double, 3>>();
      n = FinslerNorm::elliptic(m[0], m[1], m[2]);
    } else if (kind == "crystalline") {
      std::vector<Vec2> support;
      for (const auto& v : doc.at("support")) support.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
      n = FinslerNorm::crystalline(std::move(support));
    } else {
      throw FormatError("unknown tension kind '" + kind + "'");
    }
    if (doc.contains("modulation")) n = n.with_modulation(doc.at("modulation").get<std::array<double, 4>>());
    return n;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed tension: ") + e.what());
  }
}

namespace {

constexpr std::array<const char*, 3> kFilamentWeights{"phi_F", "phi", "phi_plus_phi_FS"};

}  // namespace

Json tensions_to_json(const SurfaceTensions& t) {
  Json doc;
  doc["phi_F"] = norm_to_json(t.phi_F);
  doc["phi_S"] = norm_to_json(t.phi_S);
  doc["phi_FS"] = norm_to_json(t.phi_FS);
  doc["filament_on_film"] = kFilamentWeights[static_cast<int>(t.filament_on_film)];
  return doc;
}

SurfaceTensions tensions_from_json(const Json& doc) {
  try {
    SurfaceTensions t = derive_regime_tensions(norm_from_json(doc.at("phi_F")), norm_from_json(doc.at("phi_S")),
                                               norm_from_json(doc.at("phi_FS")));
    if (doc.contains("filament_on_film")) {
      const std::string w = doc.at("filament_on_film").get<std::string>();
      const auto it = std::find(kFilamentWeights.begin(), kFilamentWeights.end(), w);
      if (it == kFilamentWeights.end()) throw FormatError("unknown filament_on_film weight '" + w + "'");
      t.filament_on_film = static_cast<FilamentOnFilmWeight>(it - kFilamentWeights.begin());
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed tensions: ") + e.what());
  }
}

namespace {

Stiffness phase_from_json(const Json& doc) {
  if (doc.contains("voigt")) {
    Stiffness s;
    s.voigt = doc.at("voigt").get<std::array<double, 9>>();
    return s;
  }
  const double lambda = get_number(doc, "lambda");
  const double mu = get_number(doc, "mu");
  if (!(mu > 0.0) || !(lambda + mu > 0.0)) throw FormatError("Lamé pair must satisfy mu > 0 and lambda + mu > 0");
  return Stiffness::isotropic(lambda, mu);
}

}  // namespace

Json material_to_json(const Material& m) {
  Json doc;
  doc["film"] = {{"voigt", m.film.voigt}};
  doc["substrate"] = {{"voigt", m.substrate.voigt}};
  doc["m0"] = m.m0;
  doc["mismatch_everywhere"] = m.mismatch_everywhere;
  return doc;
}

Material material_from_json(const Json& doc) {
  try {
    Material m;
    if (doc.contains("film")) m.film = phase_from_json(doc.at("film"));
    if (doc.contains("substrate")) m.substrate = phase_from_json(doc.at("substrate"));
    if (doc.contains("m0")) m.m0 = doc.at("m0").get<std::array<double, 4>>();
    if (doc.contains("mismatch_everywhere")) m.mismatch_everywhere = doc.at("mismatch_everywhere").get<bool>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed material: ") + e.what());
  }
}

Json breakdown_to_json(const EnergyBreakdown& b) {
  Json classes;
  for (int k = 0; k < kInterfaceClassCount; ++k) {
    classes[std::string(class_name(static_cast<InterfaceClass>(k)))] = b.per_class[k];
  }
  return {{"classes", classes}, {"surface", b.surface}, {"elastic", b.elastic}, {"penalty", b.penalty}, {"total", b.total}};
}

Json report_to_json(const AdmissibilityReport& r) {
  return {{"admissible", r.admissible},
          {"substrate_components", r.substrate_components},
          {"composite_components", r.composite_components},
          {"m", {r.budget.m0, r.budget.m1}},
          {"violations", r.violations}};
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  out << text;
}

}  // namespace sdri

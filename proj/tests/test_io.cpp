#include "doctest.h"
#include "sdri/io.hpp"
#include "sdri/render.hpp"
#include "support.hpp"

using namespace sdri;
using namespace testing_support;

TEST_CASE("configuration round trip is exact") {
  std::mt19937_64 rng(31);
  for (int n = 0; n < 100; ++n) {
    const Configuration cfg = random_configuration(rng);
    const std::string text = config_to_json(cfg).dump();
    const Configuration back = config_from_json(Json::parse(text));
    CHECK(back == cfg);
    CHECK(back.grid.l == cfg.grid.l);
    CHECK(config_to_json(back).dump() == text);
  }
}

TEST_CASE("configuration document shape") {
  const Configuration island = island_example();
  const Json doc = config_to_json(island);
  CHECK(doc["grid"]["nx"] == 4);
  CHECK(doc["heights"] == Json::array({0.0, 0.0, 0.0, 0.0}));
  CHECK(doc["cells"][2] == Json::parse("[[1, 2]]"));
  // cells omitted means a bare substrate
  Json bare = doc;
  bare.erase("cells");
  const Configuration b = config_from_json(bare);
  CHECK(b.composite.cells == b.substrate.cells);
  Json off = doc;
  off["heights"][0] = 0.3;
  CHECK_THROWS(config_from_json(off));
  Json broken = doc;
  broken.erase("grid");
  CHECK_THROWS_AS(config_from_json(broken), FormatError);
}

TEST_CASE("tension and norm documents") {
  std::mt19937_64 rng(4);
  for (int n = 0; n < 50; ++n) {
    SurfaceTensions t = derive_regime_tensions(random_norm(rng), random_norm(rng), random_norm(rng));
    t.filament_on_film = static_cast<FilamentOnFilmWeight>(below(rng, 3));
    if (chance(rng, 0.3)) t.phi_S = t.phi_S.with_modulation({1.0, 1.5, 0.75, 2.0});
    const SurfaceTensions back = tensions_from_json(Json::parse(tensions_to_json(t).dump()));
    CHECK(back.phi_F == t.phi_F);
    CHECK(back.phi_S == t.phi_S);
    CHECK(back.phi_FS == t.phi_FS);
    CHECK(back.filament_on_film == t.filament_on_film);
  }
  const auto iso = tensions_from_json(Json::parse(R"({"phi_F": 1, "phi_S": 1.5, "phi_FS": 0.5})"));
  CHECK(iso.phi_S.value({0.0, 2.0}) == doctest::Approx(3.0));
  CHECK(iso.filament_on_film == FilamentOnFilmWeight::phi_F);
  CHECK_THROWS_AS(norm_from_json(Json::parse(R"({"kind": "hexagonal"})")), FormatError);
  CHECK_THROWS(tensions_from_json(Json::parse(R"({"phi_F": 1, "phi_S": 1, "phi_FS": 1, "filament_on_film": "x"})")));
}

TEST_CASE("material documents") {
  Material m;
  m.film = Stiffness::isotropic(2.0, 0.5);
  m.substrate.voigt = {4.0, 1.0, 0.1, 1.0, 3.0, 0.0, 0.1, 0.0, 1.0};
  m.m0 = {0.01, 0.02, 0.0, -0.01};
  m.mismatch_everywhere = true;
  const Material back = material_from_json(Json::parse(material_to_json(m).dump()));
  CHECK(back.film == m.film);
  CHECK(back.substrate == m.substrate);
  CHECK(back.m0 == m.m0);
  CHECK(back.mismatch_everywhere);
  CHECK_THROWS(material_from_json(Json::parse(R"({"film": {"lambda": 1, "mu": -1}})")));
}

TEST_CASE("energy breakdown document") {
  const auto b = surface_energy(island_example(), iso_tensions(1.0, 1.5, 0.5));
  const Json doc = breakdown_to_json(b);
  CHECK(doc["classes"]["film_free"].get<double>() == doctest::Approx(2.0));
  CHECK(doc["total"].get<double>() == doctest::Approx(4.0));
  CHECK(doc["classes"].size() == kInterfaceClassCount);
}

TEST_CASE("svg drawing") {
  Configuration cfg = island_example();
  cfg.composite.slits.insert(cfg.grid.horizontal_edge(1, 2));
  const std::string svg = render_svg(cfg);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("#5a5a5a") != std::string::npos);
  CHECK(svg.find("#c8c8c8") != std::string::npos);
  CHECK(svg.find("data-class=\"incoherent_interface\"") != std::string::npos);
  CHECK(svg.find("data-class=\"coherent_interface\"") != std::string::npos);
}

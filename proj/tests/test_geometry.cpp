#include "doctest.h"
#include "support.hpp"

using namespace sdri;
using namespace testing_support;

TEST_CASE("grid indexing") {
  const Grid g(1.0, 2.0, 4, 6);
  CHECK(g.hx() == doctest::Approx(0.5));
  CHECK(g.hy() == doctest::Approx(2.0 / 3.0));
  CHECK(g.zero_level() == 3);
  CHECK(g.cell(1, 2) == 9);
  CHECK(g.cell_col(9) == 1);
  CHECK(g.cell_row(9) == 2);
  const EdgeId h = g.horizontal_edge(1, 2);
  CHECK(g.edge_cells(h) == std::array<int, 2>{g.cell(1, 1), g.cell(1, 2)});
  const EdgeId v = g.vertical_edge(2, 1);
  CHECK(g.edge_cells(v) == std::array<int, 2>{g.cell(1, 1), g.cell(2, 1)});
  CHECK(g.on_domain_wall(g.horizontal_edge(0, 0)));
  CHECK(g.on_domain_wall(g.vertical_edge(4, 0)));
  CHECK_FALSE(g.edge_valid(g.horizontal_edge(4, 0)));
  CHECK_FALSE(g.edge_valid(g.vertical_edge(0, 6)));
  const Vec2 m = g.edge_midpoint(h);
  CHECK(m.x == doctest::Approx(-0.25));
  CHECK(m.y == doctest::Approx(-2.0 + 2.0 * 2.0 / 3.0));
  CHECK_THROWS_AS(Grid(1.0, 1.0, 0, 2), GeometryError);
}

TEST_CASE("profile from heights snaps to grid lines") {
  const Grid g(1.0, 1.0, 4, 4);
  const auto p = profile_from_heights(g, {0.0, 0.5, 1.0, 0.0}, {{1, 1.0}});
  CHECK(p.levels == std::vector<int>{2, 3, 4, 2});
  REQUIRE(p.spikes.size() == 1);
  CHECK(p.spikes[0].top == 4);
  CHECK_THROWS_AS(profile_from_heights(g, {0.0, 0.3, 0.0, 0.0}), GeometryError);
  CHECK_THROWS_AS(profile_from_heights(g, {0.0, 0.0, 0.0}), GeometryError);
  // spikes must rise above both neighbouring columns
  CHECK_THROWS_AS(profile_from_heights(g, {0.0, 0.5, 0.0, 0.0}, {{1, 0.5}}), GeometryError);
}

TEST_CASE("subgraph substrate and cracks") {
  const Grid g(1.0, 1.0, 4, 4);
  HeightProfile p;
  p.levels = {2, 3, 2, 2};
  p.spikes = {{3, 4}};
  const auto s = substrate_from_height(g, p, {g.vertical_edge(2, 1)});
  CHECK(s.cell_count() == 9);
  CHECK(s.spike_edges == EdgeSet{g.vertical_edge(3, 2), g.vertical_edge(3, 3)});
  CHECK(s.boundary.count(g.vertical_edge(2, 1)));
  CHECK(s.boundary.count(g.horizontal_edge(1, 3)));
  CHECK_THROWS_WITH_AS(substrate_from_height(g, p, {g.vertical_edge(3, 3)}), doctest::Contains("crack"),
                       GeometryError);
  // the top edge of a column is in the closure of the interior
  CHECK(crack_in_closure(g, p, g.horizontal_edge(1, 3)));
  CHECK_FALSE(crack_in_closure(g, p, g.horizontal_edge(1, 4)));
}

TEST_CASE("structural violations are reported") {
  Configuration cfg = island_example();
  CHECK(structural_violations(cfg).empty());
  const Grid& g = cfg.grid;

  Configuration bad = cfg;
  bad.composite.cells[g.cell(0, 0)] = 0;
  CHECK_FALSE(structural_violations(bad).empty());

  bad = cfg;
  bad.composite.slits.insert(g.horizontal_edge(0, 1));
  const auto v = structural_violations(bad);
  REQUIRE(v.size() == 1);
  CHECK(v[0].find("Int(S)") != std::string::npos);

  bad = cfg;
  bad.composite.filaments.insert(g.vertical_edge(3, 2));
  CHECK_FALSE(structural_violations(bad).empty());

  // filaments must hang from the composite cells
  Configuration wide = flat_configuration(Grid(1.0, 1.0, 8, 8));
  const Grid& w = wide.grid;
  wide.composite.filaments.insert(w.vertical_edge(3, 4));
  CHECK(structural_violations(wide).empty());
  wide.composite.filaments.insert(w.horizontal_edge(4, 6));
  CHECK_FALSE(structural_violations(wide).empty());

  bad = cfg;
  bad.substrate.profile.levels[0] = 1;
  refresh_substrate(bad);
  bad.composite.cells = bad.substrate.cells;
  CHECK_FALSE(structural_violations(bad).empty());
}

TEST_CASE("component budget") {
  Configuration cfg = island_example();
  auto r = validate_configuration(cfg, {1, 1});
  CHECK(r.admissible);
  CHECK(r.substrate_components == 1);
  CHECK(r.composite_components == 1);
  // islands on the substrate share its boundary line, a floating cell does not
  cfg = flat_configuration(Grid(1.0, 1.0, 8, 8));
  const Grid& g = cfg.grid;
  cfg.composite.cells[g.cell(1, 4)] = 1;
  cfg.composite.cells[g.cell(6, 4)] = 1;
  r = validate_configuration(cfg, {1, 1});
  CHECK(r.composite_components == 1);
  cfg.composite.cells[g.cell(3, 6)] = 1;
  r = validate_configuration(cfg, {1, 1});
  CHECK(r.composite_components == 2);
  CHECK_FALSE(r.admissible);
  CHECK(validate_configuration(cfg, {1, 2}).admissible);
}

TEST_CASE("boundary components agree with a breadth-first search") {
  std::mt19937_64 rng(11);
  for (int n = 0; n < 200; ++n) {
    const Configuration cfg = random_configuration(rng);
    REQUIRE(structural_violations(cfg).empty());
    EdgeSet a = composite_boundary(cfg);
    CHECK(boundary_components(cfg.grid, a).count == oracle_component_count(cfg.grid, a));
    CHECK(boundary_components(cfg.grid, cfg.substrate.boundary).count ==
          oracle_component_count(cfg.grid, cfg.substrate.boundary));
  }
}

TEST_CASE("composite boundary carries slits and filaments") {
  Configuration cfg = island_example();
  const Grid& g = cfg.grid;
  cfg.composite.slits.insert(g.vertical_edge(2, 2));
  cfg.composite.filaments.insert(g.vertical_edge(3, 2));
  const EdgeSet b = composite_boundary(cfg);
  CHECK(b.count(g.vertical_edge(2, 2)));
  CHECK(b.count(g.vertical_edge(3, 2)));
  CHECK(b.count(g.horizontal_edge(1, 3)));
  CHECK_FALSE(b.count(g.horizontal_edge(1, 2)));
}

TEST_CASE("variation agrees with jump enumeration") {
  std::mt19937_64 rng(5);
  for (int n = 0; n < 300; ++n) {
    const Grid g(uniform(rng, 0.5, 2.0), uniform(rng, 0.5, 2.0), 1 + below(rng, 16), 2 * (1 + below(rng, 8)));
    const HeightProfile p = random_profile(rng, g);
    const auto r = pointwise_variation(g, p);
    const auto o = oracle_variation(g, p);
    CHECK(r.variation == doctest::Approx(o.variation).epsilon(1e-12));
    CHECK(r.graph_length == doctest::Approx(o.graph_length).epsilon(1e-12));
    // edge count of the subgraph boundary, walls excluded
    const auto s = substrate_from_height(g, p, {});
    double measured = 0.0;
    for (EdgeId e : s.boundary) measured += g.edge_length(e);
    CHECK(measured <= r.boundary_measure + 1e-12);
    const bool full = std::find(p.levels.begin(), p.levels.end(), g.ny) != p.levels.end();
    if (!full) CHECK(measured == doctest::Approx(r.boundary_measure).epsilon(1e-12));
  }
}

TEST_CASE("signed distance") {
  const Configuration cfg = flat_configuration(Grid(1.0, 1.0, 4, 4));
  const auto region = substrate_distance_region(cfg);
  CHECK(sdist_at(cfg.grid, region, {0.1, 0.5}) == doctest::Approx(0.5));
  CHECK(sdist_at(cfg.grid, region, {0.1, -0.25}) == doctest::Approx(-0.25));
  const auto field = sdist_field(cfg.grid, region);
  REQUIRE(field.size() == 16);
  CHECK(field[cfg.grid.cell(0, 3)] == doctest::Approx(0.75));
}

TEST_CASE("blow-up with unit radius at the centre is the identity") {
  const Configuration cfg = island_example();
  const Configuration b = blowup(cfg, {0.0, 0.0}, 1.0);
  CHECK(b.grid == cfg.grid);
  CHECK(b.composite == cfg.composite);
  CHECK(b.substrate == cfg.substrate);
  const Configuration half = blowup(cfg, {0.0, 0.0}, 0.5);
  CHECK(half.grid.nx == 2);
  CHECK(half.composite.cell_count() == 4);
  CHECK(half.substrate.cell_count() == 2);
}

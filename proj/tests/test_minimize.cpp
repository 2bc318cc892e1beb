#include "doctest.h"
#include "sdri/minimize.hpp"
#include "support.hpp"

using namespace sdri;
using namespace testing_support;

namespace {

std::set<EdgeId> differing_edges(const Configuration& a, const Configuration& b) {
  std::set<EdgeId> out;
  for (EdgeId e = 0; e < a.grid.edge_id_bound(); ++e) {
    const auto x = classify_edge(a, e);
    const auto y = classify_edge(b, e);
    if (x.has_value() != y.has_value() || (x && (x->label != y->label || !(x->normal == y->normal)))) out.insert(e);
  }
  return out;
}

}  // namespace

TEST_CASE("single moves") {
  const Configuration island = island_example();
  const Grid& g = island.grid;
  const auto t = iso_tensions(1.0, 1.5, 0.5);

  const Configuration added = apply_move(island, {MoveKind::add_film_cell, g.cell(3, 2), 1}, {1, 1});
  CHECK(added.composite.cell_count() == 11);
  CHECK_THROWS_AS(apply_move(island, {MoveKind::add_film_cell, g.cell(1, 2), 1}, {1, 1}), MoveRejected);
  CHECK_THROWS_AS(apply_move(island, {MoveKind::remove_film_cell, g.cell(0, 0), 1}, {1, 1}), MoveRejected);

  const Configuration up = apply_move(island, {MoveKind::height_step, 0, 1}, {1, 1});
  CHECK(up.substrate.profile.levels[0] == 3);
  CHECK(up.composite.contains(g.cell(0, 2)));
  const Configuration under = apply_move(island, {MoveKind::height_step, 1, 1}, {1, 1});
  CHECK(under.substrate.contains(g.cell(1, 2)));
  CHECK(under.composite.cell_count() == 10);
  CHECK_THROWS_AS(apply_move(island, {MoveKind::height_step, 0, -1}, {1, 1}), MoveRejected);
  CHECK_THROWS_AS(apply_move(island, {MoveKind::height_step, 0, 2}, {1, 1}), MoveRejected);

  const Configuration toggled = apply_move(island, {MoveKind::toggle_delamination, g.horizontal_edge(1, 2), 1}, {1, 1});
  CHECK(surface_energy(toggled, t).surface - surface_energy(island, t).surface == doctest::Approx(1.0));
  const Configuration back = apply_move(toggled, {MoveKind::toggle_delamination, g.horizontal_edge(1, 2), 1}, {1, 1});
  CHECK(back == island);
  CHECK_THROWS_AS(apply_move(island, {MoveKind::toggle_delamination, g.horizontal_edge(0, 1), 1}, {1, 1}),
                  MoveRejected);

  const Configuration cracked = apply_move(island, {MoveKind::add_crack, g.vertical_edge(2, 1), 1}, {1, 1});
  CHECK(cracked.substrate.cracks.count(g.vertical_edge(2, 1)));
  CHECK(apply_move(cracked, {MoveKind::remove_crack, g.vertical_edge(2, 1), 1}, {1, 1}) == island);
  CHECK_THROWS_AS(apply_move(island, {MoveKind::add_crack, g.vertical_edge(2, 3), 1}, {1, 1}), MoveRejected);

  const Configuration fil = apply_move(island, {MoveKind::add_filament, g.vertical_edge(2, 3), 1}, {1, 1});
  CHECK(fil.composite.filaments.count(g.vertical_edge(2, 3)));
  CHECK(apply_move(fil, {MoveKind::remove_filament, g.vertical_edge(2, 3), 1}, {1, 1}) == island);
  CHECK_THROWS_AS(apply_move(island, {MoveKind::add_filament, g.vertical_edge(2, 2), 1}, {1, 1}), MoveRejected);
}

TEST_CASE("a spike may not be stranded") {
  const Grid g(1.0, 1.0, 4, 4);
  HeightProfile p;
  p.levels = {2, 2, 2, 2};
  p.spikes = {{2, 3}};
  Configuration cfg = bare_configuration(g, p);
  cfg.composite.cells[g.cell(1, 2)] = 1;
  cfg.composite.filaments.clear();
  REQUIRE(structural_violations(cfg).empty());
  CHECK_THROWS_AS(apply_move(cfg, {MoveKind::remove_film_cell, g.cell(1, 2), 1}, {1, 1}), MoveRejected);
  // the same removal with the spike carried as a filament is fine
  const Configuration ok = apply_moves(cfg,
                                       {{MoveKind::add_film_cell, g.cell(2, 2), 1},
                                        {MoveKind::remove_film_cell, g.cell(1, 2), 1}},
                                       {1, 1});
  CHECK(ok.composite.contains(g.cell(2, 2)));
}

TEST_CASE("removing a film cell drops slits that lose their sides") {
  Configuration cfg = island_example();
  const Grid& g = cfg.grid;
  cfg.composite.slits.insert(g.horizontal_edge(1, 2));
  const Configuration out = apply_move(cfg, {MoveKind::remove_film_cell, g.cell(1, 2), 1}, {1, 1});
  CHECK(out.composite.slits.empty());
}

TEST_CASE("features of the island") {
  const Configuration island = island_example();
  const auto f = enumerate_features(island);
  REQUIRE(f.islands.size() == 1);
  CHECK(f.islands[0].cells.size() == 2);
  CHECK(f.voids.empty());
  REQUIRE(f.grains.size() == 1);
  const auto t = iso_tensions(1.0, 1.5, 0.5);
  const Configuration shrunk = apply_move(island, {MoveKind::shrink_island, 0, 1}, {1, 1});
  CHECK(shrunk.composite.cell_count() == 8);
  CHECK(surface_energy(shrunk, t).surface == doctest::Approx(3.0));
  const Configuration opened = apply_move(island, {MoveKind::open_grain, 0, 1}, {1, 1});
  CHECK(opened.composite.slits.size() == 2);
  CHECK(surface_energy(opened, t).surface == doctest::Approx(6.0));
  CHECK_THROWS_AS(apply_move(island, {MoveKind::fill_void, 0, 1}, {1, 1}), MoveRejected);
}

TEST_CASE("an enclosed void is filled") {
  const Grid g(1.0, 1.0, 6, 6);
  Configuration cfg = flat_configuration(g);
  for (int j = 3; j < 5; ++j) {
    for (int i = 0; i < 6; ++i) cfg.composite.cells[g.cell(i, j)] = 1;
  }
  cfg.composite.cells[g.cell(2, 3)] = 0;
  REQUIRE(validate_configuration(cfg, {1, 2}).admissible);
  const auto f = enumerate_features(cfg);
  REQUIRE(f.voids.size() == 1);
  CHECK(f.voids[0].cells == std::vector<int>{g.cell(2, 3)});
  const Configuration filled = apply_move(cfg, {MoveKind::fill_void, 0, 1}, {1, 2});
  CHECK(filled.composite.contains(g.cell(2, 3)));
  CHECK(validate_configuration(filled, {1, 1}).admissible);
}

TEST_CASE("changed edges cover every edge whose class moved") {
  std::mt19937_64 rng(99);
  int applied = 0;
  for (int n = 0; n < 400; ++n) {
    const Configuration cfg = random_configuration(rng, 10);
    const Grid& g = cfg.grid;
    const auto kind = static_cast<MoveKind>(below(rng, 8));
    int target = 0;
    if (kind == MoveKind::add_film_cell || kind == MoveKind::remove_film_cell) {
      target = below(rng, g.cell_count());
    } else if (kind == MoveKind::height_step) {
      target = below(rng, g.nx);
    } else {
      target = below(rng, g.edge_id_bound());
    }
    const Move mv{kind, target, chance(rng, 0.5) ? 1 : -1};
    Configuration after;
    try {
      after = apply_move(cfg, mv, {100, 100});
    } catch (const MoveRejected&) {
      continue;
    } catch (const GeometryError&) {
      continue;
    }
    ++applied;
    const EdgeSet changed = changed_edges(cfg, after);
    for (EdgeId e : differing_edges(cfg, after)) CHECK(changed.count(e) == 1);
  }
  CHECK(applied > 50);
}

TEST_CASE("annealing") {
  const auto t = iso_tensions(1.0, 1.5, 0.5);
  Material m;
  m.m0 = {0.05, 0.0, 0.0, 0.05};
  const Configuration island = island_example();
  MinimizeParams p;
  p.v0 = island.substrate_area();
  p.v1 = island.composite_area();
  p.schedule = {0.3, 0.99, 150};
  p.seed = 42;
  p.cadence = 5;
  p.debug = true;

  SUBCASE("penalized runs are reproducible and track the best state") {
    p.lambda0 = p.lambda1 = 2.0;
    const Trajectory a = minimize_penalized(island, t, m, p);
    const Trajectory b = minimize_penalized(island, t, m, p);
    REQUIRE(a.records.size() == 151);
    REQUIRE(b.records.size() == a.records.size());
    for (std::size_t k = 0; k < a.records.size(); ++k) {
      CHECK(a.records[k].move == b.records[k].move);
      CHECK(a.records[k].F == b.records[k].F);
    }
    CHECK(a.records[0].move == "initial");
    double lowest = a.records[0].F;
    for (const auto& r : a.records) lowest = std::min(lowest, r.F);
    CHECK(a.best_F == lowest);
    CHECK(validate_configuration(a.best, p.m).admissible);
    const auto again = total_energy(a.best, t, m, VolumePenalty{p.lambda0, p.lambda1, p.v0, p.v1});
    CHECK(again.total == doctest::Approx(a.best_F).epsilon(1e-9));
  }
  SUBCASE("constrained runs keep both areas") {
    int accepted_hook = 0;
    const Trajectory a = minimize_constrained(island, t, m, p, [&](const Configuration& c, int) {
      ++accepted_hook;
      CHECK(c.substrate_area() == doctest::Approx(island.substrate_area()));
      CHECK(c.composite_area() == doctest::Approx(island.composite_area()));
    });
    CHECK(accepted_hook == a.accepted);
    for (const auto& r : a.records) {
      CHECK(r.substrate_area == doctest::Approx(island.substrate_area()));
      CHECK(r.composite_area == doctest::Approx(island.composite_area()));
    }
  }
  SUBCASE("bad parameters") {
    MinimizeParams bad = p;
    bad.schedule.cooling = 1.5;
    CHECK_THROWS_AS(minimize_penalized(island, t, m, bad), MinimizeError);
    bad = p;
    bad.schedule.t0 = 0.0;
    CHECK_THROWS_AS(minimize_penalized(island, t, m, bad), MinimizeError);
    bad = p;
    bad.v0 = 100.0;
    bad.v1 = 100.0;
    bad.lambda0 = 1.0;
    CHECK_THROWS_AS(minimize_penalized(island, t, m, bad), MinimizeError);
  }
}

TEST_CASE("move names") {
  CHECK(move_name(MoveKind::shrink_island) == "shrink_island");
  CHECK(is_topology_move(MoveKind::open_grain));
  CHECK_FALSE(is_topology_move(MoveKind::add_film_cell));
}

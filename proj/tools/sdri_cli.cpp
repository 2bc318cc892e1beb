// Batch front end: validate, energy, relax, minimize, lsc, sweep, render.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "sdri/analysis.hpp"
#include "sdri/elasticity.hpp"
#include "sdri/io.hpp"
#include "sdri/minimize.hpp"
#include "sdri/render.hpp"

namespace {

using sdri::Json;

constexpr std::uint64_t kDefaultSeed = 20240917;

struct Options {
  std::string config;
  std::string tensions;
  std::string material;
  std::string out;
  std::uint64_t seed = kDefaultSeed;
  bool deterministic = false;
  int render_every = 0;
  std::vector<double> lambda;
  std::vector<double> volumes;
  std::vector<int> m;
  // minimize
  std::string mode = "penalized";
  int steps = 2000;
  double t0 = 0.5;
  double cooling = 0.999;
  int cadence = 25;
  bool debug = false;
  // lsc
  std::string sequence;
  int nx = 16;
  int ny = 16;
  int count = 6;
  // sweep
  std::string sweep_over = "lambda";
  std::vector<double> values;
};

class Emitter {
 public:
  Emitter(std::string command, const Options& opt) : command_(std::move(command)), opt_(opt) {}

  Json header() const {
    Json rec;
    rec["command"] = command_;
    rec["seed"] = opt_.seed;
    return rec;
  }

  void emit(Json rec) const {
    if (!opt_.deterministic) {
      rec["elapsed_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }
    std::cout << rec.dump() << '\n';
  }

 private:
  std::string command_;
  const Options& opt_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

sdri::ComponentBudget budget(const Options& opt) {
  if (opt.m.empty()) return {};
  if (opt.m.size() != 2) throw std::invalid_argument("--m expects two counts m0,m1");
  return {opt.m[0], opt.m[1]};
}

sdri::Configuration load_config(const Options& opt) {
  if (opt.config.empty()) throw std::invalid_argument("--config is required");
  return sdri::config_from_json(sdri::read_json(opt.config));
}

sdri::SurfaceTensions load_tensions(const Options& opt) {
  if (opt.tensions.empty()) {
    return sdri::derive_regime_tensions(sdri::FinslerNorm::isotropic(1.0), sdri::FinslerNorm::isotropic(1.5),
                                        sdri::FinslerNorm::isotropic(0.5));
  }
  return sdri::tensions_from_json(sdri::read_json(opt.tensions));
}

sdri::Material load_material(const Options& opt) {
  if (opt.material.empty()) return {};
  return sdri::material_from_json(sdri::read_json(opt.material));
}

std::optional<sdri::VolumePenalty> penalty(const Options& opt) {
  if (opt.lambda.empty() && opt.volumes.empty()) return std::nullopt;
  if (opt.lambda.size() != 2 || opt.volumes.size() != 2) {
    throw std::invalid_argument("--lambda and --volumes each expect two values");
  }
  return sdri::VolumePenalty{opt.lambda[0], opt.lambda[1], opt.volumes[0], opt.volumes[1]};
}

sdri::MinimizeParams minimize_params(const Options& opt, const sdri::Configuration& cfg) {
  sdri::MinimizeParams p;
  p.m = budget(opt);
  if (opt.lambda.size() == 2) {
    p.lambda0 = opt.lambda[0];
    p.lambda1 = opt.lambda[1];
  } else if (!opt.lambda.empty()) {
    throw std::invalid_argument("--lambda expects two values");
  }
  if (opt.volumes.size() == 2) {
    p.v0 = opt.volumes[0];
    p.v1 = opt.volumes[1];
  } else if (opt.volumes.empty()) {
    p.v0 = cfg.substrate_area();
    p.v1 = cfg.composite_area();
  } else {
    throw std::invalid_argument("--volumes expects two values");
  }
  p.schedule = {opt.t0, opt.cooling, opt.steps};
  p.seed = opt.seed;
  p.cadence = opt.cadence;
  p.debug = opt.debug;
  return p;
}

Json record_to_json(const sdri::StepRecord& r, std::uint64_t seed) {
  return {{"seed", seed},
          {"step", r.step},
          {"move", r.move},
          {"accepted", r.accepted},
          {"F", r.F},
          {"S", r.S},
          {"W", r.W},
          {"penalty", r.penalty},
          {"substrate_area", r.substrate_area},
          {"composite_area", r.composite_area},
          {"substrate_components", r.substrate_components},
          {"composite_components", r.composite_components}};
}

std::filesystem::path out_path(const Options& opt, const std::string& name) {
  return std::filesystem::path(opt.out) / name;
}

int cmd_validate(const Options& opt, const Emitter& em) {
  const auto cfg = load_config(opt);
  Json rec = em.header();
  rec["report"] = sdri::report_to_json(sdri::validate_configuration(cfg, budget(opt)));
  em.emit(rec);
  return 0;
}

int cmd_energy(const Options& opt, const Emitter& em) {
  const auto cfg = load_config(opt);
  const auto tensions = load_tensions(opt);
  const auto material = load_material(opt);
  const auto report = sdri::validate_configuration(cfg, budget(opt));
  if (!report.admissible) throw sdri::AdmissibilityError(report);
  Json rec = em.header();
  rec["energy"] = sdri::breakdown_to_json(sdri::total_energy(cfg, tensions, material, penalty(opt)));
  em.emit(rec);
  return 0;
}

int cmd_relax(const Options& opt, const Emitter& em) {
  const auto cfg = load_config(opt);
  const auto material = load_material(opt);
  const auto report = sdri::validate_configuration(cfg, budget(opt));
  if (!report.admissible) throw sdri::AdmissibilityError(report);
  const auto mesh = sdri::build_mesh(cfg);
  Json rec = em.header();
  rec["nodes"] = mesh.node_count();
  rec["elements"] = mesh.element_count();
  rec["mesh_components"] = mesh.component_count;
  rec["duplicated_vertices"] = mesh.duplicated_vertices();
  double W = 0.0;
  if (mesh.element_count() > 0) {
    const auto u = sdri::solve_equilibrium(mesh, material);
    W = sdri::elastic_energy(mesh, material, u);
    if (!opt.out.empty()) {
      std::ostringstream lines;
      for (int n = 0; n < mesh.node_count(); ++n) {
        const auto x = mesh.grid.vertex_point(mesh.node_vertex[n]);
        lines << Json{{"node", n}, {"x", x.x}, {"y", x.y}, {"ux", u.values[2 * n]}, {"uy", u.values[2 * n + 1]}}.dump()
              << '\n';
      }
      sdri::write_text(out_path(opt, "displacement.jsonl"), lines.str());
    }
  }
  rec["elastic"] = W;
  em.emit(rec);
  return 0;
}

int cmd_minimize(const Options& opt, const Emitter& em) {
  const auto cfg = load_config(opt);
  const auto tensions = load_tensions(opt);
  const auto material = load_material(opt);
  const auto params = minimize_params(opt, cfg);
  sdri::AcceptHook hook;
  if (opt.render_every > 0 && !opt.out.empty()) {
    hook = [&](const sdri::Configuration& c, int accepted) {
      if (accepted % opt.render_every == 0) {
        sdri::write_text(out_path(opt, "snapshot_" + std::to_string(accepted) + ".svg"), sdri::render_svg(c));
      }
    };
  }
  const bool constrained = opt.mode == "constrained";
  if (!constrained && opt.mode != "penalized") throw std::invalid_argument("--mode must be penalized or constrained");
  const auto tr = constrained ? sdri::minimize_constrained(cfg, tensions, material, params, hook)
                              : sdri::minimize_penalized(cfg, tensions, material, params, hook);
  std::ostringstream lines;
  for (const auto& r : tr.records) lines << record_to_json(r, opt.seed).dump() << '\n';
  if (!opt.out.empty()) {
    sdri::write_text(out_path(opt, "trajectory.jsonl"), lines.str());
    sdri::write_text(out_path(opt, "best.json"), sdri::config_to_json(tr.best).dump(2) + "\n");
  } else {
    std::cout << lines.str();
  }
  Json rec = em.header();
  rec["mode"] = opt.mode;
  rec["steps"] = opt.steps;
  rec["accepted"] = tr.accepted;
  rec["initial_F"] = tr.records.front().F;
  rec["best_F"] = tr.best_F;
  rec["best_step"] = tr.best_step;
  rec["best_energy"] = sdri::breakdown_to_json(sdri::total_energy(
      tr.best, tensions, material,
      constrained ? std::nullopt
                  : std::optional<sdri::VolumePenalty>(sdri::VolumePenalty{params.lambda0, params.lambda1, params.v0, params.v1})));
  em.emit(rec);
  return 0;
}

int cmd_lsc(const Options& opt, const Emitter& em) {
  const auto kind = sdri::sequence_from_name(opt.sequence);
  if (!kind) throw std::invalid_argument("unknown sequence kind '" + opt.sequence + "'");
  const sdri::Grid grid(1.0, 1.0, opt.nx, opt.ny);
  const auto seq = sdri::generate_sequence(*kind, opt.count, grid);
  const auto tensions = load_tensions(opt);
  const auto conv = sdri::tau_convergence_report(seq);
  const auto lsc = sdri::lsc_check(seq, tensions);
  Json rec = em.header();
  rec["sequence"] = opt.sequence;
  rec["energies"] = lsc.energies;
  rec["limit_energy"] = lsc.limit_energy;
  rec["tail_min"] = lsc.tail_min;
  rec["margin"] = lsc.margin;
  rec["tolerance"] = lsc.tolerance;
  rec["gap_A"] = conv.gap_A;
  rec["gap_S"] = conv.gap_S;
  rec["gap_bound"] = conv.bound;
  rec["length_sup"] = conv.length_sup;
  rec["converged"] = conv.within_bound && conv.monotone;
  rec["pass"] = lsc.pass;
  em.emit(rec);
  return 0;
}

int cmd_sweep(const Options& opt, const Emitter& em) {
  const auto cfg = load_config(opt);
  const auto tensions = load_tensions(opt);
  const auto material = load_material(opt);
  if (opt.values.empty()) throw std::invalid_argument("--values is required");
  std::ostringstream csv;
  csv.precision(17);
  csv << opt.sweep_over << ",best_F,best_S,best_W,volume_error,accepted\n";
  for (double v : opt.values) {
    auto params = minimize_params(opt, cfg);
    auto t = tensions;
    if (opt.sweep_over == "lambda") {
      params.lambda0 = params.lambda1 = v;
    } else if (opt.sweep_over == "phi_S") {
      t = sdri::derive_regime_tensions(tensions.phi_F, tensions.phi_S.scaled(v), tensions.phi_FS);
      t.filament_on_film = tensions.filament_on_film;
    } else {
      throw std::invalid_argument("--over must be lambda or phi_S");
    }
    const auto tr = sdri::minimize_penalized(cfg, t, material, params);
    const auto best = sdri::total_energy(tr.best, t, material);
    const double err =
        std::abs(tr.best.substrate_area() - params.v0) + std::abs(tr.best.composite_area() - params.v1);
    csv << v << ',' << tr.best_F << ',' << best.surface << ',' << best.elastic << ',' << err << ',' << tr.accepted
        << '\n';
  }
  if (!opt.out.empty()) {
    sdri::write_text(opt.out, csv.str());
  } else {
    std::cout << csv.str();
  }
  Json rec = em.header();
  rec["over"] = opt.sweep_over;
  rec["runs"] = opt.values.size();
  em.emit(rec);
  return 0;
}

int cmd_render(const Options& opt, const Emitter& em) {
  const auto cfg = load_config(opt);
  const std::string svg = sdri::render_svg(cfg);
  if (opt.out.empty()) {
    std::cout << svg;
    return 0;
  }
  sdri::write_text(opt.out, svg);
  Json rec = em.header();
  rec["svg"] = opt.out;
  em.emit(rec);
  return 0;
}

void common(CLI::App* sub, Options& opt) {
  sub->add_option("--config", opt.config, "configuration document");
  sub->add_option("--tensions", opt.tensions, "tension document");
  sub->add_option("--material", opt.material, "material document");
  sub->add_option("--seed", opt.seed, "random seed");
  sub->add_option("--out", opt.out, "output directory or file");
  sub->add_flag("--deterministic", opt.deterministic, "omit timing fields from records");
  sub->add_option("--render-every", opt.render_every, "SVG snapshot every N accepted moves");
  sub->add_option("--lambda", opt.lambda, "penalty weights lambda0,lambda1")->delimiter(',');
  sub->add_option("--volumes", opt.volumes, "target areas v0,v1")->delimiter(',');
  sub->add_option("--m", opt.m, "component budget m0,m1")->delimiter(',');
}

void annealing(CLI::App* sub, Options& opt) {
  sub->add_option("--mode", opt.mode, "penalized or constrained");
  sub->add_option("--steps", opt.steps, "annealing steps");
  sub->add_option("--t0", opt.t0, "initial temperature");
  sub->add_option("--cooling", opt.cooling, "cooling factor per step");
  sub->add_option("--cadence", opt.cadence, "accepted moves between elastic re-solves");
  sub->add_flag("--debug", opt.debug, "re-validate every trajectory state");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-phase film/substrate energy laboratory"};
  app.require_subcommand(1);
  Options opt;
  std::map<CLI::App*, std::function<int(const Options&, const Emitter&)>> commands;
  auto add = [&](const char* name, const char* help, auto fn) {
    CLI::App* sub = app.add_subcommand(name, help);
    common(sub, opt);
    commands[sub] = fn;
    return sub;
  };
  add("validate", "admissibility report", cmd_validate);
  add("energy", "energy breakdown", cmd_energy);
  add("relax", "elastic equilibrium only", cmd_relax);
  annealing(add("minimize", "annealed minimization", cmd_minimize), opt);
  auto* lsc = add("lsc", "lower semicontinuity along a generated sequence", cmd_lsc);
  lsc->add_option("sequence", opt.sequence, "sequence kind")->required();
  lsc->add_option("--nx", opt.nx, "grid columns");
  lsc->add_option("--ny", opt.ny, "grid rows");
  lsc->add_option("--count", opt.count, "sequence length");
  auto* sweep = add("sweep", "parameter sweep to CSV", cmd_sweep);
  annealing(sweep, opt);
  sweep->add_option("--over", opt.sweep_over, "lambda or phi_S");
  sweep->add_option("--values", opt.values, "parameter values")->delimiter(',');
  add("render", "SVG drawing", cmd_render);

  CLI11_PARSE(app, argc, argv);
  for (auto& [sub, fn] : commands) {
    if (!sub->parsed()) continue;
    const Emitter em(sub->get_name(), opt);
    try {
      return fn(opt, em);
    } catch (const std::exception& e) {
      Json rec = em.header();
      rec["error"] = e.what();
      if (const auto* adm = dynamic_cast<const sdri::AdmissibilityError*>(&e)) {
        rec["report"] = sdri::report_to_json(adm->report());
      }
      em.emit(rec);
      return 1;
    }
  }
  return 1;
}

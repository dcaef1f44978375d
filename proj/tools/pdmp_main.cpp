#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pdmp/errors.hpp"
#include "pdmp/io.hpp"
#include "pdmp/metrics.hpp"
#include "pdmp/models.hpp"
#include "pdmp/rng.hpp"
#include "pdmp/simulate.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitInsufficient = 4;

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw pdmp::ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw pdmp::ConfigError("config parse error: " + std::string(e.what()));
  }
  if (!j.is_object()) throw pdmp::ConfigError("config root must be an object");
  return j;
}

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key()))
      throw pdmp::ConfigError("unknown config field '" + it.key() + "' in " + where);
  }
}

pdmp::HHParams hh_params_from_config(const json& j, pdmp::HHSet set) {
  pdmp::HHParams p = pdmp::HHParams::defaults(set);
  if (!j.contains("params")) return p;
  const json& pj = j.at("params");
  reject_unknown_keys(pj, {"e_na", "e_k", "e_l", "g_na", "g_k", "g_l", "c", "n_na",
                           "n_k", "input_amplitude", "input_on", "input_off"},
                      "params");
  if (pj.contains("e_na")) p.e_na = pj.at("e_na").get<double>();
  if (pj.contains("e_k")) p.e_k = pj.at("e_k").get<double>();
  if (pj.contains("e_l")) p.e_l = pj.at("e_l").get<double>();
  if (pj.contains("g_na")) p.g_na = pj.at("g_na").get<double>();
  if (pj.contains("g_k")) p.g_k = pj.at("g_k").get<double>();
  if (pj.contains("g_l")) p.g_l = pj.at("g_l").get<double>();
  if (pj.contains("c")) p.c = pj.at("c").get<double>();
  if (pj.contains("n_na")) p.n_na = pj.at("n_na").get<int>();
  if (pj.contains("n_k")) p.n_k = pj.at("n_k").get<int>();
  if (pj.contains("input_amplitude")) p.input_amplitude = pj.at("input_amplitude").get<double>();
  if (pj.contains("input_on")) p.input_on = pj.at("input_on").get<double>();
  if (pj.contains("input_off")) p.input_off = pj.at("input_off").get<double>();
  return p;
}

pdmp::PdmpModel model_from_config(const json& j) {
  const std::string id = j.at("model").get<std::string>();
  if (id == "hh-p1") return pdmp::build_model(id, hh_params_from_config(j, pdmp::HHSet::P1));
  if (id == "hh-p2") return pdmp::build_model(id, hh_params_from_config(j, pdmp::HHSet::P2));
  if (j.contains("params"))
    throw pdmp::ConfigError("model '" + id + "' takes no parameter overrides");
  return pdmp::build_model(id);
}

fs::path resolve_output_dir(const json& j, const std::string& cli_output_dir) {
  if (!cli_output_dir.empty()) return cli_output_dir;
  if (j.contains("output_dir")) return j.at("output_dir").get<std::string>();
  if (const char* env = std::getenv("PDMP_OUTPUT_DIR")) return env;
  return ".";
}

std::uint64_t resolve_seed(const json& j, std::optional<std::uint64_t> cli_seed) {
  if (cli_seed.has_value()) return *cli_seed;
  return j.at("seed").get<std::uint64_t>();
}

int cmd_simulate(const json& cfg, const std::string& cli_outdir,
                 std::optional<std::uint64_t> cli_seed) {
  reject_unknown_keys(cfg, {"model", "params", "tableau", "h", "T", "seed",
                            "min_jumps", "emit_dense", "output_dir"},
                      "simulate config");
  const pdmp::PdmpModel model = model_from_config(cfg);
  const pdmp::BuiltinTableau tableau =
      pdmp::tableau_from_string(cfg.at("tableau").get<std::string>());

  pdmp::SimulationConfig run;
  run.tableau = tableau;
  run.h = cfg.at("h").get<double>();
  run.horizon = cfg.at("T").get<double>();
  run.seed = resolve_seed(cfg, cli_seed);
  if (cfg.contains("min_jumps")) run.min_jumps = cfg.at("min_jumps").get<std::size_t>();
  if (!(run.h > 0.0)) throw pdmp::ConfigError("h must be positive");
  if (!(run.horizon > 0.0)) throw pdmp::ConfigError("T must be positive");
  const bool emit_dense = cfg.value("emit_dense", true);

  const fs::path outdir = resolve_output_dir(cfg, cli_outdir);
  fs::create_directories(outdir);

  const pdmp::UniformStream stream(run.seed);
  const pdmp::Trajectory traj = pdmp::simulate_approx(model, run, stream);

  pdmp::write_trajectory_csv(outdir / "trajectory.csv", traj, emit_dense);
  pdmp::write_jumps_csv(outdir / "jumps.csv", traj);
  pdmp::write_run_manifest(outdir / "manifest.json", model.id,
                           pdmp::tableau_cli_name(tableau), run.h, run.horizon,
                           run.seed, traj);
  std::cout << "simulate: " << traj.n_jumps() << " jumps, " << traj.draws_consumed
            << " draws, outputs in " << outdir.string() << "\n";
  return 0;
}

int cmd_converge(const json& cfg, const std::string& cli_outdir,
                 std::optional<std::uint64_t> cli_seed) {
  reject_unknown_keys(cfg, {"model", "params", "tableaus", "h_list", "T", "seed",
                            "reference", "n_eval_points", "output_dir"},
                      "converge config");
  const pdmp::PdmpModel model = model_from_config(cfg);

  pdmp::StudyConfig study;
  if (cfg.contains("tableaus")) {
    for (const auto& name : cfg.at("tableaus"))
      study.methods.push_back(pdmp::tableau_from_string(name.get<std::string>()));
  } else {
    study.methods = {pdmp::BuiltinTableau::Euler, pdmp::BuiltinTableau::Trapezoidal,
                     pdmp::BuiltinTableau::RadauIIA2, pdmp::BuiltinTableau::LobattoIIIA3};
  }
  study.h_list = cfg.at("h_list").get<std::vector<double>>();
  study.horizon = cfg.at("T").get<double>();
  study.seed = resolve_seed(cfg, cli_seed);
  study.n_eval_points = cfg.value("n_eval_points", 10000);
  if (!(study.horizon > 0.0)) throw pdmp::ConfigError("T must be positive");

  const json& ref = cfg.at("reference");
  if (ref.is_string() && ref.get<std::string>() == "analytic") {
    study.reference.kind = pdmp::ReferenceSpec::Kind::Analytic;
  } else if (ref.is_object()) {
    reject_unknown_keys(ref, {"tableau", "h", "richardson_floor"}, "reference");
    study.reference.kind = pdmp::ReferenceSpec::Kind::Numeric;
    study.reference.tableau =
        pdmp::tableau_from_string(ref.value("tableau", std::string("lobatto3")));
    study.reference.h_ref = ref.at("h").get<double>();
    study.reference.richardson_floor = ref.value("richardson_floor", true);
    if (!(study.reference.h_ref > 0.0))
      throw pdmp::ConfigError("reference h must be positive");
  } else {
    throw pdmp::ConfigError("reference must be \"analytic\" or an object");
  }

  const fs::path outdir = resolve_output_dir(cfg, cli_outdir);
  fs::create_directories(outdir);

  const pdmp::StudyResult result = pdmp::convergence_study(model, study);
  pdmp::write_study_outputs(outdir, model.id, study, result);

  std::size_t n_slopes = 0;
  for (const auto& [method, slopes] : result.slopes) {
    if (slopes.phase_jumps || slopes.jump_times || slopes.endpoint ||
        slopes.sup_continuous)
      ++n_slopes;
    std::cout << pdmp::tableau_cli_name(method) << ": slope(phase)="
              << (slopes.phase_jumps ? pdmp::format_double(*slopes.phase_jumps) : "n/a")
              << " slope(times)="
              << (slopes.jump_times ? pdmp::format_double(*slopes.jump_times) : "n/a")
              << " h*="
              << (slopes.h_star ? pdmp::format_double(*slopes.h_star) : "n/a") << "\n";
  }
  std::cout << "outputs in " << outdir.string() << "\n";
  if (n_slopes == 0) {
    std::cerr << "converge: no usable order estimates (errors at the tolerance "
                 "floor or too few points)\n";
    return kExitInsufficient;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Piecewise deterministic Markov process simulation with continuous "
               "Runge-Kutta methods"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir;
  std::optional<std::uint64_t> seed_override;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_path, "JSON run configuration")->required();
    sub->add_option("-o,--output-dir", output_dir,
                    "output directory (default: config, then $PDMP_OUTPUT_DIR, then .)");
    sub->add_option("--seed", seed_override, "override the config seed");
  };

  CLI::App* sim = app.add_subcommand("simulate", "simulate one trajectory");
  add_common(sim);
  CLI::App* conv = app.add_subcommand("converge", "run a convergence study");
  add_common(conv);
  CLI::App* lm = app.add_subcommand("list-models", "print the model registry ids");
  CLI::App* lt = app.add_subcommand("list-methods", "print the tableau names");

  CLI11_PARSE(app, argc, argv);

  try {
    if (lm->parsed()) {
      for (const auto& id : pdmp::model_ids()) std::cout << id << "\n";
      return 0;
    }
    if (lt->parsed()) {
      for (const auto& name : pdmp::tableau_names()) std::cout << name << "\n";
      return 0;
    }
    const json cfg = load_config(config_path);
    if (sim->parsed()) return cmd_simulate(cfg, output_dir, seed_override);
    return cmd_converge(cfg, output_dir, seed_override);
  } catch (const pdmp::InsufficientDataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInsufficient;
  } catch (const pdmp::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const pdmp::ModelError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const pdmp::SimulationError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

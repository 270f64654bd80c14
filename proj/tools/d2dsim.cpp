// d2dsim: train, evaluate and sweep D2D power-control policies.
//
//   d2dsim train --config exp.cfg --d2d 4 --seed 7 --out model.json
//   d2dsim eval  --config exp.cfg --d2d 4 --seed 7 --algo dqn --model model.json --out eval.csv
//   d2dsim sweep --config exp.cfg --out results.csv

#include <chrono>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "d2d/config.hpp"
#include "d2d/experiment.hpp"
#include "d2d/model_io.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> episodes;
  std::optional<std::size_t> d2d;
  std::optional<std::string> algo;
  std::string out;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_path, "Experiment config (key = value); defaults apply if omitted")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "Experiment seed (replaces the config's seed list)");
  cmd->add_option("--episodes", o.episodes, "Training episodes M");
  cmd->add_option("--d2d", o.d2d, "Number of D2D pairs (replaces d2d_counts)");
  cmd->add_option("--out", o.out, "Output path");
}

d2d::ExperimentConfig resolve(const CommonOptions& o) {
  d2d::ExperimentConfig config = o.config_path.empty() ? d2d::parse_config("") : d2d::load_config(o.config_path);
  if (o.seed) config.seeds = {*o.seed};
  if (o.episodes) config.env.episodes = *o.episodes;
  if (o.d2d) config.d2d_counts = {*o.d2d};
  if (o.algo) config.algorithms = {d2d::parse_algorithm(*o.algo)};
  if (!o.out.empty()) config.output_path = o.out;
  config.validate();
  return config;
}

int run_train(const CommonOptions& o) {
  const d2d::ExperimentConfig config = resolve(o);
  const std::size_t d2d_count = config.d2d_counts.front();
  const std::uint64_t seed = config.seeds.front();
  const d2d::TrainResult result = d2d::train_cell(config, d2d_count, seed);
  const std::string out = o.out.empty() ? "model.json" : o.out;
  d2d::write_model({result.model, config.action_space().level_powers_dbm}, out);

  double head = 0.0;
  double tail = 0.0;
  const auto& r = result.episode_mean_reward;
  const std::size_t window = std::min<std::size_t>(50, r.size());
  for (std::size_t k = 0; k < window; ++k) {
    head += r[k];
    tail += r[r.size() - 1 - k];
  }
  std::cout << "trained D=" << d2d_count << " seed=" << seed << " episodes=" << r.size()
            << " learn_steps=" << result.learn_steps;
  if (window > 0) {
    std::cout << " reward(first " << window << ")=" << head / window << " reward(last " << window
              << ")=" << tail / window;
  }
  std::cout << "\nwrote " << out << '\n';
  return 0;
}

int run_eval(const CommonOptions& o, const std::string& model_path) {
  const d2d::ExperimentConfig config = resolve(o);
  if (config.algorithms.size() != 1) throw CLI::ValidationError("--algo", "eval needs exactly one algorithm");
  const d2d::Algorithm algo = config.algorithms.front();
  const std::size_t d2d_count = config.d2d_counts.front();
  const std::uint64_t seed = config.seeds.front();

  std::optional<d2d::SavedModel> saved;
  if (algo == d2d::Algorithm::dqn) {
    if (model_path.empty()) throw CLI::ValidationError("--model", "required for --algo dqn");
    saved = d2d::read_model(model_path);
    if (saved->power_levels_dbm != config.action_space().level_powers_dbm) {
      throw std::runtime_error("model power levels do not match the configured action space");
    }
  }
  const auto scenarios = d2d::make_eval_scenarios(config, d2d_count, seed);
  const auto start = std::chrono::steady_clock::now();
  const d2d::EvalMetrics m =
      d2d::evaluate_algorithm(config, algo, scenarios, saved ? &saved->model : nullptr);
  d2d::ResultRow row{algo,
                     d2d_count,
                     seed,
                     m.system_throughput_bps_hz,
                     m.d2d_throughput_bps_hz,
                     m.cue_qos_rate,
                     std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()};
  if (o.out.empty()) {
    d2d::write_results(std::cout, {row});
  } else {
    d2d::write_results({row}, o.out);
    std::cout << "wrote " << o.out << '\n';
  }
  return 0;
}

int run_sweep(const CommonOptions& o) {
  const d2d::ExperimentConfig config = resolve(o);
  const auto rows = d2d::run_sweep(config);
  d2d::write_results(rows, config.output_path);
  std::cout << "wrote " << rows.size() << " rows to " << config.output_path << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"D2D underlay power control: DQN vs Max Power vs open-loop baselines"};
  app.require_subcommand(1);

  CommonOptions train_opts;
  CommonOptions eval_opts;
  CommonOptions sweep_opts;
  std::string model_path;

  auto* train = app.add_subcommand("train", "Train a DQN power-control model and write its weights");
  add_common(train, train_opts);

  auto* eval = app.add_subcommand("eval", "Evaluate one algorithm on held-out topologies");
  add_common(eval, eval_opts);
  eval->add_option("--algo", eval_opts.algo, "dqn | max_power | olpc")->required();
  eval->add_option("--model", model_path, "Weight file written by `train` (dqn only)");

  auto* sweep = app.add_subcommand("sweep", "Run the configured sweep and write a results CSV");
  add_common(sweep, sweep_opts);
  sweep->add_option("--algo", sweep_opts.algo, "Restrict the sweep to one algorithm");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*train) return run_train(train_opts);
    if (*eval) return run_eval(eval_opts, model_path);
    if (*sweep) return run_sweep(sweep_opts);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

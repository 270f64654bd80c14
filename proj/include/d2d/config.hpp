#pragma once

// Experiment configuration in a flat `key = value` text format, one pair per
// line. `#` starts a comment, blank lines are ignored, and list values are
// comma separated. Every key is optional; omitted keys keep the defaults of
// the structs below. Recognized keys:
//
//   cell:     cell_radius_m, d2d_max_dist_m, num_cues, num_d2d_pairs,
//             bs_antenna_gain_dbi, ue_antenna_gain_dbi, shadowing_sigma_db,
//             min_link_dist_m
//   radio:    noise_density_dbm_hz, rb_bandwidth_hz, p_max_dbm, cue_tx_power_dbm
//   env:      tau_db, steps_per_episode, episodes
//   actions:  num_power_levels, min_power_dbm, max_power_dbm (must equal p_max_dbm)
//   learner:  hidden_layers, learning_rate, adam_beta1, adam_beta2, adam_eps,
//             decay, epsilon, replay_capacity, batch_size, target_sync_steps,
//             independent_networks
//   olpc:     olpc_p0_dbm, olpc_alpha
//   sweep:    algorithms, d2d_counts, seeds, eval_topologies, eval_steps, output_path

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "d2d/power_control.hpp"

namespace d2d {

enum class Algorithm { dqn, max_power, olpc };

std::string_view to_string(Algorithm algo);
// Throws ConfigError for unknown names.
Algorithm parse_algorithm(std::string_view name);

struct ExperimentConfig {
  CellConfig cell;
  RadioConfig radio;
  EnvConfig env;
  std::size_t num_power_levels = 10;
  double min_power_dbm = -10.0;
  std::optional<double> max_power_dbm;  // defaults to radio.p_max_dbm
  RlConfig rl;
  OlpcParams olpc;
  std::vector<Algorithm> algorithms{Algorithm::dqn, Algorithm::max_power, Algorithm::olpc};
  std::vector<std::size_t> d2d_counts{2, 4, 6, 8, 10};
  std::vector<std::uint64_t> seeds{1};
  std::size_t eval_topologies = 50;
  std::size_t eval_steps = 20;
  std::string output_path = "results.csv";

  ActionSpace action_space() const;
  // Cell configuration with num_d2d_pairs replaced.
  CellConfig cell_with_pairs(std::size_t num_pairs) const;

  // Throws ConfigError naming the violated field.
  void validate() const;
};

// Parses and validates; `source` names the text in diagnostics.
ExperimentConfig parse_config(std::string_view text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace d2d

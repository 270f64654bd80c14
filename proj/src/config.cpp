#include "d2d/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "d2d/errors.hpp"

namespace d2d {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> items;
  while (true) {
    const auto comma = s.find(',');
    const auto item = trim(s.substr(0, comma));
    if (!item.empty()) items.push_back(item);
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return items;
}

// Conversions throw std::invalid_argument with a short reason; the caller
// attaches the line number.
double to_double(std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw std::invalid_argument("expected a number, got '" + std::string(v) + "'");
  }
  return out;
}

std::uint64_t to_u64(std::string_view v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw std::invalid_argument("expected a non-negative integer, got '" + std::string(v) + "'");
  }
  return out;
}

std::size_t to_size(std::string_view v) { return static_cast<std::size_t>(to_u64(v)); }

bool to_bool(std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("expected true/false, got '" + std::string(v) + "'");
}

template <typename T, typename F>
std::vector<T> to_list(std::string_view v, F convert) {
  std::vector<T> out;
  for (std::string_view item : split_list(v)) out.push_back(convert(item));
  return out;
}

using Setter = std::function<void(ExperimentConfig&, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"cell_radius_m", [](auto& c, auto v) { c.cell.cell_radius_m = to_double(v); }},
      {"d2d_max_dist_m", [](auto& c, auto v) { c.cell.d2d_max_dist_m = to_double(v); }},
      {"num_cues", [](auto& c, auto v) { c.cell.num_cues = to_size(v); }},
      {"num_d2d_pairs", [](auto& c, auto v) { c.cell.num_d2d_pairs = to_size(v); }},
      {"bs_antenna_gain_dbi", [](auto& c, auto v) { c.cell.bs_antenna_gain_dbi = to_double(v); }},
      {"ue_antenna_gain_dbi", [](auto& c, auto v) { c.cell.ue_antenna_gain_dbi = to_double(v); }},
      {"shadowing_sigma_db", [](auto& c, auto v) { c.cell.shadowing_sigma_db = to_double(v); }},
      {"min_link_dist_m", [](auto& c, auto v) { c.cell.min_link_dist_m = to_double(v); }},
      {"noise_density_dbm_hz", [](auto& c, auto v) { c.radio.noise_density_dbm_hz = to_double(v); }},
      {"rb_bandwidth_hz", [](auto& c, auto v) { c.radio.rb_bandwidth_hz = to_double(v); }},
      {"p_max_dbm", [](auto& c, auto v) { c.radio.p_max_dbm = to_double(v); }},
      {"cue_tx_power_dbm", [](auto& c, auto v) { c.radio.cue_tx_power_dbm = to_double(v); }},
      {"tau_db", [](auto& c, auto v) { c.env.tau_db = to_double(v); }},
      {"steps_per_episode", [](auto& c, auto v) { c.env.steps_per_episode = to_size(v); }},
      {"episodes", [](auto& c, auto v) { c.env.episodes = to_size(v); }},
      {"num_power_levels", [](auto& c, auto v) { c.num_power_levels = to_size(v); }},
      {"min_power_dbm", [](auto& c, auto v) { c.min_power_dbm = to_double(v); }},
      {"max_power_dbm", [](auto& c, auto v) { c.max_power_dbm = to_double(v); }},
      {"hidden_layers", [](auto& c, auto v) { c.rl.hidden_layers = to_list<std::size_t>(v, to_size); }},
      {"learning_rate", [](auto& c, auto v) { c.rl.adam.lr = to_double(v); }},
      {"adam_beta1", [](auto& c, auto v) { c.rl.adam.beta1 = to_double(v); }},
      {"adam_beta2", [](auto& c, auto v) { c.rl.adam.beta2 = to_double(v); }},
      {"adam_eps", [](auto& c, auto v) { c.rl.adam.eps = to_double(v); }},
      {"decay", [](auto& c, auto v) { c.rl.decay = to_double(v); }},
      {"epsilon", [](auto& c, auto v) { c.rl.epsilon = to_double(v); }},
      {"replay_capacity", [](auto& c, auto v) { c.rl.replay_capacity = to_size(v); }},
      {"batch_size", [](auto& c, auto v) { c.rl.batch_size = to_size(v); }},
      {"target_sync_steps", [](auto& c, auto v) { c.rl.target_sync_steps = to_size(v); }},
      {"independent_networks", [](auto& c, auto v) { c.rl.independent_networks = to_bool(v); }},
      {"olpc_p0_dbm", [](auto& c, auto v) { c.olpc.p0_dbm = to_double(v); }},
      {"olpc_alpha", [](auto& c, auto v) { c.olpc.alpha = to_double(v); }},
      {"algorithms",
       [](auto& c, auto v) {
         c.algorithms = to_list<Algorithm>(v, [](std::string_view s) {
           try {
             return parse_algorithm(s);
           } catch (const ConfigError& e) {
             throw std::invalid_argument(e.what());
           }
         });
       }},
      {"d2d_counts", [](auto& c, auto v) { c.d2d_counts = to_list<std::size_t>(v, to_size); }},
      {"seeds", [](auto& c, auto v) { c.seeds = to_list<std::uint64_t>(v, to_u64); }},
      {"eval_topologies", [](auto& c, auto v) { c.eval_topologies = to_size(v); }},
      {"eval_steps", [](auto& c, auto v) { c.eval_steps = to_size(v); }},
      {"output_path", [](auto& c, auto v) { c.output_path = std::string(v); }},
  };
  return table;
}

}  // namespace

std::string_view to_string(Algorithm algo) {
  switch (algo) {
    case Algorithm::dqn: return "dqn";
    case Algorithm::max_power: return "max_power";
    case Algorithm::olpc: return "olpc";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "dqn") return Algorithm::dqn;
  if (name == "max_power") return Algorithm::max_power;
  if (name == "olpc") return Algorithm::olpc;
  throw ConfigError("algorithm", "unknown algorithm '" + std::string(name) +
                                     "' (expected dqn, max_power or olpc)");
}

ActionSpace ExperimentConfig::action_space() const {
  return ActionSpace::uniform(num_power_levels, min_power_dbm, max_power_dbm.value_or(radio.p_max_dbm));
}

CellConfig ExperimentConfig::cell_with_pairs(std::size_t num_pairs) const {
  CellConfig c = cell;
  c.num_d2d_pairs = num_pairs;
  return c;
}

void ExperimentConfig::validate() const {
  cell.validate();
  radio.validate();
  env.validate();
  if (num_power_levels < 2) throw ConfigError("num_power_levels", "must be at least 2");
  if (max_power_dbm && *max_power_dbm != radio.p_max_dbm) {
    throw ConfigError("max_power_dbm", "must equal p_max_dbm");
  }
  if (!(min_power_dbm < radio.p_max_dbm)) throw ConfigError("min_power_dbm", "must be below p_max_dbm");
  action_space().validate(radio.p_max_dbm);
  rl.validate();
  olpc.validate();
  if (algorithms.empty()) throw ConfigError("algorithms", "must not be empty");
  if (d2d_counts.empty()) throw ConfigError("d2d_counts", "must not be empty");
  if (seeds.empty()) throw ConfigError("seeds", "must not be empty");
  if (eval_topologies < 1) throw ConfigError("eval_topologies", "must be at least 1");
  if (eval_steps < 1) throw ConfigError("eval_steps", "must be at least 1");
}

ExperimentConfig parse_config(std::string_view text, const std::string& source) {
  ExperimentConfig config;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(source, line_no, "expected 'key = value'");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(source, line_no, "missing key");
    if (value.empty()) throw ParseError(source, line_no, "missing value for '" + std::string(key) + "'");

    const auto it = setters().find(key);
    if (it == setters().end()) throw ParseError(source, line_no, "unknown key '" + std::string(key) + "'");
    try {
      it->second(config, value);
    } catch (const std::invalid_argument& e) {
      throw ParseError(source, line_no, std::string(key) + ": " + e.what());
    }
  }
  config.validate();
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

}  // namespace d2d

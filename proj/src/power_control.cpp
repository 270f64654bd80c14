#include "d2d/power_control.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "d2d/dqn.hpp"
#include "d2d/errors.hpp"

namespace d2d {

namespace {

const double kSinrCeilingLin = std::pow(10.0, kSinrCeilingDb / 10.0);

double to_db(double lin) { return 10.0 * std::log10(lin); }

}  // namespace

ActionSpace ActionSpace::uniform(std::size_t num_levels, double min_dbm, double max_dbm) {
  if (num_levels < 2) throw ConfigError("num_power_levels", "must be at least 2");
  if (!(min_dbm < max_dbm)) throw ConfigError("min_power_dbm", "must be below max_power_dbm");
  ActionSpace space;
  space.level_powers_dbm.resize(num_levels);
  const double step = (max_dbm - min_dbm) / static_cast<double>(num_levels - 1);
  for (std::size_t k = 0; k < num_levels; ++k) {
    space.level_powers_dbm[k] = min_dbm + static_cast<double>(k) * step;
  }
  space.level_powers_dbm.back() = max_dbm;
  return space;
}

void ActionSpace::validate(double p_max_dbm) const {
  if (level_powers_dbm.size() < 2) throw ConfigError("num_power_levels", "must be at least 2");
  for (std::size_t k = 1; k < level_powers_dbm.size(); ++k) {
    if (!(level_powers_dbm[k] > level_powers_dbm[k - 1])) {
      throw ConfigError("power_levels", "must be strictly increasing");
    }
  }
  if (level_powers_dbm.back() != p_max_dbm) {
    throw ConfigError("max_power_dbm", "top power level must equal p_max_dbm");
  }
}

double action_to_power(std::size_t index, const ActionSpace& space) {
  if (index >= space.num_levels()) {
    throw DomainError("action index " + std::to_string(index) + " outside [0, " +
                      std::to_string(space.num_levels()) + ")");
  }
  return dbm_to_watt(space.level_powers_dbm[index]);
}

void EnvConfig::validate() const {
  if (!std::isfinite(tau_db)) throw ConfigError("tau_db", "must be finite");
  if (steps_per_episode < 1) throw ConfigError("steps_per_episode", "must be at least 1");
}

AgentState observe_state(const SinrReport& report) {
  AgentState state;
  state.features.reserve(report.cue_sinr_lin.size());
  for (double g : report.cue_sinr_lin) {
    // log10(0) = -inf clamps to the floor.
    const double db = std::clamp(to_db(g), kSinrFloorDb, kSinrCeilingDb);
    state.features.push_back((db - kSinrFloorDb) / (kSinrCeilingDb - kSinrFloorDb));
  }
  return state;
}

double reward(double cue_sinr_lin, double d2d_sinr_lin, double tau_db) {
  if (!(to_db(cue_sinr_lin) >= tau_db)) return -1.0;
  const double gc = std::min(cue_sinr_lin, kSinrCeilingLin);
  const double gd = std::clamp(d2d_sinr_lin, 0.0, kSinrCeilingLin);
  return std::log2(1.0 + gc) + std::log2(1.0 + gd);
}

std::vector<double> max_power_policy(std::size_t num_pairs, const RadioConfig& radio) {
  return std::vector<double>(num_pairs, dbm_to_watt(radio.p_max_dbm));
}

void OlpcParams::validate() const {
  if (!std::isfinite(p0_dbm)) throw ConfigError("olpc_p0_dbm", "must be finite");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("olpc_alpha", "must lie in [0, 1]");
}

double olpc_power_dbm(double pathloss_db, const OlpcParams& params, double p_max_dbm) {
  return std::min(p_max_dbm, params.p0_dbm + params.alpha * pathloss_db);
}

std::vector<double> olpc_policy(const GainTable& gains, const CellConfig& cell,
                                const OlpcParams& params, const RadioConfig& radio) {
  std::vector<double> powers;
  powers.reserve(gains.num_pairs());
  const double antenna_db = 2.0 * cell.ue_antenna_gain_dbi;
  for (double g : gains.d2d_link) {
    const double coupling_loss_db = antenna_db - to_db(g);
    powers.push_back(dbm_to_watt(olpc_power_dbm(coupling_loss_db, params, radio.p_max_dbm)));
  }
  return powers;
}

Scenario make_scenario(const CellConfig& cell, Rng& rng) {
  Topology topology = place_nodes(cell, rng);
  return make_scenario(std::move(topology), cell, rng);
}

Scenario make_scenario(Topology topology, const CellConfig& cell, Rng& rng) {
  Scenario s;
  s.gains = build_gain_table(topology, cell, rng);
  s.reuse = ReuseAssignment(topology.rb_of_pair, topology.num_cues());
  s.topology = std::move(topology);
  return s;
}

PowerAllocation make_allocation(const Scenario& scenario, std::span<const double> d2d_power_w,
                                const RadioConfig& radio) {
  if (d2d_power_w.size() != scenario.num_pairs()) {
    throw ShapeError("expected " + std::to_string(scenario.num_pairs()) + " D2D powers, got " +
                     std::to_string(d2d_power_w.size()));
  }
  PowerAllocation alloc;
  alloc.cue_power_w.assign(scenario.num_cues(), dbm_to_watt(radio.cue_tx_power_dbm));
  alloc.d2d_power_w.assign(d2d_power_w.begin(), d2d_power_w.end());
  return alloc;
}

StepResult env_step_powers(const Scenario& scenario, std::span<const double> d2d_power_w,
                           const RadioConfig& radio, const EnvConfig& env) {
  const PowerAllocation alloc = make_allocation(scenario, d2d_power_w, radio);
  StepResult out;
  out.report = compute_sinr_report(alloc, scenario.gains, scenario.reuse, noise_power_w(radio));
  out.rewards.reserve(scenario.num_pairs());
  for (std::size_t i = 0; i < scenario.num_pairs(); ++i) {
    const double gc = out.report.cue_sinr_lin[scenario.reuse.rb_of(i)];
    out.rewards.push_back(reward(gc, out.report.d2d_sinr_lin[i], env.tau_db));
  }
  out.next_state = observe_state(out.report);
  return out;
}

StepResult env_step(const Scenario& scenario, std::span<const std::size_t> joint_action,
                    const ActionSpace& space, const RadioConfig& radio, const EnvConfig& env) {
  if (joint_action.size() != scenario.num_pairs()) {
    throw ShapeError("joint action needs one index per D2D pair");
  }
  std::vector<double> powers;
  powers.reserve(joint_action.size());
  for (std::size_t a : joint_action) powers.push_back(action_to_power(a, space));
  return env_step_powers(scenario, powers, radio, env);
}

AgentState initial_state(const Scenario& scenario, const RadioConfig& radio) {
  const std::vector<double> silent(scenario.num_pairs(), 0.0);
  const PowerAllocation alloc = make_allocation(scenario, silent, radio);
  return observe_state(compute_sinr_report(alloc, scenario.gains, scenario.reuse, noise_power_w(radio)));
}

void RlConfig::validate() const {
  for (std::size_t h : hidden_layers) {
    if (h == 0) throw ConfigError("hidden_layers", "widths must be positive");
  }
  if (!(adam.lr > 0.0)) throw ConfigError("learning_rate", "must be positive");
  if (!(adam.beta1 >= 0.0 && adam.beta1 < 1.0)) throw ConfigError("adam_beta1", "must lie in [0, 1)");
  if (!(adam.beta2 >= 0.0 && adam.beta2 < 1.0)) throw ConfigError("adam_beta2", "must lie in [0, 1)");
  if (!(adam.eps > 0.0)) throw ConfigError("adam_eps", "must be positive");
  if (!(decay >= 0.0 && decay <= 1.0)) throw ConfigError("decay", "must lie in [0, 1]");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ConfigError("epsilon", "must lie in [0, 1]");
  if (replay_capacity < 1) throw ConfigError("replay_capacity", "must be at least 1");
  if (batch_size < 1 || batch_size > replay_capacity) {
    throw ConfigError("batch_size", "must lie in [1, replay_capacity]");
  }
}

const Mlp& DqnModel::network_for(std::size_t agent) const {
  if (networks.empty()) throw ShapeError("model holds no network");
  if (!independent) return networks.front();
  if (agent >= networks.size()) {
    throw ShapeError("model has " + std::to_string(networks.size()) + " agent networks, asked for agent " +
                     std::to_string(agent));
  }
  return networks[agent];
}

std::vector<std::size_t> network_dims(std::size_t num_cues, const ActionSpace& space,
                                      const RlConfig& rl) {
  std::vector<std::size_t> dims{num_cues};
  dims.insert(dims.end(), rl.hidden_layers.begin(), rl.hidden_layers.end());
  dims.push_back(space.num_levels());
  return dims;
}

DqnTrainer::DqnTrainer(std::size_t num_cues, std::size_t num_agents, ActionSpace space, RlConfig rl,
                       std::uint64_t seed)
    : num_cues_(num_cues),
      num_agents_(num_agents),
      space_(std::move(space)),
      rl_(std::move(rl)),
      rng_(make_rng({seed, 0x7261696eULL})) {
  rl_.validate();
  Rng init = make_rng({seed, 0x696e6974ULL});
  const std::size_t count = rl_.independent_networks ? num_agents_ : 1;
  model_.independent = rl_.independent_networks;
  model_.seed = seed;
  const auto dims = network_dims(num_cues_, space_, rl_);
  for (std::size_t k = 0; k < count; ++k) {
    model_.networks.push_back(Mlp::random(dims, init));
    Learner learner{AdamState(model_.networks.back().num_params(), rl_.adam),
                    ReplayMemory(rl_.replay_capacity), std::nullopt, 0};
    if (rl_.target_sync_steps > 0) learner.target = model_.networks.back();
    learners_.push_back(std::move(learner));
  }
}

double DqnTrainer::run_episode(const Scenario& scenario, const RadioConfig& radio, const EnvConfig& env) {
  if (scenario.num_pairs() != num_agents_ || scenario.num_cues() != num_cues_) {
    throw ShapeError("scenario size does not match the trainer's agents");
  }
  if (num_agents_ == 0) return 0.0;

  AgentState state = initial_state(scenario, radio);
  std::vector<std::size_t> actions(num_agents_);
  double reward_sum = 0.0;
  for (std::size_t t = 0; t < env.steps_per_episode; ++t) {
    std::vector<double> shared_q;
    if (!model_.independent) shared_q = model_.networks.front().forward(state.features);
    for (std::size_t i = 0; i < num_agents_; ++i) {
      if (model_.independent) {
        const std::vector<double> q = model_.networks[i].forward(state.features);
        actions[i] = epsilon_greedy(q, rl_.epsilon, rng_);
      } else {
        actions[i] = epsilon_greedy(shared_q, rl_.epsilon, rng_);
      }
    }

    StepResult step = env_step(scenario, actions, space_, radio, env);
    for (std::size_t i = 0; i < num_agents_; ++i) {
      Learner& learner = learners_[model_.independent ? i : 0];
      learner.memory.push({state.features, actions[i], step.rewards[i], step.next_state.features});
      reward_sum += step.rewards[i];
    }

    for (std::size_t k = 0; k < learners_.size(); ++k) {
      Learner& learner = learners_[k];
      Mlp& net = model_.networks[k];
      const Mlp* target = learner.target ? &*learner.target : nullptr;
      const auto loss = train_step(net, learner.opt, learner.memory, rl_.batch_size, rl_.decay, rng_, target);
      if (!loss) continue;
      losses_.push_back(*loss);
      ++learn_steps_;
      ++learner.steps;
      if (learner.target && learner.steps % rl_.target_sync_steps == 0) learner.target = net;
    }
    state = std::move(step.next_state);
  }
  return reward_sum / static_cast<double>(env.steps_per_episode * num_agents_);
}

TrainResult train(const CellConfig& cell, const RadioConfig& radio, const ActionSpace& space,
                  const EnvConfig& env, const RlConfig& rl, std::uint64_t seed) {
  cell.validate();
  radio.validate();
  space.validate(radio.p_max_dbm);
  env.validate();

  DqnTrainer trainer(cell.num_cues, cell.num_d2d_pairs, space, rl, seed);
  Rng topo_rng = make_rng({seed, 0x746f706fULL});
  TrainResult result;
  result.episode_mean_reward.reserve(env.episodes);
  for (std::size_t episode = 0; episode < env.episodes; ++episode) {
    const Scenario scenario = make_scenario(cell, topo_rng);
    result.episode_mean_reward.push_back(trainer.run_episode(scenario, radio, env));
  }
  result.model = trainer.model();
  result.learn_steps = trainer.learn_steps();
  return result;
}

DqnPolicy::DqnPolicy(const DqnModel& model, ActionSpace space) : model_(model), space_(std::move(space)) {
  for (const Mlp& net : model_.networks) {
    if (net.output_size() != space_.num_levels()) {
      throw ShapeError("network output width does not match the number of power levels");
    }
  }
}

std::vector<std::size_t> DqnPolicy::actions(const Scenario& scenario, const AgentState& state) const {
  std::vector<std::size_t> out(scenario.num_pairs());
  if (out.empty()) return out;
  if (!model_.independent) {
    const std::size_t a = greedy_action(model_.network_for(0).forward(state.features));
    std::fill(out.begin(), out.end(), a);
    return out;
  }
  if (model_.networks.size() != out.size()) {
    throw ShapeError("independent model has " + std::to_string(model_.networks.size()) +
                     " networks for " + std::to_string(out.size()) + " agents");
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = greedy_action(model_.networks[i].forward(state.features));
  }
  return out;
}

std::vector<double> DqnPolicy::d2d_powers(const Scenario& scenario, const AgentState& state) const {
  std::vector<double> powers;
  for (std::size_t a : actions(scenario, state)) powers.push_back(action_to_power(a, space_));
  return powers;
}

std::vector<double> MaxPowerPolicy::d2d_powers(const Scenario& scenario, const AgentState&) const {
  return max_power_policy(scenario.num_pairs(), radio_);
}

std::vector<double> OlpcPolicy::d2d_powers(const Scenario& scenario, const AgentState&) const {
  return olpc_policy(scenario.gains, cell_, params_, radio_);
}

std::vector<double> FixedLevelPolicy::d2d_powers(const Scenario& scenario, const AgentState&) const {
  return std::vector<double>(scenario.num_pairs(), action_to_power(level_, space_));
}

EvalMetrics evaluate(const PowerPolicy& policy, std::span<const Scenario> scenarios,
                     const RadioConfig& radio, const EnvConfig& env, std::size_t eval_steps) {
  EvalMetrics m;
  if (scenarios.empty() || eval_steps == 0) return m;

  double system = 0.0;
  double d2d = 0.0;
  double reward_sum = 0.0;
  std::size_t reward_count = 0;
  std::size_t qos_ok = 0;
  std::size_t qos_total = 0;
  for (const Scenario& scenario : scenarios) {
    std::vector<std::size_t> shared_rbs = scenario.reuse.rb_of_pair();
    std::sort(shared_rbs.begin(), shared_rbs.end());
    shared_rbs.erase(std::unique(shared_rbs.begin(), shared_rbs.end()), shared_rbs.end());

    AgentState state = initial_state(scenario, radio);
    double sys_here = 0.0;
    double d2d_here = 0.0;
    for (std::size_t t = 0; t < eval_steps; ++t) {
      const std::vector<double> powers = policy.d2d_powers(scenario, state);
      StepResult step = env_step_powers(scenario, powers, radio, env);
      sys_here += system_throughput(step.report);
      d2d_here += d2d_throughput(step.report);
      for (std::size_t rb : shared_rbs) {
        if (to_db(step.report.cue_sinr_lin[rb]) >= env.tau_db) ++qos_ok;
        ++qos_total;
      }
      for (double r : step.rewards) reward_sum += r;
      reward_count += step.rewards.size();
      state = std::move(step.next_state);
    }
    system += sys_here / static_cast<double>(eval_steps);
    d2d += d2d_here / static_cast<double>(eval_steps);
  }
  const double n = static_cast<double>(scenarios.size());
  m.system_throughput_bps_hz = system / n;
  m.d2d_throughput_bps_hz = d2d / n;
  m.cue_qos_rate = qos_total == 0 ? 1.0 : static_cast<double>(qos_ok) / static_cast<double>(qos_total);
  m.mean_reward = reward_count == 0 ? 0.0 : reward_sum / static_cast<double>(reward_count);
  return m;
}

}  // namespace d2d

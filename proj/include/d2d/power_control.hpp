#pragma once

// Multi-agent D2D power control.
//
// Every D2D transmitter is an agent. All agents observe the same broadcast
// state (the CUE SINR vector reported to the BS), pick a power level, and are
// rewarded on their own RB: throughput of the co-channel CUE plus their own
// link while that CUE stays above the SINR threshold, -1 otherwise.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "d2d/adam.hpp"
#include "d2d/mlp.hpp"
#include "d2d/radio.hpp"
#include "d2d/random.hpp"
#include "d2d/replay.hpp"
#include "d2d/topology.hpp"

namespace d2d {

// Observation clamp range (dB). The ceiling also bounds the SINRs fed into
// the reward, so rewards stay within [-1, 2 log2(1 + 10^5)].
inline constexpr double kSinrFloorDb = -30.0;
inline constexpr double kSinrCeilingDb = 50.0;

struct ActionSpace {
  std::vector<double> level_powers_dbm;

  // num_levels powers evenly spaced in dBm over [min_dbm, max_dbm].
  static ActionSpace uniform(std::size_t num_levels, double min_dbm, double max_dbm);

  std::size_t num_levels() const noexcept { return level_powers_dbm.size(); }
  // Strictly increasing, at least two levels, top level equal to p_max_dbm.
  void validate(double p_max_dbm) const;
};

/// Transmit power in watts for a level index. Throws DomainError when out of range.
double action_to_power(std::size_t index, const ActionSpace& space);

struct EnvConfig {
  double tau_db = 6.0;
  std::size_t steps_per_episode = 20;
  std::size_t episodes = 300;

  void validate() const;
};

struct AgentState {
  std::vector<double> features;  // (clamp(SINR_dB) + 30) / 80 per CUE

  bool operator==(const AgentState&) const = default;
};

AgentState observe_state(const SinrReport& report);

// log2(1 + gc) + log2(1 + gd) when gc is at least tau_db (in dB), else -1.
// Both SINRs are capped at the observation ceiling first.
double reward(double cue_sinr_lin, double d2d_sinr_lin, double tau_db);

std::vector<double> max_power_policy(std::size_t num_pairs, const RadioConfig& radio);

// LTE open-loop fractional power control: P = min(p_max, p0 + alpha * PL).
struct OlpcParams {
  double p0_dbm = -78.0;
  double alpha = 0.8;

  void validate() const;
};

double olpc_power_dbm(double pathloss_db, const OlpcParams& params, double p_max_dbm);

// Each transmitter compensates the coupling loss of its own link, i.e. path
// loss plus shadowing as seen through the gain table.
std::vector<double> olpc_policy(const GainTable& gains, const CellConfig& cell,
                                const OlpcParams& params, const RadioConfig& radio);

// One drop of the cell: geometry, gains, and the fixed RB reuse.
struct Scenario {
  Topology topology;
  GainTable gains;
  ReuseAssignment reuse;

  std::size_t num_cues() const noexcept { return topology.num_cues(); }
  std::size_t num_pairs() const noexcept { return topology.num_pairs(); }
};

Scenario make_scenario(const CellConfig& cell, Rng& rng);
Scenario make_scenario(Topology topology, const CellConfig& cell, Rng& rng);

struct StepResult {
  SinrReport report;
  std::vector<double> rewards;  // one per agent
  AgentState next_state;
};

PowerAllocation make_allocation(const Scenario& scenario, std::span<const double> d2d_power_w,
                                const RadioConfig& radio);

StepResult env_step_powers(const Scenario& scenario, std::span<const double> d2d_power_w,
                           const RadioConfig& radio, const EnvConfig& env);

StepResult env_step(const Scenario& scenario, std::span<const std::size_t> joint_action,
                    const ActionSpace& space, const RadioConfig& radio, const EnvConfig& env);

// Observation before any D2D transmitter is active.
AgentState initial_state(const Scenario& scenario, const RadioConfig& radio);

struct RlConfig {
  std::vector<std::size_t> hidden_layers{200, 200};
  AdamConfig adam;
  double decay = 0.95;
  double epsilon = 0.1;
  std::size_t replay_capacity = 10000;
  std::size_t batch_size = 32;
  // Learning steps between target-network syncs; 0 bootstraps from the online network.
  std::size_t target_sync_steps = 0;
  // One network, optimizer and replay memory per agent instead of a shared set.
  bool independent_networks = false;

  void validate() const;
};

struct DqnModel {
  std::vector<Mlp> networks;  // one shared, or one per agent
  bool independent = false;
  std::uint64_t seed = 0;

  const Mlp& network_for(std::size_t agent) const;
  bool operator==(const DqnModel&) const = default;
};

std::vector<std::size_t> network_dims(std::size_t num_cues, const ActionSpace& space,
                                      const RlConfig& rl);

// Owns the learning state of one training run. Not thread-safe; independent
// trainers can run concurrently.
class DqnTrainer {
 public:
  DqnTrainer(std::size_t num_cues, std::size_t num_agents, ActionSpace space, RlConfig rl,
             std::uint64_t seed);

  // Runs env.steps_per_episode steps on the scenario with epsilon-greedy
  // exploration, one learning step per learner per environment step once its
  // memory holds a full batch. Returns the mean per-agent reward per step.
  double run_episode(const Scenario& scenario, const RadioConfig& radio, const EnvConfig& env);

  const DqnModel& model() const noexcept { return model_; }
  std::size_t learn_steps() const noexcept { return learn_steps_; }
  const ReplayMemory& memory(std::size_t learner = 0) const { return learners_.at(learner).memory; }
  const std::vector<double>& losses() const noexcept { return losses_; }

 private:
  struct Learner {
    AdamState opt;
    ReplayMemory memory;
    std::optional<Mlp> target;
    std::size_t steps = 0;
  };

  std::size_t num_cues_;
  std::size_t num_agents_;
  ActionSpace space_;
  RlConfig rl_;
  Rng rng_;
  DqnModel model_;
  std::vector<Learner> learners_;
  std::size_t learn_steps_ = 0;
  std::vector<double> losses_;
};

struct TrainResult {
  DqnModel model;
  std::vector<double> episode_mean_reward;
  std::size_t learn_steps = 0;
};

// Trains for env.episodes episodes, each on a freshly drawn scenario.
TrainResult train(const CellConfig& cell, const RadioConfig& radio, const ActionSpace& space,
                  const EnvConfig& env, const RlConfig& rl, std::uint64_t seed);

class PowerPolicy {
 public:
  virtual ~PowerPolicy() = default;
  virtual std::vector<double> d2d_powers(const Scenario& scenario, const AgentState& state) const = 0;
};

// Greedy (epsilon = 0) action from the trained network(s).
class DqnPolicy final : public PowerPolicy {
 public:
  DqnPolicy(const DqnModel& model, ActionSpace space);
  std::vector<double> d2d_powers(const Scenario& scenario, const AgentState& state) const override;
  std::vector<std::size_t> actions(const Scenario& scenario, const AgentState& state) const;

 private:
  const DqnModel& model_;
  ActionSpace space_;
};

class MaxPowerPolicy final : public PowerPolicy {
 public:
  explicit MaxPowerPolicy(RadioConfig radio) : radio_(radio) {}
  std::vector<double> d2d_powers(const Scenario& scenario, const AgentState& state) const override;

 private:
  RadioConfig radio_;
};

class OlpcPolicy final : public PowerPolicy {
 public:
  OlpcPolicy(CellConfig cell, OlpcParams params, RadioConfig radio)
      : cell_(cell), params_(params), radio_(radio) {}
  std::vector<double> d2d_powers(const Scenario& scenario, const AgentState& state) const override;

 private:
  CellConfig cell_;
  OlpcParams params_;
  RadioConfig radio_;
};

// Every agent always uses the same level.
class FixedLevelPolicy final : public PowerPolicy {
 public:
  FixedLevelPolicy(ActionSpace space, std::size_t level) : space_(std::move(space)), level_(level) {}
  std::vector<double> d2d_powers(const Scenario& scenario, const AgentState& state) const override;

 private:
  ActionSpace space_;
  std::size_t level_;
};

struct EvalMetrics {
  double system_throughput_bps_hz = 0.0;
  double d2d_throughput_bps_hz = 0.0;
  // Fraction of (step, shared RB) samples whose CUE meets tau; 1 when no RB is shared.
  double cue_qos_rate = 1.0;
  double mean_reward = 0.0;

  bool operator==(const EvalMetrics&) const = default;
};

// Rolls the policy forward eval_steps steps on each scenario and
// averages over steps and scenarios.
EvalMetrics evaluate(const PowerPolicy& policy, std::span<const Scenario> scenarios,
                     const RadioConfig& radio, const EnvConfig& env, std::size_t eval_steps);

}  // namespace d2d

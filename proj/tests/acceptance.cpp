// Acceptance runner. Prints one PASS/FAIL line per criterion and exits
// nonzero if any selected criterion fails.
//
//   acceptance                    run every criterion
//   acceptance --criterion 4      run a subset (repeatable)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "d2d/adam.hpp"
#include "d2d/config.hpp"
#include "d2d/dqn.hpp"
#include "d2d/experiment.hpp"
#include "d2d/mlp.hpp"
#include "d2d/power_control.hpp"
#include "d2d/radio.hpp"
#include "d2d/replay.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace d2d;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double rel_err(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// 1. Analytic loss gradients against central differences.
Outcome gradients() {
  const auto start = Clock::now();
  Rng rng = make_rng({0xacc1});
  std::uniform_int_distribution<std::size_t> width(2, 12);
  std::uniform_int_distribution<std::size_t> depth(1, 3);
  std::uniform_int_distribution<std::size_t> batch_size(1, 8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int instance = 0; instance < 20; ++instance) {
    std::vector<std::size_t> dims{width(rng)};
    for (std::size_t l = depth(rng); l > 0; --l) dims.push_back(width(rng));
    dims.push_back(width(rng));
    const Mlp net = Mlp::random(dims, rng);
    const std::size_t n = batch_size(rng);
    std::vector<std::vector<double>> states(n, std::vector<double>(dims.front()));
    std::vector<double> flat;
    std::vector<std::size_t> actions(n);
    std::vector<double> targets(n);
    for (std::size_t k = 0; k < n; ++k) {
      for (double& x : states[k]) x = u(rng);
      flat.insert(flat.end(), states[k].begin(), states[k].end());
      actions[k] = std::uniform_int_distribution<std::size_t>(0, dims.back() - 1)(rng);
      targets[k] = 3.0 * u(rng);
    }
    const auto analytic = net.loss_gradient(flat, actions, targets).grad;
    const std::vector<double> params(net.params().begin(), net.params().end());
    const auto numeric = oracle::finite_difference_grad(dims, params, states, actions, targets, 1e-5);
    for (std::size_t k = 0; k < params.size(); ++k) worst = std::max(worst, rel_err(analytic[k], numeric[k]));
  }
  const double elapsed = seconds_since(start);
  std::ostringstream d;
  d << "max relative error " << worst << " (< 1e-4), " << elapsed << " s (< 30 s)";
  return {worst < 1e-4 && elapsed < 30.0, d.str()};
}

// 2. Adam against the independently coded reference.
Outcome adam() {
  const double lr = 1e-3;
  Rng rng = make_rng({0xacc2});
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> params(64), grads(64);
  for (double& p : params) p = u(rng);
  for (double& g : grads) g = u(rng);

  AdamState state(params.size(), AdamConfig{});
  std::vector<double> ours = params;
  oracle::ReferenceAdam ref;
  std::vector<double> theirs = params;
  double first_step_dev = 0.0;
  double worst = 0.0;
  for (int t = 0; t < 10; ++t) {
    adam_step(state, ours, grads);
    ref.step(theirs, grads);
    if (t == 0) {
      for (std::size_t k = 0; k < params.size(); ++k) {
        const double expected = -lr * (grads[k] > 0 ? 1.0 : -1.0);
        first_step_dev = std::max(first_step_dev, std::abs((ours[k] - params[k]) - expected));
      }
    }
    for (std::size_t k = 0; k < params.size(); ++k) worst = std::max(worst, std::abs(ours[k] - theirs[k]));
  }
  std::ostringstream d;
  d << "max deviation from reference " << worst << " (<= 1e-10), first step off sign by " << first_step_dev
    << " (<= " << lr * 1e-6 << ")";
  return {worst <= 1e-10 && first_step_dev <= lr * 1e-6, d.str()};
}

// 3. SINR and throughput on the fixed fixture against scalar evaluation.
Outcome sinr() {
  const GainTable g = fixture::three_cue_two_pair_gains();
  const PowerAllocation p = fixture::three_cue_two_pair_alloc();
  const ReuseAssignment reuse({1, 1}, 3);
  const double n0 = 1e-3 * std::pow(10.0, (-176.0 + 10.0 * std::log10(180e3)) / 10.0);

  const double cue0 = p.cue_power_w[0] * g.cue_bs[0] / n0;
  const double cue1 =
      p.cue_power_w[1] * g.cue_bs[1] / (n0 + p.d2d_power_w[0] * g.d2dtx_bs[0] + p.d2d_power_w[1] * g.d2dtx_bs[1]);
  const double cue2 = p.cue_power_w[2] * g.cue_bs[2] / n0;
  const double d0 = p.d2d_power_w[0] * g.d2d_link[0] /
                    (n0 + p.cue_power_w[1] * g.cue_d2drx(1, 0) + p.d2d_power_w[1] * g.d2dtx_d2drx(1, 0));
  const double d1 = p.d2d_power_w[1] * g.d2d_link[1] /
                    (n0 + p.cue_power_w[1] * g.cue_d2drx(1, 1) + p.d2d_power_w[0] * g.d2dtx_d2drx(0, 1));
  const double total = std::log2(1 + cue0) + std::log2(1 + cue1) + std::log2(1 + cue2) + std::log2(1 + d0) +
                       std::log2(1 + d1);

  const double noise = noise_power_w(RadioConfig{});
  const std::vector<std::pair<double, double>> pairs{
      {cue_sinr(0, p, g, reuse, noise), cue0}, {cue_sinr(1, p, g, reuse, noise), cue1},
      {cue_sinr(2, p, g, reuse, noise), cue2}, {d2d_sinr(0, p, g, reuse, noise), d0},
      {d2d_sinr(1, p, g, reuse, noise), d1},
      {system_throughput(compute_sinr_report(p, g, reuse, noise)), total},
  };
  double worst = 0.0;
  for (const auto& [got, want] : pairs) worst = std::max(worst, rel_err(got, want));
  std::ostringstream d;
  d << "max relative error " << worst << " (<= 1e-12)";
  return {worst <= 1e-12, d.str()};
}

// 4. Greedy joint action after short training versus exhaustive search.
Outcome bruteforce() {
  const auto start = Clock::now();
  CellConfig cell;
  cell.num_cues = 4;
  cell.num_d2d_pairs = 2;
  Rng topo_rng = make_rng({0xacc4});
  const Scenario scenario = make_scenario(cell, topo_rng);
  const ActionSpace space = ActionSpace::uniform(4, -10.0, 23.0);
  const RadioConfig radio;
  EnvConfig env;
  env.steps_per_episode = 20;
  const std::size_t episodes = 100;  // 2000 environment steps

  auto throughput_of = [&](std::size_t a0, std::size_t a1) {
    const std::vector<std::size_t> joint{a0, a1};
    return system_throughput(env_step(scenario, joint, space, radio, env).report);
  };
  double best = -1.0;
  for (std::size_t a0 = 0; a0 < 4; ++a0) {
    for (std::size_t a1 = 0; a1 < 4; ++a1) best = std::max(best, throughput_of(a0, a1));
  }

  int passing = 0;
  std::ostringstream d;
  d << "optimum " << best << " bit/s/Hz; ratios";
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    DqnTrainer trainer(cell.num_cues, cell.num_d2d_pairs, space, RlConfig{}, seed);
    for (std::size_t e = 0; e < episodes; ++e) trainer.run_episode(scenario, radio, env);
    const DqnPolicy policy(trainer.model(), space);
    const auto joint = policy.actions(scenario, initial_state(scenario, radio));
    const double ratio = throughput_of(joint[0], joint[1]) / best;
    passing += ratio >= 0.9;
    d << ' ' << ratio;
  }
  const double elapsed = seconds_since(start);
  d << "; " << passing << "/5 seeds >= 0.9 (need 4), " << elapsed << " s (< 120 s)";
  return {passing >= 4 && elapsed < 120.0, d.str()};
}

// Shared by criteria 5, 6 and 7.
struct SweepSummary {
  std::vector<ResultRow> rows;
  double seconds = 0.0;
};

const SweepSummary& desk_sweep() {
  static const SweepSummary summary = [] {
    ExperimentConfig c;
    c.cell.num_cues = 10;
    c.d2d_counts = {2, 4, 6, 8, 10};
    c.seeds = {1, 2, 3, 4, 5};
    c.env.episodes = 300;
    c.env.steps_per_episode = 20;
    c.validate();
    const auto start = Clock::now();
    SweepSummary s;
    s.rows = run_sweep(c);
    s.seconds = seconds_since(start);
    write_results(s.rows, "acceptance_sweep.csv");
    return s;
  }();
  return summary;
}

std::map<std::size_t, double> mean_system(const std::vector<ResultRow>& rows, Algorithm algo) {
  std::map<std::size_t, std::pair<double, int>> acc;
  for (const auto& r : rows) {
    if (r.algorithm != algo) continue;
    acc[r.d2d_count].first += r.system_throughput_bps_hz;
    acc[r.d2d_count].second += 1;
  }
  std::map<std::size_t, double> out;
  for (const auto& [d, sum] : acc) out[d] = sum.first / sum.second;
  return out;
}

// 5. DQN beats both baselines on mean system throughput for most D.
Outcome comparative() {
  const auto& s = desk_sweep();
  const auto dqn = mean_system(s.rows, Algorithm::dqn);
  const auto mp = mean_system(s.rows, Algorithm::max_power);
  const auto olpc = mean_system(s.rows, Algorithm::olpc);
  int wins = 0;
  std::ostringstream d;
  d << "D: dqn/max_power/olpc";
  for (const auto& [D, v] : dqn) {
    wins += v >= mp.at(D) && v >= olpc.at(D);
    d << " | " << D << ": " << v << '/' << mp.at(D) << '/' << olpc.at(D);
  }
  d << "; dqn best at " << wins << "/5 (need 4); " << s.rows.size() << " rows; " << s.seconds << " s (< 900 s)";
  return {wins >= 4 && s.rows.size() == 75 && s.seconds < 900.0, d.str()};
}

// 6. DQN system throughput rises with D, one inversion allowed.
Outcome trend() {
  const auto dqn = mean_system(desk_sweep().rows, Algorithm::dqn);
  int inversions = 0;
  std::ostringstream d;
  d << "dqn mean system throughput by D:";
  double previous = -1.0;
  for (const auto& [D, v] : dqn) {
    if (previous >= 0.0 && v < previous) ++inversions;
    previous = v;
    d << ' ' << D << ":" << v;
  }
  d << "; " << inversions << " inversions (<= 1)";
  return {inversions <= 1, d.str()};
}

// 7. DQN keeps CUE QoS better than max power at D = 10.
Outcome qos() {
  std::map<std::uint64_t, double> dqn, mp;
  for (const auto& r : desk_sweep().rows) {
    if (r.d2d_count != 10) continue;
    if (r.algorithm == Algorithm::dqn) dqn[r.seed] = r.cue_qos_rate;
    if (r.algorithm == Algorithm::max_power) mp[r.seed] = r.cue_qos_rate;
  }
  int wins = 0;
  std::ostringstream d;
  d << "D=10 qos dqn/max_power per seed:";
  for (const auto& [seed, v] : dqn) {
    wins += v > mp.at(seed);
    d << ' ' << v << '/' << mp.at(seed);
  }
  d << "; dqn strictly higher in " << wins << "/5 (need 4)";
  return {wins >= 4, d.str()};
}

std::string strip_wall_time(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::string line, out;
  while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + '\n';
  return out;
}

// 8. Two CLI sweeps with the same config produce the same CSV.
Outcome determinism() {
  const auto dir = std::filesystem::temp_directory_path() / "d2d_acceptance";
  std::filesystem::create_directories(dir);
  const auto cfg = dir / "determinism.cfg";
  std::ofstream(cfg) << "num_cues = 10\n"
                        "d2d_counts = 2, 6, 10\n"
                        "seeds = 11, 12\n"
                        "episodes = 25\n"
                        "eval_topologies = 10\n";
  std::string outputs[2];
  for (int run = 0; run < 2; ++run) {
    const auto csv = dir / ("run" + std::to_string(run) + ".csv");
    std::filesystem::remove(csv);
    const std::string cmd = std::string("\"") + D2DSIM_PATH + "\" sweep --config \"" + cfg.string() +
                            "\" --out \"" + csv.string() + "\"";
    if (std::system(cmd.c_str()) != 0) return {false, "sweep command failed: " + cmd};
    outputs[run] = strip_wall_time(csv);
  }
  const auto lines = std::count(outputs[0].begin(), outputs[0].end(), '\n');
  std::ostringstream d;
  d << lines << " CSV lines, identical without wall_time_s: " << (outputs[0] == outputs[1] ? "yes" : "no");
  return {outputs[0] == outputs[1] && lines == 1 + 3 * 2 * 3, d.str()};
}

// 9. Replay memory and action selection.
Outcome replay_policy() {
  std::vector<std::string> failures;
  auto transition = [](std::size_t id) { return Transition{{0.0}, id, 0.0, {0.0}}; };

  ReplayMemory fifo(5);
  for (std::size_t id = 0; id < 12; ++id) fifo.push(transition(id));
  bool fifo_ok = fifo.size() == 5;
  for (std::size_t k = 0; k < 5 && fifo_ok; ++k) fifo_ok = fifo.at(k).action == 7 + k;
  if (!fifo_ok) failures.push_back("fifo eviction");

  ReplayMemory mem(100);
  for (std::size_t id = 0; id < 100; ++id) mem.push(transition(id));
  Rng rng = make_rng({0xacc9});
  bool distinct = true;
  for (int draw = 0; draw < 2000 && distinct; ++draw) {
    const auto batch = mem.sample(32, rng);
    std::set<std::size_t> ids;
    for (const auto& t : *batch) ids.insert(t.action);
    distinct = batch->size() == 32 && ids.size() == 32;
  }
  if (!distinct) failures.push_back("duplicate in sample");

  const std::vector<double> q{0.3, -1.0, 2.0, 2.0, 0.0, 1.5, -0.2, 1.9, 0.1, 0.4};
  std::vector<int> hits(q.size(), 0);
  const int n = 100000;
  for (int k = 0; k < n; ++k) ++hits[epsilon_greedy(q, 1.0, rng)];
  double worst = 0.0;
  for (int h : hits) worst = std::max(worst, std::abs(h / double(n) - 1.0 / q.size()));
  if (worst > 0.01) failures.push_back("epsilon=1 uniformity");

  bool greedy_ok = epsilon_greedy(q, 0.0, rng) == 2 && greedy_action(std::vector<double>(4, 1.0)) == 0;
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 1000 && greedy_ok; ++k) {
    std::vector<double> r(7);
    for (double& x : r) x = u(rng);
    greedy_ok = epsilon_greedy(r, 0.0, rng) == std::size_t(std::max_element(r.begin(), r.end()) - r.begin());
  }
  if (!greedy_ok) failures.push_back("epsilon=0 argmax");

  std::ostringstream d;
  d << "fifo, distinct samples, uniformity (max dev " << worst << " <= 0.01), argmax tie-break";
  for (const auto& f : failures) d << "; FAILED " << f;
  return {failures.empty(), d.str()};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> selected;
  app.add_option("--criterion", selected, "Criterion number to run (repeatable)")->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);
  if (selected.empty()) selected = {1, 2, 3, 4, 5, 6, 7, 8, 9};

  const std::map<int, std::pair<std::string, std::function<Outcome()>>> criteria{
      {1, {"gradient check", gradients}},
      {2, {"adam oracle", adam}},
      {3, {"sinr oracle", sinr}},
      {4, {"brute-force near-optimality", bruteforce}},
      {5, {"dqn beats baselines", comparative}},
      {6, {"throughput grows with D", trend}},
      {7, {"qos versus max power", qos}},
      {8, {"sweep determinism", determinism}},
      {9, {"replay and policy properties", replay_policy}},
  };

  bool all_pass = true;
  for (int id : selected) {
    const auto& [name, run] = criteria.at(id);
    Outcome outcome;
    try {
      outcome = run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    all_pass = all_pass && outcome.pass;
    std::cout << "criterion " << id << ' ' << (outcome.pass ? "PASS" : "FAIL") << ": " << name << " -- "
              << outcome.detail << std::endl;
  }
  return all_pass ? 0 : 1;
}

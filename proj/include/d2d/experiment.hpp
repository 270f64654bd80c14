#pragma once

// Sweeps over (D2D count, seed) and the CSV results file.
//
// For each (d2d_count, seed) cell the harness draws one held-out set of
// evaluation scenarios, trains a fresh DQN if requested, and evaluates every
// configured algorithm on that same set, so algorithms are compared on paired
// topologies. Cells are independent and run in parallel under OpenMP; rows
// come back in (d2d_count, seed, algorithm) configuration order regardless.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "d2d/config.hpp"
#include "d2d/power_control.hpp"

namespace d2d {

inline constexpr const char* kResultsHeader =
    "algorithm,d2d_count,seed,system_throughput_bps_hz,d2d_throughput_bps_hz,cue_qos_rate,wall_time_s";

struct ResultRow {
  Algorithm algorithm = Algorithm::dqn;
  std::size_t d2d_count = 0;
  std::uint64_t seed = 0;
  double system_throughput_bps_hz = 0.0;
  double d2d_throughput_bps_hz = 0.0;
  double cue_qos_rate = 0.0;
  double wall_time_s = 0.0;

  bool operator==(const ResultRow&) const = default;
};

class SweepError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<Scenario> make_eval_scenarios(const ExperimentConfig& config, std::size_t d2d_count,
                                          std::uint64_t seed);

// Seed of the DQN trained for one sweep cell.
std::uint64_t training_seed(std::uint64_t seed, std::size_t d2d_count);

TrainResult train_cell(const ExperimentConfig& config, std::size_t d2d_count, std::uint64_t seed);

// model is required for Algorithm::dqn and ignored otherwise.
EvalMetrics evaluate_algorithm(const ExperimentConfig& config, Algorithm algorithm,
                               std::span<const Scenario> scenarios, const DqnModel* model);

// Throws SweepError listing every failed cell; no partial result is returned.
std::vector<ResultRow> run_sweep(const ExperimentConfig& config);

// Shortest decimal form that parses back to the same double, always with a
// '.' or exponent (1.0, not 1).
std::string format_double(double value);

void write_results(std::ostream& out, const std::vector<ResultRow>& rows);
void write_results(const std::vector<ResultRow>& rows, const std::filesystem::path& path);
std::vector<ResultRow> read_results(const std::filesystem::path& path);

}  // namespace d2d

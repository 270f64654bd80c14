#include "d2d/experiment.hpp"

#include <charconv>
#include <chrono>
#include <cstdint>
#include <exception>
#include <fstream>
#include <optional>
#include <sstream>

#include "d2d/errors.hpp"

namespace d2d {

namespace {

constexpr std::uint64_t kEvalStream = 0x6576616cULL;
constexpr std::uint64_t kTrainStream = 0x7472616eULL;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

template <typename T>
T parse_field(const std::string& s, const std::filesystem::path& path, std::size_t line) {
  T out{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(path.string(), line, "malformed field '" + s + "'");
  }
  return out;
}

}  // namespace

std::vector<Scenario> make_eval_scenarios(const ExperimentConfig& config, std::size_t d2d_count,
                                          std::uint64_t seed) {
  const CellConfig cell = config.cell_with_pairs(d2d_count);
  Rng rng = make_rng({seed, d2d_count, kEvalStream});
  std::vector<Scenario> scenarios;
  scenarios.reserve(config.eval_topologies);
  for (std::size_t k = 0; k < config.eval_topologies; ++k) scenarios.push_back(make_scenario(cell, rng));
  return scenarios;
}

std::uint64_t training_seed(std::uint64_t seed, std::size_t d2d_count) {
  Rng rng = make_rng({seed, d2d_count, kTrainStream});
  return rng();
}

TrainResult train_cell(const ExperimentConfig& config, std::size_t d2d_count, std::uint64_t seed) {
  return train(config.cell_with_pairs(d2d_count), config.radio, config.action_space(), config.env,
               config.rl, training_seed(seed, d2d_count));
}

EvalMetrics evaluate_algorithm(const ExperimentConfig& config, Algorithm algorithm,
                               std::span<const Scenario> scenarios, const DqnModel* model) {
  switch (algorithm) {
    case Algorithm::dqn: {
      if (!model) throw std::invalid_argument("dqn evaluation needs a trained model");
      const DqnPolicy policy(*model, config.action_space());
      return evaluate(policy, scenarios, config.radio, config.env, config.eval_steps);
    }
    case Algorithm::max_power:
      return evaluate(MaxPowerPolicy(config.radio), scenarios, config.radio, config.env, config.eval_steps);
    case Algorithm::olpc:
      return evaluate(OlpcPolicy(config.cell, config.olpc, config.radio), scenarios, config.radio,
                      config.env, config.eval_steps);
  }
  throw std::invalid_argument("unknown algorithm");
}

std::vector<ResultRow> run_sweep(const ExperimentConfig& config) {
  config.validate();
  struct Job {
    std::size_t d2d_count;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (std::size_t d : config.d2d_counts) {
    for (std::uint64_t s : config.seeds) jobs.push_back({d, s});
  }
  const std::size_t per_job = config.algorithms.size();
  std::vector<ResultRow> rows(jobs.size() * per_job);
  std::vector<std::string> errors(jobs.size());

  const auto num_jobs = static_cast<std::int64_t>(jobs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t j = 0; j < num_jobs; ++j) {
    const Job job = jobs[static_cast<std::size_t>(j)];
    try {
      const auto scenarios = make_eval_scenarios(config, job.d2d_count, job.seed);
      std::optional<TrainResult> trained;
      double train_time = 0.0;
      for (std::size_t a = 0; a < per_job; ++a) {
        const Algorithm algo = config.algorithms[a];
        const auto start = std::chrono::steady_clock::now();
        if (algo == Algorithm::dqn && !trained) {
          trained = train_cell(config, job.d2d_count, job.seed);
          train_time = seconds_since(start);
        }
        const auto eval_start = std::chrono::steady_clock::now();
        const EvalMetrics m =
            evaluate_algorithm(config, algo, scenarios, trained ? &trained->model : nullptr);
        ResultRow& row = rows[static_cast<std::size_t>(j) * per_job + a];
        row.algorithm = algo;
        row.d2d_count = job.d2d_count;
        row.seed = job.seed;
        row.system_throughput_bps_hz = m.system_throughput_bps_hz;
        row.d2d_throughput_bps_hz = m.d2d_throughput_bps_hz;
        row.cue_qos_rate = m.cue_qos_rate;
        row.wall_time_s = seconds_since(eval_start) + (algo == Algorithm::dqn ? train_time : 0.0);
      }
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(j)] = e.what();
    }
  }

  std::string failures;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    if (errors[j].empty()) continue;
    failures += "\n  d2d_count=" + std::to_string(jobs[j].d2d_count) +
                " seed=" + std::to_string(jobs[j].seed) + ": " + errors[j];
  }
  if (!failures.empty()) throw SweepError("sweep cells failed:" + failures);
  return rows;
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  std::string s(buf, ptr);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

void write_results(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kResultsHeader << '\n';
  for (const ResultRow& r : rows) {
    out << to_string(r.algorithm) << ',' << r.d2d_count << ',' << r.seed << ','
        << format_double(r.system_throughput_bps_hz) << ',' << format_double(r.d2d_throughput_bps_hz)
        << ',' << format_double(r.cue_qos_rate) << ',' << format_double(r.wall_time_s) << '\n';
  }
}

void write_results(const std::vector<ResultRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_results(out, rows);
  out.flush();
  if (!out) throw IoError("failed writing results to '" + path.string() + "'");
}

std::vector<ResultRow> read_results(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || line != kResultsHeader) {
    throw ParseError(path.string(), 1, "missing or unexpected CSV header");
  }
  std::vector<ResultRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 7) throw ParseError(path.string(), line_no, "expected 7 fields");
    ResultRow r;
    try {
      r.algorithm = parse_algorithm(f[0]);
    } catch (const ConfigError& e) {
      throw ParseError(path.string(), line_no, e.what());
    }
    r.d2d_count = parse_field<std::size_t>(f[1], path, line_no);
    r.seed = parse_field<std::uint64_t>(f[2], path, line_no);
    r.system_throughput_bps_hz = parse_field<double>(f[3], path, line_no);
    r.d2d_throughput_bps_hz = parse_field<double>(f[4], path, line_no);
    r.cue_qos_rate = parse_field<double>(f[5], path, line_no);
    r.wall_time_s = parse_field<double>(f[6], path, line_no);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace d2d

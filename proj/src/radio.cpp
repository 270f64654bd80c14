#include "d2d/radio.hpp"

#include <cmath>
#include <string>

#include "d2d/errors.hpp"

namespace d2d {

namespace {

void check_shapes(const PowerAllocation& alloc, const GainTable& gains, const ReuseAssignment& reuse) {
  const std::size_t C = gains.num_cues();
  const std::size_t D = gains.num_pairs();
  if (alloc.cue_power_w.size() != C || alloc.d2d_power_w.size() != D || reuse.num_pairs() != D ||
      reuse.num_rbs() != C) {
    throw ShapeError("power allocation, gain table and reuse assignment disagree on C/D");
  }
}

double log2_1p(double x) { return std::log2(1.0 + x); }

}  // namespace

void RadioConfig::validate() const {
  if (!std::isfinite(noise_density_dbm_hz)) throw ConfigError("noise_density_dbm_hz", "must be finite");
  if (!(rb_bandwidth_hz > 0.0) || !std::isfinite(rb_bandwidth_hz)) {
    throw ConfigError("rb_bandwidth_hz", "must be positive");
  }
  if (!std::isfinite(p_max_dbm)) throw ConfigError("p_max_dbm", "must be finite");
  if (!std::isfinite(cue_tx_power_dbm) || cue_tx_power_dbm > p_max_dbm) {
    throw ConfigError("cue_tx_power_dbm", "must be finite and not exceed p_max_dbm");
  }
}

double dbm_to_watt(double p_dbm) { return std::pow(10.0, (p_dbm - 30.0) / 10.0); }

double watt_to_dbm(double p_w) {
  if (!(p_w > 0.0)) throw DomainError("watt_to_dbm needs positive power, got " + std::to_string(p_w));
  return 10.0 * std::log10(p_w) + 30.0;
}

double noise_power_w(const RadioConfig& config) {
  return dbm_to_watt(config.noise_density_dbm_hz + 10.0 * std::log10(config.rb_bandwidth_hz));
}

void PowerAllocation::validate(double p_max_w) const {
  auto check = [p_max_w](const std::vector<double>& v, const char* what) {
    for (double p : v) {
      if (!(p >= 0.0 && p <= p_max_w)) {
        throw DomainError(std::string(what) + " power " + std::to_string(p) + " W outside [0, p_max]");
      }
    }
  };
  check(cue_power_w, "CUE");
  check(d2d_power_w, "D2D");
}

ReuseAssignment::ReuseAssignment(std::vector<std::size_t> rb_of_pair, std::size_t num_rbs)
    : rb_of_pair_(std::move(rb_of_pair)), num_rbs_(num_rbs), pairs_on_rb_(num_rbs) {
  for (std::size_t i = 0; i < rb_of_pair_.size(); ++i) {
    if (rb_of_pair_[i] >= num_rbs_) {
      throw DomainError("pair " + std::to_string(i) + " assigned to RB " +
                        std::to_string(rb_of_pair_[i]) + " of " + std::to_string(num_rbs_));
    }
    pairs_on_rb_[rb_of_pair_[i]].push_back(i);
  }
}

ReuseAssignment ReuseAssignment::from_matrix(const std::vector<std::vector<int>>& x) {
  const std::size_t num_rbs = x.empty() ? 0 : x.front().size();
  std::vector<std::size_t> rbs;
  rbs.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].size() != num_rbs) throw ShapeError("reuse matrix rows differ in length");
    std::size_t ones = 0;
    std::size_t rb = 0;
    for (std::size_t k = 0; k < num_rbs; ++k) {
      if (x[i][k] != 0 && x[i][k] != 1) throw DomainError("reuse indicator must be 0 or 1");
      if (x[i][k] == 1) {
        ++ones;
        rb = k;
      }
    }
    if (ones != 1) {
      throw DomainError("pair " + std::to_string(i) + " must reuse exactly one RB, reuses " +
                        std::to_string(ones));
    }
    rbs.push_back(rb);
  }
  return ReuseAssignment(std::move(rbs), num_rbs);
}

double cue_sinr(std::size_t rb, const PowerAllocation& alloc, const GainTable& gains,
                const ReuseAssignment& reuse, double noise_w) {
  double interference = 0.0;
  for (std::size_t i : reuse.pairs_on(rb)) interference += alloc.d2d_power_w[i] * gains.d2dtx_bs[i];
  return alloc.cue_power_w[rb] * gains.cue_bs[rb] / (noise_w + interference);
}

double d2d_sinr(std::size_t pair, const PowerAllocation& alloc, const GainTable& gains,
                const ReuseAssignment& reuse, double noise_w) {
  const std::size_t rb = reuse.rb_of(pair);
  double interference = alloc.cue_power_w[rb] * gains.cue_d2drx(rb, pair);
  for (std::size_t i : reuse.pairs_on(rb)) {
    if (i != pair) interference += alloc.d2d_power_w[i] * gains.d2dtx_d2drx(i, pair);
  }
  return alloc.d2d_power_w[pair] * gains.d2d_link[pair] / (noise_w + interference);
}

SinrReport compute_sinr_report(const PowerAllocation& alloc, const GainTable& gains,
                               const ReuseAssignment& reuse, double noise_w) {
  check_shapes(alloc, gains, reuse);
  SinrReport report;
  report.cue_sinr_lin.resize(gains.num_cues());
  report.d2d_sinr_lin.resize(gains.num_pairs());
  for (std::size_t rb = 0; rb < gains.num_cues(); ++rb) {
    report.cue_sinr_lin[rb] = cue_sinr(rb, alloc, gains, reuse, noise_w);
  }
  for (std::size_t i = 0; i < gains.num_pairs(); ++i) {
    report.d2d_sinr_lin[i] = d2d_sinr(i, alloc, gains, reuse, noise_w);
  }
  return report;
}

double system_throughput(const SinrReport& report) {
  double total = 0.0;
  for (double g : report.cue_sinr_lin) total += log2_1p(g);
  return total + d2d_throughput(report);
}

double d2d_throughput(const SinrReport& report) {
  double total = 0.0;
  for (double g : report.d2d_sinr_lin) total += log2_1p(g);
  return total;
}

}  // namespace d2d

#pragma once

// Uplink-reuse SINR model. Each CUE k owns RB k and transmits to the BS.
// A D2D pair reusing RB k interferes at the BS with CUE k's uplink, and CUE k
// (plus every other pair on RB k) interferes at that pair's receiver.

#include <cstddef>
#include <vector>

#include "d2d/topology.hpp"

namespace d2d {

struct RadioConfig {
  double noise_density_dbm_hz = -176.0;
  double rb_bandwidth_hz = 180e3;
  double p_max_dbm = 23.0;
  double cue_tx_power_dbm = 23.0;

  void validate() const;
};

double dbm_to_watt(double p_dbm);
// Throws DomainError for p_w <= 0.
double watt_to_dbm(double p_w);

/// Noise power over one RB in watts (density integrated over the RB bandwidth).
double noise_power_w(const RadioConfig& config);

struct PowerAllocation {
  std::vector<double> cue_power_w;
  std::vector<double> d2d_power_w;

  // Throws DomainError if any entry leaves [0, p_max_w].
  void validate(double p_max_w) const;
};

// Binary reuse indicator x[i][k] = 1 iff D2D pair i transmits on RB k.
// Each pair reuses exactly one RB.
class ReuseAssignment {
 public:
  ReuseAssignment() = default;
  ReuseAssignment(std::vector<std::size_t> rb_of_pair, std::size_t num_rbs);

  // Rows are pairs, columns RBs; every row must contain exactly one 1.
  static ReuseAssignment from_matrix(const std::vector<std::vector<int>>& x);

  std::size_t num_pairs() const noexcept { return rb_of_pair_.size(); }
  std::size_t num_rbs() const noexcept { return num_rbs_; }
  std::size_t rb_of(std::size_t pair) const { return rb_of_pair_.at(pair); }
  bool reuses(std::size_t pair, std::size_t rb) const { return rb_of_pair_.at(pair) == rb; }
  const std::vector<std::size_t>& rb_of_pair() const noexcept { return rb_of_pair_; }

  // Pairs transmitting on rb, in index order.
  const std::vector<std::size_t>& pairs_on(std::size_t rb) const { return pairs_on_rb_.at(rb); }

 private:
  std::vector<std::size_t> rb_of_pair_;
  std::size_t num_rbs_ = 0;
  std::vector<std::vector<std::size_t>> pairs_on_rb_;
};

struct SinrReport {
  std::vector<double> cue_sinr_lin;
  std::vector<double> d2d_sinr_lin;
};

double cue_sinr(std::size_t rb, const PowerAllocation& alloc, const GainTable& gains,
                const ReuseAssignment& reuse, double noise_w);

double d2d_sinr(std::size_t pair, const PowerAllocation& alloc, const GainTable& gains,
                const ReuseAssignment& reuse, double noise_w);

SinrReport compute_sinr_report(const PowerAllocation& alloc, const GainTable& gains,
                               const ReuseAssignment& reuse, double noise_w);

/// Sum over CUEs and D2D pairs of log2(1 + SINR), in bit/s/Hz.
double system_throughput(const SinrReport& report);
/// D2D-only part of system_throughput.
double d2d_throughput(const SinrReport& report);

}  // namespace d2d

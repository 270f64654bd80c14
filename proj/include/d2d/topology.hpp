#pragma once

// Single-cell geometry and large-scale link gains.
//
// The base station sits at the origin. CUEs and D2D transmitters are dropped
// uniformly over the cell disk; each D2D receiver is dropped uniformly within
// d2d_max_dist_m of its transmitter. Gains are linear power ratios and fold
// the antenna gains of both ends into the path-loss exponent.

#include <cstddef>
#include <vector>

#include "d2d/grid.hpp"
#include "d2d/random.hpp"

namespace d2d {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Vec2&) const = default;
};

double distance(Vec2 a, Vec2 b);

struct CellConfig {
  double cell_radius_m = 500.0;
  double d2d_max_dist_m = 50.0;
  std::size_t num_cues = 30;
  std::size_t num_d2d_pairs = 10;
  double bs_antenna_gain_dbi = 17.0;
  double ue_antenna_gain_dbi = 4.0;
  double shadowing_sigma_db = 0.0;
  // Distances are clamped to at least this before a path-loss model is applied.
  double min_link_dist_m = 10.0;

  // Throws ConfigError naming the first violated field.
  void validate() const;
};

struct Topology {
  Vec2 bs_pos;
  std::vector<Vec2> cue_pos;
  std::vector<Vec2> d2d_tx_pos;
  std::vector<Vec2> d2d_rx_pos;
  // RB reused by each D2D pair; RB k is owned by CUE k.
  std::vector<std::size_t> rb_of_pair;

  std::size_t num_cues() const noexcept { return cue_pos.size(); }
  std::size_t num_pairs() const noexcept { return d2d_tx_pos.size(); }

  bool operator==(const Topology&) const = default;
};

Topology place_nodes(const CellConfig& config, Rng& rng);

/// BS <-> user path loss in dB, 15.3 + 36.6 log10(d), d in km.
double pathloss_bs_user_db(double d_km);

/// User <-> user path loss in dB, 28 + 40 log10(d), d in km.
double pathloss_user_user_db(double d_km);

/// 10^((tx_gain + rx_gain - pl - shadow) / 10).
double link_gain(double pl_db, double shadow_db, double tx_gain_dbi, double rx_gain_dbi);

struct GainTable {
  std::vector<double> cue_bs;      // [C]  CUE c -> BS
  std::vector<double> d2dtx_bs;    // [D]  D2D-Tx i -> BS
  std::vector<double> d2d_link;    // [D]  D2D-Tx i -> D2D-Rx i
  Grid cue_d2drx;                  // [C][D] CUE c -> D2D-Rx j
  Grid d2dtx_d2drx;                // [D][D] D2D-Tx i -> D2D-Rx j, diagonal = d2d_link

  std::size_t num_cues() const noexcept { return cue_bs.size(); }
  std::size_t num_pairs() const noexcept { return d2d_link.size(); }

  bool operator==(const GainTable&) const = default;
};

// Distance used by the path-loss models: clamped to min_link_dist_m, in km.
double floored_distance_km(Vec2 a, Vec2 b, const CellConfig& config);

// Shadowing is drawn independently per link from N(0, sigma^2) dB; sigma = 0
// draws nothing and leaves rng untouched.
GainTable build_gain_table(const Topology& topology, const CellConfig& config, Rng& rng);

}  // namespace d2d

#include "d2d/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "d2d/errors.hpp"

namespace d2d {

namespace {

Vec2 uniform_in_disk(Vec2 center, double radius, Rng& rng) {
  const double r = radius * std::sqrt(uniform01(rng));
  const double theta = 2.0 * std::numbers::pi * uniform01(rng);
  return {center.x + r * std::cos(theta), center.y + r * std::sin(theta)};
}

double norm(Vec2 p) { return std::hypot(p.x, p.y); }

void require_positive_km(double d_km) {
  if (!(d_km > 0.0) || !std::isfinite(d_km)) {
    throw DomainError("path loss needs a positive finite distance, got " + std::to_string(d_km) +
                      " km");
  }
}

}  // namespace

double distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

void CellConfig::validate() const {
  if (!(cell_radius_m > 0.0) || !std::isfinite(cell_radius_m)) {
    throw ConfigError("cell_radius_m", "must be positive");
  }
  if (!(d2d_max_dist_m > 0.0) || !(d2d_max_dist_m < cell_radius_m)) {
    throw ConfigError("d2d_max_dist_m", "must lie in (0, cell_radius_m)");
  }
  if (num_cues < 1) throw ConfigError("num_cues", "must be at least 1");
  if (!(shadowing_sigma_db >= 0.0) || !std::isfinite(shadowing_sigma_db)) {
    throw ConfigError("shadowing_sigma_db", "must be non-negative");
  }
  if (!std::isfinite(bs_antenna_gain_dbi)) throw ConfigError("bs_antenna_gain_dbi", "must be finite");
  if (!std::isfinite(ue_antenna_gain_dbi)) throw ConfigError("ue_antenna_gain_dbi", "must be finite");
  if (!(min_link_dist_m >= 0.0) || !std::isfinite(min_link_dist_m)) {
    throw ConfigError("min_link_dist_m", "must be non-negative");
  }
}

Topology place_nodes(const CellConfig& config, Rng& rng) {
  config.validate();
  const std::size_t C = config.num_cues;
  const std::size_t D = config.num_d2d_pairs;
  const double R = config.cell_radius_m;

  Topology topo;
  topo.cue_pos.reserve(C);
  for (std::size_t c = 0; c < C; ++c) topo.cue_pos.push_back(uniform_in_disk(topo.bs_pos, R, rng));

  topo.d2d_tx_pos.reserve(D);
  topo.d2d_rx_pos.reserve(D);
  for (std::size_t i = 0; i < D; ++i) {
    const Vec2 tx = uniform_in_disk(topo.bs_pos, R, rng);
    Vec2 rx;
    do {
      rx = uniform_in_disk(tx, config.d2d_max_dist_m, rng);
    } while (norm(rx) > R);
    topo.d2d_tx_pos.push_back(tx);
    topo.d2d_rx_pos.push_back(rx);
  }

  topo.rb_of_pair.resize(D);
  if (D <= C) {
    // Partial Fisher-Yates: the first D entries form a uniform injection.
    std::vector<std::size_t> rbs(C);
    std::iota(rbs.begin(), rbs.end(), std::size_t{0});
    for (std::size_t i = 0; i < D; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, C - 1);
      std::swap(rbs[i], rbs[pick(rng)]);
      topo.rb_of_pair[i] = rbs[i];
    }
  } else {
    std::uniform_int_distribution<std::size_t> pick(0, C - 1);
    for (std::size_t i = 0; i < D; ++i) topo.rb_of_pair[i] = pick(rng);
  }
  return topo;
}

double pathloss_bs_user_db(double d_km) {
  require_positive_km(d_km);
  return 15.3 + 36.6 * std::log10(d_km);
}

double pathloss_user_user_db(double d_km) {
  require_positive_km(d_km);
  return 28.0 + 40.0 * std::log10(d_km);
}

double link_gain(double pl_db, double shadow_db, double tx_gain_dbi, double rx_gain_dbi) {
  return std::pow(10.0, (tx_gain_dbi + rx_gain_dbi - pl_db - shadow_db) / 10.0);
}

double floored_distance_km(Vec2 a, Vec2 b, const CellConfig& config) {
  return std::max(distance(a, b), config.min_link_dist_m) / 1000.0;
}

GainTable build_gain_table(const Topology& topology, const CellConfig& config, Rng& rng) {
  const std::size_t C = topology.num_cues();
  const std::size_t D = topology.num_pairs();
  const double bs = config.bs_antenna_gain_dbi;
  const double ue = config.ue_antenna_gain_dbi;

  std::normal_distribution<double> normal(0.0, 1.0);
  auto shadow = [&]() {
    return config.shadowing_sigma_db > 0.0 ? config.shadowing_sigma_db * normal(rng) : 0.0;
  };
  auto bs_link = [&](Vec2 user) {
    const double pl = pathloss_bs_user_db(floored_distance_km(user, topology.bs_pos, config));
    return link_gain(pl, shadow(), ue, bs);
  };
  auto ue_link = [&](Vec2 tx, Vec2 rx) {
    const double pl = pathloss_user_user_db(floored_distance_km(tx, rx, config));
    return link_gain(pl, shadow(), ue, ue);
  };

  GainTable g;
  g.cue_bs.reserve(C);
  for (const Vec2& p : topology.cue_pos) g.cue_bs.push_back(bs_link(p));
  g.d2dtx_bs.reserve(D);
  for (const Vec2& p : topology.d2d_tx_pos) g.d2dtx_bs.push_back(bs_link(p));
  g.d2d_link.reserve(D);
  for (std::size_t i = 0; i < D; ++i) {
    g.d2d_link.push_back(ue_link(topology.d2d_tx_pos[i], topology.d2d_rx_pos[i]));
  }
  g.cue_d2drx = Grid(C, D);
  for (std::size_t c = 0; c < C; ++c) {
    for (std::size_t j = 0; j < D; ++j) {
      g.cue_d2drx(c, j) = ue_link(topology.cue_pos[c], topology.d2d_rx_pos[j]);
    }
  }
  g.d2dtx_d2drx = Grid(D, D);
  for (std::size_t i = 0; i < D; ++i) {
    for (std::size_t j = 0; j < D; ++j) {
      g.d2dtx_d2drx(i, j) =
          i == j ? g.d2d_link[i] : ue_link(topology.d2d_tx_pos[i], topology.d2d_rx_pos[j]);
    }
  }
  return g;
}

}  // namespace d2d

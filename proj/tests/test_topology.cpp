#include <doctest.h>

#include <cmath>

#include "d2d/errors.hpp"
#include "d2d/topology.hpp"

using namespace d2d;

TEST_CASE("path loss models at reference distances") {
  CHECK(pathloss_bs_user_db(1.0) == doctest::Approx(15.3).epsilon(1e-12));
  CHECK(pathloss_bs_user_db(10.0) == doctest::Approx(51.9).epsilon(1e-12));
  CHECK(pathloss_bs_user_db(0.5) == doctest::Approx(4.282302158698288).epsilon(1e-12));

  CHECK(pathloss_user_user_db(1.0) == doctest::Approx(28.0).epsilon(1e-12));
  CHECK(pathloss_user_user_db(0.1) == doctest::Approx(-12.0).epsilon(1e-12));
  CHECK(pathloss_user_user_db(0.05) == doctest::Approx(-24.04119982655925).epsilon(1e-12));

  CHECK_THROWS_AS(pathloss_bs_user_db(0.0), DomainError);
  CHECK_THROWS_AS(pathloss_user_user_db(-1.0), DomainError);
}

TEST_CASE("link gain") {
  CHECK(link_gain(0, 0, 0, 0) == 1.0);
  CHECK(link_gain(10, 0, 0, 0) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(link_gain(15.3, 0, 17, 4) == doctest::Approx(3.715352290971726).epsilon(1e-12));

  // exponent additivity
  for (double pl : {-40.0, -3.5, 0.0, 12.25, 97.0}) {
    for (double q : {-7.0, 0.5, 33.3}) {
      const double lhs = link_gain(pl, 0, 0, 0) * link_gain(q, 0, 0, 0);
      const double rhs = link_gain(pl + q, 0, 0, 0);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * rhs);
    }
  }
}

TEST_CASE("cell config validation names the field") {
  CellConfig c;
  c.cell_radius_m = -1;
  try {
    c.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "cell_radius_m");
  }
  c = CellConfig{};
  c.d2d_max_dist_m = 600;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = CellConfig{};
  c.num_cues = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = CellConfig{};
  c.shadowing_sigma_db = -1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("place_nodes without D2D pairs") {
  CellConfig c;
  c.num_d2d_pairs = 0;
  Rng rng = make_rng({1});
  const Topology t = place_nodes(c, rng);
  CHECK(t.num_cues() == 30);
  CHECK(t.d2d_tx_pos.empty());
  CHECK(t.d2d_rx_pos.empty());
  CHECK(t.rb_of_pair.empty());
  CHECK(t.bs_pos == Vec2{0, 0});
}

TEST_CASE("place_nodes is deterministic per seed") {
  CellConfig c;
  Rng a = make_rng({42});
  Rng b = make_rng({42});
  CHECK(place_nodes(c, a) == place_nodes(c, b));
  Rng other = make_rng({43});
  Rng again = make_rng({42});
  CHECK_FALSE(place_nodes(c, other) == place_nodes(c, again));
}

TEST_CASE("topology invariants over many seeds") {
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    CellConfig c;
    c.num_cues = 1 + seed % 12;
    c.num_d2d_pairs = seed % 15;  // includes D > C
    Rng rng = make_rng({seed});
    const Topology t = place_nodes(c, rng);
    REQUIRE(t.num_pairs() == c.num_d2d_pairs);
    for (const Vec2& p : t.cue_pos) REQUIRE(distance(p, t.bs_pos) <= c.cell_radius_m);
    for (std::size_t i = 0; i < t.num_pairs(); ++i) {
      REQUIRE(distance(t.d2d_tx_pos[i], t.bs_pos) <= c.cell_radius_m);
      REQUIRE(distance(t.d2d_rx_pos[i], t.bs_pos) <= c.cell_radius_m);
      REQUIRE(distance(t.d2d_tx_pos[i], t.d2d_rx_pos[i]) <= c.d2d_max_dist_m);
      REQUIRE(t.rb_of_pair[i] < c.num_cues);
    }
    if (c.num_d2d_pairs <= c.num_cues) {
      std::vector<bool> used(c.num_cues, false);
      for (std::size_t rb : t.rb_of_pair) {
        REQUIRE_FALSE(used[rb]);
        used[rb] = true;
      }
    }

    Rng shadow_rng = make_rng({seed, 9});
    c.shadowing_sigma_db = (seed % 3) * 4.0;
    const GainTable g = build_gain_table(t, c, shadow_rng);
    auto ok = [](double x) { return std::isfinite(x) && x > 0.0; };
    for (double x : g.cue_bs) REQUIRE(ok(x));
    for (double x : g.d2dtx_bs) REQUIRE(ok(x));
    for (double x : g.d2d_link) REQUIRE(ok(x));
    for (double x : g.cue_d2drx.data()) REQUIRE(ok(x));
    for (double x : g.d2dtx_d2drx.data()) REQUIRE(ok(x));
  }
}

TEST_CASE("uniform disk: mean CUE distance is 2R/3") {
  CellConfig c;
  c.num_cues = 1;
  c.num_d2d_pairs = 0;
  Rng rng = make_rng({2024});
  double sum = 0.0;
  const int n = 10000;
  for (int k = 0; k < n; ++k) sum += distance(place_nodes(c, rng).cue_pos[0], {0, 0});
  const double expected = 2.0 * c.cell_radius_m / 3.0;
  CHECK(std::abs(sum / n - expected) <= 0.02 * expected);
}

TEST_CASE("random RB injection covers every RB") {
  CellConfig c;
  c.num_cues = 5;
  c.num_d2d_pairs = 1;
  Rng rng = make_rng({5});
  std::vector<int> hits(5, 0);
  for (int k = 0; k < 5000; ++k) ++hits[place_nodes(c, rng).rb_of_pair[0]];
  for (int h : hits) CHECK(h == doctest::Approx(1000).epsilon(0.1));
}

TEST_CASE("gain table matches per-link recomposition on a colinear fixture") {
  // BS at origin, CUE at 300 m, D2D Tx at 100 m, D2D Rx at 140 m, all on the x axis.
  CellConfig c;
  c.num_cues = 1;
  c.num_d2d_pairs = 1;
  Topology t;
  t.cue_pos = {{300, 0}};
  t.d2d_tx_pos = {{100, 0}};
  t.d2d_rx_pos = {{140, 0}};
  t.rb_of_pair = {0};
  Rng rng = make_rng({1});
  const GainTable g = build_gain_table(t, c, rng);

  auto expect = [](double pl, double gains_db) { return std::pow(10.0, (gains_db - pl) / 10.0); };
  const double bs_ue = 17.0 + 4.0;
  const double ue_ue = 8.0;
  CHECK(g.cue_bs[0] == doctest::Approx(expect(15.3 + 36.6 * std::log10(0.3), bs_ue)).epsilon(1e-12));
  CHECK(g.d2dtx_bs[0] == doctest::Approx(expect(15.3 + 36.6 * std::log10(0.1), bs_ue)).epsilon(1e-12));
  CHECK(g.d2d_link[0] == doctest::Approx(expect(28 + 40 * std::log10(0.04), ue_ue)).epsilon(1e-12));
  CHECK(g.cue_d2drx(0, 0) == doctest::Approx(expect(28 + 40 * std::log10(0.16), ue_ue)).epsilon(1e-12));
  CHECK(g.d2dtx_d2drx(0, 0) == g.d2d_link[0]);

  Rng again = make_rng({77});
  CHECK(build_gain_table(t, c, again) == g);
}

TEST_CASE("short links are floored at the minimum distance") {
  CellConfig c;
  c.num_cues = 1;
  c.num_d2d_pairs = 1;
  Topology t;
  t.cue_pos = {{0.5, 0}};
  t.d2d_tx_pos = {{200, 0}};
  t.d2d_rx_pos = {{201, 0}};
  t.rb_of_pair = {0};
  Rng rng = make_rng({1});
  const GainTable g = build_gain_table(t, c, rng);
  CHECK(g.cue_bs[0] == doctest::Approx(link_gain(pathloss_bs_user_db(0.01), 0, 4, 17)));
  CHECK(g.d2d_link[0] == doctest::Approx(link_gain(pathloss_user_user_db(0.01), 0, 4, 4)));

  c.min_link_dist_m = 0.0;
  t.cue_pos = {{0, 0}};
  CHECK_THROWS_AS(build_gain_table(t, c, rng), DomainError);
}

TEST_CASE("gains decrease with distance") {
  CellConfig c;
  c.num_cues = 1;
  c.num_d2d_pairs = 0;
  double previous_bs = INFINITY;
  double previous_uu = INFINITY;
  for (double d = 10; d <= 1000; d *= 1.3) {
    Topology t;
    t.cue_pos = {{d, 0}};
    Rng rng = make_rng({1});
    const double g = build_gain_table(t, c, rng).cue_bs[0];
    CHECK(g < previous_bs);
    previous_bs = g;
    const double uu = link_gain(pathloss_user_user_db(d / 1000), 0, 4, 4);
    CHECK(uu < previous_uu);
    previous_uu = uu;
  }
  Topology near;
  near.cue_pos = {{120, 0}};
  Topology far;
  far.cue_pos = {{240, 0}};
  Rng rng = make_rng({1});
  CHECK(build_gain_table(far, c, rng).cue_bs[0] < build_gain_table(near, c, rng).cue_bs[0]);
}

TEST_CASE("shadowing is drawn from the supplied generator") {
  CellConfig c;
  c.num_cues = 4;
  c.num_d2d_pairs = 3;
  c.shadowing_sigma_db = 8.0;
  Rng rng = make_rng({3});
  const Topology t = place_nodes(c, rng);
  Rng a = make_rng({10});
  Rng b = make_rng({10});
  Rng other = make_rng({11});
  CHECK(build_gain_table(t, c, a) == build_gain_table(t, c, b));
  Rng b2 = make_rng({10});
  CHECK_FALSE(build_gain_table(t, c, other) == build_gain_table(t, c, b2));
}

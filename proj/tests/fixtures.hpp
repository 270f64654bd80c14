#pragma once

// Hand-built gain tables for scalar SINR checks.

#include "d2d/radio.hpp"

namespace fixture {

// 3 CUEs, 2 D2D pairs, both pairs reusing RB 1; RBs 0 and 2 are clean.
inline d2d::GainTable three_cue_two_pair_gains() {
  d2d::GainTable g;
  g.cue_bs = {2.5e-9, 7.0e-10, 4.0e-8};
  g.d2dtx_bs = {3.0e-10, 1.2e-9};
  g.d2d_link = {5.0e-6, 8.0e-7};
  g.cue_d2drx = d2d::Grid(3, 2);
  g.cue_d2drx(0, 0) = 1.0e-9;
  g.cue_d2drx(0, 1) = 2.0e-9;
  g.cue_d2drx(1, 0) = 6.0e-10;
  g.cue_d2drx(1, 1) = 9.0e-11;
  g.cue_d2drx(2, 0) = 3.0e-12;
  g.cue_d2drx(2, 1) = 4.0e-12;
  g.d2dtx_d2drx = d2d::Grid(2, 2);
  g.d2dtx_d2drx(0, 0) = g.d2d_link[0];
  g.d2dtx_d2drx(1, 1) = g.d2d_link[1];
  g.d2dtx_d2drx(0, 1) = 2.2e-8;
  g.d2dtx_d2drx(1, 0) = 1.5e-8;
  return g;
}

inline d2d::PowerAllocation three_cue_two_pair_alloc() {
  return {{0.1995, 0.1995, 0.1995}, {0.05, 0.1995}};
}

}  // namespace fixture

#pragma once

#include <random>
#include <vector>

#include "gmu/lattice.hpp"

namespace support {

// The standard sampling set used across the test suite: small chains, a
// Boolean cube, both five-element non-distributive lattices, and a couple of
// pseudo-random intersection-closed families.
inline std::vector<gmu::FiniteLattice> sampled_lattices() {
  std::vector<gmu::FiniteLattice> out;
  out.push_back(gmu::chain_lattice(2));
  out.push_back(gmu::chain_lattice(4));
  out.push_back(gmu::boolean_lattice(3));
  out.push_back(gmu::diamond_m3());
  out.push_back(gmu::pentagon_n5());
  std::mt19937_64 rng(0x1a77ce);
  out.push_back(gmu::random_closure_lattice(rng));
  out.push_back(gmu::random_closure_lattice(rng));
  return out;
}

}  // namespace support

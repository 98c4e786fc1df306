#pragma once

#include <vector>

#include "polling/simulator.hpp"

namespace polling {

// Master seed for the default probe set ("P0LL" in ASCII), fixed so that
// verification reports are comparable across machines.
constexpr std::uint64_t kMasterSeed = 0x50304C4Cull;

// 20 pseudo-random complex z vectors with |z_i| <= 0.95.
std::vector<Point> default_z_probes(int n_queues, std::uint64_t seed = kMasterSeed);

// 10 real total-workload directions omega_T = (w, ..., w), w in [0.1, 5].
std::vector<Point> default_omega_probes(int n_queues, std::uint64_t seed = kMasterSeed);

// Diagonal real grid z = (x, ..., x), x = 0.1 ... 0.9 (simulate defaults).
std::vector<Point> diagonal_z_grid(int n_queues);

ProbeSet default_probe_set(int n_queues, std::uint64_t seed = kMasterSeed);

}  // namespace polling

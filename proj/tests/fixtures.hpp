#pragma once

#include "polling/model.hpp"

namespace fixtures {

using namespace polling;

// N=1 exhaustive, zero switchover: reduces to the M/M/1 queue.
inline PollingModel mm1() {
    return PollingModel(
        {{0.5, Distribution::exponential(1.0), Discipline::exhaustive()}},
        {Distribution::deterministic(0.0)});
}

// Canonical regression model: N=2 exhaustive/gated, lambda = (0.3, 0.2),
// Exponential(1) services, Deterministic(0.5) switchovers.
inline PollingModel canonical() {
    return PollingModel(
        {{0.3, Distribution::exponential(1.0), Discipline::exhaustive()},
         {0.2, Distribution::exponential(1.0), Discipline::gated()}},
        {Distribution::deterministic(0.5), Distribution::deterministic(0.5)});
}

// Zero-switchover variant of the canonical model.
inline PollingModel canonical_zero() {
    return PollingModel(
        {{0.3, Distribution::exponential(1.0), Discipline::exhaustive()},
         {0.2, Distribution::exponential(1.0), Discipline::gated()}},
        {Distribution::deterministic(0.0), Distribution::deterministic(0.0)});
}

// Symmetric N=2 1-limited system (non-branching).
inline PollingModel symmetric_1limited() {
    return PollingModel(
        {{0.2, Distribution::exponential(1.0), Discipline::k_limited(1)},
         {0.2, Distribution::exponential(1.0), Discipline::k_limited(1)}},
        {Distribution::deterministic(0.3), Distribution::deterministic(0.3)});
}

}  // namespace fixtures

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "polling/model.hpp"
#include "polling/transform_engine.hpp"

namespace polling {

struct SimConfig {
    PollingModel model;
    std::uint64_t seed = 0;
    long warmup_cycles = 1000;
    long measured_cycles = 100000;
    std::string trace_path;  // optional line-delimited event trace (empty = off)
};

// Probes must be registered before simulation; estimates exist only at the
// registered points.
struct ProbeSet {
    std::vector<Point> z;      // joint queue-length PGF arguments
    std::vector<Point> omega;  // joint workload LST arguments
};

enum class EpochClass {
    VisitBegin = 0,
    VisitComplete,
    ServiceBegin,
    ServiceComplete,
    Arrival  // state sampled just before the arrival (PASTA)
};
constexpr int kEpochClasses = 5;
constexpr int kSimBatches = 32;

struct Estimate {
    Complex value;
    double se = 0.0;  // batch-means standard error
    long samples = 0;
};

// Simulator output: epoch counts and per-probe sample sums (with per-batch
// splits for regenerative batch means), and exact time-integral accumulators
// for the time-stationary estimators.
struct EpochLog {
    int n_queues = 0;
    std::uint64_t seed = 0;
    long warmup_cycles = 0;
    long measured_cycles = 0;
    int n_batches = kSimBatches;
    ProbeSet probes;

    // indexed [class * n_queues + queue]
    std::vector<long> epoch_count;
    std::vector<std::vector<long>> epoch_batch_count;     // [cq][batch]
    std::vector<std::vector<Complex>> epoch_sum;          // [cq][z-probe]
    std::vector<std::vector<std::vector<Complex>>> epoch_batch_sum;  // [cq][batch][z-probe]

    double total_time = 0.0;
    std::vector<double> batch_time;
    std::vector<long> batch_cycles;
    long cycles = 0;

    std::vector<Complex> z_integral;               // per z-probe: int prod z^L dt
    std::vector<std::vector<Complex>> z_batch;     // [batch][z-probe]
    std::vector<Complex> w_integral;               // per omega-probe: int e^{-<w,V>} dt
    std::vector<std::vector<Complex>> w_batch;
    std::vector<Complex> w_switch_integral;        // restricted to switchover periods
    std::vector<std::vector<Complex>> w_switch_batch;
    double switch_time = 0.0;
    std::vector<double> batch_switch_time;

    std::vector<double> busy_time;   // per queue
    std::vector<std::vector<double>> batch_busy_time;  // [batch][queue]
    std::vector<long> served;        // per queue
    std::vector<long> visit_begins;  // per queue
    double max_exhaustive_residual = 0.0;  // workload left at exhaustive visit completions

    long count(EpochClass c, int queue) const {
        return epoch_count[static_cast<int>(c) * n_queues + queue];
    }
    nlohmann::json to_json() const;
};

EpochLog simulate(const SimConfig& cfg, const ProbeSet& probes);

Estimate empirical_pgf(const EpochLog& log, EpochClass cls, int queue, const Point& z);
Estimate empirical_time_stationary_pgf(const EpochLog& log, const Point& z);
Estimate empirical_workload_lst(const EpochLog& log, const Point& omega,
                                bool switchover_only = false);
Estimate empirical_mean_cycle(const EpochLog& log);

}  // namespace polling

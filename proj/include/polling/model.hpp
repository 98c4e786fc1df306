#pragma once

#include <optional>
#include <vector>

#include "polling/distribution.hpp"

namespace polling {

struct Discipline {
    enum class Kind { Exhaustive, Gated, KLimited };
    Kind kind = Kind::Exhaustive;
    int k = 0;  // only meaningful for KLimited

    static Discipline exhaustive() { return {Kind::Exhaustive, 0}; }
    static Discipline gated() { return {Kind::Gated, 0}; }
    static Discipline k_limited(int k);

    bool branching() const { return kind != Kind::KLimited; }
};

struct QueueSpec {
    double lambda = 0.0;          // Poisson arrival rate
    Distribution service;         // B_i
    Discipline discipline;
};

// Cyclic polling system: N queues, Poisson arrivals, general service and
// switchover distributions. Immutable after construction; derived traffic
// quantities are cached. Construction rejects rho >= 1.
class PollingModel {
public:
    PollingModel(std::vector<QueueSpec> queues, std::vector<Distribution> switchovers);

    int size() const { return static_cast<int>(queues_.size()); }
    const QueueSpec& queue(int i) const { return queues_[i]; }
    // Switchover incurred when the server moves from Q_i to Q_{i+1 mod N}.
    const Distribution& switchover(int i) const { return switchovers_[i]; }

    double lambda(int i) const { return queues_[i].lambda; }
    double total_lambda() const { return total_lambda_; }
    double rho(int i) const { return rho_[i]; }
    double total_rho() const { return total_rho_; }
    double switchover_mean(int i) const { return switchovers_[i].mean(); }
    double total_switchover_mean() const { return total_switchover_mean_; }
    bool zero_switchover() const { return total_switchover_mean_ == 0.0; }
    bool all_branching() const;

private:
    std::vector<QueueSpec> queues_;
    std::vector<Distribution> switchovers_;
    double total_lambda_ = 0.0;
    std::vector<double> rho_;
    double total_rho_ = 0.0;
    double total_switchover_mean_ = 0.0;
};

// Mean cycle length E C. Non-zero switchover case: s/(1-rho), vb1_at_zero must
// be absent. Zero switchover case: vb1_at_zero (the probability that the
// server finds the system empty at a Q_1 visit beginning) must be supplied and
// E C = vb1_at_zero / (lambda (1-rho)).
double mean_cycle(const PollingModel& model, std::optional<double> vb1_at_zero = std::nullopt);

}  // namespace polling

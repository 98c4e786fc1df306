#pragma once

#include <vector>

#include "polling/model.hpp"

namespace polling {

// N-vector of complex transform arguments: a PGF point z (|z_i| <= 1) or an
// LST point omega (Re omega_i >= 0).
using Point = std::vector<Complex>;

Point ones(int n);
bool is_ones(const Point& z);

// All embedded-epoch PGF values at one point, plus the per-queue visit
// frequencies gamma_i = 1/(lambda_i E C) and the mean cycle length.
struct PgfBundle {
    Point point;
    std::vector<Complex> vb;  // visit beginnings
    std::vector<Complex> vc;  // visit completions
    std::vector<Complex> sb;  // service beginnings
    std::vector<Complex> sc;  // service completions
    std::vector<double> gamma;
    double mean_cycle = 0.0;
};

// M/G/1 busy-period LST theta(w): the unique fixed point of
// theta = B(w + lambda (1 - theta)) with |theta| <= 1, by fixed-point
// iteration from 0. Throws ConvergenceError past the iteration cap.
Complex busy_period_lst(double lambda, const Distribution& service, Complex w,
                        double tol = 1e-14, long cap = 100000);

struct EngineConfig {
    double tol = 1e-14;          // fixed-point and series truncation tolerance
    long cycle_cap = 100000;     // cap on unrolled cycles and iterations
    double singularity_eps = 1e-8;   // |z_i - B_i(Sigma(z))| below which we extrapolate
    double perturb_h = 1e-5;         // base step for the removable-singularity fallback
};

// Evaluates the embedded-epoch PGFs for branching disciplines (exhaustive,
// gated) in both switchover regimes. Pure and immutable after construction;
// safe to share across threads.
class TransformEngine {
public:
    explicit TransformEngine(PollingModel model, EngineConfig cfg = {});

    const PollingModel& model() const { return model_; }
    const EngineConfig& config() const { return cfg_; }

    Complex sigma(const Point& z) const;

    // Per-queue branching substitution: gated replaces z_i by B_i(Sigma(z)),
    // exhaustive by the busy-period LST at Sigma over the other queues.
    // Contract: vc_i(z) = vb_i(branching_map(i, z)).
    Point branching_map(int i, const Point& z) const;

    Complex visit_begin_pgf(int i, const Point& z) const;
    Complex visit_complete_pgf(int i, const Point& z) const;
    Complex service_begin_pgf(int i, const Point& z) const;
    Complex service_complete_pgf(int i, const Point& z) const;

    PgfBundle bundle(const Point& z) const;

    // Zero-switchover regime only: the probability that the server finds the
    // whole system empty at a Q_1 visit beginning.
    double vb1_at_zero() const;

    double mean_cycle() const { return mean_cycle_; }
    double gamma(int i) const { return 1.0 / (model_.lambda(i) * mean_cycle_); }

private:
    void check_point(const Point& z) const;
    Complex vb1(const Point& z) const;
    Complex cycle_series(const Point& z) const;  // sum_k Sigma(g^k(z)), zero switchover
    Complex service_begin_plain(int i, const Point& z) const;

    PollingModel model_;
    EngineConfig cfg_;
    double vb1_at_zero_ = 0.0;  // computed eagerly for zero-switchover models
    double mean_cycle_ = 0.0;
};

}  // namespace polling

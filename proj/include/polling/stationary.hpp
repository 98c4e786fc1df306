#pragma once

#include <memory>
#include <vector>

#include "polling/transform_engine.hpp"

namespace polling {

// Provider of embedded-epoch PGF values: either the analytic transform engine
// or frozen simulator estimates (so the time-stationary laws can be evaluated
// for any discipline).
class PgfSource {
public:
    virtual ~PgfSource() = default;
    virtual PgfBundle bundle(const Point& z) const = 0;
    virtual double mean_cycle() const = 0;
};

class AnalyticPgfSource final : public PgfSource {
public:
    explicit AnalyticPgfSource(TransformEngine engine) : engine_(std::move(engine)) {}
    PgfBundle bundle(const Point& z) const override { return engine_.bundle(z); }
    double mean_cycle() const override { return engine_.mean_cycle(); }
    const TransformEngine& engine() const { return engine_; }

private:
    TransformEngine engine_;
};

// Immutable snapshot of simulator-estimated bundles at a fixed probe set.
// Throws UnknownProbe away from the registered points.
class EmpiricalPgfSource final : public PgfSource {
public:
    EmpiricalPgfSource(std::vector<PgfBundle> bundles, double mean_cycle)
        : bundles_(std::move(bundles)), mean_cycle_(mean_cycle) {}
    PgfBundle bundle(const Point& z) const override;
    double mean_cycle() const override { return mean_cycle_; }

private:
    std::vector<PgfBundle> bundles_;
    double mean_cycle_ = 0.0;
};

struct MarginalPmf {
    int queue = 0;
    std::vector<double> p;  // p[n] = P(L_i = n), n = 0..n_max
};

class StationaryEvaluator {
public:
    StationaryEvaluator(PollingModel model, std::shared_ptr<const PgfSource> source)
        : model_(std::move(model)), source_(std::move(source)) {}

    static StationaryEvaluator analytic(PollingModel model, EngineConfig cfg = {});

    const PollingModel& model() const { return model_; }
    const PgfSource& source() const { return *source_; }

    // Time-stationary joint queue-length PGF, service-completion form:
    // the lambda_i(1-z_i)-weighted convex combination of the S_c PGFs.
    Complex queue_length_pgf(const Point& z) const;

    // Equivalent visit-epoch form; must agree with queue_length_pgf.
    Complex queue_length_pgf_visit_form(const Point& z) const;

    // Time-stationary joint workload LST.
    Complex workload_lst(const Point& omega) const;

    // Total workload at an arbitrary epoch of a switching period.
    Complex switch_workload_lst(Complex omega) const;

    MarginalPmf marginal_pmf(int i, int n_max) const;
    double mean_queue_length(int i) const;

private:
    Complex visit_form_plain(const Point& z) const;

    PollingModel model_;
    std::shared_ptr<const PgfSource> source_;
};

// Pollaczek-Khinchine workload LST of the M/G/1 queue fed by the superposed
// arrival streams (equals the polling workload with zero switchovers).
Complex mg1_workload_lst(const PollingModel& model, Complex omega);

// Substitution point (B_1(w_1), ..., B_N(w_N)) of the workload theorem.
Point service_lst_point(const PollingModel& model, const Point& omega);

}  // namespace polling

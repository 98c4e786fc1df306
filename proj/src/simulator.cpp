#include "polling/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <limits>

#include "polling/errors.hpp"
#include "polling/rng.hpp"

namespace polling {

namespace {

constexpr long kMaxQueueLength = 100000000L;
constexpr double kProbeMatchEps = 1e-12;

enum Purpose : std::uint64_t { kArrivals = 0, kServices = 1, kSwitchovers = 2 };

Complex ipow(Complex z, long n) {
    Complex r = 1.0;
    while (n > 0) {
        if (n & 1) r *= z;
        z *= z;
        n >>= 1;
    }
    return r;
}

int find_probe(const std::vector<Point>& probes, const Point& p) {
    for (std::size_t k = 0; k < probes.size(); ++k) {
        if (probes[k].size() != p.size()) continue;
        double dist = 0.0;
        for (std::size_t j = 0; j < p.size(); ++j) dist += std::abs(probes[k][j] - p[j]);
        if (dist < kProbeMatchEps) return static_cast<int>(k);
    }
    return -1;
}

class Simulator {
public:
    Simulator(const SimConfig& cfg, const ProbeSet& probes) : cfg_(cfg), m_(cfg_.model) {
        n_ = m_.size();
        const int nz = static_cast<int>(probes.z.size());
        const int nw = static_cast<int>(probes.omega.size());
        log_.n_queues = n_;
        log_.seed = cfg.seed;
        log_.warmup_cycles = cfg.warmup_cycles;
        log_.measured_cycles = cfg.measured_cycles;
        log_.probes = probes;
        const int ncq = kEpochClasses * n_;
        log_.epoch_count.assign(ncq, 0);
        log_.epoch_batch_count.assign(ncq, std::vector<long>(kSimBatches, 0));
        log_.epoch_sum.assign(ncq, std::vector<Complex>(nz, 0.0));
        log_.epoch_batch_sum.assign(
            ncq, std::vector<std::vector<Complex>>(kSimBatches, std::vector<Complex>(nz, 0.0)));
        log_.batch_time.assign(kSimBatches, 0.0);
        log_.batch_cycles.assign(kSimBatches, 0);
        log_.z_integral.assign(nz, 0.0);
        log_.z_batch.assign(kSimBatches, std::vector<Complex>(nz, 0.0));
        log_.w_integral.assign(nw, 0.0);
        log_.w_batch.assign(kSimBatches, std::vector<Complex>(nw, 0.0));
        log_.w_switch_integral.assign(nw, 0.0);
        log_.w_switch_batch.assign(kSimBatches, std::vector<Complex>(nw, 0.0));
        log_.batch_switch_time.assign(kSimBatches, 0.0);
        log_.busy_time.assign(n_, 0.0);
        log_.batch_busy_time.assign(kSimBatches, std::vector<double>(n_, 0.0));
        log_.served.assign(n_, 0);
        log_.visit_begins.assign(n_, 0);

        for (int j = 0; j < n_; ++j) {
            arr_rng_.push_back(substream(cfg.seed, j, kArrivals));
            svc_rng_.push_back(substream(cfg.seed, j, kServices));
            sw_rng_.push_back(substream(cfg.seed, j, kSwitchovers));
        }
        q_.assign(n_, {});
        L_.assign(n_, 0);
        next_arrival_.resize(n_);
        for (int j = 0; j < n_; ++j)
            next_arrival_[j] = -std::log(arr_rng_[j].uniform()) / m_.lambda(j);
        if (!cfg.trace_path.empty()) {
            trace_.open(cfg.trace_path);
            if (!trace_) throw ParseError("cannot open trace file '" + cfg.trace_path + "'");
        }
    }

    EpochLog run() {
        int pos = 0;
        for (;;) {
            if (pos == 0 && cycle_boundary()) break;
            if (m_.zero_switchover() && pos == 0 && total_customers_ == 0) {
                // Empty-system convention: the server makes one full cycle of
                // zero-length visits, stops right before Q_1, and resumes on
                // the next arrival. The zero-length visit epochs are logged.
                for (int j = 0; j < n_; ++j) {
                    log_epoch(EpochClass::VisitBegin, j);
                    if (measuring_) log_.visit_begins[j]++;
                    log_epoch(EpochClass::VisitComplete, j);
                }
                wait_for_next_arrival();
                continue;
            }
            log_epoch(EpochClass::VisitBegin, pos);
            if (measuring_) log_.visit_begins[pos]++;
            serve_queue(pos);
            log_epoch(EpochClass::VisitComplete, pos);
            if (m_.queue(pos).discipline.kind == Discipline::Kind::Exhaustive && measuring_)
                log_.max_exhaustive_residual =
                    std::max(log_.max_exhaustive_residual, workload(pos));
            const double dsw = m_.switchover(pos).sample(sw_rng_[pos]);
            if (dsw > 0.0) advance_to(t_ + dsw, true);
            pos = (pos + 1) % n_;
        }
        return std::move(log_);
    }

private:
    double workload(int i) const {
        double v = 0.0;
        for (double b : q_[i]) v += b;
        if (serving_ == i) v -= q_[i].front() - remaining_;
        return v;
    }

    bool cycle_boundary() {
        if (boundary_count_ == cfg_.warmup_cycles) measuring_ = true;
        if (boundary_count_ == cfg_.warmup_cycles + cfg_.measured_cycles) return true;
        if (measuring_) {
            const long mc = boundary_count_ - cfg_.warmup_cycles;
            batch_ = static_cast<int>((mc * kSimBatches) / cfg_.measured_cycles);
            log_.batch_cycles[batch_]++;
            log_.cycles++;
        }
        boundary_count_++;
        return false;
    }

    // Joint queue-length term prod_j z_j^{L_j} for probe p.
    Complex state_pgf_term(const Point& z) const {
        Complex v = 1.0;
        for (int j = 0; j < n_; ++j) v *= ipow(z[j], L_[j]);
        return v;
    }

    void log_epoch(EpochClass cls, int queue) {
        if (trace_.is_open()) {
            static const char* names[] = {"visit-begin", "visit-complete", "service-begin",
                                          "service-complete", "arrival"};
            trace_ << t_ << ' ' << names[static_cast<int>(cls)] << " q=" << queue + 1;
            for (int j = 0; j < n_; ++j) trace_ << ' ' << L_[j];
            trace_ << '\n';
        }
        if (!measuring_) return;
        const int idx = static_cast<int>(cls) * n_ + queue;
        log_.epoch_count[idx]++;
        log_.epoch_batch_count[idx][batch_]++;
        for (std::size_t p = 0; p < log_.probes.z.size(); ++p) {
            const Complex v = state_pgf_term(log_.probes.z[p]);
            log_.epoch_sum[idx][p] += v;
            log_.epoch_batch_sum[idx][batch_][p] += v;
        }
    }

    // Integrate the piecewise-constant queue-length and piecewise-linear
    // workload paths over [t0, t1] in closed form. State (L, workload,
    // serving) is the state at t0; `remaining_` is not yet decremented.
    void integrate(double t0, double t1, bool is_switch) {
        const double dt = t1 - t0;
        if (!measuring_ || dt <= 0.0) return;
        log_.total_time += dt;
        log_.batch_time[batch_] += dt;
        if (is_switch) {
            log_.switch_time += dt;
            log_.batch_switch_time[batch_] += dt;
        }
        if (serving_ >= 0) {
            log_.busy_time[serving_] += dt;
            log_.batch_busy_time[batch_][serving_] += dt;
        }
        for (std::size_t p = 0; p < log_.probes.z.size(); ++p) {
            const Complex v = state_pgf_term(log_.probes.z[p]) * dt;
            log_.z_integral[p] += v;
            log_.z_batch[batch_][p] += v;
        }
        if (log_.probes.omega.empty()) return;
        std::vector<double> v(n_);
        for (int j = 0; j < n_; ++j) v[j] = workload(j);
        for (std::size_t p = 0; p < log_.probes.omega.size(); ++p) {
            const Point& w = log_.probes.omega[p];
            Complex expo = 0.0;
            for (int j = 0; j < n_; ++j) expo -= w[j] * v[j];
            Complex contrib;
            if (serving_ >= 0 && w[serving_] != Complex(0.0, 0.0)) {
                // V decreases at slope 1 in the served coordinate:
                // int_0^dt e^{-<w,V> + w_s u} du.
                const Complex ws = w[serving_];
                contrib = std::exp(expo) * (std::exp(ws * dt) - 1.0) / ws;
            } else {
                contrib = std::exp(expo) * dt;
            }
            log_.w_integral[p] += contrib;
            log_.w_batch[batch_][p] += contrib;
            if (is_switch) {
                log_.w_switch_integral[p] += contrib;
                log_.w_switch_batch[batch_][p] += contrib;
            }
        }
    }

    void process_arrival(int j) {
        log_epoch(EpochClass::Arrival, j);  // pre-arrival state
        const double b = m_.queue(j).service.sample(svc_rng_[j]);
        q_[j].push_back(b);
        L_[j]++;
        total_customers_++;
        if (L_[j] > kMaxQueueLength)
            throw DivergenceError("queue length exceeded 10^8; system appears unstable");
        next_arrival_[j] = t_ - std::log(arr_rng_[j].uniform()) / m_.lambda(j);
    }

    int next_arrival_queue() const {
        int jmin = 0;
        for (int j = 1; j < n_; ++j)
            if (next_arrival_[j] < next_arrival_[jmin]) jmin = j;
        return jmin;
    }

    void advance_to(double target, bool is_switch) {
        for (;;) {
            const int j = next_arrival_queue();
            const double ta = next_arrival_[j];
            const double stop = std::min(ta, target);
            integrate(t_, stop, is_switch);
            if (serving_ >= 0) remaining_ -= stop - t_;
            t_ = stop;
            if (ta >= target) return;
            process_arrival(j);
        }
    }

    void wait_for_next_arrival() {
        const int j = next_arrival_queue();
        integrate(t_, next_arrival_[j], false);
        t_ = next_arrival_[j];
        process_arrival(j);
    }

    void serve_queue(int i) {
        const auto& d = m_.queue(i).discipline;
        long limit = std::numeric_limits<long>::max();
        if (d.kind == Discipline::Kind::Gated)
            limit = L_[i];  // only customers present at the visit beginning
        else if (d.kind == Discipline::Kind::KLimited)
            limit = d.k;
        long count = 0;
        while (L_[i] > 0 && count < limit) {
            log_epoch(EpochClass::ServiceBegin, i);
            serving_ = i;
            remaining_ = q_[i].front();
            advance_to(t_ + remaining_, false);
            serving_ = -1;
            remaining_ = 0.0;
            q_[i].pop_front();
            L_[i]--;
            total_customers_--;
            if (measuring_) log_.served[i]++;
            ++count;
            log_epoch(EpochClass::ServiceComplete, i);
        }
    }

    SimConfig cfg_;
    const PollingModel& m_;
    int n_ = 0;
    EpochLog log_;
    std::vector<SplitMix64> arr_rng_, svc_rng_, sw_rng_;
    double t_ = 0.0;
    std::vector<std::deque<double>> q_;  // service requirements, in-service at front
    std::vector<long> L_;
    long total_customers_ = 0;
    std::vector<double> next_arrival_;
    int serving_ = -1;
    double remaining_ = 0.0;
    bool measuring_ = false;
    long boundary_count_ = 0;
    int batch_ = 0;
    std::ofstream trace_;
};

// Batch-means standard error of a ratio estimator: sample spread of the
// per-batch ratios around their mean, over sqrt(#batches).
double batch_se(const std::vector<Complex>& batch_num, const std::vector<double>& batch_den) {
    std::vector<Complex> vals;
    for (std::size_t b = 0; b < batch_num.size(); ++b)
        if (batch_den[b] > 0.0) vals.push_back(batch_num[b] / batch_den[b]);
    if (vals.size() < 2) return std::numeric_limits<double>::infinity();
    Complex mean = 0.0;
    for (const Complex& v : vals) mean += v;
    mean /= static_cast<double>(vals.size());
    double var = 0.0;
    for (const Complex& v : vals) var += std::norm(v - mean);
    var /= static_cast<double>(vals.size() - 1);
    return std::sqrt(var / static_cast<double>(vals.size()));
}

}  // namespace

EpochLog simulate(const SimConfig& cfg, const ProbeSet& probes) {
    if (cfg.measured_cycles < kSimBatches)
        throw ParamError("measured_cycles must be at least the number of batches");
    return Simulator(cfg, probes).run();
}

Estimate empirical_pgf(const EpochLog& log, EpochClass cls, int queue, const Point& z) {
    if (is_ones(z)) {
        const long c = log.count(cls, queue);
        return Estimate{Complex(1.0, 0.0), 0.0, c};
    }
    const int p = find_probe(log.probes.z, z);
    if (p < 0) throw UnknownProbe("z point was not registered before simulation");
    const int idx = static_cast<int>(cls) * log.n_queues + queue;
    const long c = log.epoch_count[idx];
    if (c < 1000) throw InsufficientSamples("fewer than 10^3 samples in epoch class");
    std::vector<Complex> bn;
    std::vector<double> bd;
    int nonempty = 0;
    for (int b = 0; b < log.n_batches; ++b) {
        bn.push_back(log.epoch_batch_sum[idx][b][p]);
        bd.push_back(static_cast<double>(log.epoch_batch_count[idx][b]));
        if (log.epoch_batch_count[idx][b] > 0) nonempty++;
    }
    if (nonempty < 20) throw InsufficientSamples("fewer than 20 nonempty batches");
    return Estimate{log.epoch_sum[idx][p] / static_cast<double>(c), batch_se(bn, bd), c};
}

Estimate empirical_time_stationary_pgf(const EpochLog& log, const Point& z) {
    if (is_ones(z)) return Estimate{Complex(1.0, 0.0), 0.0, log.cycles};
    const int p = find_probe(log.probes.z, z);
    if (p < 0) throw UnknownProbe("z point was not registered before simulation");
    std::vector<Complex> bn;
    for (int b = 0; b < log.n_batches; ++b) bn.push_back(log.z_batch[b][p]);
    return Estimate{log.z_integral[p] / log.total_time, batch_se(bn, log.batch_time), log.cycles};
}

Estimate empirical_workload_lst(const EpochLog& log, const Point& omega, bool switchover_only) {
    bool zero = true;
    for (const Complex& w : omega)
        if (w != Complex(0.0, 0.0)) zero = false;
    if (zero) return Estimate{Complex(1.0, 0.0), 0.0, log.cycles};
    const int p = find_probe(log.probes.omega, omega);
    if (p < 0) throw UnknownProbe("omega point was not registered before simulation");
    std::vector<Complex> bn;
    if (switchover_only) {
        if (log.switch_time <= 0.0)
            throw InsufficientSamples("no switchover time observed");
        for (int b = 0; b < log.n_batches; ++b) bn.push_back(log.w_switch_batch[b][p]);
        return Estimate{log.w_switch_integral[p] / log.switch_time,
                        batch_se(bn, log.batch_switch_time), log.cycles};
    }
    for (int b = 0; b < log.n_batches; ++b) bn.push_back(log.w_batch[b][p]);
    return Estimate{log.w_integral[p] / log.total_time, batch_se(bn, log.batch_time), log.cycles};
}

Estimate empirical_mean_cycle(const EpochLog& log) {
    std::vector<Complex> bn;
    std::vector<double> bd;
    for (int b = 0; b < log.n_batches; ++b) {
        bn.push_back(Complex(log.batch_time[b], 0.0));
        bd.push_back(static_cast<double>(log.batch_cycles[b]));
    }
    return Estimate{Complex(log.total_time / static_cast<double>(log.cycles), 0.0),
                    batch_se(bn, bd), log.cycles};
}

namespace {

nlohmann::json point_to_json(const Point& p) {
    nlohmann::json out = nlohmann::json::array();
    for (const Complex& v : p) out.push_back({v.real(), v.imag()});
    return out;
}

nlohmann::json estimate_to_json(const Estimate& e) {
    return nlohmann::json{{"re", e.value.real()},
                          {"im", e.value.imag()},
                          {"se", e.se},
                          {"samples", e.samples}};
}

}  // namespace

nlohmann::json EpochLog::to_json() const {
    using nlohmann::json;
    json out;
    out["version"] = 1;
    out["seed"] = seed;
    out["warmup_cycles"] = warmup_cycles;
    out["measured_cycles"] = measured_cycles;
    out["n_batches"] = n_batches;
    out["n_queues"] = n_queues;
    out["cycles"] = cycles;
    out["total_time"] = total_time;
    out["switch_time"] = switch_time;
    out["mean_cycle"] = estimate_to_json(empirical_mean_cycle(*this));
    out["max_exhaustive_residual"] = max_exhaustive_residual;

    json zp = json::array();
    for (const auto& p : probes.z) zp.push_back(point_to_json(p));
    out["z_probes"] = zp;
    json wp = json::array();
    for (const auto& p : probes.omega) wp.push_back(point_to_json(p));
    out["omega_probes"] = wp;

    static const char* class_names[] = {"visit_begin", "visit_complete", "service_begin",
                                        "service_complete", "arrival"};
    json epochs;
    for (int c = 0; c < kEpochClasses; ++c) {
        json per_class = json::array();
        for (int q = 0; q < n_queues; ++q) {
            json jq;
            jq["count"] = epoch_count[c * n_queues + q];
            json est = json::array();
            for (std::size_t p = 0; p < probes.z.size(); ++p) {
                try {
                    est.push_back(estimate_to_json(
                        empirical_pgf(*this, static_cast<EpochClass>(c), q, probes.z[p])));
                } catch (const Error&) {
                    est.push_back(nullptr);
                }
            }
            jq["pgf"] = est;
            per_class.push_back(jq);
        }
        epochs[class_names[c]] = per_class;
    }
    out["epochs"] = epochs;

    json ts = json::array();
    for (const auto& p : probes.z)
        ts.push_back(estimate_to_json(empirical_time_stationary_pgf(*this, p)));
    out["time_stationary_pgf"] = ts;
    json wl = json::array(), wls = json::array();
    for (const auto& p : probes.omega) {
        wl.push_back(estimate_to_json(empirical_workload_lst(*this, p, false)));
        if (switch_time > 0.0)
            wls.push_back(estimate_to_json(empirical_workload_lst(*this, p, true)));
        else
            wls.push_back(nullptr);
    }
    out["workload_lst"] = wl;
    out["switch_workload_lst"] = wls;

    json per_queue = json::array();
    for (int q = 0; q < n_queues; ++q) {
        per_queue.push_back(json{{"visit_begins", visit_begins[q]},
                                 {"served", served[q]},
                                 {"busy_time", busy_time[q]},
                                 {"mean_served_per_visit",
                                  visit_begins[q] > 0
                                      ? static_cast<double>(served[q]) / visit_begins[q]
                                      : 0.0}});
    }
    out["queues"] = per_queue;
    return out;
}

}  // namespace polling

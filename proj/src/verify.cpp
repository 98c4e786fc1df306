#include "polling/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "polling/errors.hpp"
#include "polling/probes.hpp"

namespace polling {

namespace {

double zscore(Complex diff, double se) {
    const double d = std::abs(diff);
    if (se > 0.0) return d / se;
    return d < 1e-12 ? 0.0 : std::numeric_limits<double>::infinity();
}

double zscore2(Complex diff, double se_a, double se_b) {
    return zscore(diff, std::sqrt(se_a * se_a + se_b * se_b));
}

CheckResult identity_check(std::string name, std::string equation, int points, double max_res,
                           double tol) {
    CheckResult c;
    c.name = std::move(name);
    c.equation = std::move(equation);
    c.kind = "identity";
    c.points = points;
    c.max_residual = max_res;
    c.tolerance = tol;
    c.pass = max_res < tol;
    return c;
}

CheckResult oracle_check(std::string name, std::string equation, int points, double max_z) {
    CheckResult c;
    c.name = std::move(name);
    c.equation = std::move(equation);
    c.kind = "oracle";
    c.points = points;
    c.max_residual = max_z;
    c.tolerance = 3.0;
    c.pass = max_z < 3.0;
    return c;
}

CheckResult skipped_check(std::string name, std::string equation, std::string note) {
    CheckResult c;
    c.name = std::move(name);
    c.equation = std::move(equation);
    c.kind = "identity";
    c.skipped = true;
    c.pass = true;
    c.note = std::move(note);
    return c;
}

}  // namespace

std::shared_ptr<EmpiricalPgfSource> make_empirical_source(const PollingModel& model,
                                                          const EpochLog& log) {
    const Estimate ec = empirical_mean_cycle(log);
    std::vector<PgfBundle> bundles;
    for (const auto& z : log.probes.z) {
        PgfBundle b;
        b.point = z;
        b.mean_cycle = ec.value.real();
        bool ok = true;
        for (int i = 0; i < model.size() && ok; ++i) {
            try {
                b.vb.push_back(empirical_pgf(log, EpochClass::VisitBegin, i, z).value);
                b.vc.push_back(empirical_pgf(log, EpochClass::VisitComplete, i, z).value);
                b.sb.push_back(empirical_pgf(log, EpochClass::ServiceBegin, i, z).value);
                b.sc.push_back(empirical_pgf(log, EpochClass::ServiceComplete, i, z).value);
                b.gamma.push_back(log.served[i] > 0
                                      ? static_cast<double>(log.visit_begins[i]) / log.served[i]
                                      : 0.0);
            } catch (const Error&) {
                ok = false;
            }
        }
        if (ok) bundles.push_back(std::move(b));
    }
    return std::make_shared<EmpiricalPgfSource>(std::move(bundles), ec.value.real());
}

VerificationReport run_verification(const PollingModel& model, const VerifyOptions& opt) {
    const auto t_start = std::chrono::steady_clock::now();
    VerificationReport report;
    report.seed = opt.seed;
    report.cycles = opt.cycles;
    report.tolerance = opt.tolerance;

    const int n = model.size();
    const ProbeSet probes = default_probe_set(n);
    const bool branching = model.all_branching();
    const double tol = opt.tolerance;

    std::unique_ptr<StationaryEvaluator> analytic;
    std::vector<PgfBundle> bundles;
    if (branching) {
        analytic = std::make_unique<StationaryEvaluator>(StationaryEvaluator::analytic(model));
        const auto& eng = dynamic_cast<const AnalyticPgfSource&>(analytic->source()).engine();

        for (const auto& z : probes.z) bundles.push_back(eng.bundle(z));

        // Eisenberg relation, with optional fault injection into V_c1.
        double r_eis = 0.0, r_sc = 0.0, r_sb = 0.0, r_chain = 0.0, r_mod = 0.0;
        for (const auto& b : bundles) {
            const Complex sig = eng.sigma(b.point);
            for (int i = 0; i < n; ++i) {
                const Complex vc_i = b.vc[i] + (i == 0 ? opt.tamper_vc1 : 0.0);
                r_eis = std::max(r_eis, std::abs(b.gamma[i] * (b.vb[i] - vc_i) -
                                                 (b.sb[i] - b.sc[i])));
                const Complex bi = model.queue(i).service.lst(sig);
                r_sc = std::max(r_sc, std::abs(b.sc[i] * b.point[i] - b.sb[i] * bi));
                r_sb = std::max(r_sb, std::abs(b.sb[i] * (b.point[i] - bi) -
                                               b.gamma[i] * b.point[i] * (b.vb[i] - b.vc[i])));
                for (const Complex& v : {b.vb[i], b.vc[i], b.sb[i], b.sc[i]})
                    r_mod = std::max(r_mod, std::abs(v) - 1.0);
                if (!model.zero_switchover()) {
                    const Complex pred = b.vc[i] * model.switchover(i).lst(sig);
                    r_chain = std::max(r_chain, std::abs(b.vb[(i + 1) % n] - pred));
                } else if (i + 1 < n) {
                    r_chain = std::max(r_chain, std::abs(b.vb[i + 1] - b.vc[i]));
                } else {
                    const Complex pred =
                        b.vc[n - 1] - eng.vb1_at_zero() / model.total_lambda() * sig;
                    r_chain = std::max(r_chain, std::abs(b.vb[0] - pred));
                }
            }
        }
        const int np = static_cast<int>(bundles.size());
        report.checks.push_back(identity_check("eisenberg-relation", "1,3", np, r_eis, tol));
        report.checks.push_back(
            identity_check("service-complete-from-begin", "4", np, r_sc, tol));
        report.checks.push_back(identity_check("service-begin-from-visits", "5", np, r_sb, tol));
        report.checks.push_back(identity_check(
            model.zero_switchover() ? "zero-switchover-chaining" : "switchover-chaining",
            model.zero_switchover() ? "7,8" : "6", np, r_chain, tol));
        report.checks.push_back(
            identity_check("pgf-modulus-bound", "unit-polydisk", np, r_mod, tol));

        // Both queue-length forms of the time-stationary PGF must agree.
        double r_forms = 0.0;
        for (const auto& z : probes.z)
            r_forms = std::max(r_forms, std::abs(analytic->queue_length_pgf(z) -
                                                 analytic->queue_length_pgf_visit_form(z)));
        report.checks.push_back(
            identity_check("queue-length-forms-agree", "9=10", static_cast<int>(probes.z.size()),
                           r_forms, tol));

        // Total-workload decomposition.
        double r_dec = 0.0;
        for (const auto& w : probes.omega) {
            const Complex total = analytic->workload_lst(w);
            Complex pred = mg1_workload_lst(model, w[0]);
            if (!model.zero_switchover()) pred *= analytic->switch_workload_lst(w[0]);
            r_dec = std::max(r_dec, std::abs(total - pred));
        }
        report.checks.push_back(identity_check(
            model.zero_switchover() ? "workload-reduces-to-mg1" : "workload-decomposition", "14",
            static_cast<int>(probes.omega.size()), r_dec, tol));
    } else {
        for (const char* name : {"eisenberg-relation", "service-complete-from-begin",
                                 "service-begin-from-visits", "switchover-chaining",
                                 "queue-length-forms-agree", "workload-decomposition"})
            report.checks.push_back(skipped_check(
                name, "-", "analytic visit PGFs unavailable for non-branching disciplines"));
    }

    if (opt.with_simulation) {
        SimConfig cfg{model, opt.seed, opt.warmup_cycles, opt.cycles, {}};
        const EpochLog log = simulate(cfg, probes);
        const Estimate ec_est = empirical_mean_cycle(log);

        if (branching) {
            double z_epoch = 0.0, z_q = 0.0, z_w = 0.0;
            for (std::size_t p = 0; p < probes.z.size(); ++p) {
                const auto& b = bundles[p];
                for (int i = 0; i < n; ++i) {
                    auto e_vb = empirical_pgf(log, EpochClass::VisitBegin, i, probes.z[p]);
                    auto e_vc = empirical_pgf(log, EpochClass::VisitComplete, i, probes.z[p]);
                    auto e_sc = empirical_pgf(log, EpochClass::ServiceComplete, i, probes.z[p]);
                    z_epoch = std::max(z_epoch, zscore(b.vb[i] - e_vb.value, e_vb.se));
                    z_epoch = std::max(z_epoch, zscore(b.vc[i] - e_vc.value, e_vc.se));
                    z_epoch = std::max(z_epoch, zscore(b.sc[i] - e_sc.value, e_sc.se));
                }
                auto e_q = empirical_time_stationary_pgf(log, probes.z[p]);
                z_q = std::max(z_q, zscore(analytic->queue_length_pgf(probes.z[p]) - e_q.value,
                                           e_q.se));
            }
            for (const auto& w : probes.omega) {
                auto e_w = empirical_workload_lst(log, w);
                z_w = std::max(z_w, zscore(analytic->workload_lst(w) - e_w.value, e_w.se));
            }
            report.checks.push_back(oracle_check("epoch-pgfs-vs-simulation", "5,6",
                                                 static_cast<int>(probes.z.size()), z_epoch));
            report.checks.push_back(oracle_check("queue-length-pgf-vs-simulation", "10",
                                                 static_cast<int>(probes.z.size()), z_q));
            report.checks.push_back(oracle_check("workload-lst-vs-simulation", "thm4.1",
                                                 static_cast<int>(probes.omega.size()), z_w));

            if (!model.zero_switchover()) {
                double z_sw = 0.0;
                for (const auto& w : probes.omega) {
                    auto e_sw = empirical_workload_lst(log, w, true);
                    z_sw = std::max(z_sw,
                                    zscore(analytic->switch_workload_lst(w[0]) - e_sw.value,
                                           e_sw.se));
                }
                report.checks.push_back(oracle_check("switch-workload-vs-simulation", "14",
                                                     static_cast<int>(probes.omega.size()),
                                                     z_sw));
            }
        }

        // Theorem 3.1 holds regardless of the discipline: the service-
        // completion form with simulator-estimated S_c must reproduce the
        // directly estimated time-stationary PGF.
        {
            auto emp_src = make_empirical_source(model, log);
            StationaryEvaluator emp_eval(model, emp_src);
            double z_di = 0.0;
            int used = 0;
            for (const auto& z : probes.z) {
                PgfBundle b;
                try {
                    b = emp_src->bundle(z);
                } catch (const UnknownProbe&) {
                    continue;
                }
                ++used;
                const Complex q_formula = emp_eval.queue_length_pgf(z);
                const auto e_direct = empirical_time_stationary_pgf(log, z);
                // Propagate the S_c standard errors through the convex weights.
                Complex den = 0.0;
                for (int i = 0; i < n; ++i) den += model.lambda(i) * (1.0 - z[i]);
                double var = 0.0;
                for (int i = 0; i < n; ++i) {
                    const double wmag =
                        std::abs(model.lambda(i) * (1.0 - z[i]) / den);
                    const double se_i =
                        empirical_pgf(log, EpochClass::ServiceComplete, i, z).se;
                    var += wmag * wmag * se_i * se_i;
                }
                z_di = std::max(z_di,
                                zscore2(q_formula - e_direct.value, std::sqrt(var), e_direct.se));
            }
            report.checks.push_back(
                oracle_check("discipline-independent-queue-length", "10", used, z_di));
        }

        // 1/gamma_i = lambda_i E C, with gamma estimated from epoch counts.
        {
            double z_g = 0.0;
            for (int i = 0; i < n; ++i) {
                std::vector<Complex> bn;
                std::vector<double> bd;
                const int sb_idx = static_cast<int>(EpochClass::ServiceBegin) * n + i;
                const int vb_idx = static_cast<int>(EpochClass::VisitBegin) * n + i;
                for (int b = 0; b < log.n_batches; ++b) {
                    const double visits =
                        static_cast<double>(log.epoch_batch_count[vb_idx][b]);
                    const double begins =
                        static_cast<double>(log.epoch_batch_count[sb_idx][b]);
                    const double cyc = static_cast<double>(log.batch_cycles[b]);
                    if (visits <= 0.0 || cyc <= 0.0) continue;
                    bn.push_back(begins / visits -
                                 model.lambda(i) * log.batch_time[b] / cyc);
                    bd.push_back(1.0);
                }
                if (bn.size() < 2) continue;
                Complex mean = 0.0;
                for (auto& v : bn) mean += v;
                mean /= static_cast<double>(bn.size());
                double var = 0.0;
                for (auto& v : bn) var += std::norm(v - mean);
                var /= static_cast<double>(bn.size() - 1);
                const double se = std::sqrt(var / static_cast<double>(bn.size()));
                z_g = std::max(z_g, zscore(mean, se));
            }
            report.checks.push_back(oracle_check("mean-served-per-visit", "gamma", n, z_g));
        }

        if (model.zero_switchover()) {
            const Point origin(n, Complex(0.0, 0.0));
            auto e_vb1 = empirical_pgf(log, EpochClass::VisitBegin, 0, origin);
            auto e_vcn = empirical_pgf(log, EpochClass::VisitComplete, n - 1, origin);
            const double z_half =
                zscore2(e_vb1.value - 0.5 * e_vcn.value, e_vb1.se, 0.5 * e_vcn.se);
            report.checks.push_back(oracle_check("empty-system-convention", "8", 1, z_half));

            const double denom = model.total_lambda() * (1.0 - model.total_rho());
            const double z_ec = zscore2(ec_est.value - e_vb1.value / denom, ec_est.se,
                                        e_vb1.se / denom);
            report.checks.push_back(oracle_check("cycle-length-from-emptiness", "2", 1, z_ec));
        }
    }

    report.runtime_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return report;
}

bool VerificationReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

nlohmann::json VerificationReport::to_json() const {
    using nlohmann::json;
    json out;
    out["version"] = 1;
    out["seed"] = seed;
    out["cycles"] = cycles;
    out["tolerance"] = tolerance;
    // runtime_sec is reported on stdout only, so identical inputs always
    // serialize to byte-identical reports.
    out["all_pass"] = all_pass();
    json jc = json::array();
    for (const auto& c : checks) {
        jc.push_back(json{{"name", c.name},
                          {"equation", c.equation},
                          {"kind", c.kind},
                          {"points", c.points},
                          {"max_residual", c.max_residual},
                          {"tolerance", c.tolerance},
                          {"pass", c.pass},
                          {"skipped", c.skipped},
                          {"note", c.note}});
    }
    out["checks"] = jc;
    return out;
}

void VerificationReport::print_table(std::ostream& os) const {
    {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "seed=%llu cycles=%ld tolerance=%g runtime=%.2fs",
                      static_cast<unsigned long long>(seed), cycles, tolerance, runtime_sec);
        os << buf << '\n';
    }
    for (const auto& c : checks) {
        char buf[256];
        if (c.skipped) {
            std::snprintf(buf, sizeof(buf), "[SKIP] %-38s eq(%s)  %s", c.name.c_str(),
                          c.equation.c_str(), c.note.c_str());
        } else {
            std::snprintf(buf, sizeof(buf), "[%s] %-38s eq(%s)  %-8s points=%-3d max=%.3e tol=%g",
                          c.pass ? "PASS" : "FAIL", c.name.c_str(), c.equation.c_str(),
                          c.kind.c_str(), c.points, c.max_residual, c.tolerance);
        }
        os << buf << '\n';
    }
}

}  // namespace polling

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "polling/errors.hpp"
#include "polling/simulator.hpp"
#include "polling/stationary.hpp"

using namespace polling;
using doctest::Approx;

namespace {

ProbeSet small_probes(int n) {
    ProbeSet p;
    p.z.push_back(Point(n, Complex(0.5, 0.0)));
    p.z.push_back(Point(n, Complex(0.0, 0.0)));
    p.z.push_back(ones(n));
    p.omega.push_back(Point(n, Complex(1.0, 0.0)));
    return p;
}

double zscore(const Estimate& e, Complex truth) {
    const double diff = std::abs(e.value - truth);
    // degenerate estimators (zero batch variance) must be exact
    if (e.se == 0.0) return diff < 1e-12 ? 0.0 : std::numeric_limits<double>::infinity();
    return diff / e.se;
}

}  // namespace

TEST_CASE("runs with the same seed are bit-identical") {
    SimConfig cfg{fixtures::canonical(), 11, 200, 2000, ""};
    auto probes = small_probes(2);
    auto a = simulate(cfg, probes);
    auto b = simulate(cfg, probes);
    CHECK(a.to_json().dump() == b.to_json().dump());
    SimConfig other = cfg;
    other.seed = 12;
    CHECK(simulate(other, probes).to_json().dump() != a.to_json().dump());
}

TEST_CASE("epoch bookkeeping is consistent") {
    SimConfig cfg{fixtures::canonical(), 3, 200, 4000, ""};
    auto log = simulate(cfg, small_probes(2));
    CHECK(log.cycles == 4000);
    for (int i = 0; i < 2; ++i) {
        CHECK(log.count(EpochClass::VisitBegin, i) == log.count(EpochClass::VisitComplete, i));
        CHECK(log.count(EpochClass::ServiceBegin, i) ==
              log.count(EpochClass::ServiceComplete, i));
        CHECK(log.count(EpochClass::ServiceBegin, i) == log.served[i]);
        CHECK(log.visit_begins[i] == log.count(EpochClass::VisitBegin, i));
    }
    // every cycle starts with a Q_1 visit
    CHECK(log.count(EpochClass::VisitBegin, 0) == log.cycles);
    double bt = 0.0;
    for (double t : log.batch_time) bt += t;
    CHECK(bt == Approx(log.total_time).epsilon(1e-12));
    CHECK(log.max_exhaustive_residual < 1e-9);  // queue 0 is exhaustive
}

TEST_CASE("M/M/1 estimates agree with the closed forms") {
    SimConfig cfg{fixtures::mm1(), 5, 500, 40000, ""};
    auto probes = small_probes(1);
    auto log = simulate(cfg, probes);

    Point z5 = {Complex(0.5, 0.0)};
    Point w1 = {Complex(1.0, 0.0)};

    auto sc = empirical_pgf(log, EpochClass::ServiceComplete, 0, z5);
    CHECK(zscore(sc, Complex(2.0 / 3.0, 0.0)) < 4.0);

    auto vb0 = empirical_pgf(log, EpochClass::VisitBegin, 0, {Complex(0.0, 0.0)});
    CHECK(zscore(vb0, Complex(0.5, 0.0)) < 4.0);  // empty-system probability

    auto q = empirical_time_stationary_pgf(log, z5);
    CHECK(zscore(q, oracles::pk_queue_pgf(0.5, Distribution::exponential(1.0), 0.5)) < 4.0);

    auto w = empirical_workload_lst(log, w1);
    CHECK(zscore(w, Complex(2.0 / 3.0, 0.0)) < 4.0);

    auto ec = empirical_mean_cycle(log);
    CHECK(std::abs(ec.value.real() - 2.0) / ec.se < 4.0);

    // utilization conservation: fraction of time serving equals rho
    CHECK(log.busy_time[0] / log.total_time == Approx(0.5).epsilon(0.02));
}

TEST_CASE("canonical model estimates agree with the transform engine") {
    auto m = fixtures::canonical();
    SimConfig cfg{m, 9, 500, 40000, ""};
    auto probes = small_probes(2);
    probes.z.push_back({Complex(0.0, 0.0), Complex(1.0, 0.0)});
    auto log = simulate(cfg, probes);
    TransformEngine eng(m);
    auto ev = StationaryEvaluator::analytic(m);

    Point z5(2, Complex(0.5, 0.0));
    auto truth = eng.bundle(z5);
    for (int i = 0; i < 2; ++i) {
        CHECK(zscore(empirical_pgf(log, EpochClass::VisitBegin, i, z5), truth.vb[i]) < 4.0);
        CHECK(zscore(empirical_pgf(log, EpochClass::VisitComplete, i, z5), truth.vc[i]) < 4.0);
        CHECK(zscore(empirical_pgf(log, EpochClass::ServiceComplete, i, z5), truth.sc[i]) < 4.0);
    }
    CHECK(zscore(empirical_time_stationary_pgf(log, z5), ev.queue_length_pgf(z5)) < 4.0);

    Point w1(2, Complex(1.0, 0.0));
    CHECK(zscore(empirical_workload_lst(log, w1), ev.workload_lst(w1)) < 4.0);
    CHECK(zscore(empirical_workload_lst(log, w1, true), ev.switch_workload_lst(1.0)) < 4.0);

    // PASTA: arrival epochs sample the time-stationary law
    auto pasta = empirical_pgf(log, EpochClass::Arrival, 0, z5);
    CHECK(zscore(pasta, ev.queue_length_pgf(z5)) < 4.0);

    // visit frequency: served per cycle equals lambda_i E C
    auto ec = empirical_mean_cycle(log);
    for (int i = 0; i < 2; ++i) {
        double per_cycle = double(log.served[i]) / double(log.cycles);
        CHECK(per_cycle == Approx(m.lambda(i) * ec.value.real()).epsilon(0.05));
    }

    // gated queue 1 is not empty at visit completions, exhaustive queue 0 is
    auto vc0 = empirical_pgf(log, EpochClass::VisitComplete, 0,
                             {Complex(0.0, 0.0), Complex(1.0, 0.0)});
    CHECK(vc0.value.real() == Approx(1.0).epsilon(1e-9));
}

TEST_CASE("k-limited simulation runs and respects the limit") {
    SimConfig cfg{fixtures::symmetric_1limited(), 2, 200, 8000, ""};
    auto log = simulate(cfg, small_probes(2));
    for (int i = 0; i < 2; ++i)
        CHECK(log.served[i] <= log.visit_begins[i]);  // at most k=1 per visit
    auto ec = empirical_mean_cycle(log);
    CHECK(ec.value.real() > 0.6);  // >= total switchover time
}

TEST_CASE("probes at one are exact and unknown probes throw") {
    SimConfig cfg{fixtures::canonical(), 1, 100, 2000, ""};
    auto log = simulate(cfg, small_probes(2));
    auto e = empirical_pgf(log, EpochClass::ServiceBegin, 0, ones(2));
    CHECK(e.value == Complex(1.0, 0.0));
    CHECK(e.se == 0.0);
    CHECK_THROWS_AS(empirical_pgf(log, EpochClass::ServiceBegin, 0,
                                  {Complex(0.123, 0.0), Complex(0.5, 0.0)}),
                    UnknownProbe);
    CHECK_THROWS_AS(empirical_workload_lst(log, {Complex(9.0, 0.0), Complex(9.0, 0.0)}),
                    UnknownProbe);
}

TEST_CASE("insufficient data is reported, not silently returned") {
    SimConfig cfg{fixtures::canonical(), 1, 10, 64, ""};
    auto log = simulate(cfg, small_probes(2));
    CHECK_THROWS_AS(empirical_pgf(log, EpochClass::ServiceBegin, 0, Point(2, Complex(0.5, 0.0))),
                    InsufficientSamples);
    SimConfig bad = cfg;
    bad.measured_cycles = 16;
    CHECK_THROWS_AS(simulate(bad, small_probes(2)), ParamError);
}

TEST_CASE("standard errors shrink like one over sqrt cycles") {
    auto probes = small_probes(1);
    Point z5 = {Complex(0.5, 0.0)};
    SimConfig small{fixtures::mm1(), 21, 200, 8000, ""};
    SimConfig big = small;
    big.measured_cycles = 32000;
    auto es = empirical_pgf(simulate(small, probes), EpochClass::ServiceComplete, 0, z5);
    auto eb = empirical_pgf(simulate(big, probes), EpochClass::ServiceComplete, 0, z5);
    double ratio = es.se / eb.se;  // expect ~2 for a 4x sample increase
    CHECK(ratio > 1.3);
    CHECK(ratio < 3.0);
}

TEST_CASE("trace file is written when requested") {
    SimConfig cfg{fixtures::mm1(), 4, 10, 64, "/tmp/polling_trace_test.jsonl"};
    auto log = simulate(cfg, small_probes(1));
    (void)log;
    std::ifstream f("/tmp/polling_trace_test.jsonl");
    REQUIRE(f.good());
    std::string line;
    long lines = 0;
    while (std::getline(f, line)) ++lines;
    CHECK(lines > 0);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "polling/errors.hpp"
#include "polling/probes.hpp"
#include "polling/transform_engine.hpp"

using namespace polling;
using doctest::Approx;

namespace {

std::vector<Point> random_points(int n, int count, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<Point> pts;
    for (int t = 0; t < count; ++t) {
        Point z(n);
        for (int i = 0; i < n; ++i) {
            double r = 0.9 * std::sqrt(rng.uniform());
            double a = 2.0 * M_PI * rng.uniform();
            z[i] = std::polar(r, a);
        }
        pts.push_back(z);
    }
    return pts;
}

}  // namespace

TEST_CASE("sigma") {
    TransformEngine eng(fixtures::canonical());
    Point z = {Complex(0.5, 0.0), Complex(0.0, 0.5)};
    Complex expect = 0.3 * (1.0 - z[0]) + 0.2 * (1.0 - z[1]);
    CHECK(std::abs(eng.sigma(z) - expect) < 1e-15);
    CHECK(std::abs(eng.sigma(ones(2))) < 1e-15);
}

TEST_CASE("busy period fixed point") {
    auto exp1 = Distribution::exponential(1.0);
    CHECK(busy_period_lst(0.5, exp1, 0.0) == Complex(1.0, 0.0));
    // M/M/1 closed form: smaller quadratic root
    Complex got = busy_period_lst(0.5, exp1, 1.0);
    CHECK(got.real() == Approx(2.5 - std::sqrt(4.25)).epsilon(1e-12));
    CHECK(got.imag() == Approx(0.0));
    for (double w : {0.1, 0.5, 2.0})
        CHECK(std::abs(busy_period_lst(0.5, exp1, w) -
                       oracles::mm1_busy_period(0.5, 1.0, w)) < 1e-12);
    // non-exponential service vs an independent full-iteration oracle
    auto erl = Distribution::erlang(2, 4.0);
    for (Complex w : {Complex(0.3, 0.0), Complex(1.0, 0.7), Complex(0.05, -0.4)})
        CHECK(std::abs(busy_period_lst(0.6, erl, w) -
                       oracles::brute_force_busy_period(0.6, erl, w)) < 1e-12);
    // an absurdly small cap must trip the convergence guard
    CHECK_THROWS_AS(busy_period_lst(0.5, exp1, 1e-9, 1e-16, 2), ConvergenceError);
}

TEST_CASE("branching maps") {
    auto m = fixtures::canonical();
    TransformEngine eng(m);
    Point z = {Complex(0.8, 0.0), Complex(0.6, 0.1)};

    // gated (queue 1): z_1 := B_1(Sigma(z)), other coordinates unchanged
    Point g = eng.branching_map(1, z);
    CHECK(g[0] == z[0]);
    Complex expect = m.queue(1).service.lst(eng.sigma(z));
    CHECK(std::abs(g[1] - expect) < 1e-14);

    // exhaustive (queue 0): z_0 := theta_0(sum_{j != 0} lambda_j (1 - z_j))
    Point e = eng.branching_map(0, z);
    CHECK(e[1] == z[1]);
    Complex w_other = 0.2 * (1.0 - z[1]);
    CHECK(std::abs(e[0] - busy_period_lst(0.3, m.queue(0).service, w_other)) < 1e-12);

    // both maps fix the all-ones point
    CHECK(is_ones(eng.branching_map(0, ones(2))));
    CHECK(is_ones(eng.branching_map(1, ones(2))));
}

TEST_CASE("bundle at ones is exactly one") {
    for (const auto& m : {fixtures::canonical(), fixtures::canonical_zero()}) {
        TransformEngine eng(m);
        auto b = eng.bundle(ones(2));
        for (int i = 0; i < 2; ++i) {
            CHECK(b.vb[i] == Complex(1.0, 0.0));
            CHECK(b.vc[i] == Complex(1.0, 0.0));
            CHECK(b.sb[i] == Complex(1.0, 0.0));
            CHECK(b.sc[i] == Complex(1.0, 0.0));
        }
    }
}

TEST_CASE("mean cycle and visit frequencies") {
    TransformEngine eng(fixtures::canonical());
    CHECK(eng.mean_cycle() == Approx(2.0));
    CHECK(eng.gamma(0) == Approx(1.0 / 0.6));
    CHECK(eng.gamma(1) == Approx(2.5));

    TransformEngine zeng(fixtures::canonical_zero());
    CHECK(zeng.mean_cycle() == Approx(zeng.vb1_at_zero() / (0.5 * 0.5)));
    CHECK_THROWS_AS(eng.vb1_at_zero(), DomainError);
}

TEST_CASE("semi-regenerative identities at random interior points") {
    for (const auto& m : {fixtures::canonical(), fixtures::canonical_zero()}) {
        TransformEngine eng(m);
        const int n = m.size();
        for (const auto& z : random_points(n, 25, 99)) {
            auto b = eng.bundle(z);
            Complex sig = eng.sigma(z);
            for (int i = 0; i < n; ++i) {
                double gi = eng.gamma(i);
                // the visit/service balance relation
                Complex lhs = gi * b.vb[i] + b.sc[i];
                Complex rhs = b.sb[i] + gi * b.vc[i];
                CHECK(std::abs(lhs - rhs) < 1e-9);
                // completions are beginnings aged by one service
                Complex bt = m.queue(i).service.lst(sig);
                CHECK(std::abs(b.sc[i] * z[i] - b.sb[i] * bt) < 1e-9);
                // visit completion = visit beginning at the branched point
                Complex vc_direct = eng.visit_begin_pgf(i, eng.branching_map(i, z));
                CHECK(std::abs(b.vc[i] - vc_direct) < 1e-12);
                // chaining into the next visit beginning
                Complex next = b.vb[(i + 1) % n];
                if (m.zero_switchover()) {
                    if (i + 1 < n) {
                        CHECK(std::abs(next - b.vc[i]) < 1e-12);
                    } else {
                        Complex wrap = b.vc[n - 1] -
                                       (eng.vb1_at_zero() / m.total_lambda()) * eng.sigma(z);
                        CHECK(std::abs(b.vb[0] - wrap) < 1e-9);
                    }
                } else {
                    Complex st = m.switchover(i).lst(sig);
                    CHECK(std::abs(next - b.vc[i] * st) < 1e-12);
                }
                // probability generating functions stay inside the unit disc
                for (Complex v : {b.vb[i], b.vc[i], b.sb[i], b.sc[i]})
                    CHECK(std::abs(v) <= 1.0 + 1e-12);
            }
        }
    }
}

TEST_CASE("M/M/1 reduction of the zero-switchover engine") {
    TransformEngine eng(fixtures::mm1());
    CHECK(eng.vb1_at_zero() == Approx(0.5).epsilon(1e-12));
    CHECK(eng.mean_cycle() == Approx(2.0).epsilon(1e-12));

    // the visit beginning finds the system empty half the time; the cycle is
    // one idle period (Exp(lambda)) plus one busy period
    Point z = {Complex(0.5, 0.0)};
    auto b = eng.bundle(z);

    // service completions see the departure-epoch (= PK) distribution
    Complex pk = oracles::pk_queue_pgf(0.5, Distribution::exponential(1.0), z[0]);
    CHECK(std::abs(b.sc[0] - pk) < 1e-9);
    CHECK(b.sc[0].real() == Approx(2.0 / 3.0).epsilon(1e-9));

    // service beginnings vs the independent embedded-chain oracle
    auto sb_dist = oracles::mm1_service_begin_dist(0.5, 1.0, 200);
    CHECK(std::abs(b.sb[0] - oracles::pgf_of(sb_dist, z[0])) < 1e-8);
}

TEST_CASE("removable singularity in the service-begin law") {
    auto m = fixtures::canonical();
    TransformEngine eng(m);
    // place z on the singular manifold z_0 = B_0(Sigma(z)) of the exhaustive
    // queue: its fixed point at given z_1 is the busy-period LST
    Complex z1(0.7, 0.0);
    Complex z0 = busy_period_lst(0.3, m.queue(0).service, 0.2 * (1.0 - z1));
    Point z = {z0, z1};
    CHECK(std::abs(z0 - m.queue(0).service.lst(eng.sigma(z))) < 1e-12);

    Complex at = eng.service_begin_pgf(0, z);
    CHECK(std::abs(at) <= 1.0 + 1e-9);
    // the extrapolated value must continue the nearby regular values
    Point znear = z;
    znear[0] += 1e-3;
    Complex near = eng.service_begin_pgf(0, znear);
    CHECK(std::abs(at - near) < 5e-3);
}

TEST_CASE("service completions at z_i = 0 use the rearranged relation") {
    TransformEngine eng(fixtures::canonical());
    Point z = {Complex(0.0, 0.0), Complex(0.4, 0.0)};
    Complex at = eng.service_complete_pgf(0, z);
    Point znear = z;
    znear[0] = 1e-5;
    CHECK(std::abs(at - eng.service_complete_pgf(0, znear)) < 1e-3);
    CHECK(std::abs(at) <= 1.0 + 1e-9);
}

TEST_CASE("results are insensitive to tolerance and cap") {
    EngineConfig tight;
    tight.tol = 0.5e-14;
    tight.cycle_cap = 200000;
    for (const auto& m : {fixtures::canonical_zero(), fixtures::canonical()}) {
        TransformEngine a(m);
        TransformEngine b(m, tight);
        for (const auto& z : random_points(2, 8, 123)) {
            auto ba = a.bundle(z), bb = b.bundle(z);
            for (int i = 0; i < 2; ++i) {
                CHECK(std::abs(ba.vb[i] - bb.vb[i]) < 1e-9);
                CHECK(std::abs(ba.sc[i] - bb.sc[i]) < 1e-9);
            }
        }
    }
}

TEST_CASE("engine rejects unsupported inputs") {
    CHECK_THROWS_AS(TransformEngine(PollingModel(
                        {{0.3, Distribution::exponential(1.0), Discipline::k_limited(2)}},
                        {Distribution::deterministic(0.0)})),
                    UnsupportedDiscipline);
    TransformEngine eng(fixtures::canonical());
    CHECK_THROWS_AS(eng.bundle({Complex(1.5, 0.0), Complex(0.0, 0.0)}), DomainError);
    CHECK_THROWS_AS(eng.bundle({Complex(0.5, 0.0)}), ParamError);
}

TEST_CASE("default probe sets are deterministic and in range") {
    auto za = default_z_probes(2);
    auto zb = default_z_probes(2);
    REQUIRE(za.size() == 20);
    for (std::size_t t = 0; t < za.size(); ++t)
        for (int i = 0; i < 2; ++i) {
            CHECK(za[t][i] == zb[t][i]);
            CHECK(std::abs(za[t][i]) <= 0.95 + 1e-12);
        }
    auto om = default_omega_probes(3);
    REQUIRE(om.size() == 10);
    double prev = 0.0;
    for (const auto& w : om) {
        CHECK(w[0].real() >= 0.1);
        CHECK(w[0].real() <= 5.0);
        CHECK(w[0].imag() == 0.0);
        CHECK(w[0] == w[1]);
        CHECK(w[0].real() >= prev);
        prev = w[0].real();
    }
}

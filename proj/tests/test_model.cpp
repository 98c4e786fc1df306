#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "polling/errors.hpp"
#include "polling/model_io.hpp"

using namespace polling;
using doctest::Approx;

TEST_CASE("model caches traffic quantities") {
    auto m = fixtures::canonical();
    CHECK(m.size() == 2);
    CHECK(m.total_lambda() == Approx(0.5));
    CHECK(m.rho(0) == Approx(0.3));
    CHECK(m.rho(1) == Approx(0.2));
    CHECK(m.total_rho() == Approx(0.5));
    CHECK(m.total_switchover_mean() == Approx(1.0));
    CHECK_FALSE(m.zero_switchover());
    CHECK(m.all_branching());
    CHECK(fixtures::canonical_zero().zero_switchover());
    CHECK_FALSE(fixtures::symmetric_1limited().all_branching());
}

TEST_CASE("construction validation") {
    auto exp1 = Distribution::exponential(1.0);
    auto det0 = Distribution::deterministic(0.0);
    CHECK_THROWS_AS(PollingModel({}, {}), ParamError);
    CHECK_THROWS_AS(PollingModel({{0.0, exp1, Discipline::gated()}}, {det0}), ParamError);
    CHECK_THROWS_AS(PollingModel({{-0.5, exp1, Discipline::gated()}}, {det0}), ParamError);
    // zero-mean service
    CHECK_THROWS_AS(
        PollingModel({{0.5, Distribution::deterministic(0.0), Discipline::gated()}}, {det0}),
        ParamError);
    // switchover count mismatch
    CHECK_THROWS_AS(PollingModel({{0.5, exp1, Discipline::gated()}}, {det0, det0}), ParamError);
    // rho >= 1
    CHECK_THROWS_AS(PollingModel({{1.0, exp1, Discipline::exhaustive()}}, {det0}),
                    StabilityError);
    CHECK_THROWS_AS(Discipline::k_limited(0), ParamError);
}

TEST_CASE("mean cycle, non-zero switchover") {
    auto m = fixtures::canonical();
    CHECK(mean_cycle(m) == Approx(1.0 / 0.5));  // s/(1-rho) = 1/0.5
    CHECK_THROWS_AS(mean_cycle(m, 0.4), ParamError);
}

TEST_CASE("mean cycle, zero switchover") {
    auto m = fixtures::mm1();
    CHECK_THROWS_AS(mean_cycle(m), MissingInputError);
    CHECK(mean_cycle(m, 0.5) == Approx(2.0));  // vb1(0)/(lambda(1-rho))
    CHECK_THROWS_AS(mean_cycle(m, 0.0), ParamError);
    CHECK_THROWS_AS(mean_cycle(m, 1.5), ParamError);
}

TEST_CASE("model json round trip") {
    auto spec = nlohmann::json::parse(R"({
      "queues": [
        {"lambda": 0.3, "service": {"family": "exponential", "rate": 1.0},
         "discipline": "exhaustive"},
        {"lambda": 0.2, "service": {"family": "erlang", "shape": 2, "rate": 4.0},
         "discipline": {"kind": "k-limited", "k": 3}}
      ],
      "switchovers": [
        {"family": "deterministic", "value": 0.5},
        {"family": "hyperexponential", "weights": [0.5, 0.5], "rates": [1.0, 2.0]}
      ]
    })");
    auto m = build_model(spec);
    CHECK(m.size() == 2);
    CHECK(m.queue(1).service.family() == Distribution::Family::Erlang);
    CHECK(m.queue(1).discipline.kind == Discipline::Kind::KLimited);
    CHECK(m.queue(1).discipline.k == 3);
    CHECK(m.switchover(1).mean() == Approx(0.75));

    auto m2 = build_model(model_to_json(m));
    CHECK(m2.size() == m.size());
    CHECK(m2.total_rho() == Approx(m.total_rho()));
    CHECK(m2.switchover(1).mean() == Approx(m.switchover(1).mean()));
}

TEST_CASE("missing switchovers default to zero") {
    auto spec = nlohmann::json::parse(R"({
      "queues": [{"lambda": 0.5, "service": {"family": "exponential", "rate": 1.0},
                  "discipline": "gated"}]
    })");
    CHECK(build_model(spec).zero_switchover());
}

TEST_CASE("parse errors") {
    CHECK_THROWS_AS(build_model(nlohmann::json::parse("{}")), ParseError);
    CHECK_THROWS_AS(build_model(nlohmann::json::parse(
                        R"({"queues": [{"lambda": 0.5,
                             "service": {"family": "normal", "rate": 1.0},
                             "discipline": "gated"}]})")),
                    ParseError);
    CHECK_THROWS_AS(build_model(nlohmann::json::parse(
                        R"({"queues": [{"lambda": 0.5,
                             "service": {"family": "exponential", "rate": 1.0},
                             "discipline": "round-robin"}]})")),
                    ParseError);
    CHECK_THROWS_AS(load_model("/nonexistent/model.json"), ParseError);
}

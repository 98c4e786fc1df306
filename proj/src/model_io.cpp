#include "polling/model_io.hpp"

#include <fstream>

#include "polling/errors.hpp"

namespace polling {

using nlohmann::json;

namespace {

double require_number(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number())
        throw ParseError(std::string("missing or non-numeric field '") + key + "'");
    return j[key].get<double>();
}

Discipline discipline_from_json(const json& j) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "exhaustive") return Discipline::exhaustive();
        if (s == "gated") return Discipline::gated();
        throw ParseError("unknown discipline '" + s + "'");
    }
    if (j.is_object()) {
        if (!j.contains("kind") || !j["kind"].is_string())
            throw ParseError("discipline object needs a string 'kind'");
        const std::string s = j["kind"].get<std::string>();
        if (s == "exhaustive") return Discipline::exhaustive();
        if (s == "gated") return Discipline::gated();
        if (s == "k-limited") {
            if (!j.contains("k") || !j["k"].is_number_integer())
                throw ParseError("k-limited discipline needs integer 'k'");
            return Discipline::k_limited(j["k"].get<int>());
        }
        throw ParseError("unknown discipline kind '" + s + "'");
    }
    throw ParseError("discipline must be a string or an object");
}

json discipline_to_json(const Discipline& d) {
    switch (d.kind) {
        case Discipline::Kind::Exhaustive:
            return "exhaustive";
        case Discipline::Kind::Gated:
            return "gated";
        case Discipline::Kind::KLimited:
            return json{{"kind", "k-limited"}, {"k", d.k}};
    }
    return nullptr;
}

}  // namespace

Distribution distribution_from_json(const json& j) {
    if (!j.is_object() || !j.contains("family") || !j["family"].is_string())
        throw ParseError("distribution needs a string 'family'");
    const std::string fam = j["family"].get<std::string>();
    if (fam == "exponential") return Distribution::exponential(require_number(j, "rate"));
    if (fam == "deterministic") return Distribution::deterministic(require_number(j, "value"));
    if (fam == "erlang") {
        if (!j.contains("shape") || !j["shape"].is_number_integer())
            throw ParseError("erlang distribution needs integer 'shape'");
        return Distribution::erlang(j["shape"].get<int>(), require_number(j, "rate"));
    }
    if (fam == "hyperexponential") {
        if (!j.contains("weights") || !j.contains("rates"))
            throw ParseError("hyperexponential distribution needs 'weights' and 'rates'");
        return Distribution::hyperexponential(j["weights"].get<std::vector<double>>(),
                                              j["rates"].get<std::vector<double>>());
    }
    throw ParseError("unknown distribution family '" + fam + "'");
}

json distribution_to_json(const Distribution& d) {
    switch (d.family()) {
        case Distribution::Family::Exponential:
            return json{{"family", "exponential"}, {"rate", d.rate()}};
        case Distribution::Family::Deterministic:
            return json{{"family", "deterministic"}, {"value", d.value()}};
        case Distribution::Family::Erlang:
            return json{{"family", "erlang"}, {"shape", d.shape()}, {"rate", d.rate()}};
        case Distribution::Family::Hyperexponential:
            return json{{"family", "hyperexponential"},
                        {"weights", d.weights()},
                        {"rates", d.rates()}};
    }
    return nullptr;
}

PollingModel build_model(const json& spec) {
    if (!spec.is_object() || !spec.contains("queues") || !spec["queues"].is_array())
        throw ParseError("model spec needs a 'queues' array");
    std::vector<QueueSpec> queues;
    for (const auto& jq : spec["queues"]) {
        QueueSpec q{require_number(jq, "lambda"),
                    distribution_from_json(jq.contains("service") ? jq["service"] : json()),
                    jq.contains("discipline") ? discipline_from_json(jq["discipline"])
                                              : Discipline::exhaustive()};
        queues.push_back(std::move(q));
    }
    std::vector<Distribution> switchovers;
    if (spec.contains("switchovers")) {
        if (!spec["switchovers"].is_array()) throw ParseError("'switchovers' must be an array");
        for (const auto& js : spec["switchovers"])
            switchovers.push_back(distribution_from_json(js));
    } else {
        for (std::size_t i = 0; i < queues.size(); ++i)
            switchovers.push_back(Distribution::deterministic(0.0));
    }
    return PollingModel(std::move(queues), std::move(switchovers));
}

PollingModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open model file '" + path + "'");
    json spec;
    try {
        in >> spec;
    } catch (const json::parse_error& e) {
        throw ParseError("malformed model file '" + path + "': " + e.what());
    }
    return build_model(spec);
}

json model_to_json(const PollingModel& m) {
    json queues = json::array();
    for (int i = 0; i < m.size(); ++i) {
        const auto& q = m.queue(i);
        queues.push_back(json{{"lambda", q.lambda},
                              {"service", distribution_to_json(q.service)},
                              {"discipline", discipline_to_json(q.discipline)}});
    }
    json sw = json::array();
    for (int i = 0; i < m.size(); ++i) sw.push_back(distribution_to_json(m.switchover(i)));
    return json{{"queues", queues}, {"switchovers", sw}};
}

}  // namespace polling

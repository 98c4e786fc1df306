#pragma once

#include <string>

#include <json.hpp>

#include "polling/model.hpp"

namespace polling {

// Model spec schema (JSON, documented in the README):
//   {
//     "queues": [
//       {"lambda": 0.3,
//        "service": {"family": "exponential", "rate": 1.0},
//        "discipline": "exhaustive" | "gated" | {"kind": "k-limited", "k": 2}}
//     ],
//     "switchovers": [{"family": "deterministic", "value": 0.5}, ...]
//   }
// Distribution params: exponential{rate}, deterministic{value},
// erlang{shape, rate}, hyperexponential{weights, rates}.

PollingModel build_model(const nlohmann::json& spec);
PollingModel load_model(const std::string& path);

Distribution distribution_from_json(const nlohmann::json& j);
nlohmann::json distribution_to_json(const Distribution& d);
nlohmann::json model_to_json(const PollingModel& m);

}  // namespace polling

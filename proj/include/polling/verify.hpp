#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "polling/simulator.hpp"
#include "polling/stationary.hpp"

namespace polling {

struct CheckResult {
    std::string name;
    std::string equation;  // transform identity exercised ("1", "6", "9=10", ...)
    std::string kind;      // "identity" (analytic residual) or "oracle" (z-score vs simulation)
    int points = 0;
    double max_residual = 0.0;  // identity: max residual; oracle: max |z-score|
    double tolerance = 0.0;     // identity tolerance, or 3 for oracles
    bool pass = false;
    bool skipped = false;
    std::string note;
};

struct VerifyOptions {
    long cycles = 100000;
    long warmup_cycles = 1000;
    std::uint64_t seed = 1;
    double tolerance = 1e-9;
    bool with_simulation = true;
    double tamper_vc1 = 0.0;  // fault injection: offset added to V_c1 in the Eisenberg check
};

struct VerificationReport {
    std::vector<CheckResult> checks;
    std::uint64_t seed = 0;
    long cycles = 0;
    double tolerance = 0.0;
    double runtime_sec = 0.0;

    bool all_pass() const;
    nlohmann::json to_json() const;
    void print_table(std::ostream& os) const;
};

VerificationReport run_verification(const PollingModel& model, const VerifyOptions& opt = {});

// Freeze simulator estimates at the log's registered z probes into an
// immutable PGF source (probes lacking enough samples are dropped).
std::shared_ptr<EmpiricalPgfSource> make_empirical_source(const PollingModel& model,
                                                          const EpochLog& log);

}  // namespace polling

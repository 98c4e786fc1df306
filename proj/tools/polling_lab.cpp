#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "polling/errors.hpp"
#include "polling/model_io.hpp"
#include "polling/probes.hpp"
#include "polling/simulator.hpp"
#include "polling/stationary.hpp"
#include "polling/verify.hpp"

namespace {

using nlohmann::json;
using namespace polling;

int max_threads() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("POLLING_LAB_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(cap));
    }
    return static_cast<int>(hw);
}

// Evaluate f over [0, count) with at most POLLING_LAB_THREADS workers;
// results are assembled in index order.
template <typename F>
std::vector<Complex> parallel_map(int count, F&& f) {
    std::vector<Complex> out(count);
    const int workers = std::min(max_threads(), std::max(1, count));
    std::vector<std::future<void>> futs;
    for (int w = 0; w < workers; ++w) {
        futs.push_back(std::async(std::launch::async, [&, w] {
            for (int k = w; k < count; k += workers) out[k] = f(k);
        }));
    }
    for (auto& fut : futs) fut.get();
    return out;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open output file '" + path + "'");
    return out;
}

std::string num17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Complex coord_from_json(const json& j) {
    if (j.is_number()) return Complex(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return Complex(j[0].get<double>(), j[1].get<double>());
    throw ParseError("point coordinate must be a number or [re, im]");
}

std::vector<Point> points_from_json(const json& arr, int n) {
    if (!arr.is_array()) throw ParseError("points must be an array of N-vectors");
    std::vector<Point> out;
    for (const auto& jp : arr) {
        if (!jp.is_array() || static_cast<int>(jp.size()) != n)
            throw ParseError("each point must be an array of N coordinates");
        Point p;
        for (const auto& c : jp) p.push_back(coord_from_json(c));
        out.push_back(std::move(p));
    }
    return out;
}

json point_to_json(const Point& p) {
    json out = json::array();
    for (const Complex& v : p) out.push_back({v.real(), v.imag()});
    return out;
}

ProbeSet load_probes(const std::string& path, int n) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open points file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed points file: ") + e.what());
    }
    ProbeSet ps;
    if (j.contains("z")) ps.z = points_from_json(j["z"], n);
    if (j.contains("omega")) ps.omega = points_from_json(j["omega"], n);
    return ps;
}

int cmd_analyze(const std::string& model_file, const std::string& points_file,
                const std::string& out_dir) {
    const PollingModel model = load_model(model_file);
    if (!model.all_branching()) {
        std::cerr << "analyze: model has non-branching (k-limited) disciplines; the analytic "
                     "transforms are unavailable.\nRun `polling_lab simulate` to obtain "
                     "simulator-estimated PGFs instead.\n";
        return 2;
    }
    ProbeSet probes;
    if (!points_file.empty()) {
        probes = load_probes(points_file, model.size());
    } else {
        probes = default_probe_set(model.size());
    }
    const auto ev = StationaryEvaluator::analytic(model);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);

    json records = json::array();
    const auto q_vals = parallel_map(static_cast<int>(probes.z.size()),
                                     [&](int k) { return ev.queue_length_pgf(probes.z[k]); });
    for (std::size_t k = 0; k < probes.z.size(); ++k)
        records.push_back(json{{"point", point_to_json(probes.z[k])},
                               {"value_re", q_vals[k].real()},
                               {"value_im", q_vals[k].imag()},
                               {"method", "queue_length_pgf"}});
    const auto w_vals = parallel_map(static_cast<int>(probes.omega.size()),
                                     [&](int k) { return ev.workload_lst(probes.omega[k]); });
    for (std::size_t k = 0; k < probes.omega.size(); ++k)
        records.push_back(json{{"point", point_to_json(probes.omega[k])},
                               {"value_re", w_vals[k].real()},
                               {"value_im", w_vals[k].imag()},
                               {"method", "workload_lst"}});
    {
        std::ofstream out = open_output(out_dir + "/transforms.json");
        out << records.dump(2) << '\n';
    }
    {
        constexpr int kNmax = 40;
        std::ofstream pmf = open_output(out_dir + "/marginals.csv");
        pmf << "queue,n,p\n";
        std::ofstream mom = open_output(out_dir + "/moments.csv");
        mom << "queue,mean_queue_length,mean_from_pmf\n";
        for (int i = 0; i < model.size(); ++i) {
            const MarginalPmf m = ev.marginal_pmf(i, kNmax);
            double mean_pmf = 0.0;
            for (int nn = 0; nn <= kNmax; ++nn) {
                pmf << i + 1 << ',' << nn << ',' << num17(m.p[nn]) << '\n';
                mean_pmf += nn * m.p[nn];
            }
            mom << i + 1 << ',' << num17(ev.mean_queue_length(i)) << ',' << num17(mean_pmf)
                << '\n';
        }
    }
    std::cout << "analyze: wrote transforms.json, marginals.csv, moments.csv to " << out_dir
              << '\n';
    return 0;
}

int cmd_simulate(const std::string& model_file, long cycles, long warmup, std::uint64_t seed,
                 const std::string& probes_file, const std::string& out_file,
                 const std::string& trace_file) {
    const PollingModel model = load_model(model_file);
    ProbeSet probes;
    if (!probes_file.empty()) {
        probes = load_probes(probes_file, model.size());
    } else {
        probes.z = diagonal_z_grid(model.size());
        probes.z.push_back(Point(model.size(), Complex(0.0, 0.0)));
        probes.omega = default_omega_probes(model.size());
    }
    SimConfig cfg{model, seed, warmup, cycles, trace_file};
    const EpochLog log = simulate(cfg, probes);
    json summary = log.to_json();
    summary["model"] = model_to_json(model);
    if (out_file.empty() || out_file == "-") {
        std::cout << summary.dump(2) << '\n';
    } else {
        std::ofstream out = open_output(out_file);
        out << summary.dump(2) << '\n';
        std::cout << "simulate: wrote summary to " << out_file << '\n';
    }
    return 0;
}

int cmd_verify(const std::string& model_file, long cycles, std::uint64_t seed, double tolerance,
               bool tamper, const std::string& out_file) {
    const PollingModel model = load_model(model_file);
    VerifyOptions opt;
    opt.cycles = cycles;
    opt.seed = seed;
    opt.tolerance = tolerance;
    if (tamper) opt.tamper_vc1 = 1e-3;
    const VerificationReport report = run_verification(model, opt);
    report.print_table(std::cout);
    if (!out_file.empty()) {
        std::ofstream out = open_output(out_file);
        out << report.to_json().dump(2) << '\n';
    }
    if (!report.all_pass()) {
        std::cerr << "verify: FAILED\n";
        return 4;
    }
    std::cout << "verify: all checks passed\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Polling-system transform laboratory: analytic queue-length/workload "
                 "transforms with a discrete-event simulation cross-check"};
    app.require_subcommand(1);

    std::string model_file, points_file, out_dir = ".", out_file, probes_file, trace_file;
    long cycles = 100000, warmup = 1000;
    std::uint64_t seed = 1;
    double tolerance = 1e-9;
    bool tamper = false;

    auto* analyze = app.add_subcommand("analyze", "evaluate transforms, marginals and moments");
    analyze->add_option("model", model_file, "model spec file (JSON)")->required();
    analyze->add_option("--points", points_file, "JSON file with z/omega evaluation points");
    analyze->add_option("--out", out_dir, "output directory");

    auto* sim = app.add_subcommand("simulate", "run the discrete-event simulator");
    sim->add_option("model", model_file, "model spec file (JSON)")->required();
    sim->add_option("--cycles", cycles, "measured cycles");
    sim->add_option("--warmup", warmup, "warmup cycles to discard");
    sim->add_option("--seed", seed, "RNG seed");
    sim->add_option("--probes", probes_file, "JSON file with z/omega probe points");
    sim->add_option("--out", out_file, "summary output file (default stdout)");
    sim->add_option("--trace", trace_file, "optional line-delimited event trace file");

    auto* verify = app.add_subcommand("verify", "run the identity and simulation checks");
    verify->add_option("model", model_file, "model spec file (JSON)")->required();
    verify->add_option("--cycles", cycles, "measured simulation cycles");
    verify->add_option("--seed", seed, "RNG seed");
    verify->add_option("--tolerance", tolerance, "identity residual tolerance");
    verify->add_flag("--tamper-vc1", tamper,
                     "fault injection: offset V_c1 by 1e-3 (the Eisenberg check must fail)");
    verify->add_option("--out", out_file, "JSON report output file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) return cmd_analyze(model_file, points_file, out_dir);
        if (sim->parsed())
            return cmd_simulate(model_file, cycles, warmup, seed, probes_file, out_file,
                                trace_file);
        if (verify->parsed())
            return cmd_verify(model_file, cycles, seed, tolerance, tamper, out_file);
    } catch (const ConvergenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}

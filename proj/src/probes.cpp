#include "polling/probes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "polling/rng.hpp"

namespace polling {

std::vector<Point> default_z_probes(int n_queues, std::uint64_t seed) {
    SplitMix64 rng = substream(seed, 0, 100);
    std::vector<Point> out;
    out.reserve(20);
    for (int k = 0; k < 20; ++k) {
        Point z(n_queues);
        for (int j = 0; j < n_queues; ++j) {
            const double r = 0.95 * std::sqrt(rng.uniform());
            const double phi = 2.0 * std::numbers::pi * rng.uniform();
            z[j] = std::polar(r, phi);
        }
        out.push_back(std::move(z));
    }
    return out;
}

std::vector<Point> default_omega_probes(int n_queues, std::uint64_t seed) {
    SplitMix64 rng = substream(seed, 0, 101);
    std::vector<double> w(10);
    for (double& v : w) v = 0.1 + 4.9 * rng.uniform();
    std::sort(w.begin(), w.end());
    std::vector<Point> out;
    out.reserve(w.size());
    for (double v : w) out.push_back(Point(n_queues, Complex(v, 0.0)));
    return out;
}

std::vector<Point> diagonal_z_grid(int n_queues) {
    std::vector<Point> out;
    for (int k = 1; k <= 9; ++k) out.push_back(Point(n_queues, Complex(0.1 * k, 0.0)));
    return out;
}

ProbeSet default_probe_set(int n_queues, std::uint64_t seed) {
    ProbeSet ps;
    ps.z = default_z_probes(n_queues, seed);
    ps.z.push_back(Point(n_queues, Complex(0.0, 0.0)));  // origin: empty-system probability
    ps.omega = default_omega_probes(n_queues, seed);
    return ps;
}

}  // namespace polling

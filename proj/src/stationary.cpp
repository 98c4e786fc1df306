#include "polling/stationary.hpp"

#include <cmath>
#include <numbers>

#include "polling/errors.hpp"

namespace polling {

namespace {
constexpr double kPointMatchEps = 1e-9;
constexpr double kSmallOmega = 1e-12;
constexpr double kSeriesOmega = 1e-6;
}  // namespace

PgfBundle EmpiricalPgfSource::bundle(const Point& z) const {
    for (const auto& b : bundles_) {
        if (b.point.size() != z.size()) continue;
        double dist = 0.0;
        for (std::size_t j = 0; j < z.size(); ++j) dist += std::abs(b.point[j] - z[j]);
        if (dist < kPointMatchEps) return b;
    }
    throw UnknownProbe("empirical PGF source has no estimate at the requested point");
}

StationaryEvaluator StationaryEvaluator::analytic(PollingModel model, EngineConfig cfg) {
    auto src = std::make_shared<AnalyticPgfSource>(TransformEngine(model, cfg));
    return StationaryEvaluator(std::move(model), std::move(src));
}

Complex StationaryEvaluator::queue_length_pgf(const Point& z) const {
    if (is_ones(z)) return 1.0;
    const PgfBundle b = source_->bundle(z);
    Complex num = 0.0, den = 0.0;
    for (int i = 0; i < model_.size(); ++i) {
        const Complex w = model_.lambda(i) * (1.0 - z[i]);
        num += w * b.sc[i];
        den += w;
    }
    return num / den;
}

Complex StationaryEvaluator::visit_form_plain(const Point& z) const {
    const PgfBundle b = source_->bundle(z);
    const int n = model_.size();
    Complex sig = 0.0;
    for (int i = 0; i < n; ++i) sig += model_.lambda(i) * (1.0 - z[i]);
    Complex sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const Complex bi = model_.queue(i).service.lst(sig);
        const Complex den = z[i] - bi;
        if (std::abs(den) < 1e-8)
            throw SingularityError("visit-form: z_i too close to B_i(Sigma(z))");
        sum += (b.vb[i] - b.vc[i]) / sig * (z[i] * (1.0 - bi)) / den;
        sum += (b.vc[i] - b.vb[(i + 1) % n]) / sig;
    }
    return sum / b.mean_cycle;
}

Complex StationaryEvaluator::queue_length_pgf_visit_form(const Point& z) const {
    if (is_ones(z)) return 1.0;
    Complex sig = 0.0;
    for (int i = 0; i < model_.size(); ++i) sig += model_.lambda(i) * (1.0 - z[i]);
    int singular = -1;
    for (int i = 0; i < model_.size(); ++i) {
        if (std::abs(z[i] - model_.queue(i).service.lst(sig)) < 1e-8) {
            singular = i;
            break;
        }
    }
    if (singular < 0) return visit_form_plain(z);
    auto symmetric = [&](double h) {
        Point zp = z, zm = z;
        zp[singular] += h;
        zm[singular] -= h;
        return 0.5 * (visit_form_plain(zp) + visit_form_plain(zm));
    };
    const double h = 1e-5;
    return (4.0 * symmetric(h) - symmetric(2.0 * h)) / 3.0;
}

Point service_lst_point(const PollingModel& model, const Point& omega) {
    Point z(omega.size());
    for (int i = 0; i < model.size(); ++i) z[i] = lst_eval(model.queue(i).service, omega[i]);
    return z;
}

Complex StationaryEvaluator::workload_lst(const Point& omega) const {
    if (static_cast<int>(omega.size()) != model_.size())
        throw ParamError("workload point has wrong dimension");
    double max_abs = 0.0;
    for (const Complex& w : omega) {
        if (w.real() < 0.0) throw DomainError("workload_lst: Re omega_i must be >= 0");
        max_abs = std::max(max_abs, std::abs(w));
    }
    if (max_abs < kSmallOmega) return 1.0;
    const Point zt = service_lst_point(model_, omega);
    const PgfBundle b = source_->bundle(zt);
    Complex sig = 0.0;
    for (int i = 0; i < model_.size(); ++i) sig += model_.lambda(i) * (1.0 - zt[i]);
    Complex sum = 0.0;
    for (int i = 0; i < model_.size(); ++i) {
        const Complex den = sig - omega[i];
        if (std::abs(den) < 1e-12)
            throw SingularityError("workload_lst: Sigma(B(omega)) - omega_i vanishes");
        sum += (b.vb[i] - b.vc[i]) / sig * omega[i] / den;
    }
    return sum / b.mean_cycle;
}

Complex mg1_workload_lst(const PollingModel& model, Complex omega) {
    if (omega.real() < 0.0) throw DomainError("mg1_workload_lst: Re omega must be >= 0");
    const double one_minus_rho = 1.0 - model.total_rho();
    if (std::abs(omega) < kSeriesOmega) {
        // Second-order series of 1 - B_j(omega) keeps the 0/0 limit stable.
        double half_m2 = 0.0;
        for (int j = 0; j < model.size(); ++j)
            half_m2 += model.lambda(j) * model.queue(j).service.second_moment() / 2.0;
        return one_minus_rho / (one_minus_rho + omega * half_m2);
    }
    Complex den = omega;
    for (int j = 0; j < model.size(); ++j)
        den -= model.lambda(j) * (1.0 - model.queue(j).service.lst(omega));
    return one_minus_rho * omega / den;
}

Complex StationaryEvaluator::switch_workload_lst(Complex omega) const {
    if (model_.zero_switchover())
        throw DomainError("switch_workload_lst: model has no switching periods (s = 0)");
    if (omega.real() < 0.0) throw DomainError("switch_workload_lst: Re omega must be >= 0");
    if (std::abs(omega) < kSmallOmega) return 1.0;
    const Point omega_t(model_.size(), omega);
    const Point zt = service_lst_point(model_, omega_t);
    const PgfBundle b = source_->bundle(zt);
    Complex den = 0.0;
    for (int j = 0; j < model_.size(); ++j) den += model_.lambda(j) * (1.0 - zt[j]);
    Complex sum = 0.0;
    for (int i = 0; i < model_.size(); ++i) sum += b.vc[i] - b.vb[i];
    return sum / (den * model_.total_switchover_mean());
}

MarginalPmf StationaryEvaluator::marginal_pmf(int i, int n_max) const {
    if (n_max < 0) throw ParamError("marginal_pmf: n_max must be >= 0");
    const int m_points = std::max(4096, 8 * n_max);
    // Contour radius 1: PGFs of proper laws are continuous on the closed disk
    // and any r < 1 would amplify coefficient error by r^{-n}.
    std::vector<Complex> q(m_points);
    const double step = 2.0 * std::numbers::pi / m_points;
    for (int m = 0; m <= m_points / 2; ++m) {
        Point z = ones(model_.size());
        z[i] = std::polar(1.0, step * m);
        q[m] = queue_length_pgf(z);
    }
    for (int m = m_points / 2 + 1; m < m_points; ++m) q[m] = std::conj(q[m_points - m]);
    MarginalPmf out;
    out.queue = i;
    out.p.resize(n_max + 1);
    for (int n = 0; n <= n_max; ++n) {
        Complex acc = 0.0;
        for (int m = 0; m < m_points; ++m) acc += q[m] * std::polar(1.0, -step * m * n);
        acc /= static_cast<double>(m_points);
        if (std::abs(acc.imag()) > 1e-8)
            throw InversionError("marginal_pmf: nonreal inversion residue");
        if (acc.real() < -1e-8)
            throw InversionError("marginal_pmf: significantly negative probability mass");
        out.p[n] = std::max(acc.real(), 0.0);
    }
    return out;
}

double StationaryEvaluator::mean_queue_length(int i) const {
    auto f = [&](double x) {
        Point z = ones(model_.size());
        z[i] = x;
        return queue_length_pgf(z).real();
    };
    auto central = [&](double h) { return (f(1.0 + h) - f(1.0 - h)) / (2.0 * h); };
    const double h = 1e-3;
    return (4.0 * central(h / 2.0) - central(h)) / 3.0;
}

}  // namespace polling

#include "polling/transform_engine.hpp"

#include <cmath>
#include <string>

#include "polling/errors.hpp"

namespace polling {

Point ones(int n) { return Point(static_cast<std::size_t>(n), Complex(1.0, 0.0)); }

bool is_ones(const Point& z) {
    for (const Complex& v : z)
        if (v != Complex(1.0, 0.0)) return false;
    return true;
}

Complex busy_period_lst(double lambda, const Distribution& service, Complex w, double tol,
                        long cap) {
    if (lambda * service.mean() >= 1.0)
        throw ParamError("busy_period_lst requires lambda * E[B] < 1");
    if (w == Complex(0.0, 0.0)) return 1.0;  // proper busy period
    Complex theta = 0.0;
    for (long it = 0; it < cap; ++it) {
        Complex next = service.lst(w + lambda * (1.0 - theta));
        if (std::abs(next - theta) < tol) return next;
        theta = next;
    }
    throw ConvergenceError("busy-period fixed point did not converge");
}

TransformEngine::TransformEngine(PollingModel model, EngineConfig cfg)
    : model_(std::move(model)), cfg_(cfg) {
    if (model_.zero_switchover() && model_.all_branching()) {
        // Solve the scalar equation obtained from the wrap-around relation at
        // z = 0: vb1(0) = 1 - (vb1(0)/lambda) * T(0).
        const double t0 = cycle_series(Point(model_.size(), Complex(0.0, 0.0))).real();
        vb1_at_zero_ = model_.total_lambda() / (model_.total_lambda() + t0);
        mean_cycle_ = polling::mean_cycle(model_, vb1_at_zero_);
    } else if (!model_.zero_switchover()) {
        mean_cycle_ = polling::mean_cycle(model_);
    } else {
        throw UnsupportedDiscipline(
            "zero-switchover analytic transforms require branching disciplines at every queue");
    }
}

void TransformEngine::check_point(const Point& z) const {
    if (static_cast<int>(z.size()) != model_.size())
        throw ParamError("transform point has dimension " + std::to_string(z.size()) +
                         ", model has N = " + std::to_string(model_.size()));
    // Small margin past 1: derivative estimation at z = 1 needs points just
    // outside the disc, where the transforms are still analytic.
    for (const Complex& zi : z)
        if (std::abs(zi) > 1.0 + 1e-2)
            throw DomainError("PGF argument lies outside the closed unit disc");
}

Complex TransformEngine::sigma(const Point& z) const {
    check_point(z);
    Complex out = 0.0;
    for (int j = 0; j < model_.size(); ++j) out += model_.lambda(j) * (1.0 - z[j]);
    return out;
}

Point TransformEngine::branching_map(int i, const Point& z) const {
    check_point(z);
    const auto& q = model_.queue(i);
    Point out = z;
    switch (q.discipline.kind) {
        case Discipline::Kind::Gated:
            out[i] = q.service.lst(sigma(z));
            break;
        case Discipline::Kind::Exhaustive: {
            Complex others = 0.0;
            for (int j = 0; j < model_.size(); ++j)
                if (j != i) others += model_.lambda(j) * (1.0 - z[j]);
            out[i] = busy_period_lst(q.lambda, q.service, others, cfg_.tol, cfg_.cycle_cap);
            break;
        }
        case Discipline::Kind::KLimited:
            throw UnsupportedDiscipline("no branching map for k-limited disciplines");
    }
    return out;
}

// Zero switchover: T(z) = sum_{k>=0} Sigma(g^k(z)) with g the full-cycle
// branching composition (queue N first, queue 1 last). The iterates contract
// toward (1,...,1), so the series is absolutely convergent for rho < 1.
Complex TransformEngine::cycle_series(const Point& z) const {
    const int n = model_.size();
    Point point = z;
    Complex sum = 0.0;
    for (long k = 0; k < cfg_.cycle_cap; ++k) {
        Complex s = sigma(point);
        sum += s;
        if (std::abs(s) < cfg_.tol) return sum;
        for (int i = n - 1; i >= 0; --i) point = branching_map(i, point);
    }
    throw ConvergenceError("zero-switchover cycle series did not converge");
}

Complex TransformEngine::vb1(const Point& z) const {
    const int n = model_.size();
    if (model_.zero_switchover())
        return 1.0 - (vb1_at_zero_ / model_.total_lambda()) * cycle_series(z);
    // Non-zero switchover: unroll the switchover chaining and the branching
    // contract backwards around the cycle; the accumulated point contracts to
    // (1,...,1) at rate ~ rho per cycle.
    Point point = z;
    Complex prod = 1.0;
    for (long k = 0; k < cfg_.cycle_cap; ++k) {
        if (std::abs(sigma(point)) < cfg_.tol) return prod;
        for (int i = n - 1; i >= 0; --i) {
            prod *= model_.switchover(i).lst(sigma(point));
            point = branching_map(i, point);
        }
    }
    throw ConvergenceError("visit-beginning PGF product did not converge");
}

Complex TransformEngine::visit_begin_pgf(int i, const Point& z) const {
    check_point(z);
    if (i == 0) return vb1(z);
    Complex v = visit_complete_pgf(i - 1, z);
    if (!model_.zero_switchover()) v *= model_.switchover(i - 1).lst(sigma(z));
    return v;
}

Complex TransformEngine::visit_complete_pgf(int i, const Point& z) const {
    return visit_begin_pgf(i, branching_map(i, z));
}

Complex TransformEngine::service_begin_plain(int i, const Point& z) const {
    const Complex den = z[i] - model_.queue(i).service.lst(sigma(z));
    if (std::abs(den) < cfg_.singularity_eps)
        throw SingularityError("service_begin_pgf: z_i too close to B_i(Sigma(z))");
    const Complex diff = visit_begin_pgf(i, z) - visit_complete_pgf(i, z);
    return gamma(i) * z[i] / den * diff;
}

Complex TransformEngine::service_begin_pgf(int i, const Point& z) const {
    check_point(z);
    const Complex den = z[i] - model_.queue(i).service.lst(sigma(z));
    if (std::abs(den) >= cfg_.singularity_eps) return service_begin_plain(i, z);
    // The singularity is removable (the numerator vanishes with the
    // denominator): Richardson-extrapolate from symmetric perturbations.
    auto symmetric = [&](double h) {
        Point zp = z, zm = z;
        zp[i] += h;
        zm[i] -= h;
        return 0.5 * (service_begin_plain(i, zp) + service_begin_plain(i, zm));
    };
    const double h = cfg_.perturb_h;
    return (4.0 * symmetric(h) - symmetric(2.0 * h)) / 3.0;
}

Complex TransformEngine::service_complete_pgf(int i, const Point& z) const {
    check_point(z);
    if (std::abs(z[i]) < 1e-12) {
        // Singularity-free algebraic route via the Eisenberg relation.
        return service_begin_pgf(i, z) +
               gamma(i) * (visit_complete_pgf(i, z) - visit_begin_pgf(i, z));
    }
    return service_begin_pgf(i, z) * model_.queue(i).service.lst(sigma(z)) / z[i];
}

PgfBundle TransformEngine::bundle(const Point& z) const {
    check_point(z);
    const int n = model_.size();
    PgfBundle b;
    b.point = z;
    b.mean_cycle = mean_cycle_;
    b.vb.resize(n);
    b.vc.resize(n);
    b.sb.resize(n);
    b.sc.resize(n);
    b.gamma.resize(n);
    for (int i = 0; i < n; ++i) b.gamma[i] = gamma(i);
    if (is_ones(z)) {
        for (int i = 0; i < n; ++i) b.vb[i] = b.vc[i] = b.sb[i] = b.sc[i] = 1.0;
        return b;
    }
    for (int i = 0; i < n; ++i) {
        b.vb[i] = visit_begin_pgf(i, z);
        b.vc[i] = visit_complete_pgf(i, z);
        b.sb[i] = service_begin_pgf(i, z);
        b.sc[i] = service_complete_pgf(i, z);
    }
    return b;
}

double TransformEngine::vb1_at_zero() const {
    if (!model_.zero_switchover())
        throw DomainError("vb1_at_zero is defined for zero-switchover models only");
    return vb1_at_zero_;
}

}  // namespace polling

#pragma once

#include <complex>
#include <vector>

#include "polling/rng.hpp"

namespace polling {

using Complex = std::complex<double>;

// Nonnegative distribution with a closed-form Laplace-Stieltjes transform.
// Supported families: exponential, deterministic, Erlang, hyperexponential.
class Distribution {
public:
    enum class Family { Exponential, Deterministic, Erlang, Hyperexponential };

    static Distribution exponential(double rate);
    static Distribution deterministic(double value);
    static Distribution erlang(int shape, double rate);
    static Distribution hyperexponential(std::vector<double> weights, std::vector<double> rates);

    Family family() const { return family_; }
    double mean() const { return mean_; }
    double second_moment() const { return second_moment_; }

    // Closed-form LST value; analytic continuation is permitted (no domain
    // check), callers that require Re w >= 0 go through lst_eval().
    Complex lst(Complex w) const;

    double sample(SplitMix64& rng) const;

    // Parameter accessors (serialization / reporting).
    double rate() const { return rate_; }
    double value() const { return value_; }
    int shape() const { return shape_; }
    const std::vector<double>& weights() const { return weights_; }
    const std::vector<double>& rates() const { return rates_; }

private:
    Distribution() = default;

    Family family_ = Family::Deterministic;
    double rate_ = 0.0;
    double value_ = 0.0;
    int shape_ = 0;
    std::vector<double> weights_;
    std::vector<double> rates_;
    double mean_ = 0.0;
    double second_moment_ = 0.0;
};

// LST evaluation with the transform-domain precondition Re w >= 0 enforced;
// throws DomainError otherwise. lst_eval(d, 0) == 1 exactly.
Complex lst_eval(const Distribution& dist, Complex w);

}  // namespace polling

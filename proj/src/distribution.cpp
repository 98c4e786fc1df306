#include "polling/distribution.hpp"

#include <cmath>
#include <numeric>

#include "polling/errors.hpp"

namespace polling {

Distribution Distribution::exponential(double rate) {
    if (!(rate > 0.0)) throw ParamError("exponential: rate must be positive");
    Distribution d;
    d.family_ = Family::Exponential;
    d.rate_ = rate;
    d.mean_ = 1.0 / rate;
    d.second_moment_ = 2.0 / (rate * rate);
    return d;
}

Distribution Distribution::deterministic(double value) {
    if (!(value >= 0.0)) throw ParamError("deterministic: value must be nonnegative");
    Distribution d;
    d.family_ = Family::Deterministic;
    d.value_ = value;
    d.mean_ = value;
    d.second_moment_ = value * value;
    return d;
}

Distribution Distribution::erlang(int shape, double rate) {
    if (shape < 1) throw ParamError("erlang: shape must be >= 1");
    if (!(rate > 0.0)) throw ParamError("erlang: rate must be positive");
    Distribution d;
    d.family_ = Family::Erlang;
    d.shape_ = shape;
    d.rate_ = rate;
    d.mean_ = shape / rate;
    d.second_moment_ = shape * (shape + 1.0) / (rate * rate);
    return d;
}

Distribution Distribution::hyperexponential(std::vector<double> weights, std::vector<double> rates) {
    if (weights.empty() || weights.size() != rates.size())
        throw ParamError("hyperexponential: weights and rates must be nonempty and equal-sized");
    double wsum = 0.0;
    for (double w : weights) {
        if (!(w > 0.0)) throw ParamError("hyperexponential: weights must be positive");
        wsum += w;
    }
    if (std::abs(wsum - 1.0) > 1e-12)
        throw ParamError("hyperexponential: weights must sum to 1");
    for (double r : rates)
        if (!(r > 0.0)) throw ParamError("hyperexponential: rates must be positive");
    Distribution d;
    d.family_ = Family::Hyperexponential;
    d.weights_ = std::move(weights);
    d.rates_ = std::move(rates);
    d.mean_ = 0.0;
    d.second_moment_ = 0.0;
    for (std::size_t j = 0; j < d.weights_.size(); ++j) {
        d.mean_ += d.weights_[j] / d.rates_[j];
        d.second_moment_ += d.weights_[j] * 2.0 / (d.rates_[j] * d.rates_[j]);
    }
    return d;
}

Complex Distribution::lst(Complex w) const {
    switch (family_) {
        case Family::Exponential:
            return rate_ / (rate_ + w);
        case Family::Deterministic:
            return std::exp(-w * value_);
        case Family::Erlang: {
            Complex base = rate_ / (rate_ + w);
            Complex out = 1.0;
            for (int j = 0; j < shape_; ++j) out *= base;
            return out;
        }
        case Family::Hyperexponential: {
            Complex out = 0.0;
            for (std::size_t j = 0; j < weights_.size(); ++j)
                out += weights_[j] * rates_[j] / (rates_[j] + w);
            return out;
        }
    }
    return 0.0;  // unreachable
}

double Distribution::sample(SplitMix64& rng) const {
    switch (family_) {
        case Family::Exponential:
            return -std::log(rng.uniform()) / rate_;
        case Family::Deterministic:
            return value_;
        case Family::Erlang: {
            double sum = 0.0;
            for (int j = 0; j < shape_; ++j) sum += -std::log(rng.uniform());
            return sum / rate_;
        }
        case Family::Hyperexponential: {
            double u = rng.uniform();
            double acc = 0.0;
            std::size_t pick = weights_.size() - 1;
            for (std::size_t j = 0; j < weights_.size(); ++j) {
                acc += weights_[j];
                if (u <= acc) {
                    pick = j;
                    break;
                }
            }
            return -std::log(rng.uniform()) / rates_[pick];
        }
    }
    return 0.0;  // unreachable
}

Complex lst_eval(const Distribution& dist, Complex w) {
    if (w.real() < 0.0) throw DomainError("lst_eval: Re w must be >= 0");
    if (w == Complex(0.0, 0.0)) return 1.0;
    return dist.lst(w);
}

}  // namespace polling

#include "polling/model.hpp"

#include <string>

#include "polling/errors.hpp"

namespace polling {

Discipline Discipline::k_limited(int k) {
    if (k < 1) throw ParamError("k-limited discipline requires integer k >= 1");
    return {Kind::KLimited, k};
}

PollingModel::PollingModel(std::vector<QueueSpec> queues, std::vector<Distribution> switchovers)
    : queues_(std::move(queues)), switchovers_(std::move(switchovers)) {
    if (queues_.empty()) throw ParamError("polling model requires N >= 1 queues");
    if (switchovers_.size() != queues_.size())
        throw ParamError("need exactly one switchover distribution per queue");
    rho_.reserve(queues_.size());
    for (std::size_t i = 0; i < queues_.size(); ++i) {
        const auto& q = queues_[i];
        if (!(q.lambda > 0.0))
            throw ParamError("arrival rate at Q_" + std::to_string(i + 1) + " must be positive");
        if (!(q.service.mean() > 0.0))
            throw ParamError("service time at Q_" + std::to_string(i + 1) +
                             " must have positive mean");
        total_lambda_ += q.lambda;
        rho_.push_back(q.lambda * q.service.mean());
        total_rho_ += rho_.back();
    }
    for (const auto& s : switchovers_) total_switchover_mean_ += s.mean();
    if (total_rho_ >= 1.0)
        throw StabilityError("total load rho = " + std::to_string(total_rho_) + " is not < 1");
}

bool PollingModel::all_branching() const {
    for (const auto& q : queues_)
        if (!q.discipline.branching()) return false;
    return true;
}

double mean_cycle(const PollingModel& model, std::optional<double> vb1_at_zero) {
    if (model.zero_switchover()) {
        if (!vb1_at_zero)
            throw MissingInputError(
                "zero-switchover model: mean_cycle needs the empty-system probability at a Q_1 "
                "visit beginning");
        if (!(*vb1_at_zero > 0.0 && *vb1_at_zero <= 1.0))
            throw ParamError("vb1_at_zero must lie in (0, 1]");
        return *vb1_at_zero / (model.total_lambda() * (1.0 - model.total_rho()));
    }
    if (vb1_at_zero)
        throw ParamError("vb1_at_zero only applies to zero-switchover models");
    return model.total_switchover_mean() / (1.0 - model.total_rho());
}

}  // namespace polling

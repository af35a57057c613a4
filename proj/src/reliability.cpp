#include "ftbn/reliability.hpp"

#include <cmath>
#include <stdexcept>

#include "ftbn/fault_tree.hpp"

namespace ftbn {

MissionTime::MissionTime(double hours) : hours_(hours) {
    if (!std::isfinite(hours) || hours < 0.0)
        throw std::invalid_argument("mission time must be finite and nonnegative");
}

void check_failure_model(const FailureModel& model) {
    if (const auto* e = std::get_if<Exponential>(&model)) {
        if (!std::isfinite(e->rate) || e->rate < 0.0)
            throw std::invalid_argument("failure rate must be finite and nonnegative");
    } else {
        const double p = std::get<Fixed>(model).p;
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("failure probability must lie in [0, 1]");
    }
}

double failure_probability(const FailureModel& model, MissionTime t) {
    check_failure_model(model);
    if (const auto* e = std::get_if<Exponential>(&model))
        return -std::expm1(-e->rate * t.hours());
    return std::get<Fixed>(model).p;
}

std::map<std::string, double> probability_table(std::span<const PrimaryEvent> primaries,
                                                MissionTime t) {
    std::map<std::string, double> table;
    for (const auto& pe : primaries)
        table.emplace(pe.id, failure_probability(pe.failure, t));
    return table;
}

}  // namespace ftbn

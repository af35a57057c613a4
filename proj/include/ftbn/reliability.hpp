#pragma once

#include <map>
#include <span>
#include <string>
#include <variant>

namespace ftbn {

struct PrimaryEvent;

/// Constant failure rate in failures per hour.
struct Exponential {
    double rate = 0.0;
    bool operator==(const Exponential&) const = default;
};

/// Time-independent failure probability.
struct Fixed {
    double p = 0.0;
    bool operator==(const Fixed&) const = default;
};

using FailureModel = std::variant<Exponential, Fixed>;

/// Mission time in hours. Finite and nonnegative.
class MissionTime {
public:
    explicit MissionTime(double hours);
    double hours() const noexcept { return hours_; }

private:
    double hours_;
};

/// Throws std::invalid_argument when rate < 0 or p outside [0, 1].
void check_failure_model(const FailureModel& model);

/// P(component faulty at t): 1 - exp(-rate * t) for exponential, p for fixed.
double failure_probability(const FailureModel& model, MissionTime t);

/// Failure probability of every distinct primary event at `t`, keyed by id.
std::map<std::string, double> probability_table(std::span<const PrimaryEvent> primaries,
                                                MissionTime t);

}  // namespace ftbn

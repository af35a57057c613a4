#pragma once

#include "ftbn/bayes_net.hpp"

namespace ftbn {

/// Spare-supply and common-cause variant of the compiled PLC network: TE becomes
/// a noisy-or over (PSS, Voter, CH) with c = (0.7, 1, 1) and the given leak, and
/// PSS becomes a noisy-and over (PS1, PS2) with c = (0.01, 0.01).
BayesianNetwork plc_noisy_variant(const BayesianNetwork& plc, double leak = 1e-4);

/// Over-voltage variant of the compiled PLC network: PS1 and PS2 get states
/// (working, over-voltage, dead), the supply failure probability being split by
/// `over_voltage_share`; PSS fails iff neither supply works; each CPU_X becomes
/// a noisy-max over (PS1, PS2) with c(over-voltage) = 0.66667, c(dead) = 1 and
/// its former prior as leak.
BayesianNetwork plc_sequential_dependency_variant(const BayesianNetwork& plc, double over_voltage_share = 0.5);

}  // namespace ftbn

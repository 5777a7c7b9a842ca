#pragma once

#include "negacq/core.hpp"

#include <optional>

namespace negacq {

struct MotivationState {
    double value = 0.0;
};

/// Neutral iff |value| < epsilon. Throws ContractViolation outside [-1, 1].
MotivationClass classify(double value, const MotivationConfig& cfg = {});

/// Advances motivation by dt seconds.
/// Resistance pins the value to -1 immediately. Otherwise the value relaxes
/// exponentially toward the presented object's valence (0 with nothing presented).
MotivationState step(MotivationState state, std::optional<Valence> presented_valence,
                     bool resistance_active, double dt, const MotivationConfig& cfg = {});

}  // namespace negacq

#include "negacq/motivation.hpp"

#include <algorithm>
#include <cmath>

namespace negacq {

MotivationClass classify(double value, const MotivationConfig& cfg) {
    if (!(value >= -1.0 && value <= 1.0))
        throw ContractViolation("motivation value outside [-1, 1]");
    if (value <= -cfg.neutral_band) return MotivationClass::Negative;
    if (value >= cfg.neutral_band) return MotivationClass::Positive;
    return MotivationClass::Neutral;
}

MotivationState step(MotivationState state, std::optional<Valence> presented_valence,
                     bool resistance_active, double dt, const MotivationConfig& cfg) {
    if (!(dt > 0.0)) throw ContractViolation("motivation step needs dt > 0");
    if (resistance_active) return MotivationState{-1.0};
    const double target = presented_valence ? static_cast<double>(*presented_valence) : 0.0;
    const double next = target + (state.value - target) * std::exp(-dt / cfg.lag);
    return MotivationState{std::clamp(next, -1.0, 1.0)};
}

}  // namespace negacq

#pragma once

#include "negacq/core.hpp"

#include <optional>
#include <string>

namespace negacq {

struct GazeTarget {
    enum class Kind { Face, Object, Table };
    Kind kind = Kind::Table;
    ObjectId object = ObjectId::Triangle;  // meaningful only for Kind::Object

    static GazeTarget face() { return {Kind::Face, ObjectId::Triangle}; }
    static GazeTarget table() { return {Kind::Table, ObjectId::Triangle}; }
    static GazeTarget at(ObjectId o) { return {Kind::Object, o}; }

    bool operator==(const GazeTarget& o) const {
        return kind == o.kind && (kind != Kind::Object || object == o.object);
    }
};

/// "face", "table" or the object name.
std::string to_string(const GazeTarget& g);
GazeTarget parse_gaze(std::string_view s);

enum class FacialExpression { Smile, Neutral, Frown };
std::string_view to_string(FacialExpression e);
FacialExpression facial_expression(MotivationClass c);

bool is_trigger_behavior(BehaviorId b);

struct Presentation {
    ObjectId object;
    Valence valence;
};

struct BehaviorState {
    BehaviorId current = BehaviorId::Idle;
    GazeTarget gaze = GazeTarget::table();
    std::int64_t gaze_ticks_left = 0;
    std::optional<Presentation> presented;
    std::int64_t idle_ticks = 0;  // ticks since the last high-level percept
    int scan_index = 0;           // next table object to glance at while looking around

    double gaze_timer() const { return ticks_to_seconds(gaze_ticks_left); }
    double percept_idle_timer() const { return ticks_to_seconds(idle_ticks); }
};

struct BehaviorInput {
    std::optional<Presentation> presented;
    bool resistance_active = false;
    MotivationClass motivation_class = MotivationClass::Neutral;
    bool face_visible = true;
};

struct BehaviorStep {
    BehaviorState state;
    std::optional<BehaviorId> changed_to;  // set when `current` changed this tick
};

/// Advances the body-behavior machine by one tick of length dt.
BehaviorStep step(const BehaviorState& state, const BehaviorInput& in, const TimeConstants& tc,
                  double dt = 1.0 / kTicksPerSecond);

/// Returns the machine to Idle, reporting the change if there was one.
BehaviorStep stop(const BehaviorState& state);

/// Behavior selected by a presentation (or its absence).
BehaviorId behavior_for(const std::optional<Presentation>& p);

}  // namespace negacq

#include "negacq/behavior.hpp"

#include <algorithm>

namespace negacq {

std::string to_string(const GazeTarget& g) {
    switch (g.kind) {
        case GazeTarget::Kind::Face: return "face";
        case GazeTarget::Kind::Table: return "table";
        case GazeTarget::Kind::Object: return std::string(to_string(g.object));
    }
    return "?";
}

GazeTarget parse_gaze(std::string_view s) {
    if (s == "face") return GazeTarget::face();
    if (s == "table") return GazeTarget::table();
    return GazeTarget::at(parse_object(s));
}

std::string_view to_string(FacialExpression e) {
    switch (e) {
        case FacialExpression::Smile: return "smile";
        case FacialExpression::Neutral: return "neutral";
        case FacialExpression::Frown: return "frown";
    }
    return "?";
}

FacialExpression facial_expression(MotivationClass c) {
    switch (c) {
        case MotivationClass::Positive: return FacialExpression::Smile;
        case MotivationClass::Negative: return FacialExpression::Frown;
        case MotivationClass::Neutral: break;
    }
    return FacialExpression::Neutral;
}

bool is_trigger_behavior(BehaviorId b) {
    return b == BehaviorId::Reaching || b == BehaviorId::Rejecting || b == BehaviorId::Watching;
}

BehaviorId behavior_for(const std::optional<Presentation>& p) {
    if (!p) return BehaviorId::LookingAround;
    switch (p->valence) {
        case Valence::Liked: return BehaviorId::Reaching;
        case Valence::Disliked: return BehaviorId::Rejecting;
        case Valence::Neutral: break;
    }
    return BehaviorId::Watching;
}

namespace {

std::int64_t dur(double seconds) { return std::max<std::int64_t>(1, seconds_to_ticks(seconds)); }

bool same_presentation(const std::optional<Presentation>& a, const std::optional<Presentation>& b) {
    if (a.has_value() != b.has_value()) return false;
    return !a || (a->object == b->object && a->valence == b->valence);
}

bool grumpy(const BehaviorInput& in) {
    return in.resistance_active || in.motivation_class == MotivationClass::Negative;
}

void look(BehaviorState& s, GazeTarget g, double seconds) {
    s.gaze = g;
    s.gaze_ticks_left = dur(seconds);
}

void next_table_object(BehaviorState& s, const TimeConstants& tc) {
    ObjectId o = kAllObjects[static_cast<std::size_t>(s.scan_index) % kAllObjects.size()];
    s.scan_index = (s.scan_index + 1) % static_cast<int>(kAllObjects.size());
    look(s, GazeTarget::at(o), tc.dwell_time_object);
}

// First gaze of a freshly entered behavior.
void begin_pattern(BehaviorState& s, const BehaviorInput& in, const TimeConstants& tc) {
    switch (s.current) {
        case BehaviorId::Idle: s.gaze = GazeTarget::table(); s.gaze_ticks_left = 0; break;
        case BehaviorId::LookingAround: look(s, GazeTarget::face(), tc.dwell_time_face); break;
        case BehaviorId::Reaching:
            look(s, GazeTarget::at(s.presented->object),
                 grumpy(in) ? tc.grumpy_object_time : tc.object_time);
            break;
        case BehaviorId::Rejecting:
            look(s, GazeTarget::at(s.presented->object), tc.reject_glance_time);
            break;
        case BehaviorId::Watching:
            look(s, GazeTarget::at(s.presented->object), tc.dwell_time_object);
            break;
    }
}

// Next gaze once the current dwell has expired.
void advance_pattern(BehaviorState& s, const BehaviorInput& in, const TimeConstants& tc) {
    const bool at_face = s.gaze.kind == GazeTarget::Kind::Face;
    switch (s.current) {
        case BehaviorId::Idle: s.gaze_ticks_left = 0; break;
        case BehaviorId::LookingAround:
            if (at_face) next_table_object(s, tc);
            else look(s, GazeTarget::face(), tc.dwell_time_face);
            break;
        case BehaviorId::Reaching:
            if (at_face)
                look(s, GazeTarget::at(s.presented->object),
                     grumpy(in) ? tc.grumpy_object_time : tc.object_time);
            else
                look(s, GazeTarget::face(), grumpy(in) ? tc.grumpy_face_time : tc.face_time);
            break;
        case BehaviorId::Rejecting:
            // Short glance at the object, then turn away for a while.
            if (at_face) look(s, GazeTarget::at(s.presented->object), tc.reject_glance_time);
            else look(s, GazeTarget::face(), tc.dwell_time_face);
            break;
        case BehaviorId::Watching:
            if (at_face) look(s, GazeTarget::at(s.presented->object), tc.dwell_time_object);
            else look(s, GazeTarget::face(), tc.dwell_time_face);
            break;
    }
}

}  // namespace

BehaviorStep step(const BehaviorState& state, const BehaviorInput& in, const TimeConstants& tc,
                  double dt) {
    const std::int64_t ticks = std::max<std::int64_t>(1, seconds_to_ticks(dt));
    BehaviorStep out{state, std::nullopt};
    BehaviorState& s = out.state;

    const bool percept = in.presented.has_value() || in.face_visible;
    const bool was_idle_gaze = s.idle_ticks >= dur(tc.max_idle_time);
    s.idle_ticks = percept ? 0 : s.idle_ticks + ticks;

    const BehaviorId want = behavior_for(in.presented);
    const bool presentation_changed = !same_presentation(s.presented, in.presented);
    s.presented = in.presented;

    if (want != s.current) {
        s.current = want;
        out.changed_to = want;
        begin_pattern(s, in, tc);
    } else if (presentation_changed || (was_idle_gaze && percept)) {
        begin_pattern(s, in, tc);
    } else {
        s.gaze_ticks_left -= ticks;
        if (s.gaze_ticks_left <= 0) advance_pattern(s, in, tc);
    }

    if (s.idle_ticks >= dur(tc.max_idle_time)) {
        s.gaze = GazeTarget::table();
        s.gaze_ticks_left = 0;
    }
    return out;
}

BehaviorStep stop(const BehaviorState& state) {
    BehaviorStep out{state, std::nullopt};
    if (state.current != BehaviorId::Idle) out.changed_to = BehaviorId::Idle;
    out.state.current = BehaviorId::Idle;
    out.state.presented.reset();
    out.state.gaze = GazeTarget::table();
    out.state.gaze_ticks_left = 0;
    return out;
}

}  // namespace negacq

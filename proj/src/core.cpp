#include "negacq/core.hpp"

#include "negacq/motivation.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace negacq {

std::int64_t seconds_to_ticks(double seconds) {
    return static_cast<std::int64_t>(std::llround(seconds * kTicksPerSecond));
}

double ticks_to_seconds(std::int64_t ticks) {
    return static_cast<double>(ticks) / kTicksPerSecond;
}

void MotivationConfig::validate() const {
    if (!(neutral_band > 0.0 && neutral_band < 1.0))
        throw ContractViolation("motivation neutral band must lie in (0, 1)");
    if (!(lag > 0.0)) throw ContractViolation("motivation lag must be positive");
}

void TimeConstants::validate() const {
    for (double v : {face_time, object_time, dwell_time_face, dwell_time_object, max_idle_time,
                     grumpy_face_time, grumpy_object_time, reject_glance_time}) {
        if (!(v > 0.0)) throw ContractViolation("time constants must be strictly positive");
    }
}

MatchFeatureSpec::MatchFeatureSpec()
    : features_{Feature::Behavior, Feature::Object, Feature::FaceDetected,
                Feature::MotivationClass, Feature::Resistance} {}

MatchFeatureSpec::MatchFeatureSpec(std::vector<Feature> features) : features_(std::move(features)) {
    if (features_.empty()) throw ContractViolation("feature spec must not be empty");
    std::set<Feature> seen(features_.begin(), features_.end());
    if (seen.size() != features_.size()) throw ContractViolation("feature spec has duplicates");
}

bool MatchFeatureSpec::contains(Feature f) const {
    return std::find(features_.begin(), features_.end(), f) != features_.end();
}

MatchFeatureSpec MatchFeatureSpec::parse(std::string_view text) {
    std::vector<Feature> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string_view::npos) comma = text.size();
        std::string_view item = text.substr(pos, comma - pos);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        if (!item.empty()) out.push_back(parse_feature(item));
        pos = comma + 1;
    }
    return MatchFeatureSpec(std::move(out));
}

std::string MatchFeatureSpec::to_string() const {
    std::string s;
    for (std::size_t i = 0; i < features_.size(); ++i) {
        if (i) s += ',';
        s += negacq::to_string(features_[i]);
    }
    return s;
}

FeatureTuple smm_projection(const SmmVector& v, const MatchFeatureSpec& spec,
                            const MotivationConfig& cfg) {
    FeatureTuple t;
    t.reserve(spec.size());
    for (Feature f : spec.features()) {
        switch (f) {
            case Feature::Behavior: t.push_back(static_cast<int>(v.behavior)); break;
            case Feature::Object: t.push_back(v.object ? static_cast<int>(*v.object) : -1); break;
            case Feature::FaceDetected: t.push_back(v.face_detected ? 1 : 0); break;
            case Feature::MotivationClass:
                t.push_back(static_cast<int>(classify(v.motivation, cfg)));
                break;
            case Feature::Resistance: t.push_back(v.resistance ? 1 : 0); break;
        }
    }
    return t;
}

bool smm_changed(const SmmVector& a, const SmmVector& b, const MatchFeatureSpec& spec,
                 const MotivationConfig& cfg) {
    return smm_projection(a, spec, cfg) != smm_projection(b, spec, cfg);
}

namespace {
template <typename E, std::size_t N>
E parse_enum(std::string_view s, const std::array<E, N>& all, const char* what) {
    for (E e : all)
        if (to_string(e) == s) return e;
    throw Error(std::string("unknown ") + what + " '" + std::string(s) + "'");
}
}  // namespace

std::string_view to_string(BehaviorId b) {
    switch (b) {
        case BehaviorId::LookingAround: return "looking_around";
        case BehaviorId::Watching: return "watching";
        case BehaviorId::Reaching: return "reaching";
        case BehaviorId::Rejecting: return "rejecting";
        case BehaviorId::Idle: return "idle";
    }
    return "?";
}

std::string_view to_string(ObjectId o) {
    switch (o) {
        case ObjectId::Triangle: return "triangle";
        case ObjectId::Moon: return "moon";
        case ObjectId::Square: return "square";
        case ObjectId::Heart: return "heart";
        case ObjectId::Circle: return "circle";
    }
    return "?";
}

std::string_view to_string(MotivationClass c) {
    switch (c) {
        case MotivationClass::Negative: return "negative";
        case MotivationClass::Neutral: return "neutral";
        case MotivationClass::Positive: return "positive";
    }
    return "?";
}

std::string_view to_string(Feature f) {
    switch (f) {
        case Feature::Behavior: return "behavior";
        case Feature::Object: return "object";
        case Feature::FaceDetected: return "face_detected";
        case Feature::MotivationClass: return "motivation_class";
        case Feature::Resistance: return "resistance";
    }
    return "?";
}

BehaviorId parse_behavior(std::string_view s) { return parse_enum(s, kAllBehaviors, "behavior"); }
ObjectId parse_object(std::string_view s) { return parse_enum(s, kAllObjects, "object"); }

MotivationClass parse_motivation_class(std::string_view s) {
    constexpr std::array<MotivationClass, 3> all{MotivationClass::Negative,
                                                 MotivationClass::Neutral,
                                                 MotivationClass::Positive};
    return parse_enum(s, all, "motivation class");
}

Feature parse_feature(std::string_view s) {
    constexpr std::array<Feature, 5> all{Feature::Behavior, Feature::Object,
                                         Feature::FaceDetected, Feature::MotivationClass,
                                         Feature::Resistance};
    return parse_enum(s, all, "feature");
}

Valence valence_from_int(int v) {
    if (v < -1 || v > 1) throw ContractViolation("valence must be -1, 0 or +1");
    return static_cast<Valence>(v);
}

}  // namespace negacq

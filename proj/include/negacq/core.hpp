#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace negacq {

/// Runtime failure with a human-readable message (bad input files, unknown words, ...).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition of an operation was violated by the caller.
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

inline constexpr int kTicksPerSecond = 30;

/// Converts seconds to ticks with round-to-nearest.
std::int64_t seconds_to_ticks(double seconds);
double ticks_to_seconds(std::int64_t ticks);

enum class BehaviorId { LookingAround, Watching, Reaching, Rejecting, Idle };
inline constexpr std::array<BehaviorId, 5> kAllBehaviors{
    BehaviorId::LookingAround, BehaviorId::Watching, BehaviorId::Reaching,
    BehaviorId::Rejecting, BehaviorId::Idle};

enum class ObjectId { Triangle, Moon, Square, Heart, Circle };
inline constexpr std::array<ObjectId, 5> kAllObjects{
    ObjectId::Triangle, ObjectId::Moon, ObjectId::Square, ObjectId::Heart, ObjectId::Circle};

enum class Valence : int { Disliked = -1, Neutral = 0, Liked = 1 };

/// Three-way affect class; the underlying values give the total order.
enum class MotivationClass : int { Negative = -1, Neutral = 0, Positive = 1 };

struct MotivationConfig {
    double neutral_band = 0.1;  // epsilon
    double lag = 1.0;           // tau, seconds
    void validate() const;
};

struct TimeConstants {
    double face_time = 0.8;
    double object_time = 3.0;
    double dwell_time_face = 1.2;
    double dwell_time_object = 2.0;
    double max_idle_time = 3.0;
    double grumpy_face_time = 1.6;
    double grumpy_object_time = 2.0;
    double reject_glance_time = 0.5;
    void validate() const;
};

/// One tick's sensorimotor-motivational snapshot.
struct SmmVector {
    std::int64_t tick = 0;
    BehaviorId behavior = BehaviorId::Idle;
    std::optional<ObjectId> object;
    bool face_detected = false;
    double motivation = 0.0;
    bool resistance = false;
    std::optional<std::vector<double>> encoders;

    bool operator==(const SmmVector&) const = default;
};

enum class Feature { Behavior, Object, FaceDetected, MotivationClass, Resistance };

/// Ordered, duplicate-free selection of smm dimensions used for grounding and matching.
class MatchFeatureSpec {
public:
    MatchFeatureSpec();  // all five dimensions
    explicit MatchFeatureSpec(std::vector<Feature> features);

    const std::vector<Feature>& features() const { return features_; }
    std::size_t size() const { return features_.size(); }
    bool contains(Feature f) const;

    /// Parses a comma-separated list such as "behavior,object,motivation_class".
    static MatchFeatureSpec parse(std::string_view text);
    std::string to_string() const;

    bool operator==(const MatchFeatureSpec&) const = default;

private:
    std::vector<Feature> features_;
};

/// Integer-coded projection of an SmmVector.
/// Codes: behavior and object use enum order (absent object = -1), booleans 0/1,
/// motivation class -1/0/+1.
using FeatureTuple = std::vector<int>;

FeatureTuple smm_projection(const SmmVector& v, const MatchFeatureSpec& spec,
                            const MotivationConfig& cfg = {});
bool smm_changed(const SmmVector& a, const SmmVector& b, const MatchFeatureSpec& spec,
                 const MotivationConfig& cfg = {});

// Stable lowercase names used in every file format.
std::string_view to_string(BehaviorId b);
std::string_view to_string(ObjectId o);
std::string_view to_string(MotivationClass c);
std::string_view to_string(Feature f);
BehaviorId parse_behavior(std::string_view s);
ObjectId parse_object(std::string_view s);
MotivationClass parse_motivation_class(std::string_view s);
Feature parse_feature(std::string_view s);
Valence valence_from_int(int v);

}  // namespace negacq

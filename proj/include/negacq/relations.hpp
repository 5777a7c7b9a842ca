#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace negacq {

enum class TemporalRelation {
    NoPush,
    BeforePush,
    OverlapBefore,
    OverlapBeforeAndAfter,
    AfterPush,
    OverlapAfter,
    BetweenPushes,
    DuringSeveralPushes,
    DuringPush,
};

inline constexpr std::array<TemporalRelation, 9> kAllRelations{
    TemporalRelation::NoPush,        TemporalRelation::BeforePush,
    TemporalRelation::OverlapBefore, TemporalRelation::OverlapBeforeAndAfter,
    TemporalRelation::AfterPush,     TemporalRelation::OverlapAfter,
    TemporalRelation::BetweenPushes, TemporalRelation::DuringSeveralPushes,
    TemporalRelation::DuringPush};

std::string_view to_string(TemporalRelation r);
TemporalRelation parse_relation(std::string_view s);

struct Interval {
    double start = 0.0;
    double end = 0.0;
    void validate() const;
    bool operator==(const Interval&) const = default;
};

inline constexpr double kDefaultMaxGap = 4.0;

/// Classifies how an utterance interval aligns with push intervals.
/// Pushes are sorted internally; overlapping pushes raise Error. When several
/// relations hold the most specific one wins:
/// several pushes, during, overlap before and after, overlap before, overlap after,
/// between, before, after, no push.
TemporalRelation classify_relation(const Interval& u, std::vector<Interval> pushes,
                                   double max_gap = kDefaultMaxGap);

}  // namespace negacq

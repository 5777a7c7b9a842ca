#include "negacq/relations.hpp"

#include "negacq/core.hpp"

#include <algorithm>
#include <cmath>

namespace negacq {

std::string_view to_string(TemporalRelation r) {
    switch (r) {
        case TemporalRelation::NoPush: return "no_push";
        case TemporalRelation::BeforePush: return "before_push";
        case TemporalRelation::OverlapBefore: return "overlap_before";
        case TemporalRelation::OverlapBeforeAndAfter: return "overlap_before_and_after";
        case TemporalRelation::AfterPush: return "after_push";
        case TemporalRelation::OverlapAfter: return "overlap_after";
        case TemporalRelation::BetweenPushes: return "between_pushes";
        case TemporalRelation::DuringSeveralPushes: return "during_several_pushes";
        case TemporalRelation::DuringPush: return "during_push";
    }
    return "?";
}

TemporalRelation parse_relation(std::string_view s) {
    for (TemporalRelation r : kAllRelations)
        if (to_string(r) == s) return r;
    throw Error("unknown temporal relation '" + std::string(s) + "'");
}

void Interval::validate() const {
    if (!(std::isfinite(start) && std::isfinite(end) && start < end))
        throw ContractViolation("interval needs start < end");
}

TemporalRelation classify_relation(const Interval& u, std::vector<Interval> pushes,
                                   double max_gap) {
    u.validate();
    std::sort(pushes.begin(), pushes.end(),
              [](const Interval& a, const Interval& b) { return a.start < b.start; });
    for (std::size_t i = 0; i < pushes.size(); ++i) {
        pushes[i].validate();
        if (i > 0 && pushes[i].start < pushes[i - 1].end) throw Error("overlapping pushes");
    }

    bool during = false, obaa = false, ob = false, oa = false, before = false, after = false;
    // For the composites: earliest push satisfying the first part, latest satisfying the second.
    std::ptrdiff_t first_oa = -1, last_ob = -1, first_after = -1, last_before = -1;

    for (std::size_t idx = 0; idx < pushes.size(); ++idx) {
        const Interval& p = pushes[idx];
        const auto i = static_cast<std::ptrdiff_t>(idx);
        if (p.start <= u.start && u.end <= p.end) during = true;
        if (u.start < p.start && p.end < u.end) obaa = true;
        if (u.start < p.start && p.start < u.end && u.end <= p.end) {
            ob = true;
            last_ob = i;
        }
        if (p.start <= u.start && u.start < p.end && p.end < u.end) {
            oa = true;
            if (first_oa < 0) first_oa = i;
        }
        const double gap_before = p.start - u.end;
        if (gap_before > 0.0 && gap_before <= max_gap) {
            before = true;
            last_before = i;
        }
        const double gap_after = u.start - p.end;
        if (gap_after > 0.0 && gap_after <= max_gap) {
            after = true;
            if (first_after < 0) first_after = i;
        }
    }

    if (first_oa >= 0 && last_ob > first_oa) return TemporalRelation::DuringSeveralPushes;
    if (during) return TemporalRelation::DuringPush;
    if (obaa) return TemporalRelation::OverlapBeforeAndAfter;
    if (ob) return TemporalRelation::OverlapBefore;
    if (oa) return TemporalRelation::OverlapAfter;
    if (first_after >= 0 && last_before > first_after) return TemporalRelation::BetweenPushes;
    if (before) return TemporalRelation::BeforePush;
    if (after) return TemporalRelation::AfterPush;
    return TemporalRelation::NoPush;
}

}  // namespace negacq

#include "doctest.h"

#include "negacq/relations.hpp"
#include "negacq/rng.hpp"
#include "negacq/teacher.hpp"
#include "oracles.hpp"

#include <algorithm>

using namespace negacq;

using R = TemporalRelation;

TEST_CASE("relation names round-trip") {
    for (R r : kAllRelations) CHECK(parse_relation(to_string(r)) == r);
    CHECK_THROWS_AS(parse_relation("sideways"), Error);
}

TEST_CASE("hand examples") {
    const Interval u{10, 12};
    CHECK(classify_relation(u, {{9, 13}}) == R::DuringPush);
    CHECK(classify_relation(u, {{10.5, 11.5}}) == R::OverlapBeforeAndAfter);
    CHECK(classify_relation(u, {{5, 5.5}}) == R::NoPush);
    CHECK(classify_relation(u, {{8, 10.5}, {11.5, 13}}) == R::DuringSeveralPushes);
    CHECK(classify_relation(u, {{11.5, 13}, {8, 10.5}}) == R::DuringSeveralPushes);
    CHECK(classify_relation(u, {}) == R::NoPush);
    CHECK(classify_relation(u, {{16, 17}}) == R::BeforePush);    // gap of exactly 4 s
    CHECK(classify_relation(u, {{16.1, 17}}) == R::NoPush);
    CHECK(classify_relation(u, {{7, 8}}) == R::AfterPush);
    CHECK(classify_relation(u, {{7, 8}, {13, 14}}) == R::BetweenPushes);
    CHECK(classify_relation(u, {{11, 14}}) == R::OverlapBefore);
    CHECK(classify_relation(u, {{9, 11}}) == R::OverlapAfter);
    CHECK(classify_relation(u, {{12, 13}}) == R::NoPush);  // touching, zero gap
}

TEST_CASE("bad input") {
    CHECK_THROWS_AS(classify_relation({10, 12}, {{1, 3}, {2, 4}}), Error);
    CHECK_THROWS_AS(classify_relation({12, 10}, {}), ContractViolation);
    CHECK_THROWS_AS(classify_relation({10, 12}, {{3, 3}}), ContractViolation);
}

TEST_CASE("classifier agrees with the brute-force oracle on fuzzed instances") {
    Rng rng(53);
    std::array<int, 9> seen{};
    for (int i = 0; i < 10000; ++i) {
        const auto c = oracle::random_relation_case(rng);
        const R want = oracle::relation(c.utterance, c.pushes);
        CHECK(classify_relation(c.utterance, c.pushes) == want);
        ++seen[static_cast<std::size_t>(want)];
    }
    for (int c : seen) CHECK(c > 0);
}

TEST_CASE("planned prohibition episodes realise the requested relation exactly") {
    const TeacherProfile profile = TeacherProfile::prohibition_default();
    Rng rng(59);
    for (R r : kAllRelations) {
        for (int i = 0; i < 300; ++i) {
            const std::int64_t earliest = rng.between(0, 5000);
            const ProhibitionPlan plan = plan_prohibition(r, profile, earliest, rng);
            CHECK(plan.relation == r);
            std::int64_t first = plan.utterance_start;
            std::vector<Interval> pushes;
            for (const auto& [s, e] : plan.pushes) {
                CHECK(s < e);
                first = std::min(first, s);
                pushes.push_back({ticks_to_seconds(s), ticks_to_seconds(e)});
            }
            CHECK(first == earliest);
            const Interval u{plan.utterance.t_start, plan.utterance.t_end};
            CHECK(classify_relation(u, pushes) == r);
            CHECK(oracle::relation(u, pushes) == r);
            CHECK(is_prohibitive(*plan.utterance.neg_type));
            CHECK(plan.end_tick() >= plan.utterance_end);
            if (r == R::NoPush) CHECK(pushes.empty());
            if (r == R::DuringPush) CHECK((pushes[0].start < u.start && u.end < pushes[0].end));
        }
    }
}

#include "doctest.h"

#include "negacq/grounding.hpp"
#include "negacq/motivation.hpp"
#include "negacq/rng.hpp"

#include <map>
#include <set>
#include <sstream>

using namespace negacq;

namespace {

std::vector<SmmVector> constant_log(std::int64_t ticks, BehaviorId b = BehaviorId::Reaching, double moti = 0.8) {
    std::vector<SmmVector> log;
    for (std::int64_t t = 0; t < ticks; ++t) {
        SmmVector v;
        v.tick = t;
        v.behavior = b;
        v.object = ObjectId::Heart;
        v.face_detected = true;
        v.motivation = moti;
        log.push_back(v);
    }
    return log;
}

Utterance say(const std::string& salient, double t0, double t1) {
    Utterance u;
    u.id = 1;
    u.t_start = t0;
    u.t_end = t1;
    const double d = (t1 - t0) / 2;
    u.words = {Word{"well", 150, 0.3, d * 0.9}, Word{salient, 300, 0.9, d}};
    return u;
}

GroundedWord entry(const std::string& word, double moti, int weight, const std::string& who = "P1") {
    GroundedWord g;
    g.word = word;
    g.snapshot.motivation = moti;
    g.snapshot.behavior = BehaviorId::Reaching;
    g.features = smm_projection(g.snapshot, MatchFeatureSpec{});
    g.weight = weight;
    g.source.participant = who;
    return g;
}

}  // namespace

TEST_CASE("an utterance over constant smm grounds exactly one weighted entry") {
    const auto log = constant_log(200);
    // 23 ticks: [1.0 s, 1.7667 s) covers ticks 30..52.
    const Utterance u = say("no", 1.0, 53.0 / 30.0);
    const auto [first, last] = utterance_ticks(u.t_start, u.t_end);
    CHECK(last - first == 23);
    const auto g = ground_utterance(u, log, MatchFeatureSpec{}, {"P1", 1, 1});
    REQUIRE(g.size() == 1);
    CHECK(g[0].word == "no");
    CHECK(g[0].weight == 23);
    CHECK(g[0].snapshot.tick == 30);
    CHECK(g[0].source == GroundingSource{"P1", 1, 1});
}

TEST_CASE("distinct projections during an utterance give distinct entries") {
    auto log = constant_log(100);
    for (std::int64_t t = 40; t < 100; ++t) log[t].behavior = BehaviorId::Rejecting;
    const auto g = ground_utterance(say("no", 1.0, 2.0), log, MatchFeatureSpec{});
    REQUIRE(g.size() == 2);
    CHECK(g[0].snapshot.behavior == BehaviorId::Reaching);
    CHECK(g[1].snapshot.behavior == BehaviorId::Rejecting);
    CHECK(g[0].weight + g[1].weight == 30);

    auto moti = constant_log(100);
    for (std::int64_t t = 45; t < 100; ++t) moti[t].motivation = -0.5;
    for (std::int64_t t = 0; t < 45; ++t) moti[t].motivation = 0.5;
    const auto m = ground_utterance(say("no", 1.0, 2.0), moti, MatchFeatureSpec{});
    REQUIRE(m.size() == 2);
    CHECK(m[0].motivation_class() == MotivationClass::Positive);
    CHECK(m[1].motivation_class() == MotivationClass::Negative);
    CHECK(m[0].raw_motivation() == 0.5);
}

TEST_CASE("grounding agrees with a brute-force projection census") {
    Rng rng(31);
    const MatchFeatureSpec spec;
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<SmmVector> log;
        for (std::int64_t t = 0; t < 300; ++t) {
            SmmVector v;
            v.tick = t;
            v.behavior = rng.bernoulli(0.5) ? BehaviorId::Reaching : BehaviorId::Watching;
            if (rng.bernoulli(0.7)) v.object = kAllObjects[rng.below(2)];
            v.face_detected = rng.bernoulli(0.5);
            v.motivation = rng.uniform(-1.0, 1.0);
            v.resistance = rng.bernoulli(0.1);
            log.push_back(v);
        }
        const double t0 = rng.uniform(0.0, 8.0);
        const double t1 = t0 + rng.uniform(0.2, 1.8);
        const Utterance u = say("x", t0, t1);
        const auto g = ground_utterance(u, log, spec);

        const auto [first, last] = utterance_ticks(t0, t1);
        std::map<FeatureTuple, int> census;
        for (std::int64_t t = first; t < last; ++t) ++census[smm_projection(log[t], spec)];
        CHECK(g.size() == census.size());
        int total = 0;
        for (const auto& e : g) {
            CHECK(census.at(e.features) == e.weight);
            CHECK(smm_projection(e.snapshot, spec) == e.features);
            total += e.weight;
        }
        CHECK(total == last - first);
    }
}

TEST_CASE("an utterance without overlapping ticks is uncovered") {
    const auto log = constant_log(30);
    CHECK_THROWS_WITH_AS(ground_utterance(say("no", 5.0, 6.0), log, MatchFeatureSpec{}),
                         doctest::Contains("uncovered utterance"), Error);
}

TEST_CASE("merge_session is append-only and checks the participant") {
    EmbodiedLexicon lex;
    lex.participant = "P1";
    const std::vector<GroundedWord> three{entry("a", 0.5, 1), entry("b", 0.5, 1), entry("c", 0.5, 1)};
    lex = merge_session(lex, three);
    CHECK(lex.size() == 3);
    lex = merge_session(lex, three);
    CHECK(lex.size() == 6);
    CHECK(lex.contains("b"));
    CHECK_FALSE(lex.contains("z"));
    CHECK_THROWS_AS(merge_session(lex, {entry("a", 0.5, 1, "P2")}), Error);
}

TEST_CASE("negative association fraction is weight-weighted") {
    EmbodiedLexicon lex;
    lex.participant = "P1";
    lex = merge_session(lex, {entry("no", -1.0, 3), entry("no", 0.9, 1), entry("yes", 0.9, 2)});
    CHECK(negative_association_fraction(lex, "no") == doctest::Approx(0.75));
    CHECK(negative_association_fraction(lex, "yes") == 0.0);

    EmbodiedLexicon neg;
    neg.participant = "P1";
    neg = merge_session(neg, {entry("no", -0.5, 2), entry("no", -1.0, 1)});
    CHECK(negative_association_fraction(neg, "no") == 1.0);
    CHECK_THROWS_WITH_AS(negative_association_fraction(lex, "maybe"), doctest::Contains("unknown word"), Error);
}

TEST_CASE("lexicon files round-trip and report bad lines") {
    EmbodiedLexicon lex;
    lex.participant = "P7";
    auto g = ground_utterance(say("no", 1.0, 2.0), constant_log(100, BehaviorId::Rejecting, -0.7),
                              MatchFeatureSpec{}, {"P7", 2, 5});
    lex = merge_session(lex, g);
    std::ostringstream os;
    write_lexicon(os, lex);
    const std::string text = os.str();
    CHECK(text.find("\"word\":\"no\",\"behavior\":\"rejecting\"") != std::string::npos);

    std::istringstream is(text);
    const auto back = read_lexicon(is, MatchFeatureSpec{});
    REQUIRE(back.size() == 1);
    CHECK(back.participant == "P7");
    CHECK(back.entries[0].features == lex.entries[0].features);
    CHECK(back.entries[0].weight == lex.entries[0].weight);
    CHECK(back.entries[0].source == lex.entries[0].source);
    std::ostringstream again;
    write_lexicon(again, back);
    CHECK(again.str() == text);

    std::istringstream bad(text + "{\"word\": \"x\"}\n");
    CHECK_THROWS_WITH_AS(read_lexicon(bad, MatchFeatureSpec{}, "lex.jsonl"), doctest::Contains("lex.jsonl:2"), Error);

    std::string mismatch = text;
    mismatch.replace(mismatch.find("\"negative\""), 10, "\"positive\"");
    std::istringstream mm(mismatch);
    CHECK_THROWS_AS(read_lexicon(mm, MatchFeatureSpec{}), Error);
}

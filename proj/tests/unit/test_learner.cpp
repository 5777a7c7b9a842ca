#include "doctest.h"

#include "negacq/languaging.hpp"
#include "negacq/learner.hpp"
#include "negacq/rng.hpp"

#include <algorithm>
#include <map>

using namespace negacq;

namespace {

GroundedWord exemplar(const std::string& word, FeatureTuple f, int weight) {
    GroundedWord g;
    g.word = word;
    g.features = std::move(f);
    g.weight = weight;
    g.source.participant = "P1";
    return g;
}

// Literal reading of the retrieval rule: expand every entry into `weight` unit
// exemplars, order them, keep the first k and vote.
std::optional<Match> oracle(const FeatureTuple& q, const EmbodiedLexicon& lex, const std::set<std::string>& excluded,
                            int k) {
    struct Unit {
        double d;
        std::string word;
    };
    std::vector<Unit> units;
    std::map<std::pair<double, std::string>, double> mass;  // summed weight per (distance, word)
    for (const auto& g : lex.entries) {
        if (excluded.count(g.word)) continue;
        const double d = distance(q, g.features, {});
        mass[{d, g.word}] += g.weight;
        for (int i = 0; i < g.weight; ++i) units.push_back({d, g.word});
    }
    if (units.empty()) return std::nullopt;
    std::stable_sort(units.begin(), units.end(), [&](const Unit& a, const Unit& b) {
        if (a.d != b.d) return a.d < b.d;
        const double ma = mass[{a.d, a.word}], mb = mass[{b.d, b.word}];
        if (ma != mb) return ma > mb;
        return a.word < b.word;
    });
    units.resize(std::min<std::size_t>(units.size(), static_cast<std::size_t>(k)));

    std::map<std::string, int> votes;
    for (const auto& u : units) ++votes[u.word];
    std::string best;
    for (const auto& [word, v] : votes) {
        if (best.empty()) {
            best = word;
            continue;
        }
        auto closest = [&](const std::string& w) {
            for (const auto& [key, m] : mass)
                if (key.second == w) return key;  // map is ordered by distance first
            return std::pair<double, std::string>{1e9, w};
        };
        const auto ca = closest(word), cb = closest(best);
        bool better = false;
        if (v != votes[best]) better = v > votes[best];
        else if (ca.first != cb.first) better = ca.first < cb.first;
        else if (mass[ca] != mass[cb]) better = mass[ca] > mass[cb];
        else better = word < best;
        if (better) best = word;
    }
    double dmin = 1e9;
    for (const auto& [key, m] : mass)
        if (key.second == best) dmin = std::min(dmin, key.first);
    return Match{best, dmin};
}

SmmVector query(std::int64_t tick, BehaviorId b = BehaviorId::Reaching, double moti = 0.8) {
    SmmVector v;
    v.tick = tick;
    v.behavior = b;
    v.object = ObjectId::Heart;
    v.face_detected = true;
    v.motivation = moti;
    return v;
}

}  // namespace

TEST_CASE("overlap distance") {
    const FeatureTuple a{1, 2, 3, 4, 5};
    CHECK(distance(a, a, {}) == 0.0);
    CHECK(distance(a, {1, 2, 0, 4, 5}, {}) == 1.0);
    CHECK(distance(a, {0, 2, 0, 4, 5}, {2, 1, 1, 1, 1}) == 3.0);
    CHECK_THROWS_AS(distance(a, {1, 2}, {}), Error);
}

TEST_CASE("best_match basics") {
    EmbodiedLexicon lex;
    CHECK_FALSE(best_match({1, 2}, lex, {}, {}));
    lex.entries = {exemplar("no", {1, 1}, 5), exemplar("heart", {2, 2}, 1)};
    const auto m = best_match({1, 1}, lex, {}, {});
    REQUIRE(m);
    CHECK(*m == Match{"no", 0.0});
    const auto other = best_match({1, 1}, lex, {"no"}, {});
    REQUIRE(other);
    CHECK(other->word == "heart");
    CHECK(other->distance == 2.0);
    CHECK_FALSE(best_match({1, 1}, lex, {"no", "heart"}, {}));

    LearnerConfig bad;
    bad.k = 0;
    CHECK_THROWS_AS(best_match({1, 1}, lex, {}, bad), ContractViolation);
}

TEST_CASE("best_match equals an exhaustive exemplar scan") {
    Rng rng(37);
    const std::vector<std::string> words{"no", "yes", "heart"};
    for (int trial = 0; trial < 3000; ++trial) {
        EmbodiedLexicon lex;
        lex.participant = "P1";
        const int n = 20;
        for (int i = 0; i < n; ++i)
            lex.entries.push_back(exemplar(words[rng.below(3)],
                                           {int(rng.below(3)), int(rng.below(2)), int(rng.below(2))},
                                           int(rng.between(1, 4))));
        const FeatureTuple q{int(rng.below(3)), int(rng.below(2)), int(rng.below(2))};
        LearnerConfig cfg;
        cfg.k = trial % 2 ? 3 : int(rng.between(1, 7));
        std::set<std::string> excluded;
        if (rng.bernoulli(0.3)) excluded.insert(words[rng.below(3)]);

        const auto want = oracle(q, lex, excluded, cfg.k);
        const auto got = best_match(q, lex, excluded, cfg);
        REQUIRE(want.has_value() == got.has_value());
        if (!want) continue;
        CHECK(*got == *want);

        // Pooled matcher gives the same answers.
        Matcher matcher(lex, cfg);
        std::optional<std::string> ex;
        if (!excluded.empty()) ex = *excluded.begin();
        CHECK(matcher.best_match(q, ex) == best_match(q, lex, excluded, cfg));
        CHECK(matcher.best_match(q, ex) == matcher.best_match(q, ex));

        // Excluding the winner never returns it.
        auto more = excluded;
        more.insert(got->word);
        const auto next = best_match(q, lex, more, cfg);
        if (next) CHECK(next->word != got->word);
    }
}

TEST_CASE("an exact exemplar wins at k = 1") {
    Rng rng(41);
    for (int trial = 0; trial < 500; ++trial) {
        EmbodiedLexicon lex;
        for (int i = 0; i < 10; ++i)
            lex.entries.push_back(exemplar("w" + std::to_string(i), {int(rng.below(4)), int(rng.below(4))}, 1));
        const auto& pick = lex.entries[rng.below(10)];
        const auto m = best_match(pick.features, lex, {}, {});
        REQUIRE(m);
        CHECK(m->distance == 0.0);
        CHECK(distance(pick.features, std::find_if(lex.entries.begin(), lex.entries.end(), [&](const auto& g) {
                                          return g.word == m->word;
                                      })->features, {}) == 0.0);
    }
}

// --- languaging ---------------------------------------------------------------------

TEST_CASE("constant matching smm speaks at the threshold tick") {
    const MatchFeatureSpec spec;
    EmbodiedLexicon lex;
    lex.participant = "P1";
    lex.entries = {exemplar("no", smm_projection(query(0), spec), 3),
                   exemplar("heart", smm_projection(query(0, BehaviorId::Reaching, -0.8), spec), 1)};
    Matcher matcher(lex, {});
    LanguagingState st;
    std::vector<SpeechEvent> events;
    for (int t = 1; t <= 60; ++t)
        if (auto e = languaging_tick(st, query(t), BehaviorId::Reaching, matcher, spec)) events.push_back(*e);
    REQUIRE(events.size() >= 2);
    CHECK(events[0] == SpeechEvent{15, "no"});
    // Next is the runner-up after another full threshold.
    CHECK(events[1] == SpeechEvent{30, "heart"});
    for (std::size_t i = 1; i < events.size(); ++i) CHECK(events[i].word != events[i - 1].word);
}

TEST_CASE("no speech outside trigger behaviors") {
    const MatchFeatureSpec spec;
    EmbodiedLexicon lex;
    lex.entries = {exemplar("no", smm_projection(query(0, BehaviorId::LookingAround), spec), 1)};
    Matcher matcher(lex, {});
    LanguagingState st;
    for (int t = 0; t < 200; ++t) {
        CHECK_FALSE(languaging_tick(st, query(t, BehaviorId::LookingAround), BehaviorId::LookingAround, matcher, spec));
        CHECK_FALSE(languaging_tick(st, query(t, BehaviorId::Idle), BehaviorId::Idle, matcher, spec));
    }
    CHECK(st.scores.empty());
}

TEST_CASE("a restored word that was just spoken is not spoken again") {
    const MatchFeatureSpec spec;
    EmbodiedLexicon lex;
    lex.entries = {exemplar("no", smm_projection(query(0), spec), 1)};
    Matcher matcher(lex, {});
    LanguagingState st;
    int spoken = 0;
    for (int t = 0; t < 400; ++t) {
        // Alternate the projection so the suppression keeps lifting.
        const double moti = (t / 20) % 2 ? 0.8 : 0.85;
        if (languaging_tick(st, query(t, BehaviorId::Reaching, t % 7 == 0 ? -0.8 : moti), BehaviorId::Reaching,
                            matcher, spec))
            ++spoken;
    }
    CHECK(spoken == 1);
}

TEST_CASE("the convenience overload agrees with the matcher overload") {
    const MatchFeatureSpec spec;
    EmbodiedLexicon lex;
    lex.entries = {exemplar("no", smm_projection(query(0), spec), 2), exemplar("yes", {0, 0, 0, 0, 0}, 1)};
    Matcher matcher(lex, {});
    LanguagingState a, b;
    for (int t = 0; t < 100; ++t)
        CHECK(languaging_tick(a, query(t), BehaviorId::Watching, matcher, spec) ==
              languaging_tick(b, query(t), BehaviorId::Watching, lex, spec));
}

TEST_CASE("robot speech renders as one-word utterances") {
    CHECK(robot_utterance_log({}).empty());
    const auto one = robot_utterance_log({{300, "no"}});
    REQUIRE(one.size() == 1);
    CHECK(one[0].t_start == doctest::Approx(10.0));
    CHECK(one[0].speaker == Speaker::Robot);
    CHECK(one[0].words.size() == 1);
    CHECK_NOTHROW(one[0].validate());

    const auto many = robot_utterance_log({{30, "a"}, {60, "b"}, {95, "c"}});
    REQUIRE(many.size() == 3);
    for (std::size_t i = 1; i < many.size(); ++i) CHECK(many[i].t_start > many[i - 1].t_start);
}

#include "doctest.h"

#include "negacq/core.hpp"
#include "negacq/prosody.hpp"
#include "negacq/rng.hpp"
#include "oracles.hpp"

#include <cmath>
#include <numeric>

using namespace negacq;

namespace {

Word w(std::string text, double f0, double energy, double dur) { return Word{std::move(text), f0, energy, dur}; }

Utterance utt(std::vector<Word> words) {
    Utterance u;
    double t = 0.0;
    for (const auto& x : words) t += x.duration;
    u.t_end = t;
    u.words = std::move(words);
    return u;
}

Utterance random_utterance(Rng& rng) {
    std::vector<Word> words;
    const int n = static_cast<int>(rng.between(1, 8));
    for (int i = 0; i < n; ++i)
        words.push_back(w("w" + std::to_string(i), rng.uniform(80, 400), rng.uniform(0.05, 1.0),
                          rng.uniform(0.05, 0.8)));
    return utt(std::move(words));
}

}  // namespace

TEST_CASE("word and utterance validation") {
    CHECK_NOTHROW(w("no", 200, 1, 0.3).validate());
    CHECK_THROWS_AS(w("", 200, 1, 0.3).validate(), ContractViolation);
    CHECK_THROWS_AS(w("no", 0, 1, 0.3).validate(), ContractViolation);
    CHECK_THROWS_AS(w("no", 200, 1, -1).validate(), ContractViolation);

    Utterance u = utt({w("no", 200, 1, 0.3)});
    CHECK_NOTHROW(u.validate());
    u.t_end = 0.2;  // shorter than the word
    CHECK_THROWS_AS(u.validate(), ContractViolation);
    u.t_end = 0.0;
    CHECK_THROWS_AS(u.validate(), ContractViolation);
    CHECK_THROWS_AS(Utterance{}.validate(), ContractViolation);
}

TEST_CASE("segment splits at long pauses") {
    SUBCASE("single word") {
        const auto out = segment({{w("hello", 200, 1, 0.3), 1.0}});
        REQUIRE(out.size() == 1);
        CHECK(out[0].words.size() == 1);
        CHECK(out[0].t_start == doctest::Approx(1.0));
        CHECK(out[0].t_end == doctest::Approx(1.3));
    }
    SUBCASE("explicit threshold") {
        const auto out = segment({{w("a", 200, 1, 0.2), 0.0}, {w("b", 200, 1, 0.2), 10.2}}, 1.0);
        CHECK(out.size() == 2);
    }
    SUBCASE("default threshold is mean plus one sample sd") {
        const std::vector<double> pauses{0.1, 0.1, 2.0, 0.1};
        std::vector<std::pair<Word, double>> stream;
        double t = 0.0;
        stream.push_back({w("w0", 200, 1, 0.25), t});
        for (std::size_t i = 0; i < pauses.size(); ++i) {
            t += 0.25 + pauses[i];
            stream.push_back({w("w" + std::to_string(i + 1), 200, 1, 0.25), t});
        }
        const double mean = std::accumulate(pauses.begin(), pauses.end(), 0.0) / 4.0;
        double ss = 0.0;
        for (double p : pauses) ss += (p - mean) * (p - mean);
        const double threshold = mean + std::sqrt(ss / 3.0);
        int expected_splits = 0;
        for (double p : pauses) expected_splits += p > threshold;
        CHECK(expected_splits == 1);

        const auto out = segment(stream);
        REQUIRE(out.size() == 2);
        CHECK(out[0].words.size() == 3);
        CHECK(out[1].words.size() == 2);
        CHECK(out[1].words.front().text == "w3");
    }
    SUBCASE("empty stream and bad onsets") {
        CHECK(segment({}).empty());
        CHECK_THROWS_AS(segment({{w("a", 1, 1, 0.1), 1.0}, {w("b", 1, 1, 0.1), 1.0}}), ContractViolation);
    }
}

TEST_CASE("normalize divides by the per-feature maximum") {
    const auto one = normalize(utt({w("x", 220, 0.3, 0.2)}));
    REQUIRE(one.size() == 1);
    CHECK(one[0].f0 == 1.0);
    CHECK(one[0].energy == 1.0);
    CHECK(one[0].duration == 1.0);

    const auto two = normalize(utt({w("a", 200, 1, 0.5), w("b", 100, 1, 0.5)}));
    CHECK(two[0].f0 == 1.0);
    CHECK(two[1].f0 == doctest::Approx(0.5));
    CHECK(two[1].energy == 1.0);
    CHECK(two[1].duration == 1.0);

    Rng rng(17);
    for (int i = 0; i < 500; ++i) {
        const auto u = random_utterance(rng);
        const auto n = normalize(u);
        bool top_f0 = false, top_e = false, top_d = false;
        for (const auto& f : n) {
            CHECK((f.f0 > 0 && f.f0 <= 1.0));
            CHECK((f.energy > 0 && f.energy <= 1.0));
            CHECK((f.duration > 0 && f.duration <= 1.0));
            top_f0 |= f.f0 == 1.0;
            top_e |= f.energy == 1.0;
            top_d |= f.duration == 1.0;
        }
        CHECK((top_f0 && top_e && top_d));
    }
}

TEST_CASE("extract_salient examples") {
    const Utterance u = utt({w("no", 250, 0.9, 0.4), w("you", 180, 0.6, 0.3), w("can't", 170, 0.5, 0.3),
                             w("touch", 160, 0.6, 0.25), w("that", 150, 0.4, 0.2)});
    CHECK(oracle::salient(u) == 0);
    CHECK(extract_salient(u).text == "no");
    CHECK(extract_salient(utt({w("no", 100, 0.1, 0.1)})).text == "no");

    const Utterance tie = utt({w("twin", 200, 0.5, 0.3), w("twin", 200, 0.5, 0.3)});
    CHECK(salient_index(tie) == 0);
}

TEST_CASE("extract_salient agrees with a raw-product oracle on fuzzed utterances") {
    Rng rng(23);
    for (int i = 0; i < 5000; ++i) {
        const auto u = random_utterance(rng);
        const std::size_t got = salient_index(u);
        REQUIRE(got < u.words.size());
        CHECK(got == oracle::salient(u));
    }
}

TEST_CASE("salience is invariant under scaling one feature across all words") {
    Rng rng(29);
    for (int i = 0; i < 2000; ++i) {
        const auto u = random_utterance(rng);
        const std::size_t base = salient_index(u);
        for (int feature = 0; feature < 3; ++feature) {
            const double factor = rng.uniform(0.01, 100.0);
            Utterance s = u;
            for (auto& word : s.words) {
                if (feature == 0) word.f0_max *= factor;
                if (feature == 1) word.energy_max *= factor;
                if (feature == 2) word.duration *= factor;
            }
            CHECK(salient_index(s) == base);
        }
    }
}

TEST_CASE("has_negation_word and speaker names") {
    CHECK(utt({w("no", 1, 1, 1)}).has_negation_word());
    CHECK_FALSE(utt({w("yes", 1, 1, 1)}).has_negation_word());
    CHECK(parse_speaker(to_string(Speaker::Robot)) == Speaker::Robot);
    CHECK_THROWS(parse_speaker("narrator"));
}

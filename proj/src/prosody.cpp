#include "negacq/prosody.hpp"

#include "negacq/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace negacq {

void Word::validate() const {
    if (text.empty()) throw ContractViolation("word text must not be empty");
    if (!(f0_max > 0.0 && energy_max > 0.0 && duration > 0.0))
        throw ContractViolation("word '" + text + "' has a non-positive prosodic feature");
}

std::string_view to_string(Speaker s) { return s == Speaker::Robot ? "robot" : "teacher"; }

Speaker parse_speaker(std::string_view s) {
    if (s == "teacher") return Speaker::Teacher;
    if (s == "robot") return Speaker::Robot;
    throw Error("unknown speaker '" + std::string(s) + "'");
}

void Utterance::validate(double tolerance) const {
    if (words.empty()) throw ContractViolation("utterance " + std::to_string(id) + " has no words");
    if (!(t_start < t_end))
        throw ContractViolation("utterance " + std::to_string(id) + " has t_start >= t_end");
    double total = 0.0;
    for (const auto& w : words) {
        w.validate();
        total += w.duration;
    }
    if (total > (t_end - t_start) + tolerance)
        throw ContractViolation("utterance " + std::to_string(id) +
                                ": word durations exceed the utterance window");
}

bool Utterance::has_negation_word() const {
    return std::any_of(words.begin(), words.end(),
                       [](const Word& w) { return is_negation_word(w.text); });
}

std::vector<Utterance> segment(const std::vector<std::pair<Word, double>>& stream,
                               std::optional<double> pause_threshold) {
    std::vector<Utterance> out;
    if (stream.empty()) return out;
    for (std::size_t i = 1; i < stream.size(); ++i)
        if (!(stream[i].second > stream[i - 1].second))
            throw ContractViolation("segment: onsets must be strictly increasing");

    std::vector<double> pauses;
    for (std::size_t i = 1; i < stream.size(); ++i)
        pauses.push_back(stream[i].second - (stream[i - 1].second + stream[i - 1].first.duration));

    double threshold = 0.0;
    if (pause_threshold) {
        threshold = *pause_threshold;
    } else if (!pauses.empty()) {
        const double n = static_cast<double>(pauses.size());
        const double mean = std::accumulate(pauses.begin(), pauses.end(), 0.0) / n;
        double ss = 0.0;
        for (double p : pauses) ss += (p - mean) * (p - mean);
        const double sd = pauses.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
        threshold = mean + sd;
    }

    auto open = [&](std::size_t i) {
        Utterance u;
        u.id = static_cast<int>(out.size());
        u.t_start = stream[i].second;
        out.push_back(std::move(u));
    };
    open(0);
    for (std::size_t i = 0; i < stream.size(); ++i) {
        if (i > 0 && pauses[i - 1] > threshold) open(i);
        Utterance& u = out.back();
        u.words.push_back(stream[i].first);
        u.t_end = std::max(u.t_end, stream[i].second + stream[i].first.duration);
    }
    return out;
}

std::vector<NormalizedFeatures> normalize(const Utterance& u) {
    if (u.words.empty()) throw ContractViolation("normalize: utterance has no words");
    double mf = 0.0, me = 0.0, md = 0.0;
    for (const auto& w : u.words) {
        w.validate();
        mf = std::max(mf, w.f0_max);
        me = std::max(me, w.energy_max);
        md = std::max(md, w.duration);
    }
    std::vector<NormalizedFeatures> out;
    out.reserve(u.words.size());
    for (const auto& w : u.words)
        out.push_back({w.f0_max / mf, w.energy_max / me, w.duration / md});
    return out;
}

std::size_t salient_index(const Utterance& u) {
    const auto feats = normalize(u);
    std::size_t best = 0;
    double best_score = feats[0].salience();
    for (std::size_t i = 1; i < feats.size(); ++i) {
        const double s = feats[i].salience();
        if (s > best_score) {
            best = i;
            best_score = s;
        }
    }
    return best;
}

const Word& extract_salient(const Utterance& u) { return u.words[salient_index(u)]; }

}  // namespace negacq

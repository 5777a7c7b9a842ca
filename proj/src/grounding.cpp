#include "negacq/grounding.hpp"

#include "negacq/jsonl.hpp"
#include "negacq/motivation.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>

namespace negacq {

MotivationClass GroundedWord::motivation_class(const MotivationConfig& cfg) const {
    return classify(snapshot.motivation, cfg);
}

bool EmbodiedLexicon::contains(const std::string& word) const {
    return std::any_of(entries.begin(), entries.end(),
                       [&](const GroundedWord& g) { return g.word == word; });
}

std::pair<std::int64_t, std::int64_t> utterance_ticks(double t_start, double t_end) {
    const std::int64_t first = seconds_to_ticks(t_start);
    const std::int64_t last = std::max(seconds_to_ticks(t_end), first + 1);
    return {first, last};
}

std::vector<GroundedWord> ground_utterance(const Utterance& u,
                                           const std::vector<SmmVector>& body_log,
                                           const MatchFeatureSpec& spec,
                                           const GroundingSource& source,
                                           const MotivationConfig& cfg) {
    const std::string word = extract_salient(u).text;
    const auto [first, last] = utterance_ticks(u.t_start, u.t_end);

    auto it = std::lower_bound(body_log.begin(), body_log.end(), first,
                               [](const SmmVector& v, std::int64_t t) { return v.tick < t; });
    std::vector<GroundedWord> out;
    std::map<FeatureTuple, std::size_t> index;
    for (; it != body_log.end() && it->tick < last; ++it) {
        FeatureTuple f = smm_projection(*it, spec, cfg);
        auto found = index.find(f);
        if (found != index.end()) {
            ++out[found->second].weight;
            continue;
        }
        index.emplace(f, out.size());
        out.push_back(GroundedWord{word, std::move(f), *it, source, 1});
    }
    if (out.empty())
        throw Error("uncovered utterance " + std::to_string(u.id) + " [" +
                    std::to_string(u.t_start) + ", " + std::to_string(u.t_end) + "]");
    return out;
}

EmbodiedLexicon merge_session(EmbodiedLexicon lex, const std::vector<GroundedWord>& fresh) {
    for (const auto& g : fresh) {
        if (g.source.participant != lex.participant)
            throw Error("participant mismatch: lexicon '" + lex.participant + "' vs entry '" +
                        g.source.participant + "'");
    }
    lex.entries.insert(lex.entries.end(), fresh.begin(), fresh.end());
    return lex;
}

double negative_association_fraction(const EmbodiedLexicon& lex, const std::string& word,
                                     const MotivationConfig& cfg) {
    double total = 0.0, negative = 0.0;
    for (const auto& g : lex.entries) {
        if (g.word != word) continue;
        total += g.weight;
        if (g.motivation_class(cfg) == MotivationClass::Negative) negative += g.weight;
    }
    if (total == 0.0) throw Error("unknown word '" + word + "'");
    return negative / total;
}

void write_lexicon(std::ostream& os, const EmbodiedLexicon& lex, const MotivationConfig& cfg) {
    for (const auto& g : lex.entries) {
        Json j;
        j["word"] = g.word;
        j["behavior"] = to_string(g.snapshot.behavior);
        j["object"] = g.snapshot.object ? Json(to_string(*g.snapshot.object)) : Json(nullptr);
        j["face"] = g.snapshot.face_detected;
        j["moti_class"] = to_string(g.motivation_class(cfg));
        j["moti"] = g.snapshot.motivation;
        j["resist"] = g.snapshot.resistance;
        j["weight"] = g.weight;
        j["participant"] = g.source.participant;
        j["session"] = g.source.session;
        j["utterance"] = g.source.utterance;
        os << j.dump() << '\n';
    }
}

void write_lexicon_file(const std::string& path, const EmbodiedLexicon& lex,
                        const MotivationConfig& cfg) {
    auto out = open_output(path);
    write_lexicon(out, lex, cfg);
    if (!out) throw Error("failed writing " + path);
}

EmbodiedLexicon read_lexicon(std::istream& is, const MatchFeatureSpec& spec,
                             const std::string& origin, const MotivationConfig& cfg) {
    EmbodiedLexicon lex;
    bool first = true;
    for_each_json_line(is, origin, [&](const Json& j, int) {
        GroundedWord g;
        g.word = j.at("word").get<std::string>();
        if (g.word.empty()) throw Error("empty word");
        g.snapshot.behavior = parse_behavior(j.at("behavior").get<std::string>());
        if (!j.at("object").is_null())
            g.snapshot.object = parse_object(j.at("object").get<std::string>());
        g.snapshot.face_detected = j.at("face").get<bool>();
        g.snapshot.motivation = j.at("moti").get<double>();
        g.snapshot.resistance = j.at("resist").get<bool>();
        g.weight = j.at("weight").get<int>();
        if (g.weight < 1) throw Error("weight must be >= 1");
        g.source.participant = j.at("participant").get<std::string>();
        g.source.session = j.at("session").get<int>();
        g.source.utterance = j.at("utterance").get<int>();
        if (parse_motivation_class(j.at("moti_class").get<std::string>()) !=
            classify(g.snapshot.motivation, cfg))
            throw Error("moti_class disagrees with moti");
        g.features = smm_projection(g.snapshot, spec, cfg);
        if (first) {
            lex.participant = g.source.participant;
            first = false;
        } else if (g.source.participant != lex.participant) {
            throw Error("lexicon mixes participants");
        }
        lex.entries.push_back(std::move(g));
    });
    return lex;
}

EmbodiedLexicon read_lexicon_file(const std::string& path, const MatchFeatureSpec& spec,
                                  const MotivationConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open lexicon " + path);
    return read_lexicon(in, spec, path, cfg);
}

}  // namespace negacq

#pragma once

#include "negacq/core.hpp"
#include "negacq/prosody.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace negacq {

struct GroundingSource {
    std::string participant;
    int session = 0;
    int utterance = 0;
    bool operator==(const GroundingSource&) const = default;
};

/// A salient word paired with one distinct smm projection observed during its utterance.
struct GroundedWord {
    std::string word;
    FeatureTuple features;
    SmmVector snapshot;  // first tick showing this projection
    GroundingSource source;
    int weight = 1;      // number of ticks collapsed into this entry

    double raw_motivation() const { return snapshot.motivation; }
    MotivationClass motivation_class(const MotivationConfig& cfg = {}) const;
    bool operator==(const GroundedWord&) const = default;
};

struct EmbodiedLexicon {
    std::string participant;
    std::vector<GroundedWord> entries;

    std::size_t size() const { return entries.size(); }
    bool contains(const std::string& word) const;
};

/// Tick range [first, last) covered by an utterance window.
std::pair<std::int64_t, std::int64_t> utterance_ticks(double t_start, double t_end);

/// Grounds the salient word of `u` in every distinct projection seen during it.
/// `body_log` must be ordered by tick. Throws Error("uncovered utterance") when no tick overlaps.
std::vector<GroundedWord> ground_utterance(const Utterance& u,
                                           const std::vector<SmmVector>& body_log,
                                           const MatchFeatureSpec& spec,
                                           const GroundingSource& source = {},
                                           const MotivationConfig& cfg = {});

/// Appends entries; all must belong to the lexicon's participant.
EmbodiedLexicon merge_session(EmbodiedLexicon lex, const std::vector<GroundedWord>& fresh);

/// Weight-weighted share of `word`'s entries whose motivation class is Negative.
double negative_association_fraction(const EmbodiedLexicon& lex, const std::string& word,
                                     const MotivationConfig& cfg = {});

/// One JSON object per line with keys
/// word, behavior, object, face, moti_class, moti, resist, weight, participant, session, utterance.
void write_lexicon(std::ostream& os, const EmbodiedLexicon& lex, const MotivationConfig& cfg = {});
void write_lexicon_file(const std::string& path, const EmbodiedLexicon& lex,
                        const MotivationConfig& cfg = {});
/// Reads a lexicon file, recomputing feature tuples under `spec`.
EmbodiedLexicon read_lexicon_file(const std::string& path, const MatchFeatureSpec& spec,
                                  const MotivationConfig& cfg = {});
EmbodiedLexicon read_lexicon(std::istream& is, const MatchFeatureSpec& spec,
                             const std::string& origin = "<stream>",
                             const MotivationConfig& cfg = {});

}  // namespace negacq

#pragma once

#include "negacq/core.hpp"
#include "negacq/languaging.hpp"
#include "negacq/negation.hpp"
#include "negacq/prosody.hpp"
#include "negacq/relations.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace negacq {

/// Prohibition or Disallowance utterances, in transcript order.
std::vector<Utterance> prohibitive_only(const std::vector<Utterance>& transcript);

/// Tallies the relation of every prohibitive utterance to the push log.
/// All nine relations are present in the result.
std::map<TemporalRelation, int> relation_counts(const std::vector<Utterance>& transcript,
                                                const std::vector<Interval>& pushes,
                                                double max_gap = kDefaultMaxGap);

struct ClassCounts {
    int negative = 0;
    int neutral = 0;
    int positive = 0;
    bool operator==(const ClassCounts&) const = default;
};

/// For each utterance of a listed type, counts each motivation class seen at least
/// once during the utterance window. Types without utterances are absent.
std::map<NegationType, ClassCounts> motivation_cooccurrence(const std::vector<Utterance>& transcript,
                                                            const std::vector<SmmVector>& body_memory,
                                                            const std::set<NegationType>& types,
                                                            const MotivationConfig& cfg = {});

struct CorpusEntry {
    std::string word;
    int count = 0;
    double percent = 0.0;
    int rank = 0;  // words with equal counts share a rank
    bool operator==(const CorpusEntry&) const = default;
};

/// Word frequencies over the stored word records, sorted by count then word.
/// `salient_only` counts one salient word per utterance; `restrict_to` keeps only listed words.
std::vector<CorpusEntry> corpus(const std::vector<Utterance>& utterances, bool salient_only,
                                const std::optional<std::set<std::string>>& restrict_to = std::nullopt);

struct UtteranceMetrics {
    double duration = 0.0;  // seconds
    int u = 0, w = 0, dw = 0;
    double mlu = 0.0, w_per_min = 0.0, u_per_min = 0.0;
    int nu = 0, nw = 0, dnw = 0;
    double nmlu = 0.0, nw_per_min = 0.0, nu_per_min = 0.0;
};

UtteranceMetrics utterance_metrics(const std::vector<Utterance>& transcript, double duration,
                                   const std::set<std::string>& negation_words = negation_lexicon());
/// Metrics from bare counts (used with the tabulated participant data).
UtteranceMetrics metrics_from_counts(int words, int utterances, int distinct_words, double duration);

/// Percentage of utterances containing `word` in which `word` is the salient word.
double salience_rate(const std::vector<Utterance>& utterances, const std::string& word);
/// Percentage of utterances of `type` whose salient word is a negation word.
double salience_rate(const std::vector<Utterance>& utterances, NegationType type);

/// Tideman ranked pairs. Each ballot lists candidates best first; candidates it omits
/// rank below all it lists. Returns rank groups, best first.
std::vector<std::vector<std::string>> ranked_pairs(const std::vector<std::vector<std::string>>& ballots);

double cohens_kappa(const std::vector<std::string>& codes1, const std::vector<std::string>& codes2);

struct AnovaResult {
    double f = 0.0;
    int df_between = 0;
    int df_within = 0;
    double p = 1.0;
};
AnovaResult one_way_anova(const std::vector<std::vector<double>>& groups);
/// Upper tail of the F distribution with (d1, d2) degrees of freedom.
double f_distribution_sf(double f, double d1, double d2);

/// Percentage of negation-word emissions made while the motivation class was Negative.
double proxy_felicity(const std::vector<SpeechEvent>& speech, const std::vector<SmmVector>& body_memory,
                      const std::set<std::string>& negation_words = negation_lexicon(),
                      const MotivationConfig& cfg = {});

/// Counts behind proxy_felicity, for pooling across sessions.
struct FelicityTally {
    int felicitous = 0;
    int total = 0;
    FelicityTally& operator+=(const FelicityTally& o) {
        felicitous += o.felicitous;
        total += o.total;
        return *this;
    }
    double percent() const;  // throws Error("no negative productions") when total == 0
};
FelicityTally felicity_tally(const std::vector<SpeechEvent>& speech, const std::vector<SmmVector>& body_memory,
                             const std::set<std::string>& negation_words = negation_lexicon(),
                             const MotivationConfig& cfg = {});

}  // namespace negacq

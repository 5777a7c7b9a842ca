#pragma once

#include "negacq/grounding.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace negacq {

struct LearnerConfig {
    int k = 1;
    std::vector<double> weights;  // per feature; empty means all 1
    void validate(std::size_t arity) const;
};

struct Match {
    std::string word;
    double distance = 0.0;
    bool operator==(const Match&) const = default;
};

/// Weighted overlap distance: sum of weights over positions where the tuples differ.
double distance(const FeatureTuple& a, const FeatureTuple& b, const std::vector<double>& weights);

/// k-nearest-neighbour retrieval over weight-expanded exemplars.
///
/// Neighbours are taken in order of distance; at equal distance the word with the
/// larger summed weight at that distance goes first, then the lexicographically
/// smaller word. The returned word is the plurality among the k neighbours. Ties
/// prefer the word whose closest exemplars are closer, then the larger summed
/// weight at that closest distance, then the lexicographically smaller word.
/// The reported distance is the word's closest exemplar distance.
std::optional<Match> best_match(const FeatureTuple& query, const EmbodiedLexicon& lex,
                                const std::set<std::string>& excluded, const LearnerConfig& cfg);

/// Read-only index over a lexicon with memoised queries.
/// Entries with identical (features, word) are pooled, which leaves every result unchanged.
class Matcher {
public:
    Matcher(const EmbodiedLexicon& lex, LearnerConfig cfg);

    std::optional<Match> best_match(const FeatureTuple& query, const std::optional<std::string>& excluded);
    bool empty() const { return groups_.empty(); }

private:
    struct Group {
        FeatureTuple features;
        std::string word;
        double weight;
    };
    std::vector<Group> groups_;
    LearnerConfig cfg_;
    std::map<std::pair<FeatureTuple, std::string>, std::optional<Match>> cache_;
};

}  // namespace negacq

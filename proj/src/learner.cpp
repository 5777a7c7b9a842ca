#include "negacq/learner.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace negacq {

void LearnerConfig::validate(std::size_t arity) const {
    if (k < 1) throw ContractViolation("learner k must be >= 1");
    if (!weights.empty() && weights.size() != arity)
        throw ContractViolation("learner weights do not match the feature arity");
    for (double w : weights)
        if (!(w >= 0.0)) throw ContractViolation("learner weights must be non-negative");
}

double distance(const FeatureTuple& a, const FeatureTuple& b, const std::vector<double>& weights) {
    if (a.size() != b.size()) throw Error("feature tuples differ in arity");
    if (!weights.empty() && weights.size() != a.size())
        throw Error("weight vector differs in arity");
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) d += weights.empty() ? 1.0 : weights[i];
    return d;
}

namespace {

struct Candidate {
    double distance;
    const std::string* word;
    double weight;
};

// Shared selection over (distance, word, weight) triples.
std::optional<Match> select(std::vector<Candidate> cands, int k) {
    if (cands.empty()) return std::nullopt;

    // Pool weight per (distance, word).
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
        return std::tie(a.distance, *a.word) < std::tie(b.distance, *b.word);
    });
    std::vector<Candidate> pooled;
    for (const auto& c : cands) {
        if (!pooled.empty() && pooled.back().distance == c.distance && *pooled.back().word == *c.word)
            pooled.back().weight += c.weight;
        else
            pooled.push_back(c);
    }
    std::sort(pooled.begin(), pooled.end(), [](const Candidate& a, const Candidate& b) {
        if (a.distance != b.distance) return a.distance < b.distance;
        if (a.weight != b.weight) return a.weight > b.weight;
        return *a.word < *b.word;
    });

    struct Tally {
        double votes = 0.0;
        double closest = 0.0;
        double weight_at_closest = 0.0;
    };
    std::map<std::string, Tally> tally;
    double remaining = k;
    for (const auto& p : pooled) {
        if (remaining <= 0.0) break;
        const double take = std::min(p.weight, remaining);
        remaining -= take;
        auto [it, inserted] = tally.try_emplace(*p.word);
        if (inserted) {
            it->second.closest = p.distance;
            it->second.weight_at_closest = p.weight;
        }
        it->second.votes += take;
    }

    const std::pair<const std::string, Tally>* best = nullptr;
    for (const auto& entry : tally) {
        if (!best) {
            best = &entry;
            continue;
        }
        const Tally& a = entry.second;
        const Tally& b = best->second;
        bool better = false;
        if (a.votes != b.votes) better = a.votes > b.votes;
        else if (a.closest != b.closest) better = a.closest < b.closest;
        else if (a.weight_at_closest != b.weight_at_closest) better = a.weight_at_closest > b.weight_at_closest;
        // map iteration is already lexicographic, so an equal candidate never displaces
        if (better) best = &entry;
    }
    return Match{best->first, best->second.closest};
}

}  // namespace

std::optional<Match> best_match(const FeatureTuple& query, const EmbodiedLexicon& lex,
                                const std::set<std::string>& excluded, const LearnerConfig& cfg) {
    cfg.validate(query.size());
    std::vector<Candidate> cands;
    for (const auto& g : lex.entries) {
        if (excluded.count(g.word)) continue;
        cands.push_back({distance(query, g.features, cfg.weights), &g.word,
                         static_cast<double>(g.weight)});
    }
    return select(std::move(cands), cfg.k);
}

Matcher::Matcher(const EmbodiedLexicon& lex, LearnerConfig cfg) : cfg_(std::move(cfg)) {
    std::map<std::pair<FeatureTuple, std::string>, double> pooled;
    for (const auto& g : lex.entries) pooled[{g.features, g.word}] += g.weight;
    for (auto& [key, w] : pooled) groups_.push_back({key.first, key.second, w});
    if (!groups_.empty()) cfg_.validate(groups_.front().features.size());
}

std::optional<Match> Matcher::best_match(const FeatureTuple& query,
                                         const std::optional<std::string>& excluded) {
    auto key = std::make_pair(query, excluded.value_or(std::string{}));
    if (!excluded) key.second.assign(1, '\0');  // distinct from any real word
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;

    std::vector<Candidate> cands;
    cands.reserve(groups_.size());
    for (const auto& g : groups_) {
        if (excluded && g.word == *excluded) continue;
        cands.push_back({distance(query, g.features, cfg_.weights), &g.word, g.weight});
    }
    auto result = select(std::move(cands), cfg_.k);
    cache_.emplace(std::move(key), result);
    return result;
}

}  // namespace negacq

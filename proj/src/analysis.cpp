#include "negacq/analysis.hpp"

#include "negacq/grounding.hpp"
#include "negacq/motivation.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace negacq {

std::vector<Utterance> prohibitive_only(const std::vector<Utterance>& transcript) {
    std::vector<Utterance> out;
    for (const auto& u : transcript)
        if (u.neg_type && is_prohibitive(*u.neg_type)) out.push_back(u);
    return out;
}

std::map<TemporalRelation, int> relation_counts(const std::vector<Utterance>& transcript,
                                                const std::vector<Interval>& pushes, double max_gap) {
    std::map<TemporalRelation, int> counts;
    for (TemporalRelation r : kAllRelations) counts[r] = 0;
    for (const auto& u : prohibitive_only(transcript))
        ++counts[classify_relation({u.t_start, u.t_end}, pushes, max_gap)];
    return counts;
}

std::map<NegationType, ClassCounts> motivation_cooccurrence(const std::vector<Utterance>& transcript,
                                                            const std::vector<SmmVector>& body_memory,
                                                            const std::set<NegationType>& types,
                                                            const MotivationConfig& cfg) {
    std::map<NegationType, ClassCounts> out;
    for (const auto& u : transcript) {
        if (!u.neg_type || !types.count(*u.neg_type)) continue;
        const auto [first, last] = utterance_ticks(u.t_start, u.t_end);
        auto it = std::lower_bound(body_memory.begin(), body_memory.end(), first,
                                   [](const SmmVector& v, std::int64_t t) { return v.tick < t; });
        bool neg = false, neu = false, pos = false;
        for (; it != body_memory.end() && it->tick < last; ++it) {
            switch (classify(it->motivation, cfg)) {
                case MotivationClass::Negative: neg = true; break;
                case MotivationClass::Neutral: neu = true; break;
                case MotivationClass::Positive: pos = true; break;
            }
        }
        ClassCounts& c = out[*u.neg_type];
        c.negative += neg;
        c.neutral += neu;
        c.positive += pos;
    }
    return out;
}

std::vector<CorpusEntry> corpus(const std::vector<Utterance>& utterances, bool salient_only,
                                const std::optional<std::set<std::string>>& restrict_to) {
    std::map<std::string, int> counts;
    auto add = [&](const std::string& w) {
        if (!restrict_to || restrict_to->count(w)) ++counts[w];
    };
    for (const auto& u : utterances) {
        if (u.words.empty()) continue;
        if (salient_only) {
            add(extract_salient(u).text);
        } else {
            for (const auto& w : u.words) add(w.text);
        }
    }
    int total = 0;
    for (const auto& [w, c] : counts) total += c;

    std::vector<CorpusEntry> out;
    for (const auto& [w, c] : counts) out.push_back({w, c, 100.0 * c / total, 0});
    std::sort(out.begin(), out.end(), [](const CorpusEntry& a, const CorpusEntry& b) {
        return a.count != b.count ? a.count > b.count : a.word < b.word;
    });
    int rank = 0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (i == 0 || out[i].count != out[i - 1].count) ++rank;
        out[i].rank = rank;
    }
    return out;
}

UtteranceMetrics metrics_from_counts(int words, int utterances, int distinct_words, double duration) {
    if (!(duration > 0.0)) throw ContractViolation("duration must be positive");
    UtteranceMetrics m;
    m.duration = duration;
    m.w = words;
    m.u = utterances;
    m.dw = distinct_words;
    m.mlu = utterances > 0 ? static_cast<double>(words) / utterances : 0.0;
    m.w_per_min = words * 60.0 / duration;
    m.u_per_min = utterances * 60.0 / duration;
    return m;
}

UtteranceMetrics utterance_metrics(const std::vector<Utterance>& transcript, double duration,
                                   const std::set<std::string>& negation_words) {
    int words = 0;
    std::set<std::string> distinct, distinct_neg;
    int nu = 0, nu_words = 0, nw = 0;
    for (const auto& u : transcript) {
        words += static_cast<int>(u.words.size());
        int here = 0;
        for (const auto& w : u.words) {
            distinct.insert(w.text);
            if (negation_words.count(w.text)) {
                ++here;
                distinct_neg.insert(w.text);
            }
        }
        if (here > 0) {
            ++nu;
            nw += here;
            nu_words += static_cast<int>(u.words.size());
        }
    }
    UtteranceMetrics m = metrics_from_counts(words, static_cast<int>(transcript.size()),
                                             static_cast<int>(distinct.size()), duration);
    m.nu = nu;
    m.nw = nw;
    m.dnw = static_cast<int>(distinct_neg.size());
    m.nmlu = nu > 0 ? static_cast<double>(nu_words) / nu : 0.0;
    m.nw_per_min = nw * 60.0 / duration;
    m.nu_per_min = nu * 60.0 / duration;
    return m;
}

double salience_rate(const std::vector<Utterance>& utterances, const std::string& word) {
    int with = 0, salient = 0;
    for (const auto& u : utterances) {
        if (std::none_of(u.words.begin(), u.words.end(), [&](const Word& w) { return w.text == word; }))
            continue;
        ++with;
        salient += extract_salient(u).text == word;
    }
    if (with == 0) throw Error("no utterance contains '" + word + "'");
    return 100.0 * salient / with;
}

double salience_rate(const std::vector<Utterance>& utterances, NegationType type) {
    int n = 0, salient = 0;
    for (const auto& u : utterances) {
        if (u.neg_type != type || u.words.empty()) continue;
        ++n;
        salient += is_negation_word(extract_salient(u).text);
    }
    if (n == 0) throw Error("no utterance of type " + to_string(type));
    return 100.0 * salient / n;
}

// ---------------------------------------------------------------------------
// Ranked pairs

namespace {

using Graph = std::vector<std::vector<bool>>;

bool reaches(const Graph& g, std::size_t from, std::size_t to) {
    std::vector<bool> seen(g.size(), false);
    std::vector<std::size_t> stack{from};
    seen[from] = true;
    while (!stack.empty()) {
        const std::size_t x = stack.back();
        stack.pop_back();
        if (x == to) return true;
        for (std::size_t y = 0; y < g.size(); ++y)
            if (g[x][y] && !seen[y]) {
                seen[y] = true;
                stack.push_back(y);
            }
    }
    return false;
}

}  // namespace

std::vector<std::vector<std::string>> ranked_pairs(const std::vector<std::vector<std::string>>& ballots) {
    std::set<std::string> all;
    for (const auto& b : ballots) all.insert(b.begin(), b.end());
    const std::vector<std::string> names(all.begin(), all.end());
    const std::size_t n = names.size();
    if (n == 0) return {};

    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < n; ++i) index[names[i]] = i;

    // prefer[a][b]: ballots ranking a above b.
    std::vector<std::vector<int>> prefer(n, std::vector<int>(n, 0));
    for (const auto& b : ballots) {
        std::vector<std::size_t> pos(n, b.size());
        for (std::size_t r = 0; r < b.size(); ++r) {
            const std::size_t i = index[b[r]];
            if (pos[i] != b.size()) throw Error("ballot lists '" + b[r] + "' twice");
            pos[i] = r;
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (pos[i] < pos[j]) ++prefer[i][j];
    }

    std::map<int, std::vector<std::pair<std::size_t, std::size_t>>, std::greater<>> by_margin;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (prefer[i][j] > prefer[j][i]) by_margin[prefer[i][j] - prefer[j][i]].push_back({i, j});

    Graph locked(n, std::vector<bool>(n, false));
    for (const auto& [margin, group] : by_margin) {
        Graph trial = locked;
        for (const auto& [a, b] : group) trial[a][b] = true;
        std::vector<std::pair<std::size_t, std::size_t>> accept;
        for (const auto& [a, b] : group)
            if (!reaches(trial, b, a)) accept.push_back({a, b});
        for (const auto& [a, b] : accept) locked[a][b] = true;
    }

    std::vector<std::vector<std::string>> ranking;
    std::vector<bool> removed(n, false);
    std::size_t left = n;
    while (left > 0) {
        std::vector<std::size_t> sources;
        for (std::size_t j = 0; j < n; ++j) {
            if (removed[j]) continue;
            bool incoming = false;
            for (std::size_t i = 0; i < n && !incoming; ++i) incoming = !removed[i] && locked[i][j];
            if (!incoming) sources.push_back(j);
        }
        std::vector<std::string> tier;
        for (std::size_t j : sources) {
            removed[j] = true;
            tier.push_back(names[j]);
        }
        left -= sources.size();
        ranking.push_back(std::move(tier));
    }
    return ranking;
}

double cohens_kappa(const std::vector<std::string>& codes1, const std::vector<std::string>& codes2) {
    if (codes1.size() != codes2.size()) throw ContractViolation("kappa needs equal-length code lists");
    if (codes1.empty()) throw ContractViolation("kappa needs at least one item");
    const double n = static_cast<double>(codes1.size());
    std::map<std::string, double> m1, m2;
    double agree = 0.0;
    for (std::size_t i = 0; i < codes1.size(); ++i) {
        m1[codes1[i]] += 1.0;
        m2[codes2[i]] += 1.0;
        agree += codes1[i] == codes2[i];
    }
    const double po = agree / n;
    double pe = 0.0;
    for (const auto& [code, c] : m1) {
        auto it = m2.find(code);
        if (it != m2.end()) pe += (c / n) * (it->second / n);
    }
    if (pe >= 1.0) return 1.0;
    return (po - pe) / (1.0 - pe);
}

double f_distribution_sf(double f, double d1, double d2) {
    if (!(d1 > 0.0 && d2 > 0.0)) throw ContractViolation("degrees of freedom must be positive");
    if (std::isinf(f)) return 0.0;
    if (!(f > 0.0)) return 1.0;
    return boost::math::ibeta(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f));
}

AnovaResult one_way_anova(const std::vector<std::vector<double>>& groups) {
    if (groups.size() < 2) throw ContractViolation("ANOVA needs at least two groups");
    std::size_t n = 0;
    double grand = 0.0;
    for (const auto& g : groups) {
        if (g.empty()) throw ContractViolation("ANOVA groups must be non-empty");
        for (double x : g) {
            if (!std::isfinite(x)) throw ContractViolation("ANOVA values must be finite");
            grand += x;
        }
        n += g.size();
    }
    const std::size_t k = groups.size();
    if (n <= k) throw ContractViolation("ANOVA needs more observations than groups");
    grand /= static_cast<double>(n);

    double ssb = 0.0, ssw = 0.0;
    for (const auto& g : groups) {
        double mean = 0.0;
        for (double x : g) mean += x;
        mean /= static_cast<double>(g.size());
        ssb += static_cast<double>(g.size()) * (mean - grand) * (mean - grand);
        for (double x : g) ssw += (x - mean) * (x - mean);
    }
    AnovaResult r;
    r.df_between = static_cast<int>(k - 1);
    r.df_within = static_cast<int>(n - k);
    const double msb = ssb / r.df_between;
    const double msw = ssw / r.df_within;
    if (msw == 0.0) {
        r.f = msb == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    } else {
        r.f = msb / msw;
    }
    r.p = f_distribution_sf(r.f, r.df_between, r.df_within);
    return r;
}

double FelicityTally::percent() const {
    if (total == 0) throw Error("no negative productions");
    return 100.0 * felicitous / total;
}

FelicityTally felicity_tally(const std::vector<SpeechEvent>& speech, const std::vector<SmmVector>& body_memory,
                             const std::set<std::string>& negation_words, const MotivationConfig& cfg) {
    FelicityTally t;
    for (const auto& e : speech) {
        if (!negation_words.count(e.word)) continue;
        auto it = std::lower_bound(body_memory.begin(), body_memory.end(), e.tick,
                                   [](const SmmVector& v, std::int64_t tick) { return v.tick < tick; });
        if (it == body_memory.end() || it->tick != e.tick)
            throw Error("speech at tick " + std::to_string(e.tick) + " has no body-memory record");
        ++t.total;
        t.felicitous += classify(it->motivation, cfg) == MotivationClass::Negative;
    }
    return t;
}

double proxy_felicity(const std::vector<SpeechEvent>& speech, const std::vector<SmmVector>& body_memory,
                      const std::set<std::string>& negation_words, const MotivationConfig& cfg) {
    return felicity_tally(speech, body_memory, negation_words, cfg).percent();
}

}  // namespace negacq

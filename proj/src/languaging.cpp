#include "negacq/languaging.hpp"

#include "negacq/behavior.hpp"

#include <algorithm>

namespace negacq {

std::optional<SpeechEvent> languaging_tick(LanguagingState& state, const SmmVector& query,
                                           BehaviorId behavior, Matcher& matcher,
                                           const MatchFeatureSpec& spec,
                                           const LanguagingConfig& cfg,
                                           const MotivationConfig& mcfg) {
    if (cfg.threshold < 1) throw ContractViolation("languaging threshold must be positive");

    FeatureTuple projection = smm_projection(query, spec, mcfg);
    if (state.last_projection && *state.last_projection != projection) state.suppressed.reset();
    state.last_projection = std::move(projection);

    if (!is_trigger_behavior(behavior)) return std::nullopt;

    const auto best = matcher.best_match(*state.last_projection, state.suppressed);
    if (!best) return std::nullopt;

    for (auto& [word, score] : state.scores)
        if (word != best->word) score = std::max(0, score - 1);
    int& score = state.scores[best->word];
    score = std::min(score + 1, cfg.threshold);
    if (score < cfg.threshold) return std::nullopt;
    if (state.last_spoken && *state.last_spoken == best->word) return std::nullopt;

    state.scores.clear();
    state.suppressed = best->word;
    state.last_spoken = best->word;
    return SpeechEvent{query.tick, best->word};
}

std::optional<SpeechEvent> languaging_tick(LanguagingState& state, const SmmVector& query,
                                           BehaviorId behavior, const EmbodiedLexicon& lex,
                                           const MatchFeatureSpec& spec,
                                           const LearnerConfig& lcfg,
                                           const LanguagingConfig& cfg,
                                           const MotivationConfig& mcfg) {
    Matcher matcher(lex, lcfg);
    return languaging_tick(state, query, behavior, matcher, spec, cfg, mcfg);
}

std::vector<Utterance> robot_utterance_log(const std::vector<SpeechEvent>& events,
                                           const LanguagingConfig& cfg) {
    std::vector<Utterance> out;
    out.reserve(events.size());
    for (const auto& e : events) {
        Utterance u;
        u.id = static_cast<int>(out.size());
        u.t_start = ticks_to_seconds(e.tick);
        u.t_end = u.t_start + cfg.robot_word_duration;
        u.speaker = Speaker::Robot;
        u.words.push_back(Word{e.word, 120.0, 0.5, cfg.robot_word_duration});
        out.push_back(std::move(u));
    }
    return out;
}

}  // namespace negacq

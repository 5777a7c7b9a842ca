#pragma once

#include "negacq/learner.hpp"
#include "negacq/prosody.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace negacq {

struct LanguagingConfig {
    int threshold = 15;  // ticks of consistent retrieval before speaking
    double robot_word_duration = 0.4;
};

struct LanguagingState {
    std::map<std::string, int> scores;
    std::optional<std::string> suppressed;
    std::optional<FeatureTuple> last_projection;
    std::optional<std::string> last_spoken;
};

struct SpeechEvent {
    std::int64_t tick = 0;
    std::string word;
    bool operator==(const SpeechEvent&) const = default;
};

/// One tick of the speech-production loop.
///
/// While a trigger behavior is active the best-matching word (the suppressed word
/// excluded) gains one point and every other tracked word loses one, floored at 0.
/// Reaching the threshold speaks the word, resets all scores and suppresses it.
/// A change of the smm projection lifts the suppression. The word spoken last is
/// never spoken again directly afterwards: it may win retrieval once restored, but
/// its score stops at the threshold and nothing is emitted for it.
std::optional<SpeechEvent> languaging_tick(LanguagingState& state, const SmmVector& query,
                                           BehaviorId behavior, Matcher& matcher,
                                           const MatchFeatureSpec& spec,
                                           const LanguagingConfig& cfg = {},
                                           const MotivationConfig& mcfg = {});

/// Convenience overload that builds a throwaway matcher.
std::optional<SpeechEvent> languaging_tick(LanguagingState& state, const SmmVector& query,
                                           BehaviorId behavior, const EmbodiedLexicon& lex,
                                           const MatchFeatureSpec& spec,
                                           const LearnerConfig& lcfg = {},
                                           const LanguagingConfig& cfg = {},
                                           const MotivationConfig& mcfg = {});

/// Renders speech events as one-word robot utterances.
std::vector<Utterance> robot_utterance_log(const std::vector<SpeechEvent>& events,
                                           const LanguagingConfig& cfg = {});

}  // namespace negacq

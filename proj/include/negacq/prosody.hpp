#pragma once

#include "negacq/negation.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace negacq {

struct Word {
    std::string text;
    double f0_max = 1.0;      // Hz
    double energy_max = 1.0;  // arbitrary units
    double duration = 0.1;    // seconds

    void validate() const;
    bool operator==(const Word&) const = default;
};

enum class Speaker { Teacher, Robot };
std::string_view to_string(Speaker s);
Speaker parse_speaker(std::string_view s);

struct Utterance {
    int id = 0;
    double t_start = 0.0;
    double t_end = 0.0;
    std::vector<Word> words;
    Speaker speaker = Speaker::Teacher;
    std::optional<NegationType> neg_type;

    /// Checks the timing and word invariants; throws ContractViolation.
    void validate(double tolerance = 0.05) const;
    bool has_negation_word() const;
    bool operator==(const Utterance&) const = default;
};

struct NormalizedFeatures {
    double f0 = 0.0;
    double energy = 0.0;
    double duration = 0.0;
    double salience() const { return f0 * energy * duration; }
};

/// Splits a timed word stream at long pauses.
/// The pause before word i+1 is its onset minus the end of word i. Without an
/// explicit threshold the split point is mean + 1 sample sd of all pauses.
std::vector<Utterance> segment(const std::vector<std::pair<Word, double>>& stream,
                               std::optional<double> pause_threshold = std::nullopt);

/// Divides each feature by its maximum over the utterance.
std::vector<NormalizedFeatures> normalize(const Utterance& u);

/// Index of the most salient word; earliest wins ties.
std::size_t salient_index(const Utterance& u);
const Word& extract_salient(const Utterance& u);

}  // namespace negacq

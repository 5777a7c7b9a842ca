#pragma once

#include "negacq/behavior.hpp"
#include "negacq/negation.hpp"
#include "negacq/prosody.hpp"
#include "negacq/relations.hpp"
#include "negacq/rng.hpp"
#include "negacq/session_config.hpp"

#include <array>
#include <deque>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace negacq {

/// Probabilities over TemporalRelation (indexed in kAllRelations order).
struct ProhibitionResponseDist {
    std::array<double, 9> p{};

    /// Column totals of the observed relation counts (143, 36, 26, 8, 14, 10, 15, 4, 56 of 312).
    static ProhibitionResponseDist observed();
    void validate() const;
    double operator[](TemporalRelation r) const;
    TemporalRelation sample(Rng& rng) const;
};

/// Discrete distribution over labels, stored unnormalised.
template <typename Key>
struct Distribution {
    std::map<Key, double> weights;

    double total() const;
    double probability(const Key& k) const;
    Key sample(Rng& rng) const;
    void validate(const char* what) const;
};

/// Utterance kind: a negation type, or nullopt for a plain non-negative utterance.
using UtteranceKind = std::optional<NegationType>;

struct TeacherProfile {
    std::string name = "prohibition";
    Scenario scenario = Scenario::Prohibition;
    double utterance_rate = 27.0;  // utterances per minute
    double rate_variation = 0.2;   // per-session multiplicative spread
    Distribution<UtteranceKind> mix_on_frown;
    Distribution<UtteranceKind> mix_default;
    std::map<NegationType, double> salience;                       // salient-negation probability
    std::map<NegationType, Distribution<std::string>> words;       // negation word choice
    std::map<NegationType, std::map<std::string, double>> word_salience;  // relative per-word factors
    double disallowance_share = 65.0 / 265.0;
    double denial_response = 0.08; // chance of a denial after the robot mislabels an object
    int episodes_per_presentation = 2;  // prohibition episodes per forbidden presentation
    double approval_share = 0.7;   // plain utterances that approve while the robot smiles at an allowed object
    double stress_marked = 0.6;    // chance a plain utterance stresses its marked word
    ProhibitionResponseDist prohibition_response = ProhibitionResponseDist::observed();
    double push_min = 0.5;
    double push_max = 2.0;
    double hold_min = 8.0;
    double hold_max = 14.0;
    double gap_min = 1.0;
    double gap_max = 3.0;

    static TeacherProfile prohibition_default();
    static TeacherProfile rejection_default();
    static TeacherProfile for_scenario(Scenario s);

    void validate() const;
    double salience_for(NegationType t) const;
    const Distribution<std::string>& words_for(NegationType t) const;
    /// Probability that `word` is made salient when it realises type `t`.
    double word_salience_probability(NegationType t, const std::string& word) const;

    /// Reads the documented key = value format. Keys start from the defaults named by `base`.
    static TeacherProfile parse(std::istream& is, const std::string& origin = "<profile>");
    static TeacherProfile load(const std::string& path);
    std::string to_text() const;
};

/// Register of a plain utterance.
enum class PlainStyle { Label, Approval };

/// Builds an utterance of the given type (or a plain one) with synthetic prosody.
/// Times start at 0 and t_end equals the summed word durations.
Utterance render_utterance(UtteranceKind kind, const TeacherProfile& profile, Rng& rng,
                           std::optional<ObjectId> topic = std::nullopt,
                           PlainStyle style = PlainStyle::Label);
inline Utterance render_utterance(NegationType type, const TeacherProfile& profile, Rng& rng) {
    return render_utterance(UtteranceKind{type}, profile, rng);
}

/// What the teacher can see of the robot at the start of a tick.
struct Observable {
    std::int64_t tick = 0;
    BehaviorId behavior = BehaviorId::Idle;
    FacialExpression face = FacialExpression::Neutral;
    GazeTarget gaze = GazeTarget::table();
    std::optional<ObjectId> presented;
    std::optional<std::string> robot_said;  // word spoken on the previous tick
};

struct TeacherAction {
    enum class Kind { Present, Withdraw, PushStart, PushEnd, Say };
    Kind kind = Kind::Say;
    ObjectId object = ObjectId::Triangle;  // Present
    Utterance utterance;                   // Say; times are session seconds

    static TeacherAction present(ObjectId o) { return {Kind::Present, o, {}}; }
    static TeacherAction withdraw() { return {Kind::Withdraw, ObjectId::Triangle, {}}; }
    static TeacherAction push_start() { return {Kind::PushStart, ObjectId::Triangle, {}}; }
    static TeacherAction push_end() { return {Kind::PushEnd, ObjectId::Triangle, {}}; }
    static TeacherAction say(Utterance u) { return {Kind::Say, ObjectId::Triangle, std::move(u)}; }
};

/// Planned prohibition episode, in absolute ticks.
struct ProhibitionPlan {
    TemporalRelation relation = TemporalRelation::NoPush;
    Utterance utterance;
    std::int64_t utterance_start = 0;
    std::int64_t utterance_end = 0;
    std::vector<std::pair<std::int64_t, std::int64_t>> pushes;  // [start, end) ticks
    std::int64_t end_tick() const;
};

/// Lays out one prohibitive utterance and the pushes that realise `relation` exactly.
/// Every element starts at or after `earliest`.
ProhibitionPlan plan_prohibition(TemporalRelation relation, const TeacherProfile& profile,
                                 std::int64_t earliest, Rng& rng);

/// Anything that drives the participant side of a session.
class Driver {
public:
    virtual ~Driver() = default;
    virtual std::vector<TeacherAction> act(const Observable& obs) = 0;
};

/// Stochastic stand-in for a participant, fully determined by its seed.
class ScriptedTeacher : public Driver {
public:
    ScriptedTeacher(TeacherProfile profile, SessionConfig session, std::uint64_t seed);
    std::vector<TeacherAction> act(const Observable& obs) override;

    /// Relations sampled for the episodes so far, in order.
    const std::vector<TemporalRelation>& sampled_relations() const { return sampled_; }

private:
    void manage_presentation(std::int64_t t, std::vector<TeacherAction>& out);
    void maybe_start_episode(const Observable& obs);
    void maybe_speak(const Observable& obs, std::vector<TeacherAction>& out);
    TeacherAction say_at(std::int64_t tick, Utterance u);

    TeacherProfile profile_;
    SessionConfig session_;
    Rng rng_;
    double rate_;
    std::vector<ObjectId> order_;
    std::size_t order_pos_ = 0;
    std::optional<ObjectId> presented_;
    std::int64_t hold_until_ = 0;
    std::int64_t next_present_ = 0;
    int episodes_this_presentation_ = 0;
    std::deque<std::pair<std::int64_t, TeacherAction>> planned_;
    std::int64_t episode_end_ = -1;
    std::int64_t cooldown_until_ = 0;
    std::int64_t busy_until_ = 0;
    std::int64_t next_utterance_ = 0;
    bool pending_denial_ = false;
    std::vector<TemporalRelation> sampled_;
};

}  // namespace negacq

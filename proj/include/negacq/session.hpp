#pragma once

#include "negacq/behavior.hpp"
#include "negacq/grounding.hpp"
#include "negacq/jsonl.hpp"
#include "negacq/languaging.hpp"
#include "negacq/learner.hpp"
#include "negacq/motivation.hpp"
#include "negacq/relations.hpp"
#include "negacq/session_config.hpp"
#include "negacq/teacher.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace negacq {

/// Robot-side parameters shared by every session of a run.
struct RobotParams {
    MatchFeatureSpec spec;
    MotivationConfig motivation;
    TimeConstants time;
    LearnerConfig learner;
    LanguagingConfig languaging;

    void validate() const;
};

struct BehaviorEvent {
    std::int64_t tick = 0;
    BehaviorId behavior = BehaviorId::Idle;
    bool operator==(const BehaviorEvent&) const = default;
};

struct SessionLog {
    SessionConfig config;
    std::vector<SmmVector> body_memory;        // one record per tick, starting at the start marker
    std::vector<BehaviorEvent> behavior_events;
    std::vector<Interval> pushes;              // seconds
    std::vector<Utterance> transcript;         // teacher utterances, ids from 1
    std::vector<SpeechEvent> speech;
    std::int64_t start_tick = 0;
};

/// Robot-visible state after a tick, as streamed to live clients.
struct TickReport {
    std::int64_t tick = 0;
    BehaviorId behavior = BehaviorId::Idle;
    FacialExpression face = FacialExpression::Neutral;
    GazeTarget gaze;
    double motivation = 0.0;
    std::optional<SpeechEvent> speech;
};

/// The 30 Hz loop. Each call to `step` applies the participant's actions for the
/// current tick and advances every robot module once.
class SessionLoop {
public:
    SessionLoop(SessionConfig cfg, const EmbodiedLexicon& lexicon, RobotParams params = {});

    /// What a participant can observe before acting on the next tick.
    Observable observable() const;
    TickReport step(const std::vector<TeacherAction>& actions);

    std::int64_t tick() const { return tick_; }
    bool finished() const { return tick_ >= log_.config.total_ticks(); }
    bool push_active() const { return push_open_.has_value(); }
    std::optional<ObjectId> presented() const { return presented_; }
    const SessionLog& log() const { return log_; }

    /// Closes an open push and returns the log. The loop may stop before `finished()`.
    SessionLog finish();

private:
    void apply(const TeacherAction& a);

    RobotParams params_;
    Matcher matcher_;
    SessionLog log_;
    std::int64_t tick_ = 0;
    BehaviorState behavior_;
    MotivationState motivation_;
    LanguagingState languaging_;
    std::optional<ObjectId> presented_;
    std::optional<std::int64_t> push_open_;
    std::optional<std::string> last_word_;
};

/// Runs a whole session with the given driver.
SessionLog run_session(const SessionConfig& cfg, const EmbodiedLexicon& lexicon, Driver& driver,
                       const RobotParams& params = {});
/// Runs a whole session against a scripted teacher.
SessionLog run_session(const SessionConfig& cfg, const EmbodiedLexicon& lexicon,
                       const TeacherProfile& profile, std::uint64_t seed,
                       const RobotParams& params = {});

/// Offline grounding of every teacher utterance of a finished session.
EmbodiedLexicon between_sessions(const SessionLog& log, EmbodiedLexicon lexicon,
                                 const RobotParams& params = {});

struct ExperimentOptions {
    Scenario experiment = Scenario::Rejection;
    TeacherProfile profile = TeacherProfile::rejection_default();
    std::string participant = "P01";
    int sessions = 5;
    double duration = 300.0;
    std::uint64_t seed = 0;
    RobotParams robot;
};

struct ExperimentArtifacts {
    std::vector<SessionLog> logs;
    std::vector<EmbodiedLexicon> lexicons;  // lexicons[k] is the state after session k+1
};

ExperimentArtifacts run_experiment(const ExperimentOptions& opts);

/// Stable 64-bit id for a participant label (FNV-1a).
std::uint64_t participant_stream(const std::string& participant);

// --- files ---------------------------------------------------------------

/// Writes body_memory.jsonl, transcript.jsonl, pushes.jsonl, speech.jsonl,
/// robot_transcript.jsonl, behavior_events.jsonl and config.json into `dir`.
void write_session_log(const std::string& dir, const SessionLog& log,
                       const RobotParams& params = {});
SessionLog read_session_log(const std::string& dir);

/// Writes session_<k>/ directories plus lexicon_after_s<k>.jsonl files.
void write_experiment(const std::string& dir, const ExperimentArtifacts& art,
                      const RobotParams& params = {});

Json config_to_json(const SessionConfig& cfg);
SessionConfig config_from_json(const Json& j);
Json utterance_to_json(const Utterance& u);
Utterance utterance_from_json(const Json& j);

}  // namespace negacq

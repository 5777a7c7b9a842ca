#include "negacq/session.hpp"

#include <filesystem>
#include <fstream>

namespace negacq {

void RobotParams::validate() const {
    motivation.validate();
    time.validate();
    learner.validate(spec.size());
    if (languaging.threshold < 1) throw ContractViolation("languaging threshold must be positive");
    if (!(languaging.robot_word_duration > 0.0))
        throw ContractViolation("robot word duration must be positive");
}

// ---------------------------------------------------------------------------
// Loop

SessionLoop::SessionLoop(SessionConfig cfg, const EmbodiedLexicon& lexicon, RobotParams params)
    : params_(std::move(params)), matcher_(lexicon, params_.learner) {
    cfg.validate();
    params_.validate();
    log_.config = std::move(cfg);
    log_.body_memory.reserve(static_cast<std::size_t>(log_.config.total_ticks()));
}

Observable SessionLoop::observable() const {
    Observable o;
    o.tick = tick_;
    o.behavior = behavior_.current;
    o.face = facial_expression(classify(motivation_.value, params_.motivation));
    o.gaze = behavior_.gaze;
    o.presented = presented_;
    o.robot_said = last_word_;
    return o;
}

void SessionLoop::apply(const TeacherAction& a) {
    switch (a.kind) {
        case TeacherAction::Kind::Present:
            presented_ = a.object;
            break;
        case TeacherAction::Kind::Withdraw:
            presented_.reset();
            break;
        case TeacherAction::Kind::PushStart:
            if (!push_open_) push_open_ = tick_;
            break;
        case TeacherAction::Kind::PushEnd:
            if (push_open_) {
                if (tick_ > *push_open_)
                    log_.pushes.push_back({ticks_to_seconds(*push_open_), ticks_to_seconds(tick_)});
                push_open_.reset();
            }
            break;
        case TeacherAction::Kind::Say: {
            Utterance u = a.utterance;
            u.id = static_cast<int>(log_.transcript.size()) + 1;
            u.speaker = Speaker::Teacher;
            log_.transcript.push_back(std::move(u));
            break;
        }
    }
}

TickReport SessionLoop::step(const std::vector<TeacherAction>& actions) {
    if (finished()) throw ContractViolation("session already finished");
    for (const auto& a : actions) apply(a);

    const bool resist = push_open_.has_value();
    std::optional<Presentation> pres;
    std::optional<Valence> valence;
    if (presented_) {
        valence = log_.config.valence_map.at(*presented_);
        pres = Presentation{*presented_, *valence};
    }
    const double dt = 1.0 / kTicksPerSecond;

    BehaviorInput in;
    in.presented = pres;
    in.resistance_active = resist;
    in.motivation_class = classify(motivation_.value, params_.motivation);
    BehaviorStep bs = negacq::step(behavior_, in, params_.time, dt);
    behavior_ = bs.state;
    if (bs.changed_to || tick_ == 0) log_.behavior_events.push_back({tick_, behavior_.current});

    motivation_ = negacq::step(motivation_, valence, resist, dt, params_.motivation);

    SmmVector smm;
    smm.tick = tick_;
    smm.behavior = behavior_.current;
    smm.object = presented_;
    smm.face_detected = behavior_.gaze.kind == GazeTarget::Kind::Face;
    smm.motivation = motivation_.value;
    smm.resistance = resist;

    auto said = languaging_tick(languaging_, smm, behavior_.current, matcher_, params_.spec,
                                params_.languaging, params_.motivation);
    last_word_.reset();
    if (said) {
        log_.speech.push_back(*said);
        last_word_ = said->word;
    }
    log_.body_memory.push_back(smm);

    TickReport r;
    r.tick = tick_;
    r.behavior = behavior_.current;
    r.face = facial_expression(classify(motivation_.value, params_.motivation));
    r.gaze = behavior_.gaze;
    r.motivation = motivation_.value;
    r.speech = said;
    ++tick_;
    return r;
}

SessionLog SessionLoop::finish() {
    if (push_open_) {
        if (tick_ > *push_open_)
            log_.pushes.push_back({ticks_to_seconds(*push_open_), ticks_to_seconds(tick_)});
        push_open_.reset();
    }
    return log_;
}

SessionLog run_session(const SessionConfig& cfg, const EmbodiedLexicon& lexicon, Driver& driver,
                       const RobotParams& params) {
    SessionLoop loop(cfg, lexicon, params);
    while (!loop.finished()) loop.step(driver.act(loop.observable()));
    return loop.finish();
}

SessionLog run_session(const SessionConfig& cfg, const EmbodiedLexicon& lexicon,
                       const TeacherProfile& profile, std::uint64_t seed,
                       const RobotParams& params) {
    ScriptedTeacher teacher(profile, cfg, seed);
    return run_session(cfg, lexicon, teacher, params);
}

EmbodiedLexicon between_sessions(const SessionLog& log, EmbodiedLexicon lexicon,
                                 const RobotParams& params) {
    if (lexicon.entries.empty()) lexicon.participant = log.config.participant;
    for (const auto& u : log.transcript) {
        GroundingSource src{log.config.participant, log.config.session_index, u.id};
        lexicon = merge_session(std::move(lexicon),
                                ground_utterance(u, log.body_memory, params.spec, src, params.motivation));
    }
    return lexicon;
}

std::uint64_t participant_stream(const std::string& participant) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : participant) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

ExperimentArtifacts run_experiment(const ExperimentOptions& opts) {
    if (opts.sessions < 1 || opts.sessions > 5) throw Error("sessions must be in 1..5");
    opts.profile.validate();
    const std::uint64_t who = participant_stream(opts.participant);
    ExperimentArtifacts art;
    EmbodiedLexicon lex;
    lex.participant = opts.participant;
    for (int k = 1; k <= opts.sessions; ++k) {
        const auto sk = static_cast<std::uint64_t>(k);
        SessionConfig cfg = experiment_session(opts.experiment, k, opts.participant,
                                               Rng::derive(opts.seed, {who}), opts.duration);
        SessionLog log = run_session(cfg, lex, opts.profile, Rng::derive(opts.seed, {who, sk}), opts.robot);
        lex = between_sessions(log, std::move(lex), opts.robot);
        art.logs.push_back(std::move(log));
        art.lexicons.push_back(lex);
    }
    return art;
}

// ---------------------------------------------------------------------------
// Serialisation

Json config_to_json(const SessionConfig& cfg) {
    Json j;
    j["scenario"] = to_string(cfg.scenario);
    j["session_index"] = cfg.session_index;
    j["duration"] = cfg.duration;
    j["participant"] = cfg.participant;
    Json v = Json::object();
    for (const auto& [o, val] : cfg.valence_map) v[std::string(to_string(o))] = static_cast<int>(val);
    j["valences"] = v;
    Json f = Json::array();
    for (ObjectId o : cfg.forbidden) f.push_back(to_string(o));
    j["forbidden"] = f;
    return j;
}

SessionConfig config_from_json(const Json& j) {
    SessionConfig cfg;
    cfg.scenario = parse_scenario(j.at("scenario").get<std::string>());
    cfg.session_index = j.at("session_index").get<int>();
    cfg.duration = j.at("duration").get<double>();
    cfg.participant = j.at("participant").get<std::string>();
    for (const auto& [name, v] : j.at("valences").items())
        cfg.valence_map[parse_object(name)] = valence_from_int(v.get<int>());
    for (const auto& o : j.at("forbidden")) cfg.forbidden.insert(parse_object(o.get<std::string>()));
    try {
        cfg.validate();
    } catch (const ContractViolation& e) {
        throw Error(std::string("invalid session config: ") + e.what());
    }
    return cfg;
}

Json utterance_to_json(const Utterance& u) {
    Json j;
    j["id"] = u.id;
    j["t_start"] = u.t_start;
    j["t_end"] = u.t_end;
    j["speaker"] = to_string(u.speaker);
    if (u.neg_type) j["neg_type"] = to_string(*u.neg_type);
    Json ws = Json::array();
    for (const auto& w : u.words)
        ws.push_back(Json{{"text", w.text}, {"f0", w.f0_max}, {"energy", w.energy_max}, {"dur", w.duration}});
    j["words"] = ws;
    return j;
}

Utterance utterance_from_json(const Json& j) {
    Utterance u;
    u.id = j.at("id").get<int>();
    u.t_start = j.at("t_start").get<double>();
    u.t_end = j.at("t_end").get<double>();
    u.speaker = parse_speaker(j.at("speaker").get<std::string>());
    if (j.contains("neg_type") && !j.at("neg_type").is_null())
        u.neg_type = parse_negation_type(j.at("neg_type").get<std::string>());
    for (const auto& w : j.at("words"))
        u.words.push_back(Word{w.at("text").get<std::string>(), w.at("f0").get<double>(),
                               w.at("energy").get<double>(), w.at("dur").get<double>()});
    try {
        u.validate();
    } catch (const ContractViolation& e) {
        throw Error(std::string("invalid utterance: ") + e.what());
    }
    return u;
}

namespace {

Json smm_to_json(const SmmVector& v) {
    Json j;
    j["t"] = ticks_to_seconds(v.tick);
    j["tick"] = v.tick;
    j["bid"] = to_string(v.behavior);
    j["oid"] = v.object ? Json(to_string(*v.object)) : Json(nullptr);
    j["face"] = v.face_detected;
    j["moti"] = v.motivation;
    j["resist"] = v.resistance;
    return j;
}

SmmVector smm_from_json(const Json& j) {
    SmmVector v;
    v.tick = j.at("tick").get<std::int64_t>();
    v.behavior = parse_behavior(j.at("bid").get<std::string>());
    if (!j.at("oid").is_null()) v.object = parse_object(j.at("oid").get<std::string>());
    v.face_detected = j.at("face").get<bool>();
    v.motivation = j.at("moti").get<double>();
    if (!(v.motivation >= -1.0 && v.motivation <= 1.0)) throw Error("moti outside [-1, 1]");
    v.resistance = j.at("resist").get<bool>();
    return v;
}

void write_lines(const std::string& path, const std::vector<Json>& rows) {
    auto out = open_output(path);
    for (const auto& r : rows) out << r.dump() << '\n';
    if (!out) throw Error("failed writing " + path);
}

}  // namespace

void write_session_log(const std::string& dir, const SessionLog& log, const RobotParams& params) {
    namespace fs = std::filesystem;
    const fs::path d(dir);

    Json cfg = config_to_json(log.config);
    cfg["start_tick"] = log.start_tick;
    cfg["ticks"] = log.body_memory.size();
    cfg["match_features"] = params.spec.to_string();
    {
        auto out = open_output((d / "config.json").string());
        out << cfg.dump(2) << '\n';
    }

    std::vector<Json> rows;
    rows.reserve(log.body_memory.size());
    for (const auto& v : log.body_memory) rows.push_back(smm_to_json(v));
    write_lines((d / "body_memory.jsonl").string(), rows);

    rows.clear();
    for (const auto& u : log.transcript) rows.push_back(utterance_to_json(u));
    write_lines((d / "transcript.jsonl").string(), rows);

    rows.clear();
    for (const auto& p : log.pushes) rows.push_back(Json{{"t_start", p.start}, {"t_end", p.end}});
    write_lines((d / "pushes.jsonl").string(), rows);

    rows.clear();
    for (const auto& s : log.speech)
        rows.push_back(Json{{"tick", s.tick}, {"t", ticks_to_seconds(s.tick)}, {"word", s.word}});
    write_lines((d / "speech.jsonl").string(), rows);

    rows.clear();
    for (const auto& u : robot_utterance_log(log.speech, params.languaging)) rows.push_back(utterance_to_json(u));
    write_lines((d / "robot_transcript.jsonl").string(), rows);

    rows.clear();
    for (const auto& e : log.behavior_events)
        rows.push_back(Json{{"tick", e.tick}, {"t", ticks_to_seconds(e.tick)}, {"bid", to_string(e.behavior)}});
    write_lines((d / "behavior_events.jsonl").string(), rows);
}

SessionLog read_session_log(const std::string& dir) {
    namespace fs = std::filesystem;
    const fs::path d(dir);
    if (!fs::is_directory(d)) throw Error("no session directory " + dir);
    SessionLog log;
    {
        const std::string path = (d / "config.json").string();
        std::ifstream in(path);
        if (!in) throw Error("cannot open " + path);
        Json j;
        try {
            j = Json::parse(in);
            log.config = config_from_json(j);
            log.start_tick = j.value("start_tick", std::int64_t{0});
        } catch (const Json::exception& e) {
            throw Error(path + ": " + e.what());
        } catch (const Error& e) {
            throw Error(path + ": " + e.what());
        }
    }
    std::int64_t expect = log.start_tick;
    for_each_json_line_in_file((d / "body_memory.jsonl").string(), [&](const Json& j, int) {
        SmmVector v = smm_from_json(j);
        if (v.tick != expect) throw Error("expected tick " + std::to_string(expect));
        ++expect;
        log.body_memory.push_back(v);
    });
    for_each_json_line_in_file((d / "transcript.jsonl").string(), [&](const Json& j, int) {
        log.transcript.push_back(utterance_from_json(j));
    });
    for_each_json_line_in_file((d / "pushes.jsonl").string(), [&](const Json& j, int) {
        Interval p{j.at("t_start").get<double>(), j.at("t_end").get<double>()};
        try {
            p.validate();
        } catch (const ContractViolation& e) {
            throw Error(e.what());
        }
        log.pushes.push_back(p);
    });
    const fs::path speech = d / "speech.jsonl";
    if (fs::exists(speech))
        for_each_json_line_in_file(speech.string(), [&](const Json& j, int) {
            log.speech.push_back(SpeechEvent{j.at("tick").get<std::int64_t>(), j.at("word").get<std::string>()});
        });
    const fs::path events = d / "behavior_events.jsonl";
    if (fs::exists(events))
        for_each_json_line_in_file(events.string(), [&](const Json& j, int) {
            log.behavior_events.push_back(
                BehaviorEvent{j.at("tick").get<std::int64_t>(), parse_behavior(j.at("bid").get<std::string>())});
        });
    return log;
}

void write_experiment(const std::string& dir, const ExperimentArtifacts& art, const RobotParams& params) {
    namespace fs = std::filesystem;
    for (std::size_t k = 0; k < art.logs.size(); ++k) {
        const std::string idx = std::to_string(k + 1);
        write_session_log((fs::path(dir) / ("session_" + idx)).string(), art.logs[k], params);
        write_lexicon_file((fs::path(dir) / ("lexicon_after_s" + idx + ".jsonl")).string(), art.lexicons[k],
                           params.motivation);
    }
}

}  // namespace negacq

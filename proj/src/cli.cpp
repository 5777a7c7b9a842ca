#include "negacq/cli.hpp"

#include "negacq/analysis.hpp"
#include "negacq/report.hpp"
#include "negacq/service.hpp"
#include "negacq/session.hpp"

#include "CLI11.hpp"

#include <atomic>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

namespace negacq {

namespace {

namespace fs = std::filesystem;

std::atomic<bool> g_interrupted{false};

void on_signal(int) { g_interrupted = true; }

struct Globals {
    std::uint64_t seed = 0;
    std::string config;
    std::string out;
};

RobotParams robot_params(const std::string& features, int k) {
    RobotParams p;
    if (!features.empty()) p.spec = MatchFeatureSpec::parse(features);
    p.learner.k = k;
    p.validate();
    return p;
}

void write_text(const fs::path& path, const std::string& text) {
    auto out = open_output(path.string());
    out << text;
    if (!out) throw Error("failed writing " + path.string());
}

std::string fixed(double v, int digits) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

// --- simulate ---------------------------------------------------------------

struct SimulateArgs {
    std::string scenario = "rejection";
    std::string profile;
    int sessions = 5;
    int participants = 1;
    int jobs = 1;
    double duration = 300.0;
    std::string features;
    int k = 1;
};

int simulate(const Globals& g, const SimulateArgs& a, std::ostream& out) {
    const Scenario scenario = parse_scenario(a.scenario);
    if (a.sessions < 1 || a.sessions > 5) throw Error("--sessions must be in 1..5");
    if (a.participants < 1) throw Error("--participants must be positive");
    if (a.jobs < 1) throw Error("--jobs must be positive");
    if (!(a.duration > 0.0)) throw Error("--duration must be positive");

    TeacherProfile profile = TeacherProfile::for_scenario(scenario);
    const std::string profile_path = !a.profile.empty() ? a.profile : g.config;
    if (!profile_path.empty()) profile = TeacherProfile::load(profile_path);

    const RobotParams robot = robot_params(a.features, a.k);
    const std::string out_dir = g.out.empty() ? "runs" : g.out;

    std::vector<ExperimentOptions> runs;
    for (int p = 1; p <= a.participants; ++p) {
        ExperimentOptions o;
        o.experiment = scenario;
        o.profile = profile;
        std::ostringstream id;
        id << 'P' << std::setw(2) << std::setfill('0') << p;
        o.participant = id.str();
        o.sessions = a.sessions;
        o.duration = a.duration;
        o.seed = g.seed;
        o.robot = robot;
        runs.push_back(std::move(o));
    }

    std::vector<ExperimentArtifacts> results(runs.size());
    std::vector<std::string> failures(runs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < runs.size(); i = next++) {
            try {
                results[i] = run_experiment(runs[i]);
            } catch (const std::exception& e) {
                failures[i] = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    const int workers = std::min<int>(a.jobs, static_cast<int>(runs.size()));
    for (int j = 1; j < workers; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (const auto& f : failures)
        if (!f.empty()) throw Error(f);

    out << "participant\tsession\tscenario\tu/min\tnu/min\tspeech\tlexicon_size\n";
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto& art = results[i];
        write_experiment((fs::path(out_dir) / runs[i].participant).string(), art, robot);
        for (std::size_t k = 0; k < art.logs.size(); ++k) {
            const SessionLog& log = art.logs[k];
            const UtteranceMetrics m = utterance_metrics(log.transcript, log.config.duration);
            out << runs[i].participant << '\t' << log.config.session_index << '\t' << to_string(log.config.scenario)
                << '\t' << fixed(m.u_per_min, 2) << '\t' << fixed(m.nu_per_min, 2) << '\t' << log.speech.size()
                << '\t' << art.lexicons[k].size() << '\n';
        }
    }
    write_text(fs::path(out_dir) / "profile.txt", profile.to_text());
    out << "wrote " << out_dir << '\n';
    return 0;
}

// --- ground -----------------------------------------------------------------

int ground(const Globals& g, const std::string& log_dir, const std::string& lexicon_in, const std::string& features,
           std::ostream& out) {
    const RobotParams robot = robot_params(features, 1);
    SessionLog log = read_session_log(log_dir);
    EmbodiedLexicon lex;
    if (!lexicon_in.empty()) lex = read_lexicon_file(lexicon_in, robot.spec, robot.motivation);
    if (!lex.entries.empty() && lex.participant != log.config.participant)
        throw Error("lexicon belongs to '" + lex.participant + "', log to '" + log.config.participant + "'");
    const std::size_t before = lex.size();
    lex = between_sessions(log, std::move(lex), robot);
    const fs::path path = fs::path(g.out.empty() ? "." : g.out) / "lexicon.jsonl";
    write_lexicon_file(path.string(), lex, robot.motivation);
    out << "grounded " << log.transcript.size() << " utterances: " << before << " -> " << lex.size()
        << " entries, wrote " << path.string() << '\n';
    return 0;
}

// --- analyze ----------------------------------------------------------------

std::vector<fs::path> find_sessions(const std::string& root) {
    if (!fs::is_directory(root)) throw Error("no log directory " + root);
    std::vector<fs::path> dirs;
    auto is_session = [](const fs::path& d) {
        return fs::is_regular_file(d / "config.json") && fs::is_regular_file(d / "body_memory.jsonl");
    };
    if (is_session(root)) dirs.push_back(root);
    for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_directory() && is_session(e.path())) dirs.push_back(e.path());
    std::sort(dirs.begin(), dirs.end());
    if (dirs.empty()) throw Error("no session logs under " + root);
    return dirs;
}

int analyze(const Globals& g, const std::string& logs, const std::string& tables_arg, bool salient_only,
            std::ostream& out) {
    static const std::vector<std::string> known{"relation", "corpus", "metrics", "cooccur", "felicity"};
    std::vector<std::string> tables;
    std::stringstream ss(tables_arg);
    for (std::string t; std::getline(ss, t, ',');) {
        if (t.empty()) continue;
        if (std::find(known.begin(), known.end(), t) == known.end()) throw Error("unknown table '" + t + "'");
        tables.push_back(t);
    }
    if (tables.empty()) tables = known;

    std::vector<std::pair<std::string, SessionLog>> sessions;
    for (const auto& d : find_sessions(logs)) {
        sessions.push_back({fs::relative(d, logs).string(), read_session_log(d.string())});
        if (sessions.back().first == ".") sessions.back().first = d.filename().string();
    }

    std::map<std::string, std::string> rendered;
    for (const auto& t : tables) {
        std::ostringstream tsv;
        if (t == "relation") {
            std::map<TemporalRelation, int> total;
            for (const auto& [name, log] : sessions)
                for (const auto& [r, c] : relation_counts(log.transcript, log.pushes)) total[r] += c;
            int n = 0;
            for (const auto& [r, c] : total) n += c;
            tsv << "relation\tcount\tpercent\n";
            for (TemporalRelation r : kAllRelations)
                tsv << to_string(r) << '\t' << total[r] << '\t' << (n ? fixed(100.0 * total[r] / n, 1) : "n/a")
                    << '\n';
        } else if (t == "corpus") {
            std::vector<Utterance> all;
            for (const auto& [name, log] : sessions) all.insert(all.end(), log.transcript.begin(), log.transcript.end());
            tsv << "rank\tword\tcount\tpercent\n";
            for (const auto& e : corpus(all, salient_only))
                tsv << e.rank << '\t' << e.word << '\t' << e.count << '\t' << fixed(e.percent, 2) << '\n';
        } else if (t == "metrics") {
            tsv << "session\tduration\tu\tw\tdw\tmlu\tw/min\tu/min\tnu\tnw\tdnw\tnmlu\tnw/min\tnu/min\n";
            for (const auto& [name, log] : sessions) {
                const double dur = static_cast<double>(log.body_memory.size()) / kTicksPerSecond;
                if (!(dur > 0.0)) {
                    tsv << name << "\t0\tn/a\n";
                    continue;
                }
                const UtteranceMetrics m = utterance_metrics(log.transcript, dur);
                tsv << name << '\t' << fixed(m.duration, 1) << '\t' << m.u << '\t' << m.w << '\t' << m.dw << '\t'
                    << fixed(m.mlu, 2) << '\t' << fixed(m.w_per_min, 2) << '\t' << fixed(m.u_per_min, 2) << '\t'
                    << m.nu << '\t' << m.nw << '\t' << m.dnw << '\t' << fixed(m.nmlu, 2) << '\t'
                    << fixed(m.nw_per_min, 2) << '\t' << fixed(m.nu_per_min, 2) << '\n';
            }
        } else if (t == "cooccur") {
            const std::set<NegationType> types(kHumanNegationTypes.begin(), kHumanNegationTypes.end());
            std::map<NegationType, ClassCounts> total;
            for (const auto& [name, log] : sessions)
                for (const auto& [type, c] : motivation_cooccurrence(log.transcript, log.body_memory, types)) {
                    total[type].negative += c.negative;
                    total[type].neutral += c.neutral;
                    total[type].positive += c.positive;
                }
            tsv << "type\tnegative\tneutral\tpositive\n";
            for (const auto& [type, c] : total)
                tsv << to_string(type) << '\t' << c.negative << '\t' << c.neutral << '\t' << c.positive << '\n';
        } else if (t == "felicity") {
            tsv << "session\tfelicitous\tnegative_productions\tpercent\n";
            FelicityTally all;
            for (const auto& [name, log] : sessions) {
                const FelicityTally f = felicity_tally(log.speech, log.body_memory);
                all += f;
                tsv << name << '\t' << f.felicitous << '\t' << f.total << '\t'
                    << (f.total ? fixed(f.percent(), 1) : "n/a") << '\n';
            }
            tsv << "all\t" << all.felicitous << '\t' << all.total << '\t'
                << (all.total ? fixed(all.percent(), 1) : "n/a") << '\n';
        }
        rendered[t] = tsv.str();
    }

    for (const auto& t : tables) {
        out << "== " << t << (t == "corpus" && salient_only ? " (salient only)" : "") << " ==\n" << rendered[t] << '\n';
        if (!g.out.empty()) write_text(fs::path(g.out) / (t + ".tsv"), rendered[t]);
    }
    return 0;
}

// --- reproduce --------------------------------------------------------------

int reproduce(const Globals& g, const std::string& fixtures, std::ostream& out) {
    const Report rep = reproduce_report(fixtures.empty() ? default_fixtures_dir() : fixtures);
    const std::string text = rep.text();
    out << text;
    if (!g.out.empty()) {
        write_text(fs::path(g.out) / "report.txt", text);
        write_text(fs::path(g.out) / "report.tsv", rep.tsv());
    }
    return 0;
}

// --- serve ------------------------------------------------------------------

int serve(const Globals& g, ServiceConfig cfg, const std::string& features, std::ostream& out) {
    cfg.robot = robot_params(features, 1);
    cfg.seed = g.seed;
    if (!g.out.empty()) cfg.out_dir = g.out;
    Service service(cfg);
    const unsigned short port = service.start();
    out << "listening on ws://" << cfg.address << ':' << port << "/ (Ctrl-C to stop)" << std::endl;
    g_interrupted = false;
    auto previous_int = std::signal(SIGINT, on_signal);
    auto previous_term = std::signal(SIGTERM, on_signal);
    while (!g_interrupted) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    service.stop();
    std::signal(SIGINT, previous_int);
    std::signal(SIGTERM, previous_term);
    out << "stopped" << std::endl;
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"negacq: negation-acquisition robot simulator and analysis toolkit", "negacq"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
    app.add_option("--config", g.config, "Teacher profile file (key = value)");
    app.add_option("--out", g.out, "Output directory");

    SimulateArgs sim;
    auto* s = app.add_subcommand("simulate", "Run scripted experiments and write their logs");
    s->add_option("--scenario", sim.scenario, "rejection | prohibition")
        ->check(CLI::IsMember({"rejection", "prohibition"}))
        ->capture_default_str();
    s->add_option("--profile", sim.profile, "Teacher profile file (overrides --config)");
    s->add_option("--sessions", sim.sessions, "Sessions per participant (1-5)")->capture_default_str();
    s->add_option("--participants", sim.participants, "Number of simulated participants")->capture_default_str();
    s->add_option("--jobs", sim.jobs, "Experiments run in parallel")->capture_default_str();
    s->add_option("--duration", sim.duration, "Session length in seconds")->capture_default_str();
    s->add_option("--features", sim.features, "Matching features, e.g. behavior,object,motivation_class");
    s->add_option("--k", sim.k, "Neighbours consulted by the learner")->capture_default_str();

    std::string log_dir, lexicon_in, ground_features;
    auto* gr = app.add_subcommand("ground", "Ground a session log into a lexicon");
    gr->add_option("--log", log_dir, "Session log directory")->required();
    gr->add_option("--lexicon", lexicon_in, "Existing lexicon to extend");
    gr->add_option("--features", ground_features, "Grounding features");

    std::string logs, tables;
    bool salient_only = false;
    auto* an = app.add_subcommand("analyze", "Tabulate measures over session logs");
    an->add_option("--logs", logs, "Directory searched for session logs")->required();
    an->add_option("--tables", tables, "Comma list of relation,corpus,metrics,cooccur,felicity");
    an->add_flag("--salient-only", salient_only, "Corpus counts only salient words");

    std::string fixtures;
    auto* rp = app.add_subcommand("reproduce", "Recompute the published tables from bundled fixtures");
    rp->add_option("--fixtures", fixtures, "Fixture directory (default: NEGACQ_DATA or bundled)");

    ServiceConfig scfg;
    std::string serve_features;
    auto* sv = app.add_subcommand("serve", "Run the live WebSocket session service");
    sv->add_option("--port", scfg.port, "TCP port")->capture_default_str();
    sv->add_option("--address", scfg.address, "Bind address")->capture_default_str();
    sv->add_option("--lexicon", scfg.lexicon_path, "Lexicon file to start from");
    sv->add_option("--speed", scfg.speed, "Simulated seconds per wall-clock second")->capture_default_str();
    sv->add_option("--features", serve_features, "Matching features");

    std::vector<std::string> argv_store;
    argv_store.push_back("negacq");
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (*s) return simulate(g, sim, out);
        if (*gr) return ground(g, log_dir, lexicon_in, ground_features, out);
        if (*an) return analyze(g, logs, tables, salient_only, out);
        if (*rp) return reproduce(g, fixtures, out);
        if (*sv) return serve(g, scfg, serve_features, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

}  // namespace negacq

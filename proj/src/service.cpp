#include "negacq/service.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <filesystem>
#include <mutex>
#include <thread>

namespace negacq {

// ---------------------------------------------------------------------------
// Prosody for typed words

std::vector<Word> synthesize_prosody(const std::vector<WordInput>& words,
                                     std::optional<std::size_t> emphasized_index) {
    if (emphasized_index && *emphasized_index >= words.size())
        throw ProtocolError("bad_value", "emphasized_index out of range");
    std::vector<Word> out;
    out.reserve(words.size());
    for (const auto& in : words) {
        if (in.text.empty()) throw ProtocolError("bad_value", "empty word");
        Word w;
        w.text = in.text;
        w.f0_max = in.f0.value_or(180.0);
        w.energy_max = in.energy.value_or(0.5);
        w.duration = in.dur.value_or(0.1 + 0.05 * static_cast<double>(in.text.size()));
        try {
            w.validate();
        } catch (const ContractViolation& e) {
            throw ProtocolError("bad_value", "word '" + in.text + "': " + e.what());
        }
        out.push_back(std::move(w));
    }
    if (emphasized_index && out.size() > 1) {
        const std::size_t e = *emphasized_index;
        double f0 = 0.0, energy = 0.0, dur = 0.0;
        for (std::size_t i = 0; i < out.size(); ++i) {
            if (i == e) continue;
            f0 = std::max(f0, out[i].f0_max);
            energy = std::max(energy, out[i].energy_max);
            dur = std::max(dur, out[i].duration);
        }
        const WordInput& in = words[e];
        if (!in.f0) out[e].f0_max = 1.5 * f0;
        if (!in.energy) out[e].energy_max = 1.5 * energy;
        if (!in.dur) out[e].duration = 1.2 * dur;
    }
    return out;
}

Json error_message(const std::string& code, const std::string& text) {
    return Json{{"type", "error"}, {"code", code}, {"text", text}};
}

// ---------------------------------------------------------------------------
// Protocol state

LiveSession::LiveSession(ServiceConfig cfg, EmbodiedLexicon lexicon)
    : cfg_(std::move(cfg)), lexicon_(std::move(lexicon)) {}

SessionLoop& LiveSession::loop() {
    if (!loop_) throw ProtocolError("no_session", "no session is running");
    return *loop_;
}

namespace {

template <typename T>
T field(const Json& msg, const char* key) {
    if (!msg.contains(key)) throw ProtocolError("malformed", std::string("missing field '") + key + "'");
    try {
        return msg.at(key).get<T>();
    } catch (const Json::exception&) {
        throw ProtocolError("malformed", std::string("field '") + key + "' has the wrong type");
    }
}

std::optional<double> optional_number(const Json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    if (!j.at(key).is_number()) throw ProtocolError("malformed", std::string("field '") + key + "' must be a number");
    return j.at(key).get<double>();
}

}  // namespace

std::vector<Json> LiveSession::start(const Json& msg) {
    if (loop_) throw ProtocolError("session_active", "a session is already running");
    SessionConfig cfg;
    try {
        cfg.scenario = parse_scenario(field<std::string>(msg, "scenario"));
        cfg.session_index = field<int>(msg, "session_index");
        cfg.valence_map = default_valence_schedule(cfg.session_index);
    } catch (const ProtocolError&) {
        throw;
    } catch (const Error& e) {
        throw ProtocolError("bad_value", e.what());
    }
    cfg.participant = field<std::string>(msg, "participant");
    if (cfg.participant.empty()) throw ProtocolError("bad_value", "participant must not be empty");
    if (auto d = optional_number(msg, "duration")) {
        if (!(*d > 0.0)) throw ProtocolError("bad_value", "duration must be positive");
        cfg.duration = *d;
    }
    if (cfg.scenario == Scenario::Prohibition)
        cfg.forbidden = choose_forbidden_set(
            cfg.valence_map, Rng::derive(cfg_.seed, {participant_stream(cfg.participant),
                                                     static_cast<std::uint64_t>(cfg.session_index)}));
    if (!lexicon_.entries.empty() && lexicon_.participant != cfg.participant)
        throw ProtocolError("participant_mismatch",
                            "the loaded lexicon belongs to '" + lexicon_.participant + "'");
    lexicon_.participant = cfg.participant;

    loop_ = std::make_unique<SessionLoop>(cfg, lexicon_, cfg_.robot);
    pending_.clear();
    presented_ = false;
    pushing_ = false;

    Json valences = Json::object();
    for (const auto& [o, v] : cfg.valence_map) valences[std::string(to_string(o))] = static_cast<int>(v);
    Json forbidden = Json::array();
    for (ObjectId o : cfg.forbidden) forbidden.push_back(to_string(o));
    return {Json{{"type", "session_started"},
                 {"scenario", to_string(cfg.scenario)},
                 {"session_index", cfg.session_index},
                 {"participant", cfg.participant},
                 {"duration", cfg.duration},
                 {"valences", valences},
                 {"forbidden", forbidden},
                 {"lexicon_size", lexicon_.size()}}};
}

std::vector<Json> LiveSession::end() {
    SessionLog log = loop().finish();
    loop_.reset();
    pending_.clear();
    presented_ = false;
    pushing_ = false;

    namespace fs = std::filesystem;
    const fs::path base = fs::path(cfg_.out_dir) / log.config.participant;
    const std::string k = std::to_string(log.config.session_index);
    const std::string log_dir = (base / ("session_" + k)).string();
    const std::string lex_path = (base / ("lexicon_after_s" + k + ".jsonl")).string();

    std::vector<Json> out;
    write_session_log(log_dir, log, cfg_.robot);
    try {
        lexicon_ = between_sessions(log, lexicon_, cfg_.robot);
    } catch (const Error& e) {
        out.push_back(error_message("grounding_failed", e.what()));
    }
    write_lexicon_file(lex_path, lexicon_, cfg_.robot.motivation);
    out.push_back(Json{{"type", "session_end"},
                       {"log_dir", log_dir},
                       {"lexicon", lex_path},
                       {"ticks", log.body_memory.size()},
                       {"utterances", log.transcript.size()},
                       {"speech", log.speech.size()},
                       {"lexicon_size", lexicon_.size()}});
    return out;
}

std::vector<Json> LiveSession::handle(const Json& msg) {
    try {
        if (!msg.is_object()) throw ProtocolError("malformed", "message must be a JSON object");
        const std::string type = field<std::string>(msg, "type");
        if (type == "start_session") return start(msg);
        if (type == "end_session") return end();

        if (type == "present") {
            loop();
            ObjectId o;
            try {
                o = parse_object(field<std::string>(msg, "object"));
            } catch (const Error& e) {
                if (dynamic_cast<const ProtocolError*>(&e)) throw;
                throw ProtocolError("bad_value", e.what());
            }
            if (presented_) throw ProtocolError("protocol", "withdraw the current object first");
            presented_ = true;
            pending_.push_back(TeacherAction::present(o));
        } else if (type == "withdraw") {
            loop();
            if (!presented_) throw ProtocolError("protocol", "nothing is presented");
            presented_ = false;
            pending_.push_back(TeacherAction::withdraw());
        } else if (type == "push") {
            loop();
            const std::string state = field<std::string>(msg, "state");
            if (state == "start") {
                if (pushing_) throw ProtocolError("protocol", "push already started");
                pushing_ = true;
                pending_.push_back(TeacherAction::push_start());
            } else if (state == "end") {
                if (!pushing_) throw ProtocolError("protocol", "no push to end");
                pushing_ = false;
                pending_.push_back(TeacherAction::push_end());
            } else {
                throw ProtocolError("bad_value", "push state must be 'start' or 'end'");
            }
        } else if (type == "utterance") {
            SessionLoop& l = loop();
            if (!msg.contains("words") || !msg.at("words").is_array() || msg.at("words").empty())
                throw ProtocolError("malformed", "utterance needs a non-empty 'words' array");
            std::vector<WordInput> words;
            for (const auto& w : msg.at("words")) {
                if (!w.is_object()) throw ProtocolError("malformed", "each word must be an object");
                words.push_back({field<std::string>(w, "text"), optional_number(w, "f0"),
                                 optional_number(w, "energy"), optional_number(w, "dur")});
            }
            std::optional<std::size_t> emph;
            if (msg.contains("emphasized_index") && !msg.at("emphasized_index").is_null()) {
                const int e = field<int>(msg, "emphasized_index");
                if (e < 0) throw ProtocolError("bad_value", "emphasized_index out of range");
                emph = static_cast<std::size_t>(e);
            }
            Utterance u;
            u.words = synthesize_prosody(words, emph);
            if (msg.contains("neg_type") && !msg.at("neg_type").is_null()) {
                try {
                    u.neg_type = parse_negation_type(field<std::string>(msg, "neg_type"));
                } catch (const ProtocolError&) {
                    throw;
                } catch (const Error& e) {
                    throw ProtocolError("bad_value", e.what());
                }
                if (!is_human_type(*u.neg_type)) throw ProtocolError("bad_value", "neg_type must be a human type");
            }
            double total = 0.0;
            for (const auto& w : u.words) total += w.duration;
            // The utterance has just been completed.
            u.t_end = ticks_to_seconds(l.tick());
            u.t_start = u.t_end - total;
            if (u.t_start < 0.0) {
                u.t_start = 0.0;
                u.t_end = total;
            }
            pending_.push_back(TeacherAction::say(std::move(u)));
        } else {
            throw ProtocolError("unknown_type", "unknown message type '" + type + "'");
        }
        return {};
    } catch (const ProtocolError& e) {
        return {error_message(e.code(), e.what())};
    }
}

std::vector<Json> LiveSession::tick() {
    if (!loop_) return {};
    TickReport r = loop_->step(pending_);
    pending_.clear();
    std::vector<Json> out;
    Json state{{"type", "state"},
               {"tick", r.tick},
               {"t", ticks_to_seconds(r.tick)},
               {"behavior", to_string(r.behavior)},
               {"face", to_string(r.face)},
               {"gaze", to_string(r.gaze)},
               {"motivation", r.motivation},
               {"resist", loop_->push_active()}};
    state["presented"] = loop_->presented() ? Json(to_string(*loop_->presented())) : Json(nullptr);
    out.push_back(std::move(state));
    if (r.speech) out.push_back(Json{{"type", "speech"}, {"tick", r.speech->tick}, {"word", r.speech->word}});
    if (loop_->finished())
        for (auto& m : end()) out.push_back(std::move(m));
    return out;
}

// ---------------------------------------------------------------------------
// Network and tick threads

namespace beast = boost::beast;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

namespace {

struct Inbound {
    bool disconnect = false;
    std::string text;
};

}  // namespace

struct Service::Impl {
    struct Connection : std::enable_shared_from_this<Connection> {
        Connection(tcp::socket socket, Impl& owner, bool refuse)
            : ws(std::move(socket)), impl(owner), refused(refuse) {}

        void run() {
            ws.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
            ws.async_accept([self = shared_from_this()](beast::error_code ec) { self->on_accept(ec); });
        }

        void on_accept(beast::error_code ec) {
            if (ec) return closed();
            if (refused) {
                send(error_message("busy", "another client is connected").dump());
                return;
            }
            read();
        }

        void read() {
            ws.async_read(buffer, [self = shared_from_this()](beast::error_code ec, std::size_t) {
                if (ec) return self->closed();
                std::string text = beast::buffers_to_string(self->buffer.data());
                self->buffer.consume(self->buffer.size());
                self->impl.push_inbound({false, std::move(text)});
                self->read();
            });
        }

        void send(std::string text) {
            if (!open) return;
            outbox.push_back(std::move(text));
            if (outbox.size() == 1) write();
        }

        void write() {
            ws.text(true);
            ws.async_write(net::buffer(outbox.front()), [self = shared_from_this()](beast::error_code ec, std::size_t) {
                if (ec) return self->closed();
                self->outbox.pop_front();
                if (!self->outbox.empty()) {
                    self->write();
                } else if (self->refused) {
                    self->ws.async_close(websocket::close_code::try_again_later,
                                         [self](beast::error_code) { self->closed(); });
                }
            });
        }

        void closed() {
            if (!open) return;
            open = false;
            if (!refused) impl.client_gone(this);
        }

        websocket::stream<beast::tcp_stream> ws;
        beast::flat_buffer buffer;
        std::deque<std::string> outbox;
        Impl& impl;
        bool refused;
        bool open = true;
    };

    explicit Impl(ServiceConfig c) : cfg(std::move(c)), acceptor(ioc) {}

    void accept() {
        acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
            if (ec) return;
            const bool busy = client && client->open;
            auto conn = std::make_shared<Connection>(std::move(socket), *this, busy);
            if (!busy) client = conn;
            conn->run();
            accept();
        });
    }

    // Network thread only.
    void client_gone(Connection* c) {
        if (client.get() == c) {
            client.reset();
            push_inbound({true, {}});
        }
    }

    void push_inbound(Inbound in) {
        {
            std::lock_guard<std::mutex> lock(mu);
            inbox.push_back(std::move(in));
        }
        cv.notify_one();
    }

    void send(const Json& msg) {
        net::post(ioc, [this, text = msg.dump()]() mutable {
            if (client && client->open) client->send(std::move(text));
        });
    }

    void tick_loop() {
        LiveSession session(cfg, std::move(initial_lexicon));

        using clock = std::chrono::steady_clock;
        const auto period = std::chrono::duration_cast<clock::duration>(
            std::chrono::duration<double>(1.0 / (kTicksPerSecond * cfg.speed)));
        clock::time_point t0{};
        std::int64_t n = 0;

        while (true) {
            std::deque<Inbound> batch;
            {
                std::unique_lock<std::mutex> lock(mu);
                if (!session.running())
                    cv.wait_for(lock, period, [this] { return stopping || !inbox.empty(); });
                if (stopping) break;
                batch.swap(inbox);
            }
            for (auto& in : batch) {
                if (in.disconnect) {
                    try {
                        if (session.running()) session.handle(Json{{"type", "end_session"}});
                    } catch (const std::exception&) {
                    }
                    continue;
                }
                const bool was_running = session.running();
                Json msg;
                try {
                    msg = Json::parse(in.text);
                } catch (const Json::exception& e) {
                    send(error_message("malformed", std::string("not JSON: ") + e.what()));
                    continue;
                }
                try {
                    for (const auto& reply : session.handle(msg)) send(reply);
                } catch (const std::exception& e) {
                    send(error_message("internal", e.what()));
                }
                if (!was_running && session.running()) {
                    t0 = clock::now();
                    n = 0;
                }
            }
            if (session.running()) {
                try {
                    for (const auto& m : session.tick()) send(m);
                } catch (const std::exception& e) {
                    send(error_message("internal", e.what()));
                }
                ++n;
                std::this_thread::sleep_until(t0 + n * period);
            }
        }
        try {
            if (session.running()) session.handle(Json{{"type", "end_session"}});
        } catch (const std::exception&) {
        }
    }

    ServiceConfig cfg;
    EmbodiedLexicon initial_lexicon;
    net::io_context ioc;
    tcp::acceptor acceptor;
    std::shared_ptr<Connection> client;  // network thread only
    std::mutex mu;
    std::condition_variable cv;
    std::deque<Inbound> inbox;
    bool stopping = false;
    std::thread net_thread;
    std::thread tick_thread;
    std::mutex done_mu;
    std::condition_variable done_cv;
    bool done = false;
};

Service::Service(ServiceConfig cfg) : impl_(std::make_unique<Impl>(std::move(cfg))) {
    if (!(impl_->cfg.speed > 0.0)) throw Error("speed must be positive");
    impl_->cfg.robot.validate();
    if (!impl_->cfg.lexicon_path.empty())
        impl_->initial_lexicon =
            read_lexicon_file(impl_->cfg.lexicon_path, impl_->cfg.robot.spec, impl_->cfg.robot.motivation);
}

Service::~Service() { stop(); }

unsigned short Service::start() {
    Impl& m = *impl_;
    const tcp::endpoint ep(net::ip::make_address(m.cfg.address), m.cfg.port);
    m.acceptor.open(ep.protocol());
    m.acceptor.set_option(net::socket_base::reuse_address(true));
    m.acceptor.bind(ep);
    m.acceptor.listen();
    const unsigned short port = m.acceptor.local_endpoint().port();
    m.accept();
    m.net_thread = std::thread([&m] { m.ioc.run(); });
    m.tick_thread = std::thread([&m] { m.tick_loop(); });
    return port;
}

void Service::wait() {
    std::unique_lock<std::mutex> lock(impl_->done_mu);
    impl_->done_cv.wait(lock, [this] { return impl_->done; });
}

void Service::stop() {
    Impl& m = *impl_;
    {
        std::lock_guard<std::mutex> lock(m.mu);
        m.stopping = true;
    }
    m.cv.notify_all();
    if (m.tick_thread.joinable()) m.tick_thread.join();
    // Let queued messages flush before the network thread stops.
    net::post(m.ioc, [&m] {
        beast::error_code ec;
        m.acceptor.close(ec);
    });
    if (m.net_thread.joinable()) {
        auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(200);
        while (std::chrono::steady_clock::now() < deadline) std::this_thread::sleep_for(std::chrono::milliseconds(10));
        m.ioc.stop();
        m.net_thread.join();
    }
    {
        std::lock_guard<std::mutex> lock(m.done_mu);
        m.done = true;
    }
    m.done_cv.notify_all();
}

}  // namespace negacq

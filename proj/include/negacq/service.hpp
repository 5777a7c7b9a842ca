#pragma once

#include "negacq/jsonl.hpp"
#include "negacq/session.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace negacq {

struct ServiceConfig {
    std::string address = "127.0.0.1";
    unsigned short port = 8765;  // 0 picks a free port
    std::string lexicon_path;    // empty: start from an empty lexicon
    std::string out_dir = "live_logs";
    RobotParams robot;
    double speed = 1.0;          // simulated seconds per wall-clock second
    std::uint64_t seed = 0;      // forbidden-set choice
};

/// A rejected client message. `code` is one of the documented error codes.
class ProtocolError : public Error {
public:
    ProtocolError(std::string code, const std::string& text) : Error(text), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

struct WordInput {
    std::string text;
    std::optional<double> f0;
    std::optional<double> energy;
    std::optional<double> dur;
};

/// Completes typed words with prosody. Explicit features are kept; missing ones get a
/// baseline that grows with word length. The emphasized word is raised above every
/// other word on all three features, so it is the salient word.
std::vector<Word> synthesize_prosody(const std::vector<WordInput>& words,
                                     std::optional<std::size_t> emphasized_index);

Json error_message(const std::string& code, const std::string& text);

/// Protocol state for the live session. Only the tick thread touches it.
class LiveSession {
public:
    LiveSession(ServiceConfig cfg, EmbodiedLexicon lexicon);

    /// Applies one client message and returns the replies that follow from it directly.
    std::vector<Json> handle(const Json& msg);
    /// Advances the running session by one tick and returns the state (and speech) messages.
    std::vector<Json> tick();

    bool running() const { return loop_ != nullptr; }
    const EmbodiedLexicon& lexicon() const { return lexicon_; }

private:
    std::vector<Json> start(const Json& msg);
    std::vector<Json> end();
    SessionLoop& loop();

    ServiceConfig cfg_;
    EmbodiedLexicon lexicon_;
    std::unique_ptr<SessionLoop> loop_;
    std::vector<TeacherAction> pending_;
    bool presented_ = false;
    bool pushing_ = false;
};

/// WebSocket endpoint running one live session at a time for a single client.
class Service {
public:
    explicit Service(ServiceConfig cfg);
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    /// Binds, starts the network and tick threads and returns the bound port.
    unsigned short start();
    /// Blocks until stop() is called.
    void wait();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace negacq

#include "negacq/session_config.hpp"

#include "negacq/rng.hpp"

#include <vector>

namespace negacq {

std::string_view to_string(Scenario s) {
    return s == Scenario::Prohibition ? "prohibition" : "rejection";
}

Scenario parse_scenario(std::string_view s) {
    if (s == "prohibition") return Scenario::Prohibition;
    if (s == "rejection") return Scenario::Rejection;
    throw Error("unknown scenario '" + std::string(s) + "'");
}

ValenceMap default_valence_schedule(int session_index) {
    // Rows: triangle, moon, square, heart, circle.
    static constexpr int table[5][5] = {
        {+1, 0, -1, +1, -1},
        {-1, +1, 0, -1, +1},
        {+1, -1, +1, 0, -1},
        {-1, +1, -1, +1, 0},
        {0, -1, +1, -1, +1},
    };
    if (session_index < 1 || session_index > 5)
        throw Error("session index must be in 1..5, got " + std::to_string(session_index));
    ValenceMap m;
    for (std::size_t i = 0; i < kAllObjects.size(); ++i)
        m[kAllObjects[i]] = valence_from_int(table[session_index - 1][i]);
    return m;
}

bool forbidden_set_valid(const ValenceMap& valences, const std::set<ObjectId>& forbidden) {
    if (forbidden.size() < 2 || forbidden.size() > 3) return false;
    bool liked_f = false, liked_a = false, disliked_f = false, disliked_a = false;
    for (const auto& [obj, v] : valences) {
        const bool f = forbidden.count(obj) > 0;
        if (v == Valence::Liked) (f ? liked_f : liked_a) = true;
        if (v == Valence::Disliked) (f ? disliked_f : disliked_a) = true;
    }
    return liked_f && liked_a && disliked_f && disliked_a;
}

std::set<ObjectId> choose_forbidden_set(const ValenceMap& valences, std::uint64_t seed) {
    std::vector<std::set<ObjectId>> options;
    for (unsigned mask = 0; mask < (1u << kAllObjects.size()); ++mask) {
        std::set<ObjectId> s;
        for (std::size_t i = 0; i < kAllObjects.size(); ++i)
            if (mask & (1u << i)) s.insert(kAllObjects[i]);
        if (forbidden_set_valid(valences, s)) options.push_back(std::move(s));
    }
    if (options.empty()) throw Error("no forbidden set satisfies the valence constraints");
    Rng rng(seed);
    return options[rng.below(options.size())];
}

void SessionConfig::validate() const {
    if (session_index < 1 || session_index > 5) throw ContractViolation("session index outside 1..5");
    if (!(duration > 0.0)) throw ContractViolation("session duration must be positive");
    for (ObjectId o : kAllObjects)
        if (!valence_map.count(o)) throw ContractViolation("valence map misses an object");
    if (scenario == Scenario::Prohibition) {
        if (!forbidden_set_valid(valence_map, forbidden))
            throw ContractViolation("prohibition session needs 2-3 forbidden objects covering "
                                    "liked/disliked x allowed/forbidden");
    } else if (!forbidden.empty()) {
        throw ContractViolation("rejection sessions have no forbidden objects");
    }
}

SessionConfig experiment_session(Scenario experiment, int session_index,
                                 const std::string& participant, std::uint64_t seed,
                                 double duration) {
    SessionConfig cfg;
    cfg.session_index = session_index;
    cfg.duration = duration;
    cfg.participant = participant;
    cfg.valence_map = default_valence_schedule(session_index);
    cfg.scenario = (experiment == Scenario::Prohibition && session_index <= 3) ? Scenario::Prohibition
                                                                                : Scenario::Rejection;
    if (cfg.scenario == Scenario::Prohibition)
        cfg.forbidden = choose_forbidden_set(cfg.valence_map,
                                             Rng::derive(seed, {0xF0, static_cast<std::uint64_t>(session_index)}));
    cfg.validate();
    return cfg;
}

}  // namespace negacq

#pragma once

#include "negacq/core.hpp"

#include <map>
#include <set>
#include <string>

namespace negacq {

enum class Scenario { Rejection, Prohibition };
std::string_view to_string(Scenario s);
Scenario parse_scenario(std::string_view s);

using ValenceMap = std::map<ObjectId, Valence>;

struct SessionConfig {
    Scenario scenario = Scenario::Rejection;
    int session_index = 1;
    double duration = 300.0;
    ValenceMap valence_map;
    std::set<ObjectId> forbidden;
    std::string participant = "P00";

    /// Throws ContractViolation when the valence map or forbidden set breaks the rules.
    void validate() const;
    std::int64_t total_ticks() const { return seconds_to_ticks(duration); }
};

/// Object valences for sessions 1..5; every object is liked twice, disliked twice, neutral once.
ValenceMap default_valence_schedule(int session_index);

/// True iff the forbidden set satisfies the prohibition-session rule: two or three
/// forbidden objects, and liked/disliked objects each appear both allowed and forbidden.
bool forbidden_set_valid(const ValenceMap& valences, const std::set<ObjectId>& forbidden);

/// Seeded choice among all valid forbidden sets for the given valences.
std::set<ObjectId> choose_forbidden_set(const ValenceMap& valences, std::uint64_t seed);

/// Session configuration used by the experiments: the prohibition experiment runs
/// three prohibition sessions followed by two rejection-style sessions.
SessionConfig experiment_session(Scenario experiment, int session_index,
                                 const std::string& participant, std::uint64_t seed,
                                 double duration = 300.0);

}  // namespace negacq

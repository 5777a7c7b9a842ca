#include "negacq/report.hpp"

#include "negacq/analysis.hpp"
#include "negacq/core.hpp"
#include "negacq/jsonl.hpp"
#include "negacq/relations.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <map>
#include <numeric>
#include <sstream>

#ifndef NEGACQ_SOURCE_DATA
#define NEGACQ_SOURCE_DATA "data/fixtures"
#endif

namespace negacq {

const std::vector<std::string>& Fixtures::table_names() {
    static const std::vector<std::string> names{"utterance_level", "negative_utterance_level",
                                                "temporal_relations", "reported_comparison"};
    return names;
}

Fixtures Fixtures::load(const std::string& dir) {
    namespace fs = std::filesystem;
    std::vector<std::string> missing;
    for (const auto& t : table_names())
        if (!fs::is_regular_file(fs::path(dir) / (t + ".jsonl"))) missing.push_back(t);
    if (!missing.empty()) {
        std::string list;
        for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m + ".jsonl";
        throw Error("missing fixture table(s) in " + dir + ": " + list);
    }

    Fixtures fx;
    for (const auto& t : table_names()) {
        const std::string path = (fs::path(dir) / (t + ".jsonl")).string();
        for_each_json_line_in_file(path, [&](const Json& j, int) {
            if (!j.is_object()) throw Error("record must be an object");
            FixtureRecord r;
            r.experiment = j.at("experiment").get<std::string>();
            if (r.experiment != "prohibition" && r.experiment != "rejection" && r.experiment != "saunders" &&
                r.experiment != "*")
                throw Error("unknown experiment '" + r.experiment + "'");
            r.participant = j.at("participant").get<std::string>();
            r.session = j.at("session").get<int>();
            if (r.session < 1 || r.session > 5) throw Error("session outside 1..5");
            r.measure = j.at("measure").get<std::string>();
            if (r.measure.empty()) throw Error("empty measure");
            const Json& v = j.at("value");
            if (!v.is_null()) {
                if (!v.is_number()) throw Error("value must be a number or null");
                r.value = v.get<double>();
                if (!std::isfinite(*r.value)) throw Error("value must be finite");
            }
            fx.records_.push_back(std::move(r));
        });
    }
    return fx;
}

std::vector<double> Fixtures::values(const std::string& experiment, int session,
                                     const std::string& measure) const {
    std::vector<double> out;
    for (const auto& r : records_)
        if (r.experiment == experiment && r.session == session && r.measure == measure && r.participant != "*" &&
            r.value)
            out.push_back(*r.value);
    return out;
}

double Fixtures::total(const std::string& experiment, const std::string& measure) const {
    double s = 0.0;
    for (const auto& r : records_)
        if (r.experiment == experiment && r.measure == measure && r.participant != "*" && r.value) s += *r.value;
    return s;
}

std::optional<double> Fixtures::reported(const std::string& experiment, int session,
                                         const std::string& measure) const {
    for (const auto& r : records_)
        if (r.experiment == experiment && r.session == session && r.measure == measure && r.participant == "*")
            return r.value;
    return std::nullopt;
}

std::string default_fixtures_dir() {
    if (const char* env = std::getenv("NEGACQ_DATA"); env && *env) return env;
    return NEGACQ_SOURCE_DATA;
}

std::optional<double> ReportRow::delta() const {
    if (!quoted) return std::nullopt;
    return computed - *quoted;
}

const ReportRow* Report::find(const std::string& section, const std::string& item) const {
    for (const auto& r : rows)
        if (r.section == section && r.item == item) return &r;
    return nullptr;
}

namespace {

std::string fmt(double v, int precision = 4) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(precision) << v;
    return os.str();
}

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v) {
    const double m = mean_of(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

std::string Report::text() const {
    std::ostringstream os;
    std::string section;
    for (const auto& r : rows) {
        if (r.section != section) {
            section = r.section;
            os << "\n[" << section << "]\n";
        }
        os << "  " << std::left << std::setw(44) << r.item << " computed " << std::setw(10) << fmt(r.computed);
        if (r.quoted) os << " quoted " << std::setw(10) << fmt(*r.quoted) << " delta " << fmt(*r.delta());
        if (!r.note.empty()) os << "  (" << r.note << ")";
        os << '\n';
    }
    return os.str();
}

std::string Report::tsv() const {
    std::ostringstream os;
    os << "section\titem\tpaper\tcomputed\tdelta\tnote\n";
    for (const auto& r : rows) {
        os << r.section << '\t' << r.item << '\t' << (r.quoted ? fmt(*r.quoted, 6) : "") << '\t'
           << fmt(r.computed, 6) << '\t' << (r.quoted ? fmt(*r.delta(), 6) : "") << '\t' << r.note << '\n';
    }
    return os.str();
}

Report reproduce_report(const Fixtures& fx) {
    Report rep;
    const std::vector<std::string> groups{"prohibition", "rejection", "saunders"};
    const std::vector<std::pair<std::string, std::string>> measures{
        {"utterances_per_min", "u/min"}, {"neg_utterances_per_min", "nu/min"}};

    for (const auto& [measure, label] : measures) {
        const std::string sec = "comparison " + label;
        for (int s = 1; s <= 5; ++s) {
            std::vector<std::vector<double>> data;
            for (const auto& g : groups) {
                auto v = fx.values(g, s, measure);
                if (v.size() < 2) throw Error("fixture table has fewer than two " + g + " values for " + measure);
                const std::string base = "s" + std::to_string(s) + " " + g;
                rep.rows.push_back({sec, base + " mean", fx.reported(g, s, "mean_" + measure), mean_of(v),
                                    "n=" + std::to_string(v.size())});
                rep.rows.push_back({sec, base + " sd", fx.reported(g, s, "sd_" + measure), sd_of(v), ""});
                data.push_back(std::move(v));
            }
            const AnovaResult a = one_way_anova(data);
            const std::string df = "F(" + std::to_string(a.df_between) + "," + std::to_string(a.df_within) + ")";
            std::string note = df + "=" + fmt(a.f, 2);
            if (a.df_within != 26) note += "; table header states F(2,26)";
            rep.rows.push_back({sec, "s" + std::to_string(s) + " anova F", fx.reported("*", s, "anova_F_" + measure),
                                a.f, note});
            rep.rows.push_back({sec, "s" + std::to_string(s) + " anova p", fx.reported("*", s, "anova_p_" + measure),
                                a.p, df});
        }
    }

    // Share of utterances containing a negation word.
    std::map<std::string, double> share;
    for (const auto& g : groups) {
        const double nu = fx.total(g, "neg_utterances");
        const double u = fx.total(g, "utterances");
        if (!(u > 0.0)) throw Error("no utterance counts for " + g);
        share[g] = nu / u;
        rep.rows.push_back({"negative share", g + " nu/u", std::nullopt, share[g],
                            fmt(nu, 0) + "/" + fmt(u, 0) + ", one in " + fmt(u / nu, 2)});
    }
    rep.rows.push_back({"negative share", "prohibition vs saunders ratio (%)", 391.0,
                        100.0 * share["prohibition"] / share["saunders"],
                        "ambiguous: the reported figure's computation is not stated"});
    rep.rows.push_back({"negative share", "rejection vs saunders ratio (%)", 332.0,
                        100.0 * share["rejection"] / share["saunders"],
                        "ambiguous: the reported figure's computation is not stated"});

    // Temporal relations of prohibitive utterances.
    std::map<TemporalRelation, double> counts;
    double total = 0.0;
    for (TemporalRelation r : kAllRelations) {
        counts[r] = fx.total("prohibition", "relation:" + std::string(to_string(r)));
        total += counts[r];
    }
    if (!(total > 0.0)) throw Error("temporal relation table is empty");
    rep.rows.push_back({"temporal relations", "total", std::nullopt, total, ""});
    const std::map<TemporalRelation, double> quoted{{TemporalRelation::NoPush, 46.0},
                                                    {TemporalRelation::BeforePush, 12.0},
                                                    {TemporalRelation::DuringPush, 18.0}};
    for (TemporalRelation r : kAllRelations) {
        const std::string name(to_string(r));
        rep.rows.push_back({"temporal relations", name + " count", std::nullopt, counts[r], ""});
        std::optional<double> q;
        if (auto it = quoted.find(r); it != quoted.end()) q = it->second;
        rep.rows.push_back({"temporal relations", name + " share (%)", q, 100.0 * counts[r] / total,
                            q ? "quoted as a rounded percentage" : ""});
    }
    return rep;
}

Report reproduce_report(const std::string& fixtures_dir) { return reproduce_report(Fixtures::load(fixtures_dir)); }

}  // namespace negacq

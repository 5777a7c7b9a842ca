#pragma once

#include <optional>
#include <string>
#include <vector>

namespace negacq {

struct FixtureRecord {
    std::string experiment;  // prohibition | rejection | saunders | "*"
    std::string participant; // participant id or "*" for aggregates
    int session = 0;
    std::string measure;
    std::optional<double> value;  // null for n/a
};

/// The bundled per-participant tables and reported aggregates.
class Fixtures {
public:
    static const std::vector<std::string>& table_names();
    /// Loads every table from `dir`; errors name any absent table and any bad line as file:line.
    static Fixtures load(const std::string& dir);

    /// Non-null participant values of one measure, in file order.
    std::vector<double> values(const std::string& experiment, int session, const std::string& measure) const;
    /// Sum over all sessions and participants; nulls are skipped.
    double total(const std::string& experiment, const std::string& measure) const;
    /// Aggregate (participant "*") value, if reported.
    std::optional<double> reported(const std::string& experiment, int session, const std::string& measure) const;

    const std::vector<FixtureRecord>& records() const { return records_; }

private:
    std::vector<FixtureRecord> records_;
};

/// NEGACQ_DATA if set, otherwise the fixtures shipped with the sources.
std::string default_fixtures_dir();

struct ReportRow {
    std::string section;
    std::string item;
    std::optional<double> quoted;
    double computed = 0.0;
    std::string note;
    std::optional<double> delta() const;
};

struct Report {
    std::vector<ReportRow> rows;

    const ReportRow* find(const std::string& section, const std::string& item) const;
    std::string text() const;
    std::string tsv() const;
};

Report reproduce_report(const Fixtures& fx);
Report reproduce_report(const std::string& fixtures_dir);

}  // namespace negacq

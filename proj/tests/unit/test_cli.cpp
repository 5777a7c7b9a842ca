#include "doctest.h"

#include "negacq/cli.hpp"
#include "negacq/grounding.hpp"
#include "support.hpp"

#include <algorithm>
#include <filesystem>
#include <sstream>

using namespace negacq;
using negacq::testing::slurp;
using negacq::testing::spit;
using negacq::testing::TempDir;
using negacq::testing::tree_digest;

namespace fs = std::filesystem;

namespace {

struct Run {
    int code = 0;
    std::string out, err;
};

Run cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    Run r;
    r.code = run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

int count_lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

// Lines of one "== name ... ==" section of analyze output, header included.
std::vector<std::string> section(const std::string& text, const std::string& name) {
    std::istringstream is(text);
    std::vector<std::string> lines;
    std::string line;
    bool inside = false;
    while (std::getline(is, line)) {
        if (line.rfind("== ", 0) == 0) {
            inside = line.rfind("== " + name + " ", 0) == 0;
            continue;
        }
        if (inside && !line.empty()) lines.push_back(line);
    }
    return lines;
}

}  // namespace

TEST_CASE("simulate writes five sessions and is reproducible") {
    TempDir a("cli-a"), b("cli-b");
    const std::vector<std::string> base{"--seed", "1", "simulate", "--scenario", "rejection", "--duration", "60"};
    auto with_out = [&](const TempDir& d) {
        std::vector<std::string> args{"--out", d.str()};
        args.insert(args.end(), base.begin(), base.end());
        return args;
    };
    const Run r1 = cli(with_out(a));
    REQUIRE(r1.code == 0);
    CHECK(count_lines(r1.out) == 7);  // header, five sessions, output location
    int sessions = 0;
    for (const auto& e : fs::directory_iterator(a.path() / "P01"))
        if (e.is_directory()) {
            ++sessions;
            CHECK(fs::exists(e.path() / "body_memory.jsonl"));
            CHECK(fs::exists(e.path() / "config.json"));
        }
    CHECK(sessions == 5);
    CHECK(fs::exists(a.path() / "P01" / "lexicon_after_s5.jsonl"));
    REQUIRE(cli(with_out(b)).code == 0);
    CHECK(tree_digest(a.path()) == tree_digest(b.path()));
}

TEST_CASE("parallel jobs give the same files as a serial run") {
    TempDir a("cli-serial"), b("cli-parallel");
    REQUIRE(cli({"--seed", "3", "--out", a.str(), "simulate", "--scenario", "prohibition", "--participants", "3",
                 "--sessions", "2", "--duration", "30"})
                .code == 0);
    REQUIRE(cli({"--seed", "3", "--out", b.str(), "simulate", "--scenario", "prohibition", "--participants", "3",
                 "--sessions", "2", "--duration", "30", "--jobs", "3"})
                .code == 0);
    CHECK(tree_digest(a.path()) == tree_digest(b.path()));
    CHECK(fs::exists(a.path() / "P03" / "session_2"));
}

TEST_CASE("simulate rejects bad arguments") {
    TempDir d("cli-bad");
    CHECK(cli({"--out", d.str(), "simulate", "--sessions", "0"}).code != 0);
    CHECK(cli({"--out", d.str(), "simulate", "--sessions", "6"}).code != 0);
    CHECK(cli({"--out", d.str(), "simulate", "--scenario", "sideways"}).code != 0);
    spit(d.path() / "profile.txt", "utterance_rate = fast\n");
    const Run bad = cli({"--out", d.str(), "simulate", "--profile", (d / "profile.txt")});
    CHECK(bad.code != 0);
    CHECK(bad.err.find("profile.txt:1") != std::string::npos);
    CHECK(cli({}).code != 0);
    CHECK(cli({"dance"}).code != 0);
}

TEST_CASE("a custom profile is honoured") {
    TempDir d("cli-profile");
    spit(d.path() / "quiet.txt", "base = rejection\nutterance_rate = 2\n");
    const Run r = cli({"--out", (d / "runs"), "--config", (d / "quiet.txt"), "simulate", "--sessions", "1",
                       "--duration", "120"});
    REQUIRE(r.code == 0);
    CHECK(slurp(d.path() / "runs" / "profile.txt").find("utterance_rate = 2") != std::string::npos);
}

TEST_CASE("analyze tabulates session logs") {
    TempDir runs("cli-runs"), tables("cli-tables");
    REQUIRE(cli({"--seed", "4", "--out", runs.str(), "simulate", "--scenario", "prohibition", "--sessions", "3",
                 "--duration", "120"})
                .code == 0);
    const Run r = cli({"--out", tables.str(), "analyze", "--logs", runs.str()});
    REQUIRE(r.code == 0);
    for (const char* t : {"relation", "corpus", "metrics", "cooccur", "felicity"}) {
        CHECK(r.out.find(std::string("== ") + t + " ==") != std::string::npos);
        CHECK(fs::exists(tables.path() / (std::string(t) + ".tsv")));
    }
    // Header plus one row per relation.
    CHECK(section(r.out, "relation").size() == 10);

    const Run sal = cli({"analyze", "--logs", runs.str(), "--tables", "corpus,metrics", "--salient-only"});
    REQUIRE(sal.code == 0);
    CHECK(sal.out.find("== relation ==") == std::string::npos);
    // Salient corpus counts add up to the utterance total.
    long corpus_total = 0, utterances = 0;
    const auto corpus_rows = section(sal.out, "corpus");
    REQUIRE(corpus_rows.size() > 1);
    for (std::size_t i = 1; i < corpus_rows.size(); ++i) {
        std::istringstream is(corpus_rows[i]);
        std::string rank, word;
        long count = 0;
        is >> rank >> word >> count;
        corpus_total += count;
    }
    const auto metric_rows = section(sal.out, "metrics");
    REQUIRE(metric_rows.size() == 4);
    std::istringstream header(metric_rows[0]);
    std::vector<std::string> columns;
    for (std::string c; std::getline(header, c, '\t');) columns.push_back(c);
    const auto u_col = std::find(columns.begin(), columns.end(), "u") - columns.begin();
    REQUIRE(u_col < long(columns.size()));
    for (std::size_t i = 1; i < metric_rows.size(); ++i) {
        std::istringstream row(metric_rows[i]);
        std::string cell;
        for (long c = 0; c <= u_col; ++c) std::getline(row, cell, '\t');
        utterances += std::stol(cell);
    }
    CHECK(corpus_total == utterances);
    CHECK(corpus_total > 0);
}

TEST_CASE("analyze and ground report missing inputs") {
    TempDir empty("cli-empty");
    CHECK(cli({"analyze", "--logs", empty.str()}).code != 0);
    CHECK(cli({"analyze"}).code != 0);
    CHECK(cli({"ground", "--log", (empty / "nothing")}).code != 0);
}

TEST_CASE("ground builds a lexicon from a session log") {
    TempDir runs("cli-ground"), out("cli-ground-out");
    REQUIRE(cli({"--seed", "8", "--out", runs.str(), "simulate", "--sessions", "1", "--duration", "60"}).code == 0);
    const std::string log = (runs.path() / "P01" / "session_1").string();
    REQUIRE(cli({"--out", out.str(), "ground", "--log", log}).code == 0);
    const auto lexicon = out.path() / "lexicon.jsonl";
    REQUIRE(fs::exists(lexicon));
    // Same input, same lexicon file as the one written by simulate.
    CHECK(slurp(lexicon) == slurp(runs.path() / "P01" / "lexicon_after_s1.jsonl"));
}

TEST_CASE("reproduce prints the fixture report") {
    TempDir out("cli-report");
    const Run r = cli({"--out", out.str(), "reproduce"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("s1 prohibition mean") != std::string::npos);
    CHECK(r.out.find("F(2,26)=8.83") != std::string::npos);
    CHECK(fs::exists(out.path() / "report.txt"));
    CHECK(fs::exists(out.path() / "report.tsv"));
    CHECK(cli({"reproduce", "--fixtures", (out / "none")}).code != 0);
}

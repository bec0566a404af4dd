#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pathseeker/cli.hpp"
#include "pathseeker/graph.hpp"
#include "pathseeker/relevance.hpp"
#include "pathseeker/search_api.hpp"
#include "pathseeker/subgraph.hpp"
#include "support/a6_script.hpp"

namespace {

using namespace pathseeker;
namespace fs = std::filesystem;

/// Runs the CLI in-process with captured stdout/stderr.
int run_cli(const std::vector<std::string>& args, std::string* out_text = nullptr,
            std::string* err_text = nullptr) {
    std::vector<std::string> full = {"pathseeker"};
    full.insert(full.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    argv.reserve(full.size());
    for (const std::string& s : full) argv.push_back(s.c_str());

    std::ostringstream out;
    std::ostringstream err;
    std::streambuf* old_out = std::cout.rdbuf(out.rdbuf());
    std::streambuf* old_err = std::cerr.rdbuf(err.rdbuf());
    const int code = cli_dispatch(static_cast<int>(argv.size()), argv.data());
    std::cout.rdbuf(old_out);
    std::cerr.rdbuf(old_err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return code;
}

const std::string kEntries = FIXTURE_DIR "/a6_entries.jsonl";
const std::string kTriples = FIXTURE_DIR "/a6_triples.jsonl";
const std::string kMiniEntries = FIXTURE_DIR "/mini_entries.jsonl";
const std::string kMiniTriples = FIXTURE_DIR "/mini_triples.jsonl";

/// Scratch directory cleaned up when the test ends.
struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("pathseeker-cli-" + std::to_string(::getpid()) + "-" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int& counter() {
        static int n = 0;
        return n;
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    REQUIRE(out.good());
    out << content;
}

std::string task_line(const std::string& id, const std::string& question,
                      const std::string& gold) {
    return R"({"id":")" + id + R"(","question":")" + question + R"(","gold_answer":")" + gold +
           R"(","answer_mode":"true_false","categories":{"inquiry_type":"normal",)" +
           R"("extra_condition":"natural","investigation_target":"single"}})";
}

}  // namespace

TEST_CASE("ingest prints graph stats") {
    std::string out;
    CHECK(run_cli({"ingest", "--entries", kMiniEntries, "--triples", kMiniTriples}, &out) == 0);
    CHECK(out == "entries=2 triples=1 processes=1\n");

    CHECK(run_cli({"ingest", "--entries", "/nonexistent.jsonl", "--triples", kMiniTriples}) == 2);
}

TEST_CASE("usage problems exit 1 with help text") {
    std::string out;
    std::string err;
    CHECK(run_cli({"frobnicate"}, &out, &err) == 1);
    CHECK(run_cli({"ingest", "--entries", kMiniEntries}, &out, &err) == 1);  // missing --triples
    CHECK(run_cli({"query", "bogus-kind", "--entries", kMiniEntries, "--triples", kMiniTriples,
                   "--q", "x"},
                  &out, &err) == 1);
    CHECK(run_cli({"ingest", "--entries", kMiniEntries, "--triples", kMiniTriples,
                   "--unknown-flag"},
                  &out, &err) == 1);
    CHECK(run_cli({}, &out, &err) == 1);  // a subcommand is required
    CHECK(run_cli({"--help"}, &out, &err) == 0);
}

TEST_CASE("query output is byte-identical to the library") {
    const PathwayGraph graph = PathwayGraph::load_files(kEntries, kTriples);
    const RelevanceIndex index(graph);

    SUBCASE("subgraph") {
        const Query query = Query::from_text("ethanol");
        const SubgraphResult result = search_subgraph(graph, index, query, 5);
        std::string expected;
        for (const std::string& line : subgraph_lines(graph, index, query, result)) {
            expected += line + "\n";
        }
        std::string out;
        std::string err;
        CHECK(run_cli({"query", "subgraph", "--entries", kEntries, "--triples", kTriples, "--q",
                       "ethanol", "--n", "5"},
                      &out, &err) == 0);
        CHECK(out == expected);
        CHECK(err.find("size=5") != std::string::npos);
    }
    SUBCASE("node") {
        const auto hits = search_node(graph, index, Query::from_text("ethanol liver"));
        REQUIRE(!hits.empty());
        std::string out;
        CHECK(run_cli({"query", "node", "--entries", kEntries, "--triples", kTriples, "--q",
                       "ethanol liver"},
                      &out) == 0);
        std::istringstream lines(out);
        std::string first;
        std::getline(lines, first);
        CHECK(first == hit_line(hits[0]));
    }
    SUBCASE("neighbors validation") {
        CHECK(run_cli({"query", "neighbors", "--entries", kEntries, "--triples", kTriples, "--q",
                       "x"}) == 1);  // --anchor required
        std::string err;
        CHECK(run_cli({"query", "neighbors", "--entries", kEntries, "--triples", kTriples, "--q",
                       "x", "--anchor", "999"},
                      nullptr, &err) == 2);
        CHECK(err.find("unknown anchor") != std::string::npos);
    }
}

TEST_CASE("agent subcommand replays a scripted session") {
    TempDir tmp;
    const std::string script_path = tmp.file("script.json");
    write_file(script_path, nlohmann::json(testsupport::a6_script_with_reasoner()).dump());

    SUBCASE("single question writes a trajectory") {
        const std::string out_path = tmp.file("trajectory.json");
        std::string out;
        const int code =
            run_cli({"agent", "--entries", kEntries, "--triples", kTriples, "--script",
                     script_path, "--question", testsupport::a6_question, "--out", out_path},
                    &out);
        CHECK(code == 0);
        std::ifstream in(out_path);
        REQUIRE(in.good());
        const nlohmann::json trajectory = nlohmann::json::parse(in);
        CHECK(trajectory["task_id"] == "cli");
        CHECK(trajectory["api_counts"]["global"] == 1);
        CHECK(trajectory["api_counts"]["local"] == 2);
        CHECK(trajectory["finished"] == true);
    }
    SUBCASE("without a model source the command is a usage error") {
        CHECK(run_cli({"agent", "--entries", kEntries, "--triples", kTriples, "--question",
                       "q"}) == 1);
    }
    SUBCASE("task files fan out into a directory") {
        const std::string tasks_path = tmp.file("tasks.jsonl");
        write_file(tasks_path, task_line("t1", "Does ethanol harm the liver?", "Yes") + "\n" +
                                   task_line("t2", "Does adiponectin rise?", "No") + "\n");
        const std::string two_runs = tmp.file("two.json");
        write_file(two_runs,
                   nlohmann::json(std::vector<std::string>{
                                      "Action: Thought: enough\nAnswer:\nFinished.", "Yes",
                                      "Action: Thought: enough\nAnswer:\nFinished.", "No"})
                       .dump());
        const std::string run_dir = tmp.file("runs");
        std::string out;
        const int code = run_cli({"agent", "--entries", kEntries, "--triples", kTriples,
                                  "--script", two_runs, "--tasks", tasks_path, "--out", run_dir},
                                 &out);
        CHECK(code == 0);
        CHECK(out == "t1\tok\nt2\tok\n");
        CHECK(fs::exists(fs::path(run_dir) / "t1.json"));
        CHECK(fs::exists(fs::path(run_dir) / "t2.json"));
    }
}

TEST_CASE("eval subcommand writes a report with the run configuration") {
    TempDir tmp;
    const std::string tasks_path = tmp.file("tasks.jsonl");
    write_file(tasks_path, task_line("q1", "Is A true?", "Yes") + "\n" +
                               task_line("q2", "Is B true?", "No") + "\n");
    const std::string script_path = tmp.file("script.json");
    write_file(script_path,
               nlohmann::json(std::vector<std::string>{"Answer: Yes", "Answer: No"}).dump());
    const std::string report_path = tmp.file("report.json");

    std::string out;
    std::string err;
    const int code =
        run_cli({"eval", "--tasks", tasks_path, "--mode", "cot", "--shots", "0", "--workers",
                 "1", "--script", script_path, "--out", report_path, "--table"},
                &out, &err);
    CHECK(code == 0);

    std::ifstream in(report_path);
    REQUIRE(in.good());
    const nlohmann::json report = nlohmann::json::parse(in);
    CHECK(report["run_config"]["eval"]["mode"] == "cot");
    CHECK(report["run_config"]["model"]["script"] == script_path);
    CHECK(report["metric_kind"] == "balanced_accuracy");
    CHECK(report["overall_metric"] == 1.0);
    CHECK(report["tasks"] == 2);
    CHECK(err.find("overall") != std::string::npos);  // --table went to stderr

    SUBCASE("agent mode requires graph flags") {
        CHECK(run_cli({"eval", "--tasks", tasks_path, "--mode", "agent", "--script",
                       script_path}) == 1);
    }
    SUBCASE("bad shots value is a usage error") {
        CHECK(run_cli({"eval", "--tasks", tasks_path, "--mode", "cot", "--shots", "1",
                       "--script", script_path}) == 1);
    }
}

TEST_CASE("options load from an INI config file") {
    TempDir tmp;
    const std::string config_path = tmp.file("run.ini");
    write_file(config_path, "[ingest]\nentries = \"" + kMiniEntries + "\"\ntriples = \"" +
                                kMiniTriples + "\"\n");
    std::string out;
    CHECK(run_cli({"--config", config_path, "ingest"}, &out) == 0);
    CHECK(out == "entries=2 triples=1 processes=1\n");
}

// Acceptance gate: one PASS/FAIL/SKIP line per shipped guarantee, exit code 0
// only when nothing failed. Each check re-derives its expectation from an
// independent oracle (brute-force solver, dense parameter sweep, spreadsheet
// arithmetic, recorded session text) rather than trusting the unit under test.
//
// Optional environment switches:
//   PATHSEEKER_BASE_URL + PATHSEEKER_MODEL [+ PATHSEEKER_API_KEY]
//       enable the live end-to-end smoke check (check 8).
//   PATHSEEKER_KEGG_ENTRIES + PATHSEEKER_KEGG_TRIPLES
//       point at a full pathway export to check its ingestion stats
//       (check 9); without them the bundled fixtures stand in.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pathseeker/agent.hpp"
#include "pathseeker/chat_client.hpp"
#include "pathseeker/encoding.hpp"
#include "pathseeker/eval.hpp"
#include "pathseeker/graph.hpp"
#include "pathseeker/relevance.hpp"
#include "pathseeker/subgraph.hpp"
#include "support/a6_script.hpp"
#include "support/random_instances.hpp"

namespace {

using namespace pathseeker;
using Clock = std::chrono::steady_clock;

int g_failures = 0;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void report(bool pass, int index, const std::string& name, const std::string& detail) {
    if (!pass) ++g_failures;
    std::cout << (pass ? "PASS" : "FAIL") << " [" << index << "] " << name << ": " << detail
              << "\n";
}

void report_skip(int index, const std::string& name, const std::string& detail) {
    std::cout << "SKIP [" << index << "] " << name << ": " << detail << "\n";
}

std::string fixture(const char* stem) { return std::string(FIXTURE_DIR) + "/" + stem; }

// ---------------------------------------------------------------------------
// 1. Connected-subgraph solver vs the exhaustive optimum.

void check_solver_oracle_agreement() {
    const auto start = Clock::now();
    std::mt19937 rng(20240819);
    const int trials = 200;
    int connected_ok = 0, bound_ok = 0, exact = 0;
    for (int trial = 0; trial < trials; ++trial) {
        const PcstInstance inst = testing::random_instance(rng, 12);
        const SubgraphResult fast = solve_pcst(inst);
        const SubgraphResult best = solve_pcst_exact(inst);

        std::vector<std::uint32_t> nodes, edges;
        bool labels_ok = true;
        for (const std::string& label : fast.node_keys) {
            auto it = std::lower_bound(inst.node_label.begin(), inst.node_label.end(), label);
            if (it == inst.node_label.end() || *it != label) {
                labels_ok = false;
                break;
            }
            nodes.push_back(static_cast<std::uint32_t>(it - inst.node_label.begin()));
        }
        for (TripleId t : fast.triples) edges.push_back(t);  // synthetic: ref == index
        if (labels_ok && subgraph_connected(inst, nodes, edges)) ++connected_ok;
        if (fast.objective >= 0.5 * best.objective - 1e-9) ++bound_ok;
        if (std::fabs(fast.objective - best.objective) <=
            1e-9 * std::max(1.0, std::fabs(best.objective)))
            ++exact;
    }
    const double elapsed = seconds_since(start);
    std::ostringstream detail;
    detail << "connected " << connected_ok << "/" << trials << ", half-of-optimum bound "
           << bound_ok << "/" << trials << ", exact-match rate " << exact << "/" << trials
           << ", " << elapsed << "s";
    report(connected_ok == trials && bound_ok == trials && elapsed < 60.0, 1,
           "solver-oracle-agreement", detail.str());
}

// ---------------------------------------------------------------------------
// 2. Size targeting vs a dense edge-cost sweep with the same inner solver.

PathwayGraph random_pathway_graph(std::mt19937& rng) {
    std::uniform_int_distribution<int> node_count(6, 12);
    std::uniform_int_distribution<int> name_reps(0, 3);
    std::uniform_int_distribution<int> relation_reps(0, 2);
    std::uniform_int_distribution<int> extra_edges(0, 3);

    const int n = node_count(rng);
    nlohmann::json header = {{"format", "pathseeker-graph"}, {"version", 1}};

    std::ostringstream entries;
    entries << header.dump() << "\n";
    for (int i = 0; i < n; ++i) {
        // Staggered repetitions of the probe token give every node a distinct
        // lexical weight, so the cost sweep passes through many subgraph sizes
        // instead of jumping between symmetric extremes.
        int reps = name_reps(rng);
        if (i == 0) reps = std::max(reps, 1);  // at least one node must match
        std::vector<std::string> names;
        for (int r = 0; r < reps; ++r) names.push_back("alpha");
        names.push_back("filler" + std::to_string(i));
        nlohmann::json entry = {{"ids", {"G" + std::to_string(i)}},
                                {"names", names},
                                {"kind", i % 3 == 0 ? "compound" : "gene_group"}};
        entries << entry.dump() << "\n";
    }

    std::ostringstream triples;
    triples << header.dump() << "\n";
    auto add_edge = [&](int a, int b) {
        std::string relation;
        for (int r = relation_reps(rng); r > 0; --r) relation += "alpha ";
        relation += "link";
        nlohmann::json triple = {{"head", {"G" + std::to_string(a)}},
                                 {"tail", {"G" + std::to_string(b)}},
                                 {"relation", relation},
                                 {"processes", {"p0: synthetic sweep collection"}}};
        triples << triple.dump() << "\n";
    };
    for (int i = 1; i < n; ++i) {
        std::uniform_int_distribution<int> parent(0, i - 1);
        add_edge(parent(rng), i);  // spanning tree keeps the graph connected
    }
    for (int e = extra_edges(rng); e > 0; --e) {
        std::uniform_int_distribution<int> pick(0, n - 1);
        add_edge(pick(rng), pick(rng));
    }

    std::istringstream entries_in(entries.str());
    std::istringstream triples_in(triples.str());
    return PathwayGraph::load(entries_in, triples_in);
}

void check_size_targeting() {
    const auto start = Clock::now();
    std::mt19937 rng(77041);
    const int trials = 50;
    int within_sweep = 0, exact_hits = 0;
    std::size_t worst_gap = 0;
    for (int trial = 0; trial < trials; ++trial) {
        const PathwayGraph graph = random_pathway_graph(rng);
        const RelevanceIndex index(graph);
        const Query query = Query::from_keywords({"alpha"});
        const PrizeMap prizes = index.score_graph(query);

        std::uniform_int_distribution<std::size_t> pick_target(1, graph.triple_count());
        const std::size_t target = pick_target(rng);

        SearchOptions options;
        options.max_probes = 30;  // the stated outer-iteration budget
        const SubgraphResult found = search_subgraph(graph, index, query, target, options);
        const std::size_t got =
            found.size() > target ? found.size() - target : target - found.size();

        // Oracle: densely sweep the uniform edge cost over [0, total prize + 1]
        // and record the closest size the same inner solver can reach at all.
        const double upper = prizes.total() + 1.0;
        std::size_t sweep_best = std::numeric_limits<std::size_t>::max();
        for (int i = 0; i < 100; ++i) {
            const double cost = upper * i / 99.0;
            const SubgraphResult probe =
                solve_pcst(PcstInstance::from_graph(graph, prizes, cost));
            const std::size_t diff = probe.size() > target ? probe.size() - target
                                                           : target - probe.size();
            sweep_best = std::min(sweep_best, diff);
        }

        if (got <= sweep_best) ++within_sweep;
        if (got == 0) ++exact_hits;
        worst_gap = std::max(worst_gap, got);
    }
    const double elapsed = seconds_since(start);
    std::ostringstream detail;
    detail << "matched-or-beat the 100-point sweep on " << within_sweep << "/" << trials
           << " graphs (exact size hits " << exact_hits << ", worst |size-target| " << worst_gap
           << "), probe budget 30, " << elapsed << "s";
    report(within_sweep == trials && elapsed < 60.0, 2, "size-targeting-vs-dense-sweep",
           detail.str());
}

// ---------------------------------------------------------------------------
// 3. Golden first observation line and the repeat-search sentinel.

void check_encoding_golden() {
    const PathwayGraph graph =
        PathwayGraph::load_files(fixture("a6_entries.jsonl"), fixture("a6_triples.jsonl"));
    const RelevanceIndex index(graph);
    const Query query = Query::from_keywords({testsupport::a6_keywords});

    const SubgraphResult result = search_subgraph(graph, index, query, 20);
    const PrizeMap prizes = index.score_graph(query);
    SessionLedger ledger;
    const std::string observation =
        triple_to_ordered_text(dfs_order(result.triples, graph, &prizes), graph, ledger);
    const std::string first_line = observation.substr(0, observation.find('\n'));
    const bool golden = first_line == testsupport::a6_golden_line0;

    const SubgraphResult repeat = search_subgraph(graph, index, query, 20);
    const std::string second = triple_to_ordered_text(
        dfs_order(remove_seen(repeat.triples, ledger), graph, &prizes), graph, ledger);
    const bool sentinel = second == kNoNewPathwaysMessage;

    std::ostringstream detail;
    if (golden && sentinel) {
        detail << "line 0 byte-identical to the recorded session; repeated search -> \""
               << kNoNewPathwaysMessage << "\"";
    } else {
        detail << "line 0 " << (golden ? "ok" : "MISMATCH: " + first_line) << "; repeat "
               << (sentinel ? "ok" : "MISMATCH: " + second.substr(0, 80));
    }
    report(golden && sentinel, 3, "encoding-golden-line", detail.str());
}

// ---------------------------------------------------------------------------
// 4. Line ids stay contiguous across randomized multi-turn sessions.

void check_line_id_contiguity() {
    const PathwayGraph graph =
        PathwayGraph::load_files(fixture("a6_entries.jsonl"), fixture("a6_triples.jsonl"));
    const RelevanceIndex index(graph);
    const std::vector<std::string> pool = {
        "ethanol",     "alcoholic", "liver",   "adiponectin", "oxygen",
        "fatty",       "acid",      "disease", "oxidase",     "reactive",
        "lipogenesis", "cirrhosis"};

    std::mt19937 rng(551);
    std::uniform_int_distribution<int> turn_count(1, 4);
    std::uniform_int_distribution<std::size_t> pick_word(0, pool.size() - 1);
    std::uniform_int_distribution<int> word_count(1, 3);
    std::uniform_int_distribution<std::size_t> pick_target(1, graph.triple_count());

    const int sessions = 1000;
    int contiguous_sessions = 0;
    int multi_emission_sessions = 0;
    std::string failure;
    for (int s = 0; s < sessions; ++s) {
        SessionLedger ledger;
        bool ok = true;
        int emitting_turns = 0;
        const int turns = turn_count(rng);
        for (int t = 0; t < turns && ok; ++t) {
            std::vector<std::string> words;
            for (int w = word_count(rng); w > 0; --w) words.push_back(pool[pick_word(rng)]);
            const Query query = Query::from_keywords(words);
            const SubgraphResult found =
                search_subgraph(graph, index, query, pick_target(rng));
            if (found.no_relevant_content) continue;

            const PrizeMap prizes = index.score_graph(query);
            const std::size_t before = ledger.total();
            const std::vector<TripleId> fresh = remove_seen(found.triples, ledger);
            const std::string text =
                triple_to_ordered_text(dfs_order(fresh, graph, &prizes), graph, ledger);
            if (fresh.empty()) {
                if (text != kNoNewPathwaysMessage || ledger.total() != before) ok = false;
                continue;
            }
            ++emitting_turns;

            // Parse the numbered prefix of every line; ids must continue the
            // session's numbering exactly, in order, with no gaps or repeats.
            std::istringstream lines(text);
            std::string line;
            std::size_t expect = before;
            while (ok && std::getline(lines, line)) {
                const std::size_t paren = line.find(") ");
                if (paren == std::string::npos) {
                    ok = false;
                    break;
                }
                if (line.substr(0, paren) != std::to_string(expect)) ok = false;
                ++expect;
            }
            if (expect != before + fresh.size() || ledger.total() != expect) ok = false;
        }
        if (ok && ledger.lines().size() != ledger.total()) ok = false;
        if (emitting_turns >= 2) ++multi_emission_sessions;
        if (ok) {
            ++contiguous_sessions;
        } else if (failure.empty()) {
            failure = "first failure in session " + std::to_string(s);
        }
    }
    std::ostringstream detail;
    detail << contiguous_sessions << "/" << sessions
           << " sessions numbered 0..TotalNum-1 with later turns continuing at the prior "
              "total ("
           << multi_emission_sessions << " sessions had 2+ emitting turns)";
    if (!failure.empty()) detail << "; " << failure;
    report(contiguous_sessions == sessions && multi_emission_sessions > 100, 4,
           "line-id-contiguity", detail.str());
}

// ---------------------------------------------------------------------------
// 5. Deterministic replay of the recorded walkthrough session.

void check_agent_replay() {
    const PathwayGraph graph =
        PathwayGraph::load_files(fixture("a6_entries.jsonl"), fixture("a6_triples.jsonl"));
    const RelevanceIndex index(graph);
    const TaskInstruction task =
        TaskInstruction::make(testsupport::a6_question, AnswerMode::true_false);
    const AgentConfig config;

    // All three recorded action forms must parse to the expected kinds.
    bool forms_ok = true;
    try {
        forms_ok = parse_action(testsupport::a6_turn_global()).kind ==
                       ActionKind::global_search &&
                   parse_action(testsupport::a6_turn_local()).kind == ActionKind::local_search &&
                   parse_action(testsupport::a6_turn_local()).line_id == 18 &&
                   parse_action(testsupport::a6_turn_finish()).kind == ActionKind::finish;
    } catch (const std::exception&) {
        forms_ok = false;
    }

    auto run_once = [&]() {
        ScriptedClient client(testsupport::a6_script_with_reasoner());
        const Trajectory trajectory = run_agent(task, graph, index, config, client);
        return trajectory_to_json(trajectory, config);
    };
    const std::string first = run_once();
    const std::string second = run_once();

    ScriptedClient client(testsupport::a6_script_with_reasoner());
    const Trajectory trajectory = run_agent(task, graph, index, config, client);
    const bool counts_ok = trajectory.global_calls == 1 && trajectory.local_calls == 2;
    const bool finish_ok = trajectory.finished && !trajectory.errored;
    const bool deterministic = first == second;

    std::ostringstream detail;
    detail << "api_counts (" << trajectory.global_calls << " global, " << trajectory.local_calls
           << " local), finished=" << (finish_ok ? "yes" : "NO")
           << ", trajectories byte-identical=" << (deterministic ? "yes" : "NO")
           << ", all three action forms parsed=" << (forms_ok ? "yes" : "NO");
    report(counts_ok && finish_ok && deterministic && forms_ok, 5, "agent-session-replay",
           detail.str());
}

// ---------------------------------------------------------------------------
// 6. Metric arithmetic vs hand-computed oracles.

TaskResult oracle_row(std::string id, std::string gold, Verdict verdict, AnswerMode mode,
                      TaskCategories categories, std::size_t steps, std::size_t global_calls,
                      std::size_t local_calls) {
    TaskResult row;
    row.id = std::move(id);
    row.gold = std::move(gold);
    row.predicted = "-";
    row.verdict = verdict;
    row.mode = mode;
    row.categories = std::move(categories);
    row.steps = steps;
    row.global_calls = global_calls;
    row.local_calls = local_calls;
    return row;
}

void check_metric_correctness() {
    bool ok = true;
    std::ostringstream detail;

    // Fixture A: both classes perfect -> 1.0 exactly.
    const std::vector<std::pair<std::string, Verdict>> all_right = {
        {"Yes", Verdict::correct}, {"Yes", Verdict::correct}, {"No", Verdict::correct},
        {"No", Verdict::correct}};
    // Fixture B: every gold-Yes right, every gold-No wrong -> (1 + 0) / 2 = 0.5.
    const std::vector<std::pair<std::string, Verdict>> one_sided = {
        {"Yes", Verdict::correct}, {"Yes", Verdict::correct}, {"No", Verdict::incorrect},
        {"No", Verdict::incorrect}, {"No", Verdict::incorrect}};
    // Fixture C: 8/10 on Yes, 3/5 on No -> (0.8 + 0.6) / 2 = 0.7.
    std::vector<std::pair<std::string, Verdict>> mixed;
    for (int i = 0; i < 10; ++i) mixed.push_back({"Yes", i < 8 ? Verdict::correct : Verdict::incorrect});
    for (int i = 0; i < 5; ++i) mixed.push_back({"No", i < 3 ? Verdict::correct : Verdict::unresolved});
    const double a = balanced_accuracy(all_right);
    const double b = balanced_accuracy(one_sided);
    const double c = balanced_accuracy(mixed);
    const bool balanced_ok = a == 1.0 && b == 0.5 && std::fabs(c - 0.7) <= 1e-12;
    if (!balanced_ok) ok = false;
    detail << "balanced accuracy " << a << "/" << b << "/" << c << " vs 1.0/0.5/0.7";

    // Spreadsheet oracle for the aggregate table: eight rows tallied by hand.
    //   id  gold verdict     inquiry    extra       target       steps g l
    //   a0  Yes  correct     normal     natural     single        1    1 2
    //   a1  Yes  incorrect   normal     natural     interaction   3    1 2
    //   a2  No   correct     normal     intervened  function      4    1 2
    //   a3  No   correct     perturbed  natural     single        5    1 2
    //   a4  Yes  correct     perturbed  intervened  interaction   6    1 2
    //   a5  No   incorrect   perturbed  intervened  function      8    1 2
    //   a6  Yes  correct     normal     natural     single       10    2 2
    //   a7  No   unresolved  perturbed  intervened  single       12    1 4
    // Yes accuracy 3/4, No accuracy 2/4 -> overall (0.75 + 0.5) / 2 = 0.625.
    std::vector<TaskResult> rows;
    rows.push_back(oracle_row("a0", "Yes", Verdict::correct, AnswerMode::true_false,
                              {"normal", "natural", "single"}, 1, 1, 2));
    rows.push_back(oracle_row("a1", "Yes", Verdict::incorrect, AnswerMode::true_false,
                              {"normal", "natural", "interaction"}, 3, 1, 2));
    rows.push_back(oracle_row("a2", "No", Verdict::correct, AnswerMode::true_false,
                              {"normal", "intervened", "function"}, 4, 1, 2));
    rows.push_back(oracle_row("a3", "No", Verdict::correct, AnswerMode::true_false,
                              {"perturbed", "natural", "single"}, 5, 1, 2));
    rows.push_back(oracle_row("a4", "Yes", Verdict::correct, AnswerMode::true_false,
                              {"perturbed", "intervened", "interaction"}, 6, 1, 2));
    rows.push_back(oracle_row("a5", "No", Verdict::incorrect, AnswerMode::true_false,
                              {"perturbed", "intervened", "function"}, 8, 1, 2));
    rows.push_back(oracle_row("a6", "Yes", Verdict::correct, AnswerMode::true_false,
                              {"normal", "natural", "single"}, 10, 2, 2));
    rows.push_back(oracle_row("a7", "No", Verdict::unresolved, AnswerMode::true_false,
                              {"perturbed", "intervened", "single"}, 12, 1, 4));
    const EvalReport report_rows = aggregate(rows);

    auto category = [&](const char* dim, const char* value) {
        return report_rows.categories.at(dim).at(value).first;
    };
    auto near = [](double x, double want) { return std::fabs(x - want) <= 1e-12; };
    const bool aggregate_ok =
        near(report_rows.overall_metric, 0.625) &&
        report_rows.metric_kind == "balanced_accuracy" &&
        // normal: Yes 2/3 correct, No 1/1 -> (2/3 + 1) / 2; perturbed mirrors it.
        near(category("inquiry_type", "normal"), (2.0 / 3.0 + 1.0) / 2.0) &&
        near(category("inquiry_type", "perturbed"), (1.0 + 1.0 / 3.0) / 2.0) &&
        near(category("extra_condition", "natural"), (2.0 / 3.0 + 1.0) / 2.0) &&
        near(category("extra_condition", "intervened"), (1.0 + 1.0 / 3.0) / 2.0) &&
        // single: Yes 2/2, No 1/2 -> 0.75; interaction: (1/2 + -)...
        near(category("investigation_target", "single"), 0.75) &&
        near(category("investigation_target", "interaction"), 0.5) &&
        near(category("investigation_target", "function"), 0.5) &&
        report_rows.categories.at("investigation_target").at("single").second == 4 &&
        report_rows.step_histogram == std::array<std::size_t, 5>{2, 2, 1, 1, 2} &&
        near(report_rows.mean_global_calls, 1.125) && near(report_rows.mean_local_calls, 2.25);
    if (!aggregate_ok) ok = false;
    detail << "; aggregate-vs-spreadsheet " << (aggregate_ok ? "ok" : "MISMATCH");

    const double entropy =
        answer_entropy({TfAnswer::yes, TfAnswer::yes, TfAnswer::yes, TfAnswer::no, TfAnswer::no});
    const bool entropy_ok = std::fabs(entropy - 0.9710) <= 1e-3;
    if (!entropy_ok) ok = false;
    detail << "; entropy(3 yes, 2 no) = " << entropy << " (want 0.9710 +- 1e-3)";

    report(ok, 6, "metric-correctness", detail.str());
}

// ---------------------------------------------------------------------------
// 7. Every feature toggle produces its documented behavioral change.

void check_ablation_observability() {
    const PathwayGraph graph =
        PathwayGraph::load_files(fixture("a6_entries.jsonl"), fixture("a6_triples.jsonl"));
    const RelevanceIndex index(graph);
    const TaskInstruction task =
        TaskInstruction::make(testsupport::a6_question, AnswerMode::true_false);

    const std::string finish_turn =
        "Action: Thought: enough evidence collected.\nAnswer: Yes, protective.\nFinished.";
    std::vector<std::string> changes;
    bool ok = true;

    // Deduplication off: an identical second search re-emits lines with fresh
    // ids (the recorded session instead collapses to the sentinel).
    {
        AgentConfig off;
        off.toggles.remove_seen = false;
        ScriptedClient client({testsupport::a6_turn_global(), testsupport::a6_turn_global(),
                               finish_turn, testsupport::a6_final_answer()});
        const Trajectory t = run_agent(task, graph, index, off, client);
        const std::string& second = t.steps.at(1).observation.text;
        const bool changed = second.find("20) ") == 0 &&
                             second.find(kNoNewPathwaysMessage) == std::string::npos;
        changes.push_back(std::string("dedup-off re-emits from id 20: ") +
                          (changed ? "yes" : "NO"));
        ok = ok && changed;
    }
    // Depth-first arrangement off: lines fall back to ascending triple order
    // and differ from the arranged rendering of the same search.
    {
        AgentConfig on;
        AgentConfig off;
        off.toggles.dfs_order = false;
        ScriptedClient c1({testsupport::a6_turn_global(), finish_turn,
                           testsupport::a6_final_answer()});
        ScriptedClient c2({testsupport::a6_turn_global(), finish_turn,
                           testsupport::a6_final_answer()});
        const Trajectory arranged = run_agent(task, graph, index, on, c1);
        const Trajectory flat = run_agent(task, graph, index, off, c2);
        bool ascending = true;
        const auto& emitted = flat.steps.at(0).observation.new_triples;
        for (std::size_t i = 1; i < emitted.size(); ++i)
            if (emitted[i].second <= emitted[i - 1].second) ascending = false;
        const bool changed = ascending && arranged.steps.at(0).observation.text !=
                                              flat.steps.at(0).observation.text;
        changes.push_back(std::string("arrangement-off renders ascending ids: ") +
                          (changed ? "yes" : "NO"));
        ok = ok && changed;
    }
    // Text rendering off: lines carry bare triple indices, no entity text.
    {
        AgentConfig off;
        off.toggles.triple_to_text = false;
        ScriptedClient client({testsupport::a6_turn_global(), finish_turn,
                               testsupport::a6_final_answer()});
        const Trajectory t = run_agent(task, graph, index, off, client);
        const std::string& first = t.steps.at(0).observation.text;
        const bool changed =
            first.find("triple#") != std::string::npos && first.find(" | ") == std::string::npos;
        changes.push_back(std::string("rendering-off emits bare indices: ") +
                          (changed ? "yes" : "NO"));
        ok = ok && changed;
    }
    // Local search off: the neighborhood probe is refused with the fixed
    // sentinel instead of running.
    {
        AgentConfig off;
        off.toggles.local_search = false;
        ScriptedClient client({testsupport::a6_turn_global(), testsupport::a6_turn_local(),
                               finish_turn, testsupport::a6_final_answer()});
        const Trajectory t = run_agent(task, graph, index, off, client);
        const bool changed = t.steps.at(1).observation.text == kLocalSearchDisabledMessage;
        changes.push_back(std::string("local-search-off refuses with sentinel: ") +
                          (changed ? "yes" : "NO"));
        ok = ok && changed;
    }
    // Closing reasoner off: no extra model call; the answer comes from the
    // last turn's own Answer region.
    {
        AgentConfig off;
        off.toggles.final_reasoner = false;
        ScriptedClient client({testsupport::a6_turn_global(), finish_turn});  // nothing spare
        const Trajectory t = run_agent(task, graph, index, off, client);
        const bool changed = t.finished && !t.errored && t.final_answer.has_value() &&
                             t.final_answer->find("Yes, protective.") == 0;
        changes.push_back(std::string("reasoner-off answers from the turn itself: ") +
                          (changed ? "yes" : "NO"));
        ok = ok && changed;
    }

    std::string joined;
    for (const std::string& c : changes) joined += (joined.empty() ? "" : "; ") + c;
    report(ok, 7, "ablation-observability", joined);
}

// ---------------------------------------------------------------------------
// 8. Optional live smoke over a configured chat endpoint.

std::vector<TaskRecord> live_smoke_tasks() {
    // Twenty yes/no questions answerable from the bundled fixture graph;
    // half affirm a recorded interaction, half contradict one.
    const std::vector<std::pair<std::string, std::string>> seed = {
        {"Does chronic ethanol exposure contribute to alcoholic liver disease?", "Yes"},
        {"Is NOX4 an enzyme that produces reactive oxygen species?", "Yes"},
        {"Does adiponectin signal through the receptor ADIPOR1?", "Yes"},
        {"Can microRNA-217 influence SIRT1 levels in liver cells?", "Yes"},
        {"Is ethanol metabolized as part of alcoholic liver disease pathways?", "Yes"},
        {"Does AMPK signaling participate in hepatic lipid regulation?", "Yes"},
        {"Do reactive oxygen species contribute to liver injury?", "Yes"},
        {"Is SREBP-1 involved in hepatic lipogenesis?", "Yes"},
        {"Does adiponectin participate in alcoholic liver disease pathways?", "Yes"},
        {"Can ethanol exposure alter fatty acid metabolism in the liver?", "Yes"},
        {"Does adiponectin directly destroy hepatocytes on contact?", "No"},
        {"Is ethanol a protein-coding gene?", "No"},
        {"Does NOX4 remove all reactive oxygen species from the liver?", "No"},
        {"Is microRNA-217 a secreted hormone of adipose tissue?", "No"},
        {"Does SIRT1 encode an alcohol dehydrogenase?", "No"},
        {"Is alcoholic liver disease caused exclusively by adiponectin excess?", "No"},
        {"Does AMPK convert ethanol into acetaldehyde?", "No"},
        {"Is SREBP-1 a microRNA?", "No"},
        {"Does reactive oxygen production always prevent steatosis?", "No"},
        {"Is ADIPOR1 a biological process rather than a gene product?", "No"},
    };
    std::vector<TaskRecord> tasks;
    const char* targets[3] = {"single", "interaction", "function"};
    for (std::size_t i = 0; i < seed.size(); ++i) {
        TaskRecord task;
        task.id = "live" + std::string(i < 10 ? "0" : "") + std::to_string(i);
        task.question = seed[i].first;
        task.gold_answer = seed[i].second;
        task.answer_mode = AnswerMode::true_false;
        task.categories = {i % 2 == 0 ? "normal" : "perturbed",
                           i % 3 == 0 ? "intervened" : "natural", targets[i % 3]};
        tasks.push_back(std::move(task));
    }
    return tasks;
}

void check_live_smoke() {
    const char* base_url = std::getenv("PATHSEEKER_BASE_URL");
    const char* model = std::getenv("PATHSEEKER_MODEL");
    if (base_url == nullptr || model == nullptr || *base_url == '\0' || *model == '\0') {
        report_skip(8, "live-smoke",
                    "no credentials; set PATHSEEKER_BASE_URL and PATHSEEKER_MODEL (and "
                    "optionally PATHSEEKER_API_KEY) to run 20 true/false tasks end to end");
        return;
    }
    try {
        HttpEndpoint endpoint;
        endpoint.base_url = base_url;
        endpoint.model = model;
        if (const char* key = std::getenv("PATHSEEKER_API_KEY")) endpoint.api_key = key;
        HttpChatClient client(endpoint);

        const PathwayGraph graph =
            PathwayGraph::load_files(fixture("a6_entries.jsonl"), fixture("a6_triples.jsonl"));
        const RelevanceIndex index(graph);

        EvalOptions options;
        options.workers = 2;
        const EvalReport result = run_eval(live_smoke_tasks(), &graph, &index, options, client);

        std::ostringstream detail;
        detail << "balanced accuracy " << result.overall_metric << " over " << result.task_count
               << " tasks (" << result.errored << " errored); mean API usage "
               << result.mean_global_calls << " global / " << result.mean_local_calls
               << " local per task vs reference means ~1.5 / ~3.5 (informational)";

        // Judge-vs-human agreement on the bundled paraphrase pairs, reported
        // alongside the smoke run while a live model is available.
        std::ifstream pairs(fixture("judge_pairs.jsonl"));
        std::size_t agree = 0, total = 0;
        std::string line;
        while (std::getline(pairs, line)) {
            if (line.empty()) continue;
            const auto record = nlohmann::json::parse(line);
            const JudgeOutcome outcome =
                judge_open_ended(record.at("question").get<std::string>(),
                                 record.at("gold").get<std::string>(),
                                 record.at("candidate").get<std::string>(), client);
            const bool human_correct = record.at("human").get<std::string>() == "correct";
            if ((outcome.verdict == Verdict::correct) == human_correct) ++agree;
            ++total;
        }
        const double agreement = total == 0 ? 0.0 : static_cast<double>(agree) / total;
        detail << "; judge-vs-human agreement " << agree << "/" << total << " = " << agreement
               << (agreement >= 0.90 ? " (within 10 points)" : " (OUTSIDE 10 points)");

        const bool ok = result.overall_metric >= 0.0 && result.overall_metric <= 1.0 &&
                        result.errored < result.task_count && agreement >= 0.90;
        report(ok, 8, "live-smoke", detail.str());
    } catch (const std::exception& error) {
        report(false, 8, "live-smoke", std::string("pipeline failed: ") + error.what());
    }
}

// ---------------------------------------------------------------------------
// 9. Ingestion stats, against the full export when one is supplied.

void check_ingestion_stats() {
    const char* entries_path = std::getenv("PATHSEEKER_KEGG_ENTRIES");
    const char* triples_path = std::getenv("PATHSEEKER_KEGG_TRIPLES");
    if (entries_path != nullptr && triples_path != nullptr) {
        try {
            const PathwayGraph graph = PathwayGraph::load_files(entries_path, triples_path);
            const GraphStats stats = graph.stats();
            std::ostringstream detail;
            detail << "full export: entries=" << stats.entries << " triples=" << stats.triples
                   << " processes=" << stats.processes << " (want 8939 / 15131 / 2265)";
            report(stats.entries == 8939 && stats.triples == 15131 && stats.processes == 2265, 9,
                   "ingestion-stats", detail.str());
        } catch (const std::exception& error) {
            report(false, 9, "ingestion-stats",
                   std::string("full export failed to load: ") + error.what());
        }
        return;
    }

    // No export available: the bundled fixtures stand in, with their stats
    // checked against hand-counted values.
    try {
        const GraphStats mini =
            PathwayGraph::load_files(fixture("mini_entries.jsonl"), fixture("mini_triples.jsonl"))
                .stats();
        const GraphStats a6 =
            PathwayGraph::load_files(fixture("a6_entries.jsonl"), fixture("a6_triples.jsonl"))
                .stats();
        std::ostringstream detail;
        detail << "no full export configured (set PATHSEEKER_KEGG_ENTRIES/_TRIPLES); fixture "
                  "stand-ins: mini "
               << mini.entries << "/" << mini.triples << "/" << mini.processes
               << " (want 2/1/1), walkthrough " << a6.entries << "/" << a6.triples << "/"
               << a6.processes << " (want 19/20/5)";
        report(mini.entries == 2 && mini.triples == 1 && mini.processes == 1 &&
                   a6.entries == 19 && a6.triples == 20 && a6.processes == 5,
               9, "ingestion-stats", detail.str());
    } catch (const std::exception& error) {
        report(false, 9, "ingestion-stats", std::string("fixtures failed to load: ") + error.what());
    }
}

}  // namespace

int main() {
    std::cout.setf(std::ios::fixed);
    std::cout.precision(4);

    check_solver_oracle_agreement();
    check_size_targeting();
    check_encoding_golden();
    check_line_id_contiguity();
    check_agent_replay();
    check_metric_correctness();
    check_ablation_observability();
    check_live_smoke();
    check_ingestion_stats();

    if (g_failures == 0) {
        std::cout << "acceptance: all checks passed\n";
        return 0;
    }
    std::cout << "acceptance: " << g_failures << " check(s) FAILED\n";
    return 1;
}

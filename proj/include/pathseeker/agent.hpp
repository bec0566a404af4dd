#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pathseeker/chat_client.hpp"
#include "pathseeker/encoding.hpp"
#include "pathseeker/graph.hpp"
#include "pathseeker/relevance.hpp"

namespace pathseeker {

/// Observation sent when a valid-by-grammar local search names a line id
/// that was never emitted this session.
inline constexpr const char* kUnknownLineMessage = "Unknown line id.";
/// Observation sent when local search is toggled off.
inline constexpr const char* kLocalSearchDisabledMessage = "Local search is disabled.";
/// Observation closing a finished session.
inline constexpr const char* kFinishedMessage = "You finished the task.";
/// Observation sent when a query matches nothing in the graph.
inline constexpr const char* kNoRelevantContentMessage =
    "No pathways matched the given keywords.";

enum class AnswerMode { true_false, open_ended };

/// Everything the loop needs to pose one task: the question, how the final
/// answer is scored, and the instruction texts for the explorer and the
/// closing reasoner.
struct TaskInstruction {
    std::string question;
    AnswerMode answer_mode = AnswerMode::open_ended;
    std::string preamble;      // system text for the exploration loop
    std::string final_prompt;  // system text for the closing answer pass

    /// Instruction wired to the shipped default prompts.
    static TaskInstruction make(std::string question, AnswerMode mode);
};

enum class ActionKind { global_search, local_search, finish };

struct Action {
    ActionKind kind = ActionKind::finish;
    std::vector<std::string> keywords;  // search kinds only
    std::size_t line_id = 0;            // local_search only
    std::string raw_text;               // the model's full turn
};

class ActionParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Extracts the first recognized action from a model turn. The scan covers
/// the region between the first "Action:" marker and "End Action" (or end
/// of text; a turn without the marker is scanned whole). Recognized forms:
/// the two tool calls and the "Finished." terminator; whichever starts
/// first wins. Keyword lists are bracketed quoted strings split on commas
/// outside quotes.
Action parse_action(const std::string& model_text);
std::optional<Action> try_parse_action(const std::string& model_text);

struct Observation {
    std::string text;  // encoder output or one of the fixed sentinels
    std::vector<std::pair<std::size_t, TripleId>> new_triples;  // (line id, triple)
};

struct TrajectoryStep {
    Action action;
    Observation observation;
};

struct Trajectory {
    std::string task_id;
    std::vector<TrajectoryStep> steps;
    SessionLedger ledger;
    std::optional<std::string> final_answer;
    std::size_t global_calls = 0;
    std::size_t local_calls = 0;
    bool finished = false;
    bool parse_degraded = false;  // a turn needed the retry prompt
    std::size_t parse_retries = 0;
    bool errored = false;
    std::string error;

    std::size_t step_count() const { return steps.size(); }
};

/// Taking a feature out flips its flag to false; defaults run the full
/// pipeline.
struct AgentToggles {
    bool remove_seen = true;
    bool dfs_order = true;
    bool triple_to_text = true;
    bool local_search = true;
    bool final_reasoner = true;
};

struct AgentConfig {
    std::size_t max_steps = 15;
    std::size_t default_n = 20;  // target subgraph size per search
    unsigned hops = 2;           // local search radius
    AgentToggles toggles;
    Sampling sampling;
};

/// Executes one parsed action against the graph and records emitted lines
/// in the trajectory's ledger. Search results flow through deduplication,
/// depth-first arrangement and text rendering as toggled.
Observation step(const PathwayGraph& graph, const RelevanceIndex& index, Trajectory& trajectory,
                 const Action& action, const AgentConfig& config);

/// Called after each recorded step with the step and its 0-based index, so
/// callers (e.g. the HTTP service) can stream progress.
using StepObserver = std::function<void(const TrajectoryStep&, std::size_t)>;

/// Runs the exploration loop until finish or max_steps, then resolves the
/// final answer (closing reasoner pass, or the last turn's "Answer:"
/// region when that pass is toggled off). Transport failures mark the
/// trajectory errored; an unparseable turn earns one retry prompt before a
/// forced finish.
Trajectory run_agent(const TaskInstruction& task, const PathwayGraph& graph,
                     const RelevanceIndex& index, const AgentConfig& config, ChatClient& client,
                     const StepObserver& observer = nullptr);

/// Closing answer pass: the final-prompt text plus the question and every
/// observation in emission order — no action text. Returns the model text
/// verbatim.
std::string final_reason(const TaskInstruction& task, const Trajectory& trajectory,
                         const AgentConfig& config, ChatClient& client);

/// Text after the last "Answer:" marker, whole text if none; trimmed.
std::string answer_region(const std::string& model_text);

/// Stable JSON rendering of a trajectory (no wall-clock fields, fixed key
/// order) so replayed runs serialize byte-identically.
std::string trajectory_to_json(const Trajectory& trajectory, const AgentConfig& config);

}  // namespace pathseeker

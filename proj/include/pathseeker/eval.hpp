#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pathseeker/agent.hpp"
#include "pathseeker/chat_client.hpp"
#include "pathseeker/graph.hpp"
#include "pathseeker/relevance.hpp"

namespace pathseeker {

enum class Verdict { correct, incorrect, unresolved, errored };
const char* to_string(Verdict verdict);

enum class TfAnswer { yes, no, unresolved };

struct TaskCategories {
    std::string inquiry_type;          // normal | perturbed
    std::string extra_condition;       // natural | intervened
    std::string investigation_target;  // single | interaction | function
};

struct TaskRecord {
    std::string id;
    std::string question;
    std::string gold_answer;  // "Yes"/"No" for true_false, free text otherwise
    AnswerMode answer_mode = AnswerMode::true_false;
    TaskCategories categories;
};

/// Line-delimited JSON, one TaskRecord per line. Schema violations and
/// duplicate ids raise LoadError with the offending line number.
std::vector<TaskRecord> load_tasks(std::istream& source);
std::vector<TaskRecord> load_tasks_file(const std::string& path);

/// Case-insensitive scan of the final answer region for standalone
/// "yes"/"no" tokens; both present or neither -> unresolved.
TfAnswer extract_tf_answer(const std::string& answer_text);

/// Mean of the per-class accuracies over gold-Yes and gold-No rows.
/// `verdict` counts as a hit only when it is Verdict::correct. With one
/// class absent the present class's accuracy is returned and *warned (when
/// given) is set.
double balanced_accuracy(const std::vector<std::pair<std::string, Verdict>>& rows,
                         bool* warned = nullptr);

struct JudgeOutcome {
    Verdict verdict = Verdict::incorrect;
    bool model_called = false;  // false when a shortcut decided
    bool parse_failed = false;  // model text had no terminal verdict token
};

/// Grades an open-ended candidate against the reference answer. Exact
/// matches (case/whitespace-insensitive) and empty candidates are decided
/// without a model call; otherwise one judge completion is parsed for a
/// terminal CORRECT/INCORRECT token. Transport failures propagate as
/// ChatError.
JudgeOutcome judge_open_ended(const std::string& question, const std::string& gold,
                              const std::string& candidate, ChatClient& client,
                              const Sampling& sampling = {});

/// Chain-of-thought baseline: one completion, no graph access, with 0 or 2
/// fixed worked examples ahead of the question.
std::string cot_baseline(const TaskRecord& task, ChatClient& client, int shots,
                         const Sampling& sampling = {});

/// Shannon entropy (bits) of the empirical distribution of `samples` over
/// {yes, no, unresolved}. |samples| must equal `repeats`.
double answer_entropy(const std::vector<TfAnswer>& samples, std::size_t repeats = 5);

struct TaskResult {
    std::string id;
    std::string gold;
    std::string predicted;
    Verdict verdict = Verdict::errored;
    std::string error;
    AnswerMode mode = AnswerMode::true_false;
    TaskCategories categories;
    std::size_t steps = 0;
    std::size_t global_calls = 0;
    std::size_t local_calls = 0;
};

/// Session-length buckets: [1,4), [4,6), [6,8), [8,10), [10, inf).
/// Zero-step (errored-before-acting) sessions land in the first bucket.
inline constexpr std::array<const char*, 5> kStepBucketLabels = {"1-4", "4-6", "6-8", "8-10",
                                                                 ">=10"};
std::size_t step_bucket(std::size_t steps);

struct EvalReport {
    std::vector<TaskResult> per_task;  // ascending id
    std::size_t task_count = 0;
    std::size_t errored = 0;
    double overall_metric = 0.0;
    std::string metric_kind;  // "balanced_accuracy" | "accuracy"
    // dimension -> value -> (metric, row count)
    std::map<std::string, std::map<std::string, std::pair<double, std::size_t>>> categories;
    std::array<std::size_t, 5> step_histogram{};
    double mean_global_calls = 0.0;
    double mean_local_calls = 0.0;
};

/// Rebuilds every aggregate from per-task rows: the overall metric
/// (balanced accuracy when all rows are true/false, plain accuracy
/// otherwise), the three category breakdowns, the step histogram, and mean
/// API usage.
EvalReport aggregate(std::vector<TaskResult> rows);

struct EvalOptions {
    enum class Mode { cot, agent } mode = Mode::agent;
    int shots = 0;              // cot prompting only, 0 or 2
    std::size_t workers = 4;    // bounded worker pool
    AgentConfig agent;          // agent mode settings, incl. sampling
};

/// Runs every task through the chosen pipeline and aggregates the results
/// deterministically (rows ordered by task id regardless of worker
/// interleaving). `graph`/`index` are required in agent mode. Open-ended
/// grading uses `judge` when given, else the primary client.
EvalReport run_eval(const std::vector<TaskRecord>& tasks, const PathwayGraph* graph,
                    const RelevanceIndex* index, const EvalOptions& options, ChatClient& client,
                    ChatClient* judge = nullptr);

/// Stable JSON rendering (fixed key order, no wall-clock fields).
std::string report_to_json(const EvalReport& report, const EvalOptions& options);
/// Aligned text table for terminals.
std::string report_to_table(const EvalReport& report);

}  // namespace pathseeker

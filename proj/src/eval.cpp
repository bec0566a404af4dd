#include "pathseeker/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "pathseeker/prompts.hpp"

namespace pathseeker {

namespace {

using nlohmann::ordered_json;

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::string trim(const std::string& s) {
    std::size_t begin = 0;
    std::size_t end = s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
    return s.substr(begin, end - begin);
}

std::string require_string(const nlohmann::json& rec, const char* field, std::size_t line_no) {
    if (!rec.contains(field) || !rec.at(field).is_string()) {
        throw LoadError("tasks", line_no, std::string("missing string field '") + field + "'");
    }
    return rec.at(field).get<std::string>();
}

std::string require_category(const nlohmann::json& categories, const char* field,
                             const std::set<std::string>& allowed, std::size_t line_no) {
    if (!categories.contains(field) || !categories.at(field).is_string()) {
        throw LoadError("tasks", line_no,
                        std::string("missing string field 'categories.") + field + "'");
    }
    const std::string value = categories.at(field).get<std::string>();
    if (allowed.count(value) == 0) {
        throw LoadError("tasks", line_no,
                        std::string("invalid categories.") + field + " value '" + value + "'");
    }
    return value;
}

}  // namespace

const char* to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::correct: return "correct";
        case Verdict::incorrect: return "incorrect";
        case Verdict::unresolved: return "unresolved";
        case Verdict::errored: return "errored";
    }
    return "errored";
}

std::vector<TaskRecord> load_tasks(std::istream& source) {
    std::vector<TaskRecord> tasks;
    std::set<std::string> ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(source, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        nlohmann::json rec;
        try {
            rec = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw LoadError("tasks", line_no, std::string("invalid JSON: ") + e.what());
        }
        if (!rec.is_object()) throw LoadError("tasks", line_no, "record must be an object");

        TaskRecord task;
        task.id = require_string(rec, "id", line_no);
        if (task.id.empty()) throw LoadError("tasks", line_no, "field 'id' must be non-empty");
        if (!ids.insert(task.id).second) {
            throw LoadError("tasks", line_no, "duplicate task id '" + task.id + "'");
        }
        task.question = require_string(rec, "question", line_no);
        if (task.question.empty()) {
            throw LoadError("tasks", line_no, "field 'question' must be non-empty");
        }
        task.gold_answer = require_string(rec, "gold_answer", line_no);

        const std::string mode = require_string(rec, "answer_mode", line_no);
        if (mode == "true_false") {
            task.answer_mode = AnswerMode::true_false;
        } else if (mode == "open_ended") {
            task.answer_mode = AnswerMode::open_ended;
        } else {
            throw LoadError("tasks", line_no, "answer_mode must be true_false|open_ended");
        }
        if (task.answer_mode == AnswerMode::true_false && task.gold_answer != "Yes" &&
            task.gold_answer != "No") {
            throw LoadError("tasks", line_no, "true_false gold_answer must be Yes or No");
        }

        if (!rec.contains("categories") || !rec.at("categories").is_object()) {
            throw LoadError("tasks", line_no, "missing object field 'categories'");
        }
        const auto& categories = rec.at("categories");
        task.categories.inquiry_type =
            require_category(categories, "inquiry_type", {"normal", "perturbed"}, line_no);
        task.categories.extra_condition =
            require_category(categories, "extra_condition", {"natural", "intervened"}, line_no);
        task.categories.investigation_target = require_category(
            categories, "investigation_target", {"single", "interaction", "function"}, line_no);

        tasks.push_back(std::move(task));
    }
    return tasks;
}

std::vector<TaskRecord> load_tasks_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return load_tasks(in);
}

TfAnswer extract_tf_answer(const std::string& answer_text) {
    const std::string region = lower(answer_region(answer_text));
    bool saw_yes = false;
    bool saw_no = false;
    std::size_t i = 0;
    while (i < region.size()) {
        if (!std::isalpha(static_cast<unsigned char>(region[i]))) {
            ++i;
            continue;
        }
        std::size_t end = i;
        while (end < region.size() && std::isalpha(static_cast<unsigned char>(region[end]))) ++end;
        const std::string word = region.substr(i, end - i);
        if (word == "yes") saw_yes = true;
        if (word == "no") saw_no = true;
        i = end;
    }
    if (saw_yes == saw_no) return TfAnswer::unresolved;
    return saw_yes ? TfAnswer::yes : TfAnswer::no;
}

double balanced_accuracy(const std::vector<std::pair<std::string, Verdict>>& rows, bool* warned) {
    if (warned != nullptr) *warned = false;
    std::size_t yes_total = 0, yes_hits = 0, no_total = 0, no_hits = 0;
    for (const auto& [gold, verdict] : rows) {
        if (gold == "Yes") {
            ++yes_total;
            if (verdict == Verdict::correct) ++yes_hits;
        } else if (gold == "No") {
            ++no_total;
            if (verdict == Verdict::correct) ++no_hits;
        } else {
            throw std::invalid_argument("balanced_accuracy gold must be Yes or No, got '" + gold +
                                        "'");
        }
    }
    if (yes_total == 0 && no_total == 0) return 0.0;
    if (yes_total == 0 || no_total == 0) {
        if (warned != nullptr) *warned = true;
        return yes_total == 0 ? static_cast<double>(no_hits) / static_cast<double>(no_total)
                              : static_cast<double>(yes_hits) / static_cast<double>(yes_total);
    }
    const double yes_acc = static_cast<double>(yes_hits) / static_cast<double>(yes_total);
    const double no_acc = static_cast<double>(no_hits) / static_cast<double>(no_total);
    return (yes_acc + no_acc) / 2.0;
}

JudgeOutcome judge_open_ended(const std::string& question, const std::string& gold,
                              const std::string& candidate, ChatClient& client,
                              const Sampling& sampling) {
    JudgeOutcome outcome;
    const std::string trimmed = trim(candidate);
    if (trimmed.empty()) {
        outcome.verdict = Verdict::incorrect;
        return outcome;
    }
    if (lower(trimmed) == lower(trim(gold))) {
        outcome.verdict = Verdict::correct;
        return outcome;
    }

    const std::vector<ChatMessage> messages{
        {"system", "You are a strict, consistent grader."},
        {"user", prompts::judge_user_message(question, gold, candidate)},
    };
    const std::string text = client.complete(messages, sampling);
    outcome.model_called = true;

    // Terminal token: the last CORRECT/INCORRECT occurrence decides, with
    // the CORRECT inside INCORRECT not counting as its own verdict.
    const std::size_t incorrect_pos = text.rfind("INCORRECT");
    const std::size_t correct_pos = text.rfind("CORRECT");
    if (correct_pos == std::string::npos) {
        outcome.verdict = Verdict::incorrect;
        outcome.parse_failed = true;
        return outcome;
    }
    const bool correct_is_suffix_of_incorrect =
        incorrect_pos != std::string::npos && correct_pos == incorrect_pos + 2;
    outcome.verdict = (incorrect_pos != std::string::npos &&
                       (correct_is_suffix_of_incorrect || incorrect_pos > correct_pos))
                          ? Verdict::incorrect
                          : Verdict::correct;
    return outcome;
}

std::string cot_baseline(const TaskRecord& task, ChatClient& client, int shots,
                         const Sampling& sampling) {
    if (shots != 0 && shots != 2) throw std::invalid_argument("shots must be 0 or 2");
    std::vector<ChatMessage> messages{{"system", prompts::cot_instruction()}};
    if (shots == 2) {
        for (const prompts::CotShot& shot : prompts::cot_shots()) {
            messages.push_back({"user", shot.question});
            messages.push_back({"assistant", shot.answer});
        }
    }
    messages.push_back({"user", task.question});
    return client.complete(messages, sampling);
}

double answer_entropy(const std::vector<TfAnswer>& samples, std::size_t repeats) {
    if (samples.size() != repeats) {
        throw std::invalid_argument("answer_entropy expects exactly " + std::to_string(repeats) +
                                    " samples, got " + std::to_string(samples.size()));
    }
    std::array<std::size_t, 3> counts{};
    for (TfAnswer sample : samples) counts[static_cast<std::size_t>(sample)]++;
    double entropy = 0.0;
    for (std::size_t count : counts) {
        if (count == 0) continue;
        const double p = static_cast<double>(count) / static_cast<double>(samples.size());
        entropy -= p * std::log2(p);
    }
    return entropy;
}

std::size_t step_bucket(std::size_t steps) {
    if (steps < 4) return 0;
    if (steps < 6) return 1;
    if (steps < 8) return 2;
    if (steps < 10) return 3;
    return 4;
}

EvalReport aggregate(std::vector<TaskResult> rows) {
    std::sort(rows.begin(), rows.end(),
              [](const TaskResult& a, const TaskResult& b) { return a.id < b.id; });

    EvalReport report;
    report.task_count = rows.size();

    const bool all_tf = std::all_of(rows.begin(), rows.end(), [](const TaskResult& r) {
        return r.mode == AnswerMode::true_false;
    });
    report.metric_kind = all_tf && !rows.empty() ? "balanced_accuracy" : "accuracy";

    auto metric_of = [&](const std::vector<const TaskResult*>& subset) {
        if (subset.empty()) return 0.0;
        const bool tf = std::all_of(subset.begin(), subset.end(), [](const TaskResult* r) {
            return r->mode == AnswerMode::true_false;
        });
        if (tf) {
            std::vector<std::pair<std::string, Verdict>> pairs;
            pairs.reserve(subset.size());
            for (const TaskResult* r : subset) pairs.emplace_back(r->gold, r->verdict);
            return balanced_accuracy(pairs);
        }
        std::size_t hits = 0;
        for (const TaskResult* r : subset) {
            if (r->verdict == Verdict::correct) ++hits;
        }
        return static_cast<double>(hits) / static_cast<double>(subset.size());
    };

    std::vector<const TaskResult*> all;
    all.reserve(rows.size());
    double global_sum = 0.0;
    double local_sum = 0.0;
    for (const TaskResult& row : rows) {
        all.push_back(&row);
        if (row.verdict == Verdict::errored) ++report.errored;
        ++report.step_histogram[step_bucket(row.steps)];
        global_sum += static_cast<double>(row.global_calls);
        local_sum += static_cast<double>(row.local_calls);
    }
    report.overall_metric = metric_of(all);
    if (!rows.empty()) {
        report.mean_global_calls = global_sum / static_cast<double>(rows.size());
        report.mean_local_calls = local_sum / static_cast<double>(rows.size());
    }

    const std::array<std::pair<const char*, std::string TaskCategories::*>, 3> dimensions{{
        {"inquiry_type", &TaskCategories::inquiry_type},
        {"extra_condition", &TaskCategories::extra_condition},
        {"investigation_target", &TaskCategories::investigation_target},
    }};
    for (const auto& [name, member] : dimensions) {
        std::map<std::string, std::vector<const TaskResult*>> cells;
        for (const TaskResult& row : rows) cells[row.categories.*member].push_back(&row);
        for (const auto& [value, subset] : cells) {
            report.categories[name][value] = {metric_of(subset), subset.size()};
        }
    }

    report.per_task = std::move(rows);
    return report;
}

namespace {

TaskResult evaluate_one(const TaskRecord& task, const PathwayGraph* graph,
                        const RelevanceIndex* index, const EvalOptions& options,
                        ChatClient& client, ChatClient& judge) {
    TaskResult result;
    result.id = task.id;
    result.gold = task.gold_answer;
    result.mode = task.answer_mode;
    result.categories = task.categories;

    std::string answer;
    if (options.mode == EvalOptions::Mode::cot) {
        try {
            answer = cot_baseline(task, client, options.shots, options.agent.sampling);
        } catch (const ChatError& e) {
            result.verdict = Verdict::errored;
            result.error = e.what();
            return result;
        }
    } else {
        const TaskInstruction instruction = TaskInstruction::make(task.question, task.answer_mode);
        const Trajectory trajectory =
            run_agent(instruction, *graph, *index, options.agent, client);
        result.steps = trajectory.step_count();
        result.global_calls = trajectory.global_calls;
        result.local_calls = trajectory.local_calls;
        if (trajectory.errored || !trajectory.final_answer) {
            result.verdict = Verdict::errored;
            result.error = trajectory.errored ? trajectory.error : "no final answer";
            return result;
        }
        answer = *trajectory.final_answer;
    }
    result.predicted = answer;

    if (task.answer_mode == AnswerMode::true_false) {
        const TfAnswer extracted = extract_tf_answer(answer);
        if (extracted == TfAnswer::unresolved) {
            result.verdict = Verdict::unresolved;
        } else {
            const bool hit = (extracted == TfAnswer::yes) == (task.gold_answer == "Yes");
            result.verdict = hit ? Verdict::correct : Verdict::incorrect;
        }
    } else {
        try {
            result.verdict =
                judge_open_ended(task.question, task.gold_answer, answer, judge,
                                 options.agent.sampling)
                    .verdict;
        } catch (const ChatError& e) {
            result.verdict = Verdict::errored;
            result.error = e.what();
        }
    }
    return result;
}

}  // namespace

EvalReport run_eval(const std::vector<TaskRecord>& tasks, const PathwayGraph* graph,
                    const RelevanceIndex* index, const EvalOptions& options, ChatClient& client,
                    ChatClient* judge) {
    if (options.mode == EvalOptions::Mode::agent && (graph == nullptr || index == nullptr)) {
        throw std::invalid_argument("agent mode needs a graph and an index");
    }
    ChatClient& judge_client = judge != nullptr ? *judge : client;

    std::vector<TaskResult> rows(tasks.size());
    const std::size_t workers = std::max<std::size_t>(1, std::min(options.workers, tasks.size()));
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) break;
            rows[i] = evaluate_one(tasks[i], graph, index, options, client, judge_client);
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
        for (std::thread& t : pool) t.join();
    }
    return aggregate(std::move(rows));
}

std::string report_to_json(const EvalReport& report, const EvalOptions& options) {
    ordered_json out;
    out["mode"] = options.mode == EvalOptions::Mode::cot ? "cot" : "agent";
    if (options.mode == EvalOptions::Mode::cot) out["shots"] = options.shots;
    out["tasks"] = report.task_count;
    out["errored"] = report.errored;
    out["metric_kind"] = report.metric_kind;
    out["overall_metric"] = report.overall_metric;

    out["categories"] = ordered_json::object();
    for (const auto& [dimension, cells] : report.categories) {
        ordered_json block = ordered_json::object();
        for (const auto& [value, cell] : cells) {
            block[value] = {{"metric", cell.first}, {"tasks", cell.second}};
        }
        out["categories"][dimension] = block;
    }

    out["steps_histogram"] = ordered_json::object();
    for (std::size_t i = 0; i < kStepBucketLabels.size(); ++i) {
        out["steps_histogram"][kStepBucketLabels[i]] = report.step_histogram[i];
    }
    out["api_usage"] = {{"mean_global", report.mean_global_calls},
                        {"mean_local", report.mean_local_calls}};

    out["per_task"] = ordered_json::array();
    for (const TaskResult& row : report.per_task) {
        ordered_json item;
        item["id"] = row.id;
        item["gold"] = row.gold;
        item["predicted"] = row.predicted;
        item["verdict"] = to_string(row.verdict);
        if (!row.error.empty()) item["error"] = row.error;
        item["steps"] = row.steps;
        item["api_counts"] = {{"global", row.global_calls}, {"local", row.local_calls}};
        out["per_task"].push_back(item);
    }
    return out.dump(2);
}

std::string report_to_table(const EvalReport& report) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(4);
    out << "overall  " << report.metric_kind << "=" << report.overall_metric << "  tasks="
        << report.task_count << "  errored=" << report.errored << "\n";
    for (const auto& [dimension, cells] : report.categories) {
        out << dimension << "\n";
        for (const auto& [value, cell] : cells) {
            out << "  " << std::left << std::setw(14) << value << std::right << " metric="
                << cell.first << "  tasks=" << cell.second << "\n";
        }
    }
    out << "steps";
    for (std::size_t i = 0; i < kStepBucketLabels.size(); ++i) {
        out << "  " << kStepBucketLabels[i] << ":" << report.step_histogram[i];
    }
    out << "\napi_usage  mean_global=" << report.mean_global_calls
        << "  mean_local=" << report.mean_local_calls << "\n";
    return out.str();
}

}  // namespace pathseeker

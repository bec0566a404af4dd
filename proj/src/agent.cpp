#include "pathseeker/agent.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <limits>

#include <json.hpp>

#include "pathseeker/prompts.hpp"
#include "pathseeker/subgraph.hpp"

namespace pathseeker {

namespace {

constexpr const char* kGlobalTool = "search_biopathway_subgraph_global";
constexpr const char* kLocalTool = "search_biopathway_triple_N_hop_subgraph";
constexpr const char* kFinishToken = "Finished.";

void skip_ws(const std::string& s, std::size_t& i) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
}

std::string trim(const std::string& s) {
    std::size_t begin = 0;
    std::size_t end = s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
    return s.substr(begin, end - begin);
}

/// Bracketed list of quoted strings: [ 'a', "b" ]. Commas inside quotes are
/// part of the element; elements are trimmed. Returns nullopt on any
/// structural mismatch, leaving the action scan free to try the next
/// candidate.
std::optional<std::vector<std::string>> parse_keyword_list(const std::string& s, std::size_t& i) {
    skip_ws(s, i);
    if (i >= s.size() || s[i] != '[') return std::nullopt;
    ++i;
    std::vector<std::string> items;
    skip_ws(s, i);
    if (i < s.size() && s[i] == ']') {
        ++i;
        return items;
    }
    while (true) {
        skip_ws(s, i);
        if (i >= s.size() || (s[i] != '\'' && s[i] != '"')) return std::nullopt;
        const char quote = s[i];
        ++i;
        const std::size_t end = s.find(quote, i);
        if (end == std::string::npos) return std::nullopt;
        items.push_back(trim(s.substr(i, end - i)));
        i = end + 1;
        skip_ws(s, i);
        if (i >= s.size()) return std::nullopt;
        if (s[i] == ',') {
            ++i;
            continue;
        }
        if (s[i] == ']') {
            ++i;
            return items;
        }
        return std::nullopt;
    }
}

std::optional<std::size_t> parse_line_id(const std::string& s, std::size_t& i) {
    skip_ws(s, i);
    std::size_t value = 0;
    std::size_t digits = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
        const std::size_t digit = static_cast<std::size_t>(s[i] - '0');
        if (value > (std::numeric_limits<std::size_t>::max() - digit) / 10) return std::nullopt;
        value = value * 10 + digit;
        ++i;
        ++digits;
    }
    if (digits == 0) return std::nullopt;
    return value;
}

/// First position in `region` where the named call parses completely, with
/// the parsed action (raw_text filled in by the caller).
std::optional<std::pair<std::size_t, Action>> first_call(const std::string& region,
                                                         ActionKind kind) {
    const char* name = kind == ActionKind::global_search ? kGlobalTool : kLocalTool;
    const std::size_t name_len = std::strlen(name);
    for (std::size_t pos = region.find(name); pos != std::string::npos;
         pos = region.find(name, pos + 1)) {
        std::size_t i = pos + name_len;
        skip_ws(region, i);
        if (i >= region.size() || region[i] != '(') continue;
        ++i;
        Action action;
        action.kind = kind;
        if (kind == ActionKind::local_search) {
            auto line_id = parse_line_id(region, i);
            if (!line_id) continue;
            action.line_id = *line_id;
            skip_ws(region, i);
            if (i >= region.size() || region[i] != ',') continue;
            ++i;
        }
        auto keywords = parse_keyword_list(region, i);
        if (!keywords) continue;
        skip_ws(region, i);
        if (i >= region.size() || region[i] != ')') continue;
        action.keywords = std::move(*keywords);
        return std::make_pair(pos, std::move(action));
    }
    return std::nullopt;
}

}  // namespace

TaskInstruction TaskInstruction::make(std::string question, AnswerMode mode) {
    TaskInstruction task;
    task.question = std::move(question);
    task.answer_mode = mode;
    task.preamble = prompts::agent_preamble();
    task.final_prompt = prompts::final_reasoner(mode == AnswerMode::true_false);
    return task;
}

std::optional<Action> try_parse_action(const std::string& model_text) {
    std::size_t region_begin = 0;
    const std::size_t marker = model_text.find("Action:");
    if (marker != std::string::npos) region_begin = marker + std::strlen("Action:");
    std::size_t region_end = model_text.size();
    const std::size_t end_marker = model_text.find("End Action", region_begin);
    if (end_marker != std::string::npos) region_end = end_marker;
    const std::string region = model_text.substr(region_begin, region_end - region_begin);

    std::optional<Action> best;
    std::size_t best_pos = std::string::npos;
    for (ActionKind kind : {ActionKind::global_search, ActionKind::local_search}) {
        if (auto found = first_call(region, kind)) {
            if (found->first < best_pos) {
                best_pos = found->first;
                best = std::move(found->second);
            }
        }
    }
    const std::size_t finish_pos = region.find(kFinishToken);
    if (finish_pos != std::string::npos && finish_pos < best_pos) {
        Action finish;
        finish.kind = ActionKind::finish;
        best = finish;
    }
    if (!best) return std::nullopt;
    best->raw_text = model_text;
    return best;
}

Action parse_action(const std::string& model_text) {
    auto action = try_parse_action(model_text);
    if (!action) throw ActionParseError("no recognizable action in model turn");
    return *action;
}

namespace {

Observation render_search(const SubgraphResult& result, const Query& query,
                          const PathwayGraph& graph, const RelevanceIndex& index,
                          Trajectory& trajectory, const AgentConfig& config) {
    if (result.no_relevant_content) return {kNoRelevantContentMessage, {}};

    std::vector<TripleId> triples = result.triples;
    if (config.toggles.remove_seen) triples = remove_seen(triples, trajectory.ledger);
    if (triples.empty()) return {kNoNewPathwaysMessage, {}};

    if (config.toggles.dfs_order) {
        const PrizeMap prizes = index.score_graph(query);
        triples = dfs_order(triples, graph, &prizes);
    }

    const std::size_t first_line = trajectory.ledger.total();
    const bool allow_seen = !config.toggles.remove_seen;
    Observation obs;
    obs.text = config.toggles.triple_to_text
                   ? triple_to_ordered_text(triples, graph, trajectory.ledger, allow_seen)
                   : ids_to_ordered_text(triples, trajectory.ledger, allow_seen);
    obs.new_triples.reserve(triples.size());
    for (std::size_t i = 0; i < triples.size(); ++i) {
        obs.new_triples.emplace_back(first_line + i, triples[i]);
    }
    return obs;
}

}  // namespace

Observation step(const PathwayGraph& graph, const RelevanceIndex& index, Trajectory& trajectory,
                 const Action& action, const AgentConfig& config) {
    switch (action.kind) {
        case ActionKind::finish:
            trajectory.finished = true;
            return {kFinishedMessage, {}};
        case ActionKind::global_search: {
            ++trajectory.global_calls;
            const Query query = Query::from_keywords(action.keywords);
            const SubgraphResult result =
                search_subgraph(graph, index, query, config.default_n);
            return render_search(result, query, graph, index, trajectory, config);
        }
        case ActionKind::local_search: {
            ++trajectory.local_calls;
            if (!config.toggles.local_search) return {kLocalSearchDisabledMessage, {}};
            const auto anchor = trajectory.ledger.triple_at(action.line_id);
            if (!anchor) return {kUnknownLineMessage, {}};
            const Query query = Query::from_keywords(action.keywords);
            const SubgraphResult result =
                neighbor_subgraph(graph, index, *anchor, query, config.default_n, config.hops);
            return render_search(result, query, graph, index, trajectory, config);
        }
    }
    return {kUnknownLineMessage, {}};  // unreachable
}

std::string answer_region(const std::string& model_text) {
    const std::size_t marker = model_text.rfind("Answer:");
    if (marker == std::string::npos) return trim(model_text);
    return trim(model_text.substr(marker + std::strlen("Answer:")));
}

std::string final_reason(const TaskInstruction& task, const Trajectory& trajectory,
                         const AgentConfig& config, ChatClient& client) {
    std::string user = "Question: " + task.question;
    if (!trajectory.steps.empty()) {
        user += "\n\nObservations:";
        for (const TrajectoryStep& s : trajectory.steps) {
            user += '\n';
            user += s.observation.text;
        }
    }
    const std::vector<ChatMessage> messages{{"system", task.final_prompt}, {"user", user}};
    return client.complete(messages, config.sampling);
}

Trajectory run_agent(const TaskInstruction& task, const PathwayGraph& graph,
                     const RelevanceIndex& index, const AgentConfig& config, ChatClient& client,
                     const StepObserver& observer) {
    Trajectory trajectory;
    std::vector<ChatMessage> messages{
        {"system", task.preamble},
        {"user", prompts::task_user_message(task.question)},
    };

    bool retried_this_turn = false;
    while (!trajectory.finished && trajectory.steps.size() < config.max_steps) {
        std::string text;
        try {
            text = client.complete(messages, config.sampling);
        } catch (const ChatError& e) {
            trajectory.errored = true;
            trajectory.error = e.what();
            return trajectory;
        }

        auto parsed = try_parse_action(text);
        if (!parsed) {
            if (!retried_this_turn) {
                retried_this_turn = true;
                trajectory.parse_degraded = true;
                ++trajectory.parse_retries;
                messages.push_back({"assistant", text});
                messages.push_back({"user", prompts::retry_instruction()});
                continue;  // the retry exchange is not a step
            }
            Action forced;
            forced.kind = ActionKind::finish;
            forced.raw_text = text;
            const Observation obs = step(graph, index, trajectory, forced, config);
            messages.push_back({"assistant", text});
            messages.push_back({"user", "State: " + obs.text});
            trajectory.steps.push_back({std::move(forced), obs});
            if (observer) observer(trajectory.steps.back(), trajectory.steps.size() - 1);
            break;
        }
        retried_this_turn = false;

        Action action = std::move(*parsed);
        const Observation obs = step(graph, index, trajectory, action, config);
        messages.push_back({"assistant", text});
        messages.push_back({"user", "State: " + obs.text});
        trajectory.steps.push_back({std::move(action), obs});
        if (observer) observer(trajectory.steps.back(), trajectory.steps.size() - 1);
    }

    if (config.toggles.final_reasoner) {
        try {
            trajectory.final_answer = final_reason(task, trajectory, config, client);
        } catch (const ChatError& e) {
            trajectory.errored = true;
            trajectory.error = e.what();
        }
    } else if (!trajectory.steps.empty()) {
        trajectory.final_answer = answer_region(trajectory.steps.back().action.raw_text);
    }
    return trajectory;
}

std::string trajectory_to_json(const Trajectory& trajectory, const AgentConfig& config) {
    using nlohmann::ordered_json;
    ordered_json out;
    out["task_id"] = trajectory.task_id;
    out["config"] = {
        {"max_steps", config.max_steps},
        {"default_n", config.default_n},
        {"hops", config.hops},
        {"toggles",
         {{"remove_seen", config.toggles.remove_seen},
          {"dfs_order", config.toggles.dfs_order},
          {"triple_to_text", config.toggles.triple_to_text},
          {"local_search", config.toggles.local_search},
          {"final_reasoner", config.toggles.final_reasoner}}},
        {"sampling",
         {{"temperature", config.sampling.temperature},
          {"seed", config.sampling.seed ? ordered_json(*config.sampling.seed) : ordered_json()}}},
    };
    out["steps"] = ordered_json::array();
    for (const TrajectoryStep& s : trajectory.steps) {
        ordered_json action;
        switch (s.action.kind) {
            case ActionKind::global_search: action["kind"] = "global_search"; break;
            case ActionKind::local_search: action["kind"] = "local_search"; break;
            case ActionKind::finish: action["kind"] = "finish"; break;
        }
        if (s.action.kind != ActionKind::finish) action["keywords"] = s.action.keywords;
        if (s.action.kind == ActionKind::local_search) action["line_id"] = s.action.line_id;
        action["raw_text"] = s.action.raw_text;

        ordered_json observation;
        observation["text"] = s.observation.text;
        observation["new_triples"] = ordered_json::array();
        for (const auto& [line, triple] : s.observation.new_triples) {
            observation["new_triples"].push_back({line, triple});
        }
        out["steps"].push_back({{"action", action}, {"observation", observation}});
    }
    out["api_counts"] = {{"global", trajectory.global_calls}, {"local", trajectory.local_calls}};
    out["finished"] = trajectory.finished;
    out["parse_degraded"] = trajectory.parse_degraded;
    out["parse_retries"] = trajectory.parse_retries;
    out["errored"] = trajectory.errored;
    out["error"] = trajectory.error;
    out["final_answer"] = trajectory.final_answer ? ordered_json(*trajectory.final_answer)
                                                  : ordered_json();
    return out.dump(2);
}

}  // namespace pathseeker

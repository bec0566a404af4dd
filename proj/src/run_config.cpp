#include "pathseeker/run_config.hpp"

#include <json.hpp>

namespace pathseeker {

std::string run_config_to_json(const RunConfig& config) {
    using nlohmann::ordered_json;
    ordered_json out;
    out["graph"] = {{"entries", config.entries_path}, {"triples", config.triples_path}};
    out["model"] = {{"base_url", config.base_url},
                    {"name", config.model},
                    {"api_key_env", config.api_key_env},
                    {"script", config.script_path},
                    {"cache_dir", config.cache_dir},
                    {"replay_only", config.replay_only}};
    out["agent"] = {
        {"max_steps", config.agent.max_steps},
        {"default_n", config.agent.default_n},
        {"hops", config.agent.hops},
        {"toggles",
         {{"remove_seen", config.agent.toggles.remove_seen},
          {"dfs_order", config.agent.toggles.dfs_order},
          {"triple_to_text", config.agent.toggles.triple_to_text},
          {"local_search", config.agent.toggles.local_search},
          {"final_reasoner", config.agent.toggles.final_reasoner}}},
        {"sampling",
         {{"temperature", config.agent.sampling.temperature},
          {"seed", config.agent.sampling.seed ? ordered_json(*config.agent.sampling.seed)
                                              : ordered_json()}}},
    };
    out["eval"] = {{"mode", config.mode},
                   {"shots", config.shots},
                   {"repeats", config.repeats},
                   {"workers", config.workers}};
    out["output"] = config.output_path;
    return out.dump(2);
}

}  // namespace pathseeker

#pragma once

#include <cstdint>
#include <string>

#include "pathseeker/agent.hpp"

namespace pathseeker {

/// Everything that shaped a run, embedded verbatim in every report so a
/// result file is reproducible on its own. The api_key_env field stores the
/// NAME of the environment variable holding the key, never the key itself.
struct RunConfig {
    std::string entries_path;
    std::string triples_path;

    std::string base_url;  // empty -> no live model configured
    std::string model;
    std::string api_key_env = "PATHSEEKER_API_KEY";
    std::string script_path;  // scripted responses instead of a live model
    std::string cache_dir;    // response cache location, empty -> off
    bool replay_only = false;

    AgentConfig agent;
    std::string mode = "agent";  // "agent" | "cot"
    int shots = 0;
    std::size_t repeats = 5;  // samples per task for answer-stability checks
    std::size_t workers = 4;

    std::string output_path;  // report or trajectory destination, empty -> stdout
};

/// Stable JSON rendering (fixed key order) for embedding in reports.
std::string run_config_to_json(const RunConfig& config);

}  // namespace pathseeker

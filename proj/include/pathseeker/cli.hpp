#pragma once

namespace pathseeker {

/// Parses argv and runs one subcommand: ingest, query, agent, eval, or
/// serve. Exit codes: 0 success, 1 usage problems, 2 data/file errors,
/// 3 upstream-model errors.
int cli_dispatch(int argc, const char* const* argv);

}  // namespace pathseeker

#pragma once

// Subcommands of the ntw tool. Each returns a process exit code.

#include "ntw/config.hpp"

#include <string>

namespace ntw::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitAllFailed = 3;

/// Window file(s) for the configured family, with optional tight and dual
/// variants on the configured lattice.
int cmd_generate(const RunConfig& cfg);

/// One report per beta plus design_summary.csv.
int cmd_design(const RunConfig& cfg);

/// Frame bounds, condition number and zero-padded response of a window file.
/// Lattice fields stored in the file win unless lattice_overridden is set.
int cmd_analyze(const RunConfig& cfg, const std::string& window_path, bool lattice_overridden);

/// Per-file denoising with the configured window and hop(s).
int cmd_denoise(const RunConfig& cfg);

/// Window x hop grid, averaged over the signals.
int cmd_sweep(const RunConfig& cfg);

/// Parses argv, applies flag overrides to the config and dispatches.
int run_cli(int argc, char** argv);

}  // namespace ntw::app

#pragma once

#include <functional>

#include "CLI11.hpp"

namespace symdyn::cli {

// Adds every subcommand to `app`. The returned action runs whichever
// subcommand was parsed and yields the process exit code.
std::function<int()> register_commands(CLI::App& app, const unsigned& threads);

}  // namespace symdyn::cli

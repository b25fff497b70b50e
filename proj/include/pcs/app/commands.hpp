#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "pcs/app/config.hpp"

namespace pcs::app {

/// Each command writes its files under config.out_dir and returns the JSON summary it also wrote.
nlohmann::json cmd_ideal_distributions(const RunConfig& config);
nlohmann::json cmd_evolve(const RunConfig& config);
nlohmann::json cmd_fidelity(const RunConfig& config);
/// Runs cmd_fidelity once per entry of g2_list, concurrently, each in its own subdirectory.
nlohmann::json cmd_sweep(const RunConfig& config);
nlohmann::json cmd_export_liouvillian(const RunConfig& config);

}  // namespace pcs::app

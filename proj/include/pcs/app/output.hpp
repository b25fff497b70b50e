#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace pcs::app {

using Metadata = std::vector<std::pair<std::string, std::string>>;

/// Opens `dir/name` for writing, creating `dir` if needed. Throws std::runtime_error on failure.
std::ofstream open_output(const std::filesystem::path& dir, const std::string& name);

/// "# key=value" lines.
void write_header(std::ostream& os, const Metadata& meta);

void write_json(const std::filesystem::path& dir, const std::string& name, const nlohmann::json& j);

}  // namespace pcs::app

#include "pcs/app/output.hpp"

#include <stdexcept>

namespace pcs::app {

std::ofstream open_output(const std::filesystem::path& dir, const std::string& name) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
  std::ofstream out(dir / name);
  if (!out) throw std::runtime_error("cannot open " + (dir / name).string() + " for writing");
  return out;
}

void write_header(std::ostream& os, const Metadata& meta) {
  for (const auto& [k, v] : meta) os << "# " << k << '=' << v << '\n';
}

void write_json(const std::filesystem::path& dir, const std::string& name, const nlohmann::json& j) {
  auto out = open_output(dir, name);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("failed writing " + (dir / name).string());
}

}  // namespace pcs::app

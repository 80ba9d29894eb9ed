#include "manifest.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>

#include "gad/error.hpp"

namespace gad::cli {

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return fnv1a_hex({std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()});
}

void write_manifest(const std::filesystem::path& path, const std::string& command,
                    const std::string& command_line, const std::string& config_text,
                    const nlohmann::json& extra) {
  nlohmann::json doc{{"tool", "gad"},
                     {"version", GAD_VERSION},
                     {"command", command},
                     {"command_line", command_line},
                     {"config", config_text}};
  for (const auto& [key, value] : extra.items()) doc[key] = value;
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << doc.dump(1) << '\n';
}

}  // namespace gad::cli

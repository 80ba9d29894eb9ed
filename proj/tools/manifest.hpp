#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

namespace gad::cli {

/// FNV-1a 64-bit digest as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);
std::string file_digest(const std::filesystem::path& path);

/// Writes {tool, version, command, command_line, config, seed, extra...} next
/// to a run's output.
void write_manifest(const std::filesystem::path& path, const std::string& command,
                    const std::string& command_line, const std::string& config_text,
                    const nlohmann::json& extra);

}  // namespace gad::cli

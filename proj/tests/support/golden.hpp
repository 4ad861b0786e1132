#pragma once

#include <filesystem>
#include <string>

namespace rpkt::testing {

std::filesystem::path source_dir();
std::filesystem::path golden_dir();
std::filesystem::path fixture_path(const std::string& name);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& content);

// Compares `actual` with the checked-in golden file. With RPKT_UPDATE_GOLDENS
// set in the environment the file is rewritten instead and the check passes.
// Returns an empty string on success, otherwise a short description.
std::string compare_golden(const std::string& relative, const std::string& actual);

}  // namespace rpkt::testing

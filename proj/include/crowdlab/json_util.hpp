#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

namespace crowdlab {

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

nlohmann::json parse_json_file(const std::string& path);

// Hex SHA-256 of a file's bytes, for provenance blocks.
std::string sha256_file(const std::string& path);
std::string sha256_bytes(const std::string& bytes);

// UTC timestamp "YYYY-MM-DDTHH:MM:SSZ".
std::string utc_now_iso8601();

}  // namespace crowdlab

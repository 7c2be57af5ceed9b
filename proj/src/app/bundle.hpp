#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace flevy::app {

// Lowercase hex SHA-256.
std::string sha256_hex(const std::string& bytes);

// Output directory whose files are listed, with hashes, in manifest.json.
class Bundle {
 public:
  Bundle(std::filesystem::path dir, std::string command, nlohmann::json config);

  // Unlisted files (timings) are written but kept out of the manifest.
  void write(const std::string& name, const std::string& contents, bool listed = true);
  void write_json(const std::string& name, const nlohmann::json& j, bool listed = true);
  // Writes manifest.json and returns its contents.
  std::string finish();

  const std::filesystem::path& dir() const noexcept { return dir_; }

 private:
  struct Entry {
    std::string name;
    std::size_t bytes;
    std::string sha256;
  };

  std::filesystem::path dir_;
  std::string command_;
  nlohmann::json config_;
  std::vector<Entry> entries_;
};

}  // namespace flevy::app

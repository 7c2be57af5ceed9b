#include "app/bundle.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include <openssl/evp.h>

#include "core/error.hpp"

namespace flevy::app {

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  require(EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) == 1,
          ErrorCode::Internal, "SHA-256 failed");
  std::string hex;
  char buf[3];
  for (unsigned i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

Bundle::Bundle(std::filesystem::path dir, std::string command, nlohmann::json config)
    : dir_(std::move(dir)), command_(std::move(command)), config_(std::move(config)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  require(!ec, ErrorCode::Io, "cannot create output directory " + dir_.string() + ": " + ec.message());
}

void Bundle::write(const std::string& name, const std::string& contents, bool listed) {
  const auto path = dir_ / name;
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  os << contents;
  os.close();
  require(static_cast<bool>(os), ErrorCode::Io, "cannot write " + path.string());
  if (!listed) return;
  std::erase_if(entries_, [&](const Entry& e) { return e.name == name; });
  entries_.push_back({name, contents.size(), sha256_hex(contents)});
}

void Bundle::write_json(const std::string& name, const nlohmann::json& j, bool listed) {
  write(name, j.dump(2) + "\n", listed);
}

std::string Bundle::finish() {
  std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) { return a.name < b.name; });
  nlohmann::json files = nlohmann::json::array();
  for (const auto& e : entries_) files.push_back({{"name", e.name}, {"bytes", e.bytes}, {"sha256", e.sha256}});
  const nlohmann::json m = {{"command", command_}, {"config", config_}, {"files", files}};
  const std::string text = m.dump(2) + "\n";
  write("manifest.json", text, false);
  return text;
}

}  // namespace flevy::app

#include "gkp/harness/manifest.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "gkp/error.hpp"
#include "json.hpp"

namespace gkp {

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string RunManifest::hash() const {
  const std::string id = command + '\n' + config + '\n' + std::to_string(master_seed) + '\n' + version;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(id)));
  return buf;
}

void write_manifest(const std::string& path, const RunManifest& m) {
  nlohmann::ordered_json j;
  j["command"] = m.command;
  j["config"] = m.config;
  j["master_seed"] = m.master_seed;
  j["version"] = m.version;
  j["hash"] = m.hash();
  j["outputs"] = m.outputs;
  j["flags"] = {{"truncation", m.flags.truncation},       {"saturation", m.flags.saturation},
                {"retries", m.flags.retries},             {"rejected_fits", m.flags.rejected_fits},
                {"flagged_trials", m.flags.flagged_trials}, {"trials", m.flags.trials}};
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::Io, "cannot write " + path);
  f << j.dump(2) << '\n';
}

RunManifest read_manifest(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::Io, "cannot read " + path);
  try {
    const auto j = nlohmann::json::parse(f);
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.config = j.at("config").get<std::string>();
    m.master_seed = j.at("master_seed").get<std::uint64_t>();
    m.version = j.at("version").get<std::string>();
    m.outputs = j.at("outputs").get<std::map<std::string, std::string>>();
    const auto& fl = j.at("flags");
    m.flags = {fl.at("truncation"), fl.at("saturation"), fl.at("retries"),
               fl.at("rejected_fits"), fl.at("flagged_trials"), fl.at("trials")};
    if (j.contains("hash") && j["hash"].get<std::string>() != m.hash())
      throw Error(ErrorKind::Io, path + ": manifest hash does not match its contents");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Io, path + ": " + e.what());
  }
}

}  // namespace gkp

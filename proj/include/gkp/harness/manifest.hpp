#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace gkp {

inline constexpr const char* kVersionTag = "gkpsim-1.0.0";

struct FlagCounters {
  std::int64_t truncation = 0;
  std::int64_t saturation = 0;
  std::int64_t retries = 0;
  std::int64_t rejected_fits = 0;
  std::int64_t flagged_trials = 0;
  std::int64_t trials = 0;
};

struct RunManifest {
  std::string command;     // e.g. "phantm" or "reproduce-figure 3b"
  std::string config;      // canonical key = value form
  std::uint64_t master_seed = 0;
  std::string version = kVersionTag;
  std::map<std::string, std::string> outputs;  // stage -> path
  FlagCounters flags;

  /// FNV-1a over command, config, seed and version; outputs and counters
  /// are results, not identity.
  std::string hash() const;
};

std::uint64_t fnv1a64(const std::string& data);

void write_manifest(const std::string& path, const RunManifest& m);
RunManifest read_manifest(const std::string& path);

}  // namespace gkp

#pragma once

// Flat key = value configuration with dotted section keys.
//
//   # comment
//   phantm.r_db = 12
//   [qec]          (optional section header: prefixes following keys)
//   trials = 1000
//
// Keys are case-insensitive and must be known; environment variables
// GKPSIM_<SECTION>__<KEY> override the file, command-line overrides win.

#include <map>
#include <string>
#include <vector>

namespace gkp {

class Config {
 public:
  Config();  // all defaults

  static Config from_text(const std::string& text);
  static Config from_file(const std::string& path);

  void set(const std::string& key, const std::string& value);
  void apply_env(char** envp);
  void apply_overrides(const std::vector<std::string>& assignments);

  bool has(const std::string& key) const;
  const std::string& str(const std::string& key) const;
  double num(const std::string& key) const;
  long long integer(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::vector<double> list(const std::string& key) const;

  /// Sorted "key = value" lines; the hashing and manifest form.  Thread
  /// count and output directory are left out since results ignore them.
  std::string canonical() const;

  static const std::map<std::string, std::string>& defaults();

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace gkp

#include "gkp/harness/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <sstream>

#include "gkp/error.hpp"

namespace gkp {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

const std::map<std::string, std::string>& Config::defaults() {
  static const std::map<std::string, std::string> d = {
      {"run.seed", "20250101"},
      {"run.threads", "1"},
      {"run.out_dir", "out"},
      {"run.flag_budget", "1.0"},

      {"phantm.r_db", "11.5"},
      {"phantm.noise_argument", "source"},
      {"phantm.n_steps", "10"},
      {"phantm.subtractors", "8"},
      {"phantm.theta0", "18"},
      {"phantm.grad_a", "0.75"},
      {"phantm.grad_b", "0.35"},
      {"phantm.ra1_db", "2.39"},
      {"phantm.ra2_db", "0.43"},
      {"phantm.t_ph", "55"},
      {"phantm.cutoff", "60"},
      {"phantm.antisqueeze", "true"},
      {"phantm.trials", "100"},

      {"breed.rounds", "3"},
      {"breed.cutoff", "65"},
      {"breed.trials", "200"},
      {"breed.lb_alpha_db", "table"},
      {"breed.lb_2alpha_db", "table"},

      {"qec.source", "empirical"},
      {"qec.samples", ""},
      {"qec.distances", "3,5"},
      {"qec.trials", "1000"},
      {"qec.mu_q_db", "10"},
      {"qec.mu_p_db", "10"},
      {"qec.sigma_db", "0"},
      {"qec.r_grid", "11,11.25,11.5,11.75,12"},
      {"qec.bootstrap", "200"},
      {"qec.gkp_trials", "40"},

      {"sweep.mu_q_db", "9,10,11,12,13,14"},
      {"sweep.mu_p_db", "9,10,11,12,13"},
      {"sweep.sigma_db", "0,1,2,3"},
      {"sweep.trials", "500"},

      {"fig2d.alpha", "3"},
      {"fig2d.r_prime", "0.5"},
      {"fig2d.r_db", "11.5"},
      {"fig2d.ra_max", "0.4"},
      {"fig2d.points", "21"},
      {"fig2d.cutoff", "50"},
      {"fig2d.theta", "18"},

      {"fig3b.r_grid", "11,11.5,12,12.5"},
      {"fig9.r_db", "12"},
      {"fig10.r_db", "11.5"},
  };
  return d;
}

Config::Config() : values_(defaults()) {}

void Config::set(const std::string& key, const std::string& value) {
  const std::string k = lower(trim(key));
  if (!defaults().count(k)) throw Error(ErrorKind::Config, "unknown config key '" + k + "'");
  values_[k] = trim(value);
}

Config Config::from_text(const std::string& text) {
  Config c;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = lower(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::Config, "line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    if (!section.empty() && key.find('.') == std::string::npos) key = section + "." + key;
    c.set(key, line.substr(eq + 1));
  }
  return c;
}

Config Config::from_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::Io, "cannot read config " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return from_text(ss.str());
}

void Config::apply_env(char** envp) {
  static constexpr const char* kPrefix = "GKPSIM_";
  if (!envp) return;
  for (char** e = envp; *e; ++e) {
    const std::string entry = *e;
    if (entry.rfind(kPrefix, 0) != 0) continue;
    const auto eq = entry.find('=');
    if (eq == std::string::npos) continue;
    std::string name = entry.substr(std::strlen(kPrefix), eq - std::strlen(kPrefix));
    const auto sep = name.find("__");
    if (sep == std::string::npos) continue;
    name = name.substr(0, sep) + "." + name.substr(sep + 2);
    set(name, entry.substr(eq + 1));
  }
}

void Config::apply_overrides(const std::vector<std::string>& assignments) {
  for (const auto& a : assignments) {
    const auto eq = a.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::Config, "override '" + a + "' is not key=value");
    set(a.substr(0, eq), a.substr(eq + 1));
  }
}

bool Config::has(const std::string& key) const { return values_.count(lower(key)) != 0; }

const std::string& Config::str(const std::string& key) const {
  const auto it = values_.find(lower(key));
  if (it == values_.end()) throw Error(ErrorKind::Config, "unknown config key '" + key + "'");
  return it->second;
}

double Config::num(const std::string& key) const {
  const std::string& v = str(key);
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw Error(ErrorKind::Config, "key '" + key + "' expects a number, got '" + v + "'");
  }
}

long long Config::integer(const std::string& key) const {
  const double x = num(key);
  if (x != static_cast<double>(static_cast<long long>(x)))
    throw Error(ErrorKind::Config, "key '" + key + "' expects an integer");
  return static_cast<long long>(x);
}

bool Config::flag(const std::string& key) const {
  const std::string v = lower(str(key));
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw Error(ErrorKind::Config, "key '" + key + "' expects a boolean, got '" + v + "'");
}

std::vector<double> Config::list(const std::string& key) const {
  std::vector<double> out;
  std::stringstream ss(str(key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw Error(ErrorKind::Config, "key '" + key + "' has a non-numeric entry '" + item + "'");
    }
  }
  return out;
}

std::string Config::canonical() const {
  std::string out;
  for (const auto& [k, v] : values_) {
    if (k == "run.threads" || k == "run.out_dir") continue;  // do not affect results
    out += k + " = " + v + "\n";
  }
  return out;
}

}  // namespace gkp

#include "gkp/harness/csv.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gkp/error.hpp"

namespace gkp {

const char* to_string(Schema s) {
  switch (s) {
    case Schema::CatRuns: return "cat_runs";
    case Schema::GkpSamples: return "gkp_samples";
    case Schema::QecRates: return "qec_rates";
    case Schema::PhotonHist: return "photon_hist";
  }
  return "?";
}

Schema schema_from_string(const std::string& name) {
  for (Schema s : {Schema::CatRuns, Schema::GkpSamples, Schema::QecRates, Schema::PhotonHist})
    if (name == to_string(s)) return s;
  throw Error(ErrorKind::InvalidParameter, "unknown schema " + name);
}

const std::vector<std::string>& schema_columns(Schema s) {
  static const std::vector<std::string> cat = {"trial", "seed", "r_db", "total_photons", "alpha", "r_prime",
                                               "parity", "fidelity", "alpha_c", "accepted", "flags"};
  static const std::vector<std::string> gkp = {"trial", "seed", "r_db", "dq_db", "dp_db", "substitutions", "flags"};
  static const std::vector<std::string> qec = {"source",   "r_db_or_mu", "sigma_db", "distance", "trials",
                                               "failures", "rate",       "ci_low",   "ci_high",  "master_seed"};
  static const std::vector<std::string> hist = {"detector_index", "n", "count"};
  switch (s) {
    case Schema::CatRuns: return cat;
    case Schema::GkpSamples: return gkp;
    case Schema::QecRates: return qec;
    case Schema::PhotonHist: return hist;
  }
  return hist;
}

int Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return static_cast<int>(i);
  return -1;
}

const std::string& Table::text(std::size_t row, const std::string& name) const {
  const int c = column(name);
  if (c < 0) throw Error(ErrorKind::Io, "missing column " + name);
  return rows.at(row).at(c);
}

double Table::num(std::size_t row, const std::string& name) const {
  const std::string& s = text(row, name);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw Error(ErrorKind::Io, "column " + name + " row " + std::to_string(row) + ": not a number '" + s + "'");
  return v;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

void ensure_parent(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
}

}  // namespace

void write_table(const std::string& path, const Table& t) {
  ensure_parent(path);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Io, "cannot write " + path);
  for (std::size_t i = 0; i < t.columns.size(); ++i) f << (i ? "," : "") << t.columns[i];
  f << '\n';
  for (const auto& row : t.rows) {
    if (row.size() != t.columns.size()) throw Error(ErrorKind::Io, "row width does not match header in " + path);
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i].find_first_of(",\n") != std::string::npos)
        throw Error(ErrorKind::Io, "cell contains a separator: " + row[i]);
      f << (i ? "," : "") << row[i];
    }
    f << '\n';
  }
  if (!f) throw Error(ErrorKind::Io, "write failed for " + path);
}

Table read_table(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Io, "cannot read " + path);
  Table t;
  std::string line;
  if (!std::getline(f, line)) throw Error(ErrorKind::Io, "empty file " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  t.columns = split_line(line);
  while (std::getline(f, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto row = split_line(line);
    if (row.size() != t.columns.size())
      throw Error(ErrorKind::Io, path + ": row " + std::to_string(t.rows.size() + 1) + " has wrong width");
    t.rows.push_back(std::move(row));
  }
  return t;
}

void persist_samples(const std::string& path, Schema schema, const std::vector<std::vector<std::string>>& rows) {
  write_table(path, Table{schema_columns(schema), rows});
}

Table load_samples(const std::string& path, Schema schema) {
  Table t = read_table(path);
  std::string missing;
  for (const auto& c : schema_columns(schema))
    if (t.column(c) < 0) missing += (missing.empty() ? "" : ", ") + c;
  if (!missing.empty())
    throw Error(ErrorKind::Io, path + " is not a " + std::string(to_string(schema)) + " file; missing: " + missing);
  return t;
}

void write_plot(const std::string& path, const std::vector<std::string>& header,
                const std::vector<std::vector<double>>& rows, const std::vector<std::string>& labels) {
  Table t;
  t.columns = header;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::vector<std::string> r;
    for (double v : rows[i]) r.push_back(format_double(v));
    if (!labels.empty()) r.push_back(labels.at(i));
    t.rows.push_back(std::move(r));
  }
  write_table(path, t);
}

}  // namespace gkp

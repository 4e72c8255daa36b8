#pragma once

// Fixed-schema CSV persistence.  Floats are written with 17 significant
// digits so a write/read round trip is bit-exact.

#include <string>
#include <vector>

namespace gkp {

enum class Schema { CatRuns, GkpSamples, QecRates, PhotonHist };

const char* to_string(Schema s);
Schema schema_from_string(const std::string& name);
const std::vector<std::string>& schema_columns(Schema s);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 when absent
  double num(std::size_t row, const std::string& name) const;
  const std::string& text(std::size_t row, const std::string& name) const;
};

std::string format_double(double v);

void write_table(const std::string& path, const Table& t);
Table read_table(const std::string& path);

/// Header must be exactly the schema's columns.
void persist_samples(const std::string& path, Schema schema, const std::vector<std::vector<std::string>>& rows);

/// Loads a table and checks it carries every schema column (extra columns
/// are kept).  Missing columns are listed in the error.
Table load_samples(const std::string& path, Schema schema);

/// Generic CSV for plot data (header chosen by the caller).
void write_plot(const std::string& path, const std::vector<std::string>& header,
                const std::vector<std::vector<double>>& rows, const std::vector<std::string>& labels = {});

}  // namespace gkp

#include "ridgeboost/csv.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ridgeboost/error.hpp"

namespace ridgeboost {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string where(std::string_view origin, int line) {
  return std::string(origin) + ": line " + std::to_string(line);
}

}  // namespace

std::optional<Eigen::Index> TabularFile::find(std::string_view name) const {
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j] == name) return static_cast<Eigen::Index>(j);
  }
  return std::nullopt;
}

TabularFile parse_csv(std::string_view text, std::string_view origin) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  TabularFile table;
  bool have_header = false;
  std::vector<std::vector<double>> rows;

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_fields(line);
    if (!have_header) {
      for (const auto& f : fields) {
        if (f.empty()) throw Error(ErrorKind::SchemaError, where(origin, line_no) + ": empty column name");
      }
      table.columns = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != table.columns.size()) {
      throw Error(ErrorKind::SchemaError, where(origin, line_no) + ": expected " +
                                              std::to_string(table.columns.size()) +
                                              " fields, found " + std::to_string(fields.size()));
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (std::size_t j = 0; j < fields.size(); ++j) {
      const auto& f = fields[j];
      if (f.empty()) {
        throw Error(ErrorKind::SchemaError,
                    where(origin, line_no) + ": missing value in column '" + table.columns[j] + "'");
      }
      char* end = nullptr;
      errno = 0;
      const double v = std::strtod(f.c_str(), &end);
      if (errno != 0 || end != f.c_str() + f.size() || !std::isfinite(v)) {
        throw Error(ErrorKind::SchemaError, where(origin, line_no) + ": column '" +
                                                table.columns[j] + "' value '" + f +
                                                "' is not a finite number");
      }
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  if (!have_header) throw Error(ErrorKind::EmptyData, std::string(origin) + ": no header row");
  if (rows.empty()) throw Error(ErrorKind::EmptyData, std::string(origin) + ": no data rows");

  table.data.resize(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(table.columns.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      table.data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return table;
}

TabularFile read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::FileError, "cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str(), path.string());
}

LabeledData split_outcome(const TabularFile& table, const std::string& outcome,
                          bool require_outcome) {
  const auto idx = table.find(outcome);
  if (require_outcome && !idx) {
    throw Error(ErrorKind::SchemaError, "outcome column '" + outcome + "' not found");
  }
  LabeledData out;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(table.columns.size()); ++j) {
    if (idx && j == *idx) continue;
    keep.push_back(j);
    out.covariate_names.push_back(table.columns[static_cast<std::size_t>(j)]);
  }
  if (keep.empty()) throw Error(ErrorKind::SchemaError, "no covariate columns");
  out.x.resize(table.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    out.x.col(static_cast<Eigen::Index>(k)) = table.data.col(keep[k]);
  }
  if (idx) out.y = table.data.col(*idx);
  return out;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::FileError, "cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error(ErrorKind::FileError, "write failed for '" + path.string() + "'");
}

}  // namespace ridgeboost

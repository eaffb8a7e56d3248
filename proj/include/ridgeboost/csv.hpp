#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ridgeboost/linalg.hpp"

namespace ridgeboost {

/// Rectangular numeric table with a header row.
struct TabularFile {
  std::vector<std::string> columns;
  Matrix data;  // rows x columns

  Eigen::Index rows() const { return data.rows(); }
  /// Index of a named column, if present.
  std::optional<Eigen::Index> find(std::string_view name) const;
};

TabularFile parse_csv(std::string_view text, std::string_view origin = "<csv>");
TabularFile read_csv(const std::filesystem::path& path);

/// Covariates and outcome split out of a table.
struct LabeledData {
  std::vector<std::string> covariate_names;
  Matrix x;
  std::optional<Vector> y;
};

/// The outcome column is required when `require_outcome`; otherwise it is
/// dropped if present. Every other column is a covariate.
LabeledData split_outcome(const TabularFile& table, const std::string& outcome,
                          bool require_outcome);

/// Round-trip representation with 17 significant digits.
std::string format_double(double v);

/// Writes text to a file, replacing it.
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace ridgeboost

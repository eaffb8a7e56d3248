#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace ridgeboost {

/// Flat key=value run configuration. One pair per line, `#` starts a comment.
/// Every key has a default; unknown keys are rejected.
class RunConfig {
 public:
  RunConfig();

  static RunConfig parse(std::string_view text, std::string_view origin = "<config>");
  static RunConfig load(const std::filesystem::path& path);

  /// Override a key, validating it like a parsed line.
  void set(const std::string& key, const std::string& value);
  bool is_default(const std::string& key) const;

  const std::string& get(const std::string& key) const;
  double get_double(const std::string& key) const;
  std::int64_t get_int(const std::string& key) const;
  std::uint64_t get_uint(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  /// Comma-separated list of doubles.
  std::vector<double> get_double_list(const std::string& key) const;
  bool is_auto(const std::string& key) const { return get(key) == "auto"; }

  /// Every key (including defaults) in sorted order plus optional comment lines.
  std::string resolved_text(const std::vector<std::string>& notes = {}) const;

  static const std::map<std::string, std::string>& defaults();

 private:
  std::map<std::string, std::string> values_;
  std::map<std::string, bool> explicit_;
};

}  // namespace ridgeboost

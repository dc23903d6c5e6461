#pragma once

#include <boost/property_tree/ptree.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ewr {

/// Flat "key = value" text with optional [section] headers. Keys inside a
/// section are addressed as "section.key". Comments start with '#' or ';'.
class KeyValueFile {
 public:
  KeyValueFile() = default;
  explicit KeyValueFile(boost::property_tree::ptree tree) : tree_(std::move(tree)) {}

  /// Throws IoError if the file cannot be read, ConfigError on syntax errors.
  static KeyValueFile load(const std::filesystem::path& path);
  /// Throws ConfigError on syntax errors.
  static KeyValueFile parse(const std::string& text);
  void save(const std::filesystem::path& path) const;
  std::string to_string() const;

  bool contains(const std::string& key) const;
  std::optional<std::string> find(const std::string& key) const;
  /// Throws ConfigError if absent.
  std::string get(const std::string& key) const;
  double get_double(const std::string& key) const;
  long long get_int(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  /// Whitespace- or comma-separated list of reals.
  std::vector<double> get_doubles(const std::string& key) const;

  void set(const std::string& key, const std::string& value);
  /// Stored in shortest round-trip form so values come back bit-exactly.
  void set(const std::string& key, double value);
  void set(const std::string& key, long long value);
  void set(const std::string& key, const std::vector<double>& values);

  const boost::property_tree::ptree& tree() const { return tree_; }

 private:
  boost::property_tree::ptree tree_;
};

std::string format_double(double v);
double parse_double(const std::string& text, const std::string& what);

}  // namespace ewr

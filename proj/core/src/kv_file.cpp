#include "ewr/kv_file.hpp"

#include "ewr/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ewr {

namespace pt = boost::property_tree;

std::string format_double(double v) {
  // Shortest text that parses back to the same double.
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text, const std::string& what) {
  std::size_t b = 0, e = text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data() + b, text.data() + e, v);
  if (ec != std::errc() || ptr != text.data() + e)
    throw ConfigError(what + ": expected a number, got '" + text + "'");
  return v;
}

namespace {

// ini_parser rejects '#' comments; translate them to ';' on the way in.
std::string normalize_comments(const std::string& text) {
  std::istringstream in(text);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t");
    if (first != std::string::npos && line[first] == '#') line[first] = ';';
    out << line << '\n';
  }
  return out.str();
}

}  // namespace

KeyValueFile KeyValueFile::parse(const std::string& text) {
  std::istringstream in(normalize_comments(text));
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("key/value syntax: ") + e.what());
  }
  return KeyValueFile(std::move(tree));
}

KeyValueFile KeyValueFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string KeyValueFile::to_string() const {
  std::ostringstream out;
  pt::write_ini(out, tree_);
  return out.str();
}

void KeyValueFile::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << to_string();
  if (!out) throw IoError("write failed for " + path.string());
}

bool KeyValueFile::contains(const std::string& key) const { return find(key).has_value(); }

std::optional<std::string> KeyValueFile::find(const std::string& key) const {
  auto v = tree_.get_optional<std::string>(key);
  if (!v) return std::nullopt;
  return *v;
}

std::string KeyValueFile::get(const std::string& key) const {
  auto v = find(key);
  if (!v) throw ConfigError("missing key '" + key + "'");
  return *v;
}

double KeyValueFile::get_double(const std::string& key) const { return parse_double(get(key), key); }

long long KeyValueFile::get_int(const std::string& key) const {
  const std::string s = get(key);
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError(key + ": expected an integer, got '" + s + "'");
  return v;
}

bool KeyValueFile::get_bool(const std::string& key) const {
  std::string s = get(key);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  throw ConfigError(key + ": expected a boolean, got '" + s + "'");
}

std::vector<double> KeyValueFile::get_doubles(const std::string& key) const {
  std::string s = get(key);
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream in(s);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(parse_double(tok, key));
  return out;
}

void KeyValueFile::set(const std::string& key, const std::string& value) { tree_.put(key, value); }
void KeyValueFile::set(const std::string& key, double value) { tree_.put(key, format_double(value)); }
void KeyValueFile::set(const std::string& key, long long value) { tree_.put(key, std::to_string(value)); }

void KeyValueFile::set(const std::string& key, const std::vector<double>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s += ' ';
    s += format_double(values[i]);
  }
  tree_.put(key, s);
}

}  // namespace ewr

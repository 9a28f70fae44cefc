#include "config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "corner/errors.hpp"

namespace corner::cli {

namespace {

std::string strip(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

// Strips a trailing comment that is not inside a string literal.
std::string strip_comment(const std::string& s) {
  bool in_string = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') in_string = !in_string;
    if (s[i] == '#' && !in_string) return s.substr(0, i);
  }
  return s;
}

nlohmann::json parse_scalar(const std::string& raw, int line_no) {
  const std::string v = strip(raw);
  if (v.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty value");
  if (v.front() == '"') {
    if (v.size() < 2 || v.back() != '"')
      throw ConfigError("config line " + std::to_string(line_no) + ": unterminated string");
    return v.substr(1, v.size() - 2);
  }
  if (v == "true") return true;
  if (v == "false") return false;
  try {
    std::size_t used = 0;
    if (v.find_first_of(".eE") == std::string::npos) {
      const long long i = std::stoll(v, &used);
      if (used == v.size()) return i;
    }
    const double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw ConfigError("config line " + std::to_string(line_no) + ": cannot parse value '" + v + "'");
}

nlohmann::json parse_value(const std::string& raw, int line_no) {
  const std::string v = strip(raw);
  if (!v.empty() && v.front() == '[') {
    if (v.back() != ']')
      throw ConfigError("config line " + std::to_string(line_no) + ": unterminated array");
    nlohmann::json arr = nlohmann::json::array();
    std::string inner = v.substr(1, v.size() - 2);
    std::string item;
    bool in_string = false;
    for (char c : inner) {
      if (c == '"') in_string = !in_string;
      if (c == ',' && !in_string) {
        if (!strip(item).empty()) arr.push_back(parse_scalar(item, line_no));
        item.clear();
      } else {
        item += c;
      }
    }
    if (!strip(item).empty()) arr.push_back(parse_scalar(item, line_no));
    return arr;
  }
  return parse_scalar(v, line_no);
}

}  // namespace

nlohmann::json parse_toml_subset(const std::string& text) {
  nlohmann::json root = nlohmann::json::object();
  nlohmann::json* table = &root;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(line_no) + ": malformed table header");
      const std::string name = strip(line.substr(1, line.size() - 2));
      if (name.empty())
        throw ConfigError("config line " + std::to_string(line_no) + ": empty table name");
      root[name] = nlohmann::json::object();
      table = &root[name];
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = strip(line.substr(0, eq));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    (*table)[key] = parse_value(line.substr(eq + 1), line_no);
  }
  return root;
}

nlohmann::json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  const bool looks_json = path.size() >= 5 && path.substr(path.size() - 5) == ".json";
  if (looks_json) {
    try {
      return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(std::string("JSON config error: ") + e.what());
    }
  }
  return parse_toml_subset(text);
}

}  // namespace corner::cli

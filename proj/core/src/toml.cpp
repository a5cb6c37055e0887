#include "locrank/toml.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace locrank::toml {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

/// Strips a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

bool parse_number(const std::string& text, double& out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  // from_chars rejects leading '+', TOML allows it
  std::size_t start = (t[0] == '+') ? 1 : 0;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(t.data() + start, t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size()) return false;
  out = value;
  return true;
}

}  // namespace

Table Table::parse(const std::string& text) {
  Table table;
  std::istringstream in(text);
  std::string line;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw parse_error("toml: unterminated section header on line " +
                          std::to_string(line_no));
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw parse_error("toml: empty section name on line " + std::to_string(line_no));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw parse_error("toml: expected key = value on line " + std::to_string(line_no));
    const std::string key = trim(line.substr(0, eq));
    const std::string raw = trim(line.substr(eq + 1));
    if (key.empty() || raw.empty())
      throw parse_error("toml: empty key or value on line " + std::to_string(line_no));

    Value value;
    if (raw.front() == '"') {
      if (raw.size() < 2 || raw.back() != '"')
        throw parse_error("toml: unterminated string on line " + std::to_string(line_no));
      value.kind = Value::Kind::String;
      value.str = raw.substr(1, raw.size() - 2);
    } else if (raw == "true" || raw == "false") {
      value.kind = Value::Kind::Bool;
      value.flag = (raw == "true");
    } else if (raw.front() == '[') {
      if (raw.back() != ']')
        throw parse_error("toml: unterminated array on line " + std::to_string(line_no));
      const std::string body = raw.substr(1, raw.size() - 2);
      std::vector<std::string> items;
      std::string item;
      bool in_string = false;
      for (char ch : body) {
        if (ch == '"') in_string = !in_string;
        if (ch == ',' && !in_string) {
          items.push_back(item);
          item.clear();
        } else {
          item += ch;
        }
      }
      if (!trim(item).empty()) items.push_back(item);
      bool strings = false;
      for (auto& it : items)
        if (!trim(it).empty() && trim(it).front() == '"') strings = true;
      if (strings) {
        value.kind = Value::Kind::StringArray;
        for (auto& it : items) {
          const std::string t = trim(it);
          if (t.size() < 2 || t.front() != '"' || t.back() != '"')
            throw parse_error("toml: bad string array element on line " +
                              std::to_string(line_no));
          value.strs.push_back(t.substr(1, t.size() - 2));
        }
      } else {
        value.kind = Value::Kind::NumberArray;
        for (auto& it : items) {
          double num = 0.0;
          if (!parse_number(it, num))
            throw parse_error("toml: bad number array element on line " +
                              std::to_string(line_no));
          value.nums.push_back(num);
        }
      }
    } else {
      double num = 0.0;
      if (!parse_number(raw, num))
        throw parse_error("toml: cannot parse value '" + raw + "' on line " +
                          std::to_string(line_no));
      value.kind = Value::Kind::Number;
      value.num = num;
    }

    const std::string full_key = section.empty() ? key : section + "." + key;
    if (table.values_.count(full_key))
      throw parse_error("toml: duplicate key '" + full_key + "'");
    table.values_.emplace(full_key, std::move(value));
    table.order_.push_back(full_key);
  }
  return table;
}

Table Table::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("toml: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

const Table::Value& Table::at(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw parse_error("toml: missing key '" + key + "'");
  return it->second;
}

bool Table::has(const std::string& key) const { return values_.count(key) > 0; }

double Table::number(const std::string& key) const {
  const auto& v = at(key);
  if (v.kind != Value::Kind::Number)
    throw parse_error("toml: key '" + key + "' is not a number");
  return v.num;
}

double Table::number_or(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

long long Table::integer(const std::string& key) const {
  const double v = number(key);
  const long long n = static_cast<long long>(v);
  if (static_cast<double>(n) != v)
    throw parse_error("toml: key '" + key + "' is not an integer");
  return n;
}

long long Table::integer_or(const std::string& key, long long fallback) const {
  return has(key) ? integer(key) : fallback;
}

std::string Table::string(const std::string& key) const {
  const auto& v = at(key);
  if (v.kind != Value::Kind::String)
    throw parse_error("toml: key '" + key + "' is not a string");
  return v.str;
}

std::string Table::string_or(const std::string& key, const std::string& fallback) const {
  return has(key) ? string(key) : fallback;
}

bool Table::boolean_or(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const auto& v = at(key);
  if (v.kind != Value::Kind::Bool)
    throw parse_error("toml: key '" + key + "' is not a boolean");
  return v.flag;
}

std::vector<double> Table::number_array(const std::string& key) const {
  const auto& v = at(key);
  if (v.kind != Value::Kind::NumberArray)
    throw parse_error("toml: key '" + key + "' is not a number array");
  return v.nums;
}

std::vector<std::string> Table::string_array(const std::string& key) const {
  const auto& v = at(key);
  if (v.kind != Value::Kind::StringArray)
    throw parse_error("toml: key '" + key + "' is not a string array");
  return v.strs;
}

}  // namespace locrank::toml

#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace locrank::toml {

struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Minimal TOML reader covering what the study configs use: [a.b] section
/// headers, key = value lines, strings, numbers, booleans, flat arrays and
/// '#' comments. Keys flatten to dotted paths ("model.eta.kind").
class Table {
 public:
  static Table parse(const std::string& text);
  static Table parse_file(const std::string& path);

  bool has(const std::string& key) const;
  double number(const std::string& key) const;
  double number_or(const std::string& key, double fallback) const;
  long long integer(const std::string& key) const;
  long long integer_or(const std::string& key, long long fallback) const;
  std::string string(const std::string& key) const;
  std::string string_or(const std::string& key, const std::string& fallback) const;
  bool boolean_or(const std::string& key, bool fallback) const;
  std::vector<double> number_array(const std::string& key) const;
  std::vector<std::string> string_array(const std::string& key) const;

  /// All keys, dotted form, in file order.
  const std::vector<std::string>& keys() const { return order_; }

 private:
  struct Value {
    enum class Kind { String, Number, Bool, NumberArray, StringArray } kind;
    std::string str;
    double num = 0.0;
    bool flag = false;
    std::vector<double> nums;
    std::vector<std::string> strs;
  };
  const Value& at(const std::string& key) const;
  std::map<std::string, Value> values_;
  std::vector<std::string> order_;
};

}  // namespace locrank::toml

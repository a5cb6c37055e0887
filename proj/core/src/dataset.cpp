#include "locrank/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace locrank {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, std::size_t line_no) {
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(*begin))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(end[-1]))) --end;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    throw std::invalid_argument("dataset csv: bad number '" + s + "' on line " +
                                std::to_string(line_no));
  return value;
}

}  // namespace

Dataset::Dataset(std::size_t rows, std::size_t cols, std::vector<double> features,
                 std::vector<int> labels)
    : rows_(rows), cols_(cols), features_(std::move(features)), labels_(std::move(labels)) {
  if (features_.size() != rows_ * cols_)
    throw std::invalid_argument("Dataset: feature buffer size mismatch");
  if (labels_.size() != rows_)
    throw std::invalid_argument("Dataset: label count mismatch");
  for (int y : labels_)
    if (y != -1 && y != 1)
      throw std::invalid_argument("Dataset: labels must be -1 or +1");
}

std::size_t Dataset::positives() const {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), 1));
}

std::size_t Dataset::negatives() const { return rows_ - positives(); }

Dataset Dataset::read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("dataset csv: cannot open " + path);

  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument("dataset csv: empty file " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const auto header = split_csv_line(line);
  if (header.size() < 2 || header.back() != "y")
    throw std::invalid_argument("dataset csv: header must be x1,...,xd,y");
  const std::size_t cols = header.size() - 1;
  for (std::size_t j = 0; j < cols; ++j) {
    if (header[j] != "x" + std::to_string(j + 1))
      throw std::invalid_argument("dataset csv: unexpected header column '" +
                                  header[j] + "'");
  }

  std::vector<double> features;
  std::vector<int> labels;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != cols + 1)
      throw std::invalid_argument("dataset csv: wrong field count on line " +
                                  std::to_string(line_no));
    for (std::size_t j = 0; j < cols; ++j)
      features.push_back(parse_double(fields[j], line_no));
    const double y = parse_double(fields.back(), line_no);
    if (y != -1.0 && y != 1.0)
      throw std::invalid_argument("dataset csv: label must be -1 or 1 on line " +
                                  std::to_string(line_no));
    labels.push_back(static_cast<int>(y));
  }
  const std::size_t rows = labels.size();
  return Dataset(rows, cols, std::move(features), std::move(labels));
}

void Dataset::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("dataset csv: cannot write " + path);
  for (std::size_t j = 0; j < cols_; ++j) out << 'x' << (j + 1) << ',';
  out << "y\n";
  char buf[64];
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", feature(i, j));
      out << buf << ',';
    }
    out << labels_[i] << '\n';
  }
}

}  // namespace locrank

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace locrank {

/// Feature matrix plus labels in {-1,+1}. Immutable by convention after
/// construction; all downstream statistics treat it as read-only.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::size_t rows, std::size_t cols, std::vector<double> features,
          std::vector<int> labels);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double feature(std::size_t i, std::size_t j) const {
    return features_[i * cols_ + j];
  }
  std::span<const double> row(std::size_t i) const {
    return {features_.data() + i * cols_, cols_};
  }
  const std::vector<int>& labels() const { return labels_; }
  int label(std::size_t i) const { return labels_[i]; }

  std::size_t positives() const;
  std::size_t negatives() const;

  /// CSV with header x1,...,xd,y and y in {-1,1}.
  static Dataset read_csv(const std::string& path);
  void write_csv(const std::string& path) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> features_;
  std::vector<int> labels_;
};

}  // namespace locrank

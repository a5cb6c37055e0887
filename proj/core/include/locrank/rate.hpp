#pragma once

#include <stdexcept>

namespace locrank {

/// Rate of best instances. Strictly inside (0,1); the global-AUC endpoint is
/// a distinct flag rather than u0 = 1, because the quantile level v0 = 1 - u0
/// would degenerate to 0 there.
class Rate {
 public:
  explicit Rate(double u0) : u0_(u0), global_(false) {
    if (!(u0 > 0.0 && u0 < 1.0))
      throw std::invalid_argument("Rate: u0 must lie strictly in (0,1)");
  }

  static Rate global() { return Rate(GlobalTag{}); }

  bool is_global() const { return global_; }

  double u0() const {
    require_local();
    return u0_;
  }

  /// Quantile level v0 = 1 - u0.
  double v0() const {
    require_local();
    return 1.0 - u0_;
  }

 private:
  struct GlobalTag {};
  explicit Rate(GlobalTag) : u0_(1.0), global_(true) {}
  void require_local() const {
    if (global_)
      throw std::logic_error("Rate: u0/v0 undefined for the global flag");
  }
  double u0_;
  bool global_;
};

}  // namespace locrank

#include "locrank/rng.hpp"

#include <boost/math/distributions/normal.hpp>

namespace locrank {

double RandomStream::normal() {
  static const boost::math::normal_distribution<double> std_normal(0.0, 1.0);
  // uniform01 can return 0; nudge into the open interval for the quantile.
  double u = uniform01();
  if (u <= 0.0) u = 0x1.0p-54;
  return boost::math::quantile(std_normal, u);
}

}  // namespace locrank

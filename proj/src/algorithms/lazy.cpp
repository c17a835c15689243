#include "su/algorithms/lazy.hpp"

#include <cmath>

namespace su {

double lazy_catchup(double x, double mu, double nu, std::int64_t tau) {
  if (tau <= 0) return x;
  const double t = static_cast<double>(tau);
  if (mu == 0.0) return x - nu * t;
  const double keep = 1.0 - mu;
  const double decay = std::pow(keep, t);
  return decay * x - (nu / mu) * keep * (1.0 - decay);
}

}  // namespace su

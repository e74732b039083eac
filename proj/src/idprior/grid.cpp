#include "idprior/grid.hpp"

#include <cmath>

namespace idprior {

double GridField::l2_norm() const {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace idprior

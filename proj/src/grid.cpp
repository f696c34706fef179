#include "oneleg/grid.hpp"

namespace oneleg {

TorusGrid make_grid(int n, double length) {
  if (n < 4 || n % 2 != 0)
    throw std::invalid_argument("grid resolution must be even and >= 4");
  if (!(length > 0.0))
    throw std::invalid_argument("domain length must be positive");
  return TorusGrid{n, length};
}

} // namespace oneleg

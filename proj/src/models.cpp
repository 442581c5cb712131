#include "fgsi/models.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fgsi {

void SpringPendulum::check_domain(const Vec& q) const {
  if (!(q[0] > kMinRadius)) {
    std::ostringstream os;
    os << "spring pendulum requires r > " << kMinRadius << ", got r = " << q[0];
    throw Error(ErrorKind::Domain, os.str());
  }
}

void SpringPendulum::check_flight(double x, double y, double vx, double vy, double r1,
                                  double h) {
  // Closest approach to the origin along the straight segment.
  const double vv = vx * vx + vy * vy;
  double dmin = std::min(std::hypot(x, y), r1);
  if (vv > 0.0) {
    const double tc = -(x * vx + y * vy) / vv;
    if ((h > 0.0 && tc > 0.0 && tc < h) || (h < 0.0 && tc < 0.0 && tc > h)) {
      dmin = std::min(dmin, std::hypot(x + vx * tc, y + vy * tc));
    }
  }
  if (!(dmin > kMinRadius)) {
    std::ostringstream os;
    os << "free flight of length " << h << " passes within " << dmin << " of r = 0";
    throw Error(ErrorKind::Singularity, os.str());
  }
}

}  // namespace fgsi

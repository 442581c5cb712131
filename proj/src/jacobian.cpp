#include <cmath>
#include <sstream>

#include <Eigen/LU>

#include "fgsi/diagnostics.hpp"

namespace fgsi {

std::vector<JacobianSample> jacobian_determinant(const Method& method, const SystemModel& system,
                                                 const State& s0, double tau, long n_steps,
                                                 long sample_every) {
  validate_state(system, s0);
  if (n_steps < 0) throw Error(ErrorKind::Parameter, "n_steps must be >= 0");
  if (sample_every < 1) throw Error(ErrorKind::Parameter, "sample_every must be >= 1");
  if (!(std::isfinite(tau) && tau != 0.0))
    throw Error(ErrorKind::Parameter, "time step must be finite and nonzero");

  const int dim = 2 * s0.dim();
  std::vector<JacobianSample> out;
  out.reserve(static_cast<std::size_t>(n_steps / sample_every + 2));
  out.push_back(JacobianSample{s0.t, PhaseMat::Identity(dim, dim), 1.0});

  State cur = s0;
  PhaseMat total = PhaseMat::Identity(dim, dim);
  double det = 1.0;
  for (long k = 1; k <= n_steps; ++k) {
    StepTangent st;
    try {
      st = method.step_tangent(system, cur, tau);
    } catch (const Error& e) {
      std::ostringstream os;
      os << "step " << k << ": " << e.what();
      throw Error(e.kind(), os.str());
    }
    // det of a product is the product of dets; the running matrix itself
    // can be badly conditioned on chaotic orbits.
    det *= st.jacobian.partialPivLu().determinant();
    total = st.jacobian * total;
    cur = st.next;
    cur.t = s0.t + static_cast<double>(k) * tau;
    if (k % sample_every == 0 || k == n_steps) out.push_back(JacobianSample{cur.t, total, det});
  }
  return out;
}

double symplectic_defect(const PhaseMat& s) {
  const int dim = static_cast<int>(s.rows());
  const int n = dim / 2;
  PhaseMat j = PhaseMat::Zero(dim, dim);
  j.topRightCorner(n, n).setIdentity();
  j.bottomLeftCorner(n, n) = -Mat::Identity(n, n);
  return (s.transpose() * j * s - j).cwiseAbs().maxCoeff();
}

}  // namespace fgsi

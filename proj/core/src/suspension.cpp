#include "iet/suspension.hpp"

namespace iet {

SuspensionDatum sample_tau(const Permutation& p, std::mt19937_64& rng, long cap) {
  p.require_irreducible("sample_tau");
  std::uniform_real_distribution<double> box(-1.0, 1.0);
  const int d = p.size();
  SuspensionDatum sd;
  std::vector<double> tau(d);
  for (long n = 1; n <= cap; ++n) {
    for (auto& t : tau) t = box(rng);
    if (!in_tau_cone(p, tau)) continue;
    auto h = heights_from_tau(p, tau);
    bool positive = true;
    for (double x : h) positive = positive && x > 0;
    if (!positive) throw InternalError("tau in the cone produced a non-positive height");
    Eigen::VectorXd hv = Eigen::Map<Eigen::VectorXd>(h.data(), d);
    if (h_membership_residual(p, hv) > 1e-12) throw InternalError("heights are not in H(pi)");
    sd.tau = tau;
    sd.heights = std::move(h);
    sd.attempts = n;
    return sd;
  }
  throw CapExceeded("tau rejection sampling exceeded " + std::to_string(cap) + " attempts");
}

}  // namespace iet

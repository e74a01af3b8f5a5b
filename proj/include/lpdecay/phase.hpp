#pragma once

#include <cmath>

namespace lpdecay {

/// Dispersion relation Phi_alpha(xi) = |xi|^alpha and its derivatives.
inline double dispersion(double alpha, double xi) {
  return alpha == 0.5 ? std::sqrt(std::abs(xi)) : std::pow(std::abs(xi), alpha);
}

inline double dispersion_d1(double alpha, double xi) {
  const double v = alpha * std::pow(std::abs(xi), alpha - 1.0);
  return xi < 0.0 ? -v : v;
}

inline double dispersion_d2(double alpha, double xi) { return alpha * (alpha - 1.0) * std::pow(std::abs(xi), alpha - 2.0); }

/// Phase Q_{t,x}(xi) = x xi + t Phi_alpha(xi).
struct PhaseSpec {
  double alpha = 0.5;
  double t = 0.0;
  double x = 0.0;

  double phi(double xi) const { return dispersion(alpha, xi); }
  double dphi(double xi) const { return dispersion_d1(alpha, xi); }
  double ddphi(double xi) const { return dispersion_d2(alpha, xi); }

  double q(double xi) const { return x * xi + t * phi(xi); }
  double dq(double xi) const { return x + t * dphi(xi); }
  double ddq(double xi) const { return t * ddphi(xi); }
};

/// Throws InvalidParameter unless 0 < alpha < 1.
void require_alpha(double alpha);

}  // namespace lpdecay

#pragma once

// Rank-two normalization anchor. U(2)/T is a two-sphere; these routines
// integrate the KKS form over the coadjoint orbit of X0 and dtheta_i over
// U(2)/T with plain quadrature, so that C1 can be checked against geometry.

#include <cmath>
#include <numbers>

#include "parabolic/flag_forms.hpp"
#include "parabolic/lie_core.hpp"

namespace parabolic {

/// Symplectic volume int omega_KKS of the orbit of X0 = (a_1, a_2), computed
/// on the sphere chart theta in [0, pi], phi in [0, 2 pi) of the traceless part.
inline double kks_sphere_volume(const TorusWeight& x0, int theta_panels = 200, int phi_points = 16) {
  if (x0.size() != 2) throw InvalidArgument("kks_sphere_volume: rank-two weight required");
  const LieBasis basis = build_basis(2);
  const AntiHermitian centre = 0.5 * (x0.a[0] + x0.a[1]) * (basis.e(0) + basis.e(1));
  const AntiHermitian h = (1.0 / std::sqrt(2.0)) * (basis.e(0) - basis.e(1));
  const double radius = (x0.a[0] - x0.a[1]) / std::sqrt(2.0);
  const AntiHermitian& u = basis.u(1, 0);
  const AntiHermitian& v = basis.v(1, 0);

  auto point = [&](double th, double ph) {
    return centre + radius * (std::cos(th) * h + std::sin(th) * std::cos(ph) * u +
                              std::sin(th) * std::sin(ph) * v);
  };
  auto density = [&](double th, double ph) {
    const OrbitPoint p{point(th, ph)};
    const AntiHermitian d_th =
        radius * (-std::sin(th) * h + std::cos(th) * std::cos(ph) * u + std::cos(th) * std::sin(ph) * v);
    const AntiHermitian d_ph = radius * (-std::sin(th) * std::sin(ph) * u + std::sin(th) * std::cos(ph) * v);
    const AntiHermitian y1 = fundamental_preimage(p, d_th.matrix(), basis);
    const AntiHermitian y2 = fundamental_preimage(p, d_ph.matrix(), basis);
    return std::abs(kks_eval(p, y1, y2));
  };

  const double dth = std::numbers::pi / theta_panels;
  const double dph = 2.0 * std::numbers::pi / phi_points;
  double total = 0.0;
  for (int a = 0; a < theta_panels; ++a) {
    const double th = (a + 0.5) * dth;  // midpoint rule avoids the poles
    for (int b = 0; b < phi_points; ++b) total += density(th, b * dph);
  }
  return total * dth * dph;
}

/// int_{U(2)/T} dtheta_i in the orientation where (d<X0, theta>) is positive.
/// Chart: (s, t) -> exp(s (cos t u + sin t v)) T, s in [0, pi/sqrt2], which
/// covers the sphere once.
inline double integrate_dtheta_u2(Index i, const TorusWeight& x0, int s_panels = 400, int t_points = 16) {
  const LieBasis basis = build_basis(2);
  if (i < 0 || i > 1) throw IndexOutOfRange("integrate_dtheta_u2: index");
  const AntiHermitian& u = basis.u(1, 0);
  const AntiHermitian& v = basis.v(1, 0);
  const double s_max = std::numbers::pi / std::sqrt(2.0);
  auto chart = [&](double s, double t) {
    return matrix_exp(s * (std::cos(t) * u + std::sin(t) * v));
  };
  const double d = 1e-4;
  // pulled-back 2-form coefficient of `form_index` (-1 = d<X0, theta>)
  auto density = [&](double s, double t, Index form_index) {
    const UnitaryMatrix g = chart(s, t);
    const ComplexMatrix ds = (-chart(s + 2 * d, t).matrix() + 8.0 * chart(s + d, t).matrix() -
                              8.0 * chart(s - d, t).matrix() + chart(s - 2 * d, t).matrix()) /
                             (12.0 * d);
    const ComplexMatrix dt = (-chart(s, t + 2 * d).matrix() + 8.0 * chart(s, t + d).matrix() -
                              8.0 * chart(s, t - d).matrix() + chart(s, t - 2 * d).matrix()) /
                             (12.0 * d);
    const AntiHermitian xi = maurer_cartan({g, ds});
    const AntiHermitian eta = maurer_cartan({g, dt});
    const CosetPoint p{g};
    return form_index < 0 ? dtheta_weight_eval(x0, p, xi, eta, basis)
                          : dtheta_eval(form_index, p, xi, eta, basis);
  };
  const double orientation = density(0.5 * s_max, 0.3, -1) > 0.0 ? 1.0 : -1.0;

  const double hs = s_max / s_panels;
  const double dt = 2.0 * std::numbers::pi / t_points;
  double total = 0.0;
  for (int b = 0; b < t_points; ++b) {
    const double t = b * dt;
    double line = 0.0;
    for (int a = 0; a < s_panels; ++a) line += density((a + 0.5) * hs, t, i);
    total += line * hs;
  }
  return orientation * total * dt;
}

}  // namespace parabolic

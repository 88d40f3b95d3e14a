// observables.hpp: photon numbers, quadrature variances, squeezing and correlator entries

#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "sshq/states.hpp"

namespace sshq {

/// Variance of the vacuum (and any coherent state) for X = (a e^{i phi} + a^dag e^{-i phi}) / 2.
inline constexpr double kVacuumVariance = 0.25;

template <typename Real>
Complex<Real> photon_number(const GaussianMoments<Real>& m, Index i, Index j) {
  require(i >= 0 && j >= 0 && i < m.size() && j < m.size(), "site index out of range");
  return m.N(i, j);
}

template <typename Real>
Complex<Real> g2_entry(const CorrelationTensor<Real>& t, Index i, Index j, Index k, Index l) {
  const Index n = t.size();
  for (Index s : {i, j, k, l}) require(s >= 0 && s < n, "g2 index out of range");
  return t(i, j, k, l);
}

/// Quadrature of a real-weighted mode combination sum_i w_i X_i(phi); weights are normalized.
/// Var = (1/4) [ |w|^2 + 2 w.Re(Nc).w + 2 Re(e^{2 i phi} w.Mc.w) ] with alpha-centered moments.
struct QuadratureMode {
  std::vector<Index> sites;
  std::vector<double> weights;

  static QuadratureMode single(Index i) { return {{i}, {1.0}}; }
  static QuadratureMode pair(Index i, Index j) {
    require(i != j, "two-mode quadrature needs distinct sites");
    return {{i, j}, {std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2}};
  }
};

/// Phase-independent part and the complex amplitude of the e^{2 i phi} term:
/// Var(phi) = base + 0.5 Re(amplitude e^{2 i phi}).
template <typename Real>
std::pair<Real, Complex<Real>> quadrature_coefficients(const GaussianMoments<Real>& m, const QuadratureMode& q) {
  require(q.sites.size() == q.weights.size() && !q.sites.empty(), "malformed quadrature mode");
  const CMatrix<Real> nc = m.centered_N();
  const CMatrix<Real> mc = m.centered_M();
  Real norm = 0;
  for (double w : q.weights) norm += w * w;
  Real base = 0;
  Complex<Real> amp = 0;
  for (std::size_t a = 0; a < q.sites.size(); ++a) {
    require(q.sites[a] >= 0 && q.sites[a] < m.size(), "quadrature site out of range");
    for (std::size_t b = 0; b < q.sites.size(); ++b) {
      const Real w = static_cast<Real>(q.weights[a] * q.weights[b]) / norm;
      base += w * nc(q.sites[a], q.sites[b]).real();
      amp += w * mc(q.sites[a], q.sites[b]);
    }
  }
  return {Real(0.25) * (1 + 2 * base), amp};
}

template <typename Real>
Real quadrature_variance(const GaussianMoments<Real>& m, const QuadratureMode& q, Real phi) {
  const auto [base, amp] = quadrature_coefficients(m, q);
  return base + Real(0.5) * std::real(amp * std::polar(Real(1), 2 * phi));
}

template <typename Real>
Real quadrature_variance(const GaussianMoments<Real>& m, Index i, Real phi) {
  return quadrature_variance(m, QuadratureMode::single(i), phi);
}

template <typename Real>
Real two_mode_quadrature_variance(const GaussianMoments<Real>& m, Index i, Index j, Real phi) {
  return quadrature_variance(m, QuadratureMode::pair(i, j), phi);
}

/// 10 log10(Var / Var_vacuum); negative means squeezed below the coherent level.
inline double squeezing_db(double variance) { return 10.0 * std::log10(variance / kVacuumVariance); }

template <typename Real>
double squeezing_db(const GaussianMoments<Real>& m, Index i, Real phi) {
  return squeezing_db(static_cast<double>(quadrature_variance(m, i, phi)));
}

struct PhaseLock {
  double phase = 0.0;     // in [0, pi)
  double variance = 0.0;  // minimum variance
  double max_variance = 0.0;
  bool defined = true;    // false when the variance does not depend on phi
};

/// Minimizing phase in closed form: Var(phi) = base + |amp|/2 cos(2 phi + arg amp).
/// Falls back to scanning `grid` points when the state carries no phase-sensitive term.
template <typename Real>
PhaseLock min_variance_phase(const GaussianMoments<Real>& m, const QuadratureMode& q, int grid = 360) {
  require(grid > 0, "phase grid resolution must be positive");
  const auto [base, amp] = quadrature_coefficients(m, q);
  PhaseLock out;
  const double magnitude = std::abs(amp);
  if (magnitude <= 1e-12 * std::max(1.0, static_cast<double>(base))) {
    out.defined = false;
    double best = std::numeric_limits<double>::infinity();
    for (int g = 0; g < grid; ++g) {
      const double phi = std::numbers::pi * g / grid;
      const double var = quadrature_variance(m, q, static_cast<Real>(phi));
      if (var < best) {
        best = var;
        out.phase = phi;
      }
    }
    out.variance = out.max_variance = best;
    return out;
  }
  double phi = 0.5 * (std::numbers::pi - std::arg(amp));
  phi = std::fmod(phi, std::numbers::pi);
  if (phi < 0) phi += std::numbers::pi;
  out.phase = phi;
  out.variance = static_cast<double>(base) - 0.5 * magnitude;
  out.max_variance = static_cast<double>(base) + 0.5 * magnitude;
  return out;
}

/// Signed difference of two quadrature phases, folded into (-pi/2, pi/2].
inline double phase_difference(double a, double b) {
  double d = std::fmod(a - b, std::numbers::pi);
  if (d > std::numbers::pi / 2) d -= std::numbers::pi;
  if (d <= -std::numbers::pi / 2) d += std::numbers::pi;
  return d;
}

}  // namespace sshq

// states.hpp: first/second moments and fourth-order correlators of the input states

#pragma once

#include <cmath>
#include <utility>

#include "sshq/types.hpp"

namespace sshq {

/// alpha_i = <a_i>, N_ij = <a_i^dag a_j>, M_ij = <a_i a_j>.
template <typename Real>
struct GaussianMoments {
  CVector<Real> alpha;
  CMatrix<Real> N;
  CMatrix<Real> M;

  static GaussianMoments vacuum(Index n) {
    return {CVector<Real>::Zero(n), CMatrix<Real>::Zero(n, n), CMatrix<Real>::Zero(n, n)};
  }

  Index size() const { return alpha.size(); }

  /// Moments of the fluctuation b = a - alpha.
  CMatrix<Real> centered_N() const { return N - alpha.conjugate() * alpha.transpose(); }
  CMatrix<Real> centered_M() const { return M - alpha * alpha.transpose(); }

  Real total_photons() const { return N.diagonal().real().sum(); }
};

/// g2[i,j,k,l] = <a_i^dag a_j a_k^dag a_l>, stored densely with i fastest.
template <typename Real>
class CorrelationTensor {
 public:
  CorrelationTensor() = default;
  explicit CorrelationTensor(Index n) : n_(n), data_(CVector<Real>::Zero(n * n * n * n)) {}

  Index size() const { return n_; }
  Index flat_index(Index i, Index j, Index k, Index l) const { return i + n_ * (j + n_ * (k + n_ * l)); }

  Complex<Real>& operator()(Index i, Index j, Index k, Index l) { return data_(flat_index(i, j, k, l)); }
  const Complex<Real>& operator()(Index i, Index j, Index k, Index l) const {
    return data_(flat_index(i, j, k, l));
  }

  CVector<Real>& data() { return data_; }
  const CVector<Real>& data() const { return data_; }

  /// max |g2[i,j,k,l] - conj(g2[l,k,j,i])|
  Real hermiticity_defect() const {
    Real worst = 0;
    for (Index l = 0; l < n_; ++l)
      for (Index k = 0; k < n_; ++k)
        for (Index j = 0; j < n_; ++j)
          for (Index i = 0; i < n_; ++i)
            worst = std::max(worst, std::abs((*this)(i, j, k, l) - std::conj((*this)(l, k, j, i))));
    return worst;
  }

 private:
  Index n_ = 0;
  CVector<Real> data_;
};

template <typename Real>
struct PreparedState {
  GaussianMoments<Real> moments;
  CorrelationTensor<Real> g2;
};

using Moments = GaussianMoments<double>;
using G2Tensor = CorrelationTensor<double>;
using InitialState = PreparedState<double>;

/// Fourth-order correlator of a Gaussian state from its moments (Wick factorization, displaced).
template <typename Real>
CorrelationTensor<Real> wick_g2(const GaussianMoments<Real>& m) {
  const Index n = m.size();
  const CMatrix<Real> nc = m.centered_N();
  const CMatrix<Real> mc = m.centered_M();
  const CVector<Real>& a = m.alpha;
  const CVector<Real> ab = a.conjugate();
  CorrelationTensor<Real> g(n);
  // <a_i^dag a_j a_k^dag a_l> = <a_i^dag a_k^dag a_j a_l> + delta_jk N_il, normal-ordered part by Wick.
  for (Index l = 0; l < n; ++l)
    for (Index k = 0; k < n; ++k)
      for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < n; ++i) {
          Complex<Real> v = ab(i) * ab(k) * a(j) * a(l);
          v += std::conj(mc(i, k)) * a(j) * a(l) + mc(j, l) * ab(i) * ab(k);
          v += nc(i, j) * ab(k) * a(l) + nc(i, l) * ab(k) * a(j) + nc(k, j) * ab(i) * a(l) +
               nc(k, l) * ab(i) * a(j);
          v += std::conj(mc(i, k)) * mc(j, l) + nc(i, j) * nc(k, l) + nc(i, l) * nc(k, j);
          if (j == k) v += m.N(i, l);
          g(i, j, k, l) = v;
        }
  return g;
}

namespace detail {
inline void require_site(Index n, Index d) { require(d >= 0 && d < n, "site " + std::to_string(d) + " out of range"); }
}  // namespace detail

/// |1> at site d.
template <typename Real = double>
PreparedState<Real> init_single_photon(Index n, Index d) {
  detail::require_site(n, d);
  auto m = GaussianMoments<Real>::vacuum(n);
  m.N(d, d) = 1;
  CorrelationTensor<Real> g(n);
  for (Index j = 0; j < n; ++j) g(d, j, j, d) = 1;
  return {std::move(m), std::move(g)};
}

/// D(alpha)|0> at site d.
template <typename Real = double>
PreparedState<Real> init_coherent(Index n, Index d, Complex<Real> alpha) {
  detail::require_site(n, d);
  auto m = GaussianMoments<Real>::vacuum(n);
  m.alpha(d) = alpha;
  m.N(d, d) = std::norm(alpha);
  m.M(d, d) = alpha * alpha;
  CorrelationTensor<Real> g(n);
  const Complex<Real> ab = std::conj(alpha);
  g(d, d, d, d) = ab * alpha * ab * alpha;
  for (Index j = 0; j < n; ++j) g(d, j, j, d) += ab * alpha;
  return {std::move(m), std::move(g)};
}

/// exp((xi^* a^2 - xi a^dag^2)/2)|0> at site d, xi = r e^{i theta}.
template <typename Real = double>
PreparedState<Real> init_sq_vacuum(Index n, Index d, Real r, Real theta = 0) {
  detail::require_site(n, d);
  require(r >= 0, "squeezing magnitude must be non-negative");
  auto m = GaussianMoments<Real>::vacuum(n);
  m.N(d, d) = std::sinh(r) * std::sinh(r);
  m.M(d, d) = -std::polar(Real(1), theta) * std::sinh(r) * std::cosh(r);
  auto g = wick_g2(m);
  return {std::move(m), std::move(g)};
}

/// exp(xi^* a_a a_b - xi a_a^dag a_b^dag)|0>, xi = r e^{i theta}.
template <typename Real = double>
PreparedState<Real> init_two_mode_sq(Index n, Index site_a, Index site_b, Real r, Real theta = 0) {
  detail::require_site(n, site_a);
  detail::require_site(n, site_b);
  require(site_a != site_b, "two-mode squeezing needs two distinct sites");
  require(r >= 0, "squeezing magnitude must be non-negative");
  auto m = GaussianMoments<Real>::vacuum(n);
  m.N(site_a, site_a) = m.N(site_b, site_b) = std::sinh(r) * std::sinh(r);
  m.M(site_a, site_b) = m.M(site_b, site_a) = -std::polar(Real(1), theta) * std::sinh(r) * std::cosh(r);
  auto g = wick_g2(m);
  return {std::move(m), std::move(g)};
}

/// Product of two independent inputs on disjoint sites, e.g. squeezed light in both walls.
/// Only valid when both factors are Gaussian.
template <typename Real>
PreparedState<Real> combine_gaussian(const GaussianMoments<Real>& a, const GaussianMoments<Real>& b) {
  require(a.size() == b.size(), "moment dimensions differ");
  GaussianMoments<Real> m{a.alpha + b.alpha, a.N + b.N, a.M + b.M};
  // Cross moments of independent modes factorize into products of first moments.
  m.N += a.alpha.conjugate() * b.alpha.transpose() + b.alpha.conjugate() * a.alpha.transpose();
  m.M += a.alpha * b.alpha.transpose() + b.alpha * a.alpha.transpose();
  auto g = wick_g2(m);
  return {std::move(m), std::move(g)};
}

}  // namespace sshq

// spectral.hpp: eigenspectra, inverse participation ratios and in-gap state identification

#pragma once

#include <limits>
#include <vector>

#include <Eigen/Eigenvalues>

#include "sshq/lattice.hpp"
#include "sshq/types.hpp"

namespace sshq {

/// IPR = sum |psi|^4 / (sum |psi|^2)^2.
template <typename Derived>
double inverse_participation_ratio(const Eigen::MatrixBase<Derived>& psi) {
  const double norm2 = psi.squaredNorm();
  if (norm2 == 0.0) return 0.0;
  return psi.cwiseAbs2().cwiseAbs2().sum() / (norm2 * norm2);
}

template <typename Scalar>
struct SpectralResult {
  VectorXr energies;  // ascending
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> states;  // columns are eigenvectors
  VectorXr ipr;
};

template <typename Derived>
auto diagonalize(const Eigen::MatrixBase<Derived>& h) {
  using Scalar = typename Derived::Scalar;
  using Plain = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  require(h.rows() == h.cols(), "Hamiltonian must be square");
  const double scale = std::max(1.0, static_cast<double>(h.cwiseAbs().maxCoeff()));
  require(static_cast<double>(hermiticity_defect(h)) <= 1e-12 * scale, "Hamiltonian is not Hermitian");

  Eigen::SelfAdjointEigenSolver<Plain> solver(Plain(h), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver did not converge");
  SpectralResult<Scalar> out;
  out.energies = solver.eigenvalues();
  out.states = solver.eigenvectors();
  out.ipr.resize(out.energies.size());
  for (Index k = 0; k < out.energies.size(); ++k) out.ipr(k) = inverse_participation_ratio(out.states.col(k));
  return out;
}

using RealSpectrum = SpectralResult<double>;

/// Indices of states with |E| < tol, in ascending-energy order.
std::vector<Index> locate_gap_states(const RealSpectrum& result, double tol);

/// Rotates the near-zero subspace of a chiral Hamiltonian into a site-localized basis: first by
/// sublattice, then by position within each sublattice. IPRs are recomputed for those columns;
/// energies stay the eigenvalues.
void localize_gap_states(RealSpectrum& result, const std::vector<Index>& gap_states);

/// Diagonalizes and localizes the gap states found with tolerance tol.
RealSpectrum analyze(const MatrixXr& h, double tol);

/// Default gap-state tolerance 1e-3 v.
inline double default_gap_tolerance(const LatticeSpec& spec) { return 1e-3 * spec.v; }

struct BandPoint {
  double delta;
  RealSpectrum spectrum;
  std::vector<Index> gap_states;
};

/// For each delta: u fixed, v = delta u, diagonalize.
std::vector<BandPoint> band_sweep(const LatticeSpec& spec_template, const std::vector<double>& deltas);

/// Smallest |E| outside the `skip` states nearest to zero.
double bulk_gap(const VectorXr& energies, std::size_t skip);

/// Largest deviation between the spectrum and its mirror image -E.
double chiral_asymmetry(const VectorXr& energies);

}  // namespace sshq

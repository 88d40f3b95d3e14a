// evolution.hpp: trotterized linear-optics propagation of moments and fourth-order correlators
//
// A quadratic, number-conserving Hamiltonian sum_mn H_mn a_m^dag a_n maps every annihilator
// linearly, a_m -> sum_n U_mn a_n with U = exp(-i H dz) for each step. Moments and the g2 tensor
// therefore evolve by index contraction with U (one factor per index) and never need a Fock basis.

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "sshq/lattice.hpp"
#include "sshq/observables.hpp"
#include "sshq/states.hpp"

namespace sshq {

struct Propagator {
  MatrixXc U;
  double z_from = 0.0;
  double z_to = 0.0;
};

/// exp(-i H dz) through the Hermitian eigendecomposition of H.
MatrixXc unitary_from_hamiltonian(const MatrixXr& h, double dz);

/// Midpoint step: U = exp(-i H(z0 + dz/2) dz).
Propagator step_unitary(const CouplingSchedule& schedule, double z0, double dz);

/// One midpoint step of a run. Steps never straddle segment boundaries; the last step of each
/// segment is shortened to land on the boundary.
struct Step {
  std::size_t segment = 0;
  double local_z0 = 0.0;
  double global_z0 = 0.0;
  double dz = 0.0;
};

std::vector<Step> step_plan(const CouplingSchedule& schedule, double dz);

/// exp(-i H dz) for one planned step.
MatrixXc step_propagator(const CouplingSchedule& schedule, const Step& step);

/// Ordered product of midpoint steps over [z_from, z_to]; the last step is shortened to land on z_to.
MatrixXc accumulate_propagator(const CouplingSchedule& schedule, double z_from, double z_to, double dz);

/// alpha' = U alpha, N' = conj(U) N U^T, M' = U M U^T.
template <typename Real>
GaussianMoments<Real> evolve_moments(const GaussianMoments<Real>& m, const CMatrix<Real>& U) {
  require(U.rows() == m.size() && U.cols() == m.size(), "propagator and moments differ in dimension");
  return {U * m.alpha, U.conjugate() * m.N * U.transpose(), U * m.M * U.transpose()};
}

template <typename Real>
GaussianMoments<Real> evolve_moments(const GaussianMoments<Real>& m, const Propagator& p) {
  return evolve_moments(m, CMatrix<Real>(p.U.template cast<Complex<Real>>()));
}

/// g2'[i,j,k,l] = sum conj(U_im) U_jn conj(U_kt) U_lp g2[m,n,t,p], as four single-index
/// contractions (each one dense product, O(n^5) overall).
template <typename Real>
CorrelationTensor<Real> evolve_g2(const CorrelationTensor<Real>& t, const CMatrix<Real>& U) {
  const Index n = t.size();
  require(U.rows() == n && U.cols() == n, "propagator and tensor differ in dimension");
  using Map = Eigen::Map<CMatrix<Real>>;
  using ConstMap = Eigen::Map<const CMatrix<Real>>;
  const Index n2 = n * n;
  const Index n3 = n2 * n;
  CorrelationTensor<Real> out(n);
  CVector<Real> scratch(n3 * n);

  const CMatrix<Real> Uc = U.conjugate();
  const CMatrix<Real> Ut = U.transpose();
  const CMatrix<Real> Uh = U.adjoint();

  Map(scratch.data(), n, n3).noalias() = Uc * ConstMap(t.data().data(), n, n3);
  for (Index block = 0; block < n2; ++block)
    Map(out.data().data() + block * n2, n, n).noalias() = ConstMap(scratch.data() + block * n2, n, n) * Ut;
  for (Index l = 0; l < n; ++l)
    Map(scratch.data() + l * n3, n2, n).noalias() = ConstMap(out.data().data() + l * n3, n2, n) * Uh;
  Map(out.data().data(), n3, n).noalias() = ConstMap(scratch.data(), n3, n) * Ut;
  return out;
}

template <typename Real>
CorrelationTensor<Real> evolve_g2(const CorrelationTensor<Real>& t, const Propagator& p) {
  return evolve_g2(t, CMatrix<Real>(p.U.template cast<Complex<Real>>()));
}

/// A single entry of evolve_g2(t, U) without forming the evolved tensor, O(n^4).
template <typename Real>
Complex<Real> evolved_g2_entry(const CorrelationTensor<Real>& t, const CMatrix<Real>& U, Index i, Index j, Index k,
                               Index l) {
  const Index n = t.size();
  using ConstMap = Eigen::Map<const CMatrix<Real>>;
  const CVector<Real> over_l = ConstMap(t.data().data(), n * n * n, n) * U.row(l).transpose();
  const CVector<Real> over_k = ConstMap(over_l.data(), n * n, n) * U.row(k).conjugate().transpose();
  const CVector<Real> over_j = ConstMap(over_k.data(), n, n) * U.row(j).transpose();
  return (U.row(i).conjugate() * over_j)(0, 0);
}

using G2Index = std::array<Index, 4>;

/// What to record at each sample point.
struct ObservableRequest {
  bool site_photon_numbers = true;
  std::vector<G2Index> g2_entries;
  std::vector<QuadratureMode> quadratures;  // each gets its minimum-variance phase tracked
  std::vector<double> phases;               // fixed phases evaluated for every quadrature
  bool keep_final_tensor = false;
  bool keep_tensor_history = false;  // full g2 at every sample: n^4 per sample
};

struct Sample {
  double z = 0.0;
  VectorXr photon_numbers;
  double total_photons = 0.0;
  std::vector<cplx> g2;
  std::vector<PhaseLock> min_phase;               // per quadrature
  std::vector<std::vector<double>> fixed_phase;   // [quadrature][phase]
};

struct RunOptions {
  double dz = 1e-3;        // cm
  int sample_every = 100;  // steps between samples; the final z is always sampled
  bool stepwise_tensor = false;  // evolve the full g2 every step instead of on demand
  double step_unitarity_tol = 1e-9;
  double drift_abort = 1e-6;
  double trace_tol = 1e-8;
};

struct RunMetadata {
  double dz = 0.0;
  std::size_t steps = 0;
  double max_step_unitarity_defect = 0.0;
  double max_accumulated_defect = 0.0;
  double max_trace_drift = 0.0;
  double runtime_seconds = 0.0;
  std::vector<std::string> warnings;
};

struct Trajectory {
  std::vector<Sample> samples;
  ObservableRequest request;
  RunMetadata meta;
  Moments initial_moments;
  Moments final_moments;
  MatrixXc propagator;  // total linear map from z = 0 to the final sample
  std::optional<G2Tensor> final_g2;
  std::vector<G2Tensor> tensor_history;
};

/// Steps z from 0 to the end of the schedule, evaluating the request every `sample_every` steps.
/// Throws NumericalError when the accumulated propagator drifts from unitarity beyond drift_abort.
Trajectory run(const CouplingSchedule& schedule, const InitialState& state, const RunOptions& options,
               const ObservableRequest& request = {});

/// Records the request for a given total propagator (used by protocols that compose propagators).
Sample observe(double z, const InitialState& state, const MatrixXc& U, const ObservableRequest& request);

/// N_target(end) / Tr N(0).
double transmission(const Trajectory& trajectory, Index target);

struct ConvergenceAudit {
  double max_difference = 0.0;  // max |N_ii(dz) - N_ii(dz/2)| over 10 samples
  bool passed = true;
};

/// Runs at dz and dz/2 and compares site photon numbers on 10 evenly spaced samples.
ConvergenceAudit convergence_audit(const CouplingSchedule& schedule, const InitialState& state, double dz,
                                   double tolerance = 1e-6);

}  // namespace sshq

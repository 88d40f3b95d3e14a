// fock_oracle.hpp: brute-force reference simulator on a truncated multimode Fock space
//
// Validation only: at most 4 modes and 16 photons per mode. Everything is computed from the
// state vector with truncated ladder operators, independently of the moment engine.

#pragma once

#include <variant>
#include <vector>

#include "sshq/lattice.hpp"
#include "sshq/observables.hpp"
#include "sshq/states.hpp"

namespace sshq::fock {

inline constexpr Index kMaxModes = 4;
inline constexpr int kMaxCutoff = 16;
inline constexpr double kLeakageWarning = 1e-6;

class FockState {
 public:
  /// Multimode vacuum with `cutoff` photons allowed per mode.
  FockState(Index modes, int cutoff);

  Index modes() const { return modes_; }
  int cutoff() const { return cutoff_; }
  Index dimension() const { return amplitudes_.size(); }
  Index stride(Index mode) const { return strides_[mode]; }
  int occupation(Index basis, Index mode) const;

  const VectorXc& amplitudes() const { return amplitudes_; }
  VectorXc& amplitudes() { return amplitudes_; }

  double norm() const { return amplitudes_.norm(); }

  /// Largest probability weight sitting in the top Fock level of any mode.
  double leakage() const;

  /// Largest leakage seen over the state's history, and whether it crossed kLeakageWarning.
  double max_leakage() const { return max_leakage_; }
  bool leakage_warning() const { return max_leakage_ > kLeakageWarning; }
  void note_leakage();

 private:
  Index modes_;
  int cutoff_;
  std::vector<Index> strides_;
  VectorXc amplitudes_;
  double max_leakage_ = 0.0;
};

struct Create {
  Index mode;
};
struct Displace {
  Index mode;
  cplx alpha;
};
/// exp((xi^* a^2 - xi a^dag^2) / 2)
struct Squeeze {
  Index mode;
  cplx xi;
};
/// exp(xi^* a_i a_j - xi a_i^dag a_j^dag)
struct TwoModeSqueeze {
  Index mode_a;
  Index mode_b;
  cplx xi;
};

using Operator = std::variant<Create, Displace, Squeeze, TwoModeSqueeze>;

/// Truncated ladder operators acting on a full state vector.
VectorXc annihilate(const FockState& basis, const VectorXc& psi, Index mode);
VectorXc create(const FockState& basis, const VectorXc& psi, Index mode);

FockState apply_operator(const FockState& state, const Operator& op);

/// Midpoint steps exp(-i H(z + dz/2) dz) of the second-quantized hopping Hamiltonian.
FockState evolve_exact(const FockState& state, const CouplingSchedule& schedule, double dz);

/// One step with a fixed single-particle Hamiltonian.
FockState evolve_step(const FockState& state, const MatrixXr& h, double dz);

struct Expectations {
  Moments moments;
  G2Tensor g2;
};

Expectations expectations(const FockState& state);

/// Variance of sum_m w_m X_m(phi), evaluated with the truncated operators.
double quadrature_variance(const FockState& state, const QuadratureMode& mode, double phi);

/// <sum_i a_i^dag a_i>
double total_photons(const FockState& state);

}  // namespace sshq::fock

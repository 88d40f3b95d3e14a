// evolution.cpp: trotterized propagation engine

#include "sshq/evolution.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace sshq {

MatrixXc unitary_from_hamiltonian(const MatrixXr& h, double dz) {
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  require(hermiticity_defect(h) <= 1e-12 * scale, "Hamiltonian is not Hermitian");
  Eigen::SelfAdjointEigenSolver<MatrixXr> solver(h);
  if (solver.info() != Eigen::Success) throw NumericalError("eigensolver failed while building a step unitary");
  const VectorXc phases = (solver.eigenvalues() * (-dz)).unaryExpr([](double a) { return std::polar(1.0, a); });
  const MatrixXc v = solver.eigenvectors().cast<cplx>();
  return v * phases.asDiagonal() * v.transpose();
}

Propagator step_unitary(const CouplingSchedule& schedule, double z0, double dz) {
  require(dz > 0.0, "step size must be positive");
  return {unitary_from_hamiltonian(schedule.hamiltonian(z0 + 0.5 * dz), dz), z0, z0 + dz};
}

namespace {

// Uniform step grid on [z_from, z_to] with a shortened final step.
std::size_t step_count(double span, double dz) {
  if (span <= 0.0) return 0;
  return static_cast<std::size_t>(std::ceil(span / dz - 1e-9));
}

}  // namespace

std::vector<Step> step_plan(const CouplingSchedule& schedule, double dz) {
  require(dz > 0.0, "step size must be positive");
  std::vector<Step> plan;
  double start = 0.0;
  for (std::size_t i = 0; i < schedule.segments().size(); ++i) {
    const double length = schedule.segments()[i].length;
    const std::size_t steps = step_count(length, dz);
    for (std::size_t k = 0; k < steps; ++k) {
      const double local = static_cast<double>(k) * dz;
      plan.push_back({i, local, start + local, std::min(dz, length - local)});
    }
    start += length;
  }
  return plan;
}

MatrixXc step_propagator(const CouplingSchedule& schedule, const Step& step) {
  return unitary_from_hamiltonian(schedule.segment_hamiltonian(step.segment, step.local_z0 + 0.5 * step.dz), step.dz);
}

MatrixXc accumulate_propagator(const CouplingSchedule& schedule, double z_from, double z_to, double dz) {
  require(dz > 0.0, "step size must be positive");
  const Index n = schedule.n_sites();
  MatrixXc total = MatrixXc::Identity(n, n);
  const std::size_t steps = step_count(z_to - z_from, dz);
  for (std::size_t s = 0; s < steps; ++s) {
    const double z0 = z_from + static_cast<double>(s) * dz;
    const double h = std::min(dz, z_to - z0);
    total = step_unitary(schedule, z0, h).U * total;
  }
  return total;
}

Sample observe(double z, const InitialState& state, const MatrixXc& U, const ObservableRequest& request) {
  Sample s;
  s.z = z;
  const Moments m = evolve_moments(state.moments, U);
  s.total_photons = m.total_photons();
  if (request.site_photon_numbers) s.photon_numbers = m.N.diagonal().real();
  s.g2.reserve(request.g2_entries.size());
  for (const auto& [i, j, k, l] : request.g2_entries) s.g2.push_back(evolved_g2_entry(state.g2, U, i, j, k, l));
  for (const auto& q : request.quadratures) {
    s.min_phase.push_back(min_variance_phase(m, q));
    std::vector<double> fixed;
    fixed.reserve(request.phases.size());
    for (double phi : request.phases) fixed.push_back(quadrature_variance(m, q, phi));
    s.fixed_phase.push_back(std::move(fixed));
  }
  return s;
}

namespace {

// Same record as observe(), read from an explicitly evolved tensor.
Sample observe_stepwise(double z, const Moments& m, const G2Tensor& g2, const ObservableRequest& request) {
  Sample s;
  s.z = z;
  s.total_photons = m.total_photons();
  if (request.site_photon_numbers) s.photon_numbers = m.N.diagonal().real();
  for (const auto& [i, j, k, l] : request.g2_entries) s.g2.push_back(g2(i, j, k, l));
  for (const auto& q : request.quadratures) {
    s.min_phase.push_back(min_variance_phase(m, q));
    std::vector<double> fixed;
    for (double phi : request.phases) fixed.push_back(quadrature_variance(m, q, phi));
    s.fixed_phase.push_back(std::move(fixed));
  }
  return s;
}

}  // namespace

Trajectory run(const CouplingSchedule& schedule, const InitialState& state, const RunOptions& options,
               const ObservableRequest& request) {
  require(options.dz > 0.0, "step size must be positive");
  require(options.sample_every > 0, "sampling interval must be positive");
  const Index n = schedule.n_sites();
  require(state.moments.size() == n && state.g2.size() == n, "initial state and lattice differ in size");
  for (const auto& idx : request.g2_entries)
    for (Index x : idx) require(x >= 0 && x < n, "g2 index out of range");
  for (const auto& q : request.quadratures)
    for (Index x : q.sites) require(x >= 0 && x < n, "quadrature site out of range");

  const auto t0 = std::chrono::steady_clock::now();
  Trajectory traj;
  traj.request = request;
  traj.initial_moments = state.moments;
  traj.meta.dz = options.dz;
  if (schedule.coupling_clamped())
    traj.meta.warnings.emplace_back("disorder drove at least one coupling below the floor; clamped");

  const double length = schedule.total_length();
  const std::vector<Step> plan = step_plan(schedule, options.dz);
  traj.meta.steps = plan.size();
  const double trace0 = state.moments.total_photons();

  MatrixXc total = MatrixXc::Identity(n, n);
  Moments moments = state.moments;
  G2Tensor tensor;
  if (options.stepwise_tensor) tensor = state.g2;

  auto record = [&](double z) {
    Sample s = options.stepwise_tensor ? observe_stepwise(z, moments, tensor, request) : observe(z, state, total, request);
    traj.meta.max_trace_drift = std::max(traj.meta.max_trace_drift, std::abs(s.total_photons - trace0));
    const double drift = unitarity_defect(total);
    traj.meta.max_accumulated_defect = std::max(traj.meta.max_accumulated_defect, drift);
    if (drift > options.drift_abort) {
      std::ostringstream os;
      os << "accumulated propagator lost unitarity at z = " << z << " (defect " << drift << ")";
      throw NumericalError(os.str());
    }
    if (request.keep_tensor_history)
      traj.tensor_history.push_back(options.stepwise_tensor ? tensor : evolve_g2(state.g2, total));
    traj.samples.push_back(std::move(s));
  };

  record(0.0);
  for (std::size_t s = 0; s < plan.size(); ++s) {
    const Step& st = plan[s];
    const MatrixXc step = step_propagator(schedule, st);
    const double defect = unitarity_defect(step);
    traj.meta.max_step_unitarity_defect = std::max(traj.meta.max_step_unitarity_defect, defect);
    if (defect > options.step_unitarity_tol) {
      std::ostringstream os;
      os << "step unitary at z = " << st.global_z0 << " has defect " << defect;
      throw NumericalError(os.str());
    }
    total = step * total;
    if (options.stepwise_tensor) {
      moments = evolve_moments(moments, step);
      tensor = evolve_g2(tensor, step);
    }
    const bool last = s + 1 == plan.size();
    if (last || (s + 1) % static_cast<std::size_t>(options.sample_every) == 0)
      record(last ? length : st.global_z0 + st.dz);
  }

  traj.propagator = total;
  traj.final_moments = options.stepwise_tensor ? moments : evolve_moments(state.moments, total);
  if (request.keep_final_tensor) traj.final_g2 = options.stepwise_tensor ? tensor : evolve_g2(state.g2, total);
  if (traj.meta.max_trace_drift > options.trace_tol) {
    std::ostringstream os;
    os << "total photon number drifted by " << traj.meta.max_trace_drift;
    traj.meta.warnings.push_back(os.str());
  }
  traj.meta.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return traj;
}

double transmission(const Trajectory& trajectory, Index target) {
  require(!trajectory.samples.empty(), "empty trajectory");
  const Sample& last = trajectory.samples.back();
  require(last.photon_numbers.size() > target && target >= 0, "trajectory lacks site-resolved photon numbers");
  const double input = trajectory.samples.front().total_photons;
  require(input > 0.0, "no photons at the input");
  return last.photon_numbers(target) / input;
}

ConvergenceAudit convergence_audit(const CouplingSchedule& schedule, const InitialState& state, double dz,
                                   double tolerance) {
  const double length = schedule.total_length();
  ConvergenceAudit audit;
  if (length <= 0.0) return audit;
  const Index n = schedule.n_sites();
  MatrixXc coarse = MatrixXc::Identity(n, n);
  MatrixXc fine = coarse;
  for (int k = 1; k <= 10; ++k) {
    const double z = length * k / 10.0;
    const double z_prev = length * (k - 1) / 10.0;
    coarse = accumulate_propagator(schedule, z_prev, z, dz) * coarse;
    fine = accumulate_propagator(schedule, z_prev, z, 0.5 * dz) * fine;
    const VectorXr n_coarse = evolve_moments(state.moments, coarse).N.diagonal().real();
    const VectorXr n_fine = evolve_moments(state.moments, fine).N.diagonal().real();
    audit.max_difference = std::max(audit.max_difference, (n_coarse - n_fine).cwiseAbs().maxCoeff());
  }
  audit.passed = audit.max_difference <= tolerance;
  return audit;
}

}  // namespace sshq

// spectral.cpp: eigenspectra, inverse participation ratios and in-gap state identification

#include "sshq/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace sshq {

std::vector<Index> locate_gap_states(const RealSpectrum& result, double tol) {
  require(tol > 0.0, "gap-state tolerance must be positive");
  std::vector<Index> out;
  for (Index k = 0; k < result.energies.size(); ++k)
    if (std::abs(result.energies(k)) < tol) out.push_back(k);
  return out;
}

namespace {

// Orthonormal rotation of `basis` diagonalizing `op` restricted to its span.
MatrixXr rotate_by(const MatrixXr& basis, const VectorXr& op, VectorXr& values) {
  const MatrixXr reduced = basis.transpose() * op.asDiagonal() * basis;
  Eigen::SelfAdjointEigenSolver<MatrixXr> solver(reduced);
  values = solver.eigenvalues();
  return basis * solver.eigenvectors();
}

}  // namespace

void localize_gap_states(RealSpectrum& result, const std::vector<Index>& gap_states) {
  if (gap_states.size() < 2) return;
  const Index n = result.states.rows();
  MatrixXr basis(n, static_cast<Index>(gap_states.size()));
  for (std::size_t c = 0; c < gap_states.size(); ++c) basis.col(c) = result.states.col(gap_states[c]);

  VectorXr parity_values;
  const MatrixXr by_parity = rotate_by(basis, sublattice_parity(n), parity_values);

  VectorXr position = VectorXr::LinSpaced(n, 0.0, static_cast<double>(n - 1));
  std::vector<VectorXr> localized;
  for (const bool positive : {true, false}) {
    std::vector<Index> cols;
    for (Index c = 0; c < parity_values.size(); ++c)
      if ((parity_values(c) >= 0.0) == positive) cols.push_back(c);
    if (cols.empty()) continue;
    MatrixXr group(n, static_cast<Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) group.col(c) = by_parity.col(cols[c]);
    VectorXr centers;
    const MatrixXr rotated = rotate_by(group, position, centers);
    for (Index c = 0; c < rotated.cols(); ++c) localized.emplace_back(rotated.col(c));
  }

  auto center = [&](const VectorXr& psi) { return psi.cwiseAbs2().dot(position); };
  std::sort(localized.begin(), localized.end(),
            [&](const VectorXr& a, const VectorXr& b) { return center(a) < center(b); });
  for (std::size_t c = 0; c < gap_states.size(); ++c) {
    VectorXr psi = localized[c];
    Index peak = 0;
    psi.cwiseAbs().maxCoeff(&peak);
    if (psi(peak) < 0.0) psi = -psi;
    result.states.col(gap_states[c]) = psi;
    result.ipr(gap_states[c]) = inverse_participation_ratio(psi);
  }
}

RealSpectrum analyze(const MatrixXr& h, double tol) {
  RealSpectrum result = diagonalize(h);
  localize_gap_states(result, locate_gap_states(result, tol));
  return result;
}

std::vector<BandPoint> band_sweep(const LatticeSpec& spec_template, const std::vector<double>& deltas) {
  std::vector<BandPoint> out;
  out.reserve(deltas.size());
  for (const double delta : deltas) {
    require(delta > 0.0, "delta values must be positive");
    LatticeSpec spec = spec_template;
    spec.v = delta * spec.u;
    BandPoint point{delta, diagonalize(build_ssh(spec)), {}};
    point.gap_states = locate_gap_states(point.spectrum, default_gap_tolerance(spec));
    localize_gap_states(point.spectrum, point.gap_states);
    out.push_back(std::move(point));
  }
  return out;
}

double bulk_gap(const VectorXr& energies, std::size_t skip) {
  std::vector<double> magnitudes(energies.size());
  for (Index k = 0; k < energies.size(); ++k) magnitudes[k] = std::abs(energies(k));
  std::sort(magnitudes.begin(), magnitudes.end());
  require(skip < magnitudes.size(), "cannot skip every state");
  return magnitudes[skip];
}

double chiral_asymmetry(const VectorXr& energies) {
  VectorXr sorted = energies;
  std::sort(sorted.data(), sorted.data() + sorted.size());
  return (sorted + sorted.reverse()).cwiseAbs().maxCoeff();
}

}  // namespace sshq

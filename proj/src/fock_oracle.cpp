// fock_oracle.cpp: brute-force reference simulator on a truncated multimode Fock space

#include "sshq/fock_oracle.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace sshq::fock {

FockState::FockState(Index modes, int cutoff) : modes_(modes), cutoff_(cutoff) {
  require(modes >= 1 && modes <= kMaxModes, "oracle supports 1 to 4 modes");
  require(cutoff >= 1 && cutoff <= kMaxCutoff, "oracle cutoff must lie in [1, 16]");
  Index dim = 1;
  for (Index m = 0; m < modes; ++m) {
    strides_.push_back(dim);
    dim *= cutoff + 1;
  }
  amplitudes_ = VectorXc::Zero(dim);
  amplitudes_(0) = 1.0;
}

int FockState::occupation(Index basis, Index mode) const {
  return static_cast<int>((basis / strides_[mode]) % (cutoff_ + 1));
}

double FockState::leakage() const {
  double worst = 0.0;
  for (Index m = 0; m < modes_; ++m) {
    double top = 0.0;
    for (Index b = 0; b < dimension(); ++b)
      if (occupation(b, m) == cutoff_) top += std::norm(amplitudes_(b));
    worst = std::max(worst, top);
  }
  return worst;
}

void FockState::note_leakage() { max_leakage_ = std::max(max_leakage_, leakage()); }

VectorXc annihilate(const FockState& basis, const VectorXc& psi, Index mode) {
  VectorXc out = VectorXc::Zero(psi.size());
  const Index stride = basis.stride(mode);
  for (Index b = 0; b < psi.size(); ++b) {
    const int n = basis.occupation(b, mode);
    if (n > 0) out(b - stride) += std::sqrt(static_cast<double>(n)) * psi(b);
  }
  return out;
}

VectorXc create(const FockState& basis, const VectorXc& psi, Index mode) {
  VectorXc out = VectorXc::Zero(psi.size());
  const Index stride = basis.stride(mode);
  for (Index b = 0; b < psi.size(); ++b) {
    const int n = basis.occupation(b, mode);
    if (n < basis.cutoff()) out(b + stride) += std::sqrt(static_cast<double>(n + 1)) * psi(b);
  }
  return out;
}

namespace {

// Dense single-mode annihilator on {0..c}.
MatrixXc local_annihilator(int cutoff) {
  MatrixXc a = MatrixXc::Zero(cutoff + 1, cutoff + 1);
  for (int n = 1; n <= cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

// exp(G) for anti-Hermitian G via the Hermitian matrix iG.
MatrixXc exp_antihermitian(const MatrixXc& g) {
  const MatrixXc k = cplx(0.0, 1.0) * g;
  Eigen::SelfAdjointEigenSolver<MatrixXc> solver(k);
  const VectorXc phases = solver.eigenvalues().unaryExpr([](double e) { return std::polar(1.0, -e); });
  return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

// Applies `local` (acting on the tensor product of `modes`, first mode fastest) to the full state.
VectorXc apply_local(const FockState& basis, const VectorXc& psi, const std::vector<Index>& modes,
                     const MatrixXc& local) {
  const int levels = basis.cutoff() + 1;
  VectorXc out = VectorXc::Zero(psi.size());
  VectorXc gathered(local.rows());
  std::vector<Index> offsets(static_cast<std::size_t>(local.rows()));
  for (Index loc = 0; loc < local.rows(); ++loc) {
    Index rem = loc;
    Index offset = 0;
    for (Index m : modes) {
      offset += (rem % levels) * basis.stride(m);
      rem /= levels;
    }
    offsets[loc] = offset;
  }
  for (Index b = 0; b < psi.size(); ++b) {
    bool anchor = true;
    for (Index m : modes) anchor = anchor && basis.occupation(b, m) == 0;
    if (!anchor) continue;
    for (Index loc = 0; loc < local.rows(); ++loc) gathered(loc) = psi(b + offsets[loc]);
    const VectorXc mapped = local * gathered;
    for (Index loc = 0; loc < local.rows(); ++loc) out(b + offsets[loc]) = mapped(loc);
  }
  return out;
}

void require_mode(const FockState& s, Index m) { require(m >= 0 && m < s.modes(), "oracle mode out of range"); }

}  // namespace

FockState apply_operator(const FockState& state, const Operator& op) {
  FockState out = state;
  const int c = state.cutoff();
  const MatrixXc a = local_annihilator(c);
  std::visit(
      [&](const auto& o) {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, Create>) {
          require_mode(state, o.mode);
          VectorXc raised = create(state, state.amplitudes(), o.mode);
          const double norm = raised.norm();
          require(norm > 0.0, "creation operator annihilated the state at the cutoff");
          out.amplitudes() = raised / norm;
        } else if constexpr (std::is_same_v<T, Displace>) {
          require_mode(state, o.mode);
          const MatrixXc g = o.alpha * a.adjoint() - std::conj(o.alpha) * a;
          out.amplitudes() = apply_local(state, state.amplitudes(), {o.mode}, exp_antihermitian(g));
        } else if constexpr (std::is_same_v<T, Squeeze>) {
          require_mode(state, o.mode);
          const MatrixXc g = 0.5 * (std::conj(o.xi) * a * a - o.xi * a.adjoint() * a.adjoint());
          out.amplitudes() = apply_local(state, state.amplitudes(), {o.mode}, exp_antihermitian(g));
        } else {
          require_mode(state, o.mode_a);
          require_mode(state, o.mode_b);
          require(o.mode_a != o.mode_b, "two-mode squeezing needs distinct modes");
          const Index levels = c + 1;
          const MatrixXc id = MatrixXc::Identity(levels, levels);
          // Kronecker layout: first listed mode is the fast index.
          MatrixXc a1 = MatrixXc::Zero(levels * levels, levels * levels);
          MatrixXc a2 = a1;
          for (Index r = 0; r < levels; ++r)
            for (Index s = 0; s < levels; ++s) {
              a1.block(r * levels, s * levels, levels, levels) = id(r, s) * a;
              a2.block(r * levels, s * levels, levels, levels) = a(r, s) * id;
            }
          const MatrixXc g = std::conj(o.xi) * a1 * a2 - o.xi * a1.adjoint() * a2.adjoint();
          out.amplitudes() = apply_local(state, state.amplitudes(), {o.mode_a, o.mode_b}, exp_antihermitian(g));
        }
      },
      op);
  out.note_leakage();
  return out;
}

namespace {

VectorXc apply_hamiltonian(const FockState& basis, const VectorXc& psi, const MatrixXr& h) {
  VectorXc out = VectorXc::Zero(psi.size());
  const Index n = basis.modes();
  for (Index src = 0; src < n; ++src) {
    const VectorXc lowered = annihilate(basis, psi, src);
    for (Index dst = 0; dst < n; ++dst)
      if (h(dst, src) != 0.0) out += h(dst, src) * create(basis, lowered, dst);
  }
  return out;
}

}  // namespace

FockState evolve_step(const FockState& state, const MatrixXr& h, double dz) {
  require(h.rows() == state.modes(), "Hamiltonian and oracle state differ in mode count");
  FockState out = state;
  // Taylor series of exp(-i H dz) applied to the vector; terms decay factorially.
  VectorXc term = state.amplitudes();
  VectorXc sum = term;
  for (int k = 1; k <= 200; ++k) {
    term = apply_hamiltonian(state, term, h) * cplx(0.0, -dz / k);
    sum += term;
    if (term.norm() < 1e-17 * sum.norm()) break;
  }
  out.amplitudes() = sum;
  out.note_leakage();
  return out;
}

FockState evolve_exact(const FockState& state, const CouplingSchedule& schedule, double dz) {
  require(dz > 0.0, "step size must be positive");
  require(schedule.n_sites() == state.modes(), "schedule dimension must equal the oracle mode count");
  FockState current = state;
  const double length = schedule.total_length();
  const auto steps = static_cast<std::size_t>(std::ceil(length / dz - 1e-9));
  for (std::size_t s = 0; s < steps; ++s) {
    const double z0 = static_cast<double>(s) * dz;
    const double h = std::min(dz, length - z0);
    current = evolve_step(current, schedule.hamiltonian(z0 + 0.5 * h), h);
  }
  return current;
}

Expectations expectations(const FockState& state) {
  const Index n = state.modes();
  const VectorXc& psi = state.amplitudes();
  std::vector<VectorXc> lowered;
  for (Index j = 0; j < n; ++j) lowered.push_back(annihilate(state, psi, j));

  Expectations out{Moments::vacuum(n), G2Tensor(n)};
  for (Index i = 0; i < n; ++i) {
    out.moments.alpha(i) = psi.dot(lowered[i]);
    for (Index j = 0; j < n; ++j) {
      out.moments.N(i, j) = lowered[i].dot(lowered[j]);
      out.moments.M(i, j) = psi.dot(annihilate(state, lowered[j], i));
    }
  }
  // <a_i^dag a_j a_k^dag a_l> = < a_i psi | a_j a_k^dag a_l psi >
  for (Index l = 0; l < n; ++l)
    for (Index k = 0; k < n; ++k) {
      const VectorXc raised = create(state, lowered[l], k);
      for (Index j = 0; j < n; ++j) {
        const VectorXc chain = annihilate(state, raised, j);
        for (Index i = 0; i < n; ++i) out.g2(i, j, k, l) = lowered[i].dot(chain);
      }
    }
  return out;
}

double quadrature_variance(const FockState& state, const QuadratureMode& mode, double phi) {
  require(mode.sites.size() == mode.weights.size() && !mode.sites.empty(), "malformed quadrature mode");
  double norm = 0.0;
  for (double w : mode.weights) norm += w * w;
  norm = std::sqrt(norm);
  const VectorXc& psi = state.amplitudes();
  VectorXc x = VectorXc::Zero(psi.size());
  for (std::size_t s = 0; s < mode.sites.size(); ++s) {
    require_mode(state, mode.sites[s]);
    const double w = mode.weights[s] / norm;
    x += 0.5 * w *
         (std::polar(1.0, phi) * annihilate(state, psi, mode.sites[s]) +
          std::polar(1.0, -phi) * create(state, psi, mode.sites[s]));
  }
  const double mean = psi.dot(x).real();
  return x.squaredNorm() - mean * mean;
}

double total_photons(const FockState& state) {
  double total = 0.0;
  for (Index m = 0; m < state.modes(); ++m) total += annihilate(state, state.amplitudes(), m).squaredNorm();
  return total;
}

}  // namespace sshq::fock

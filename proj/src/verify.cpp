// verify.cpp: engine/oracle comparison suite

#include "sshq/verify.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "sshq/evolution.hpp"
#include "sshq/fock_oracle.hpp"
#include "sshq/protocols.hpp"

namespace sshq {

CouplingSchedule ramp_schedule(const LatticeSpec& spec, const std::vector<BondKind>& end, double length, double slope) {
  CouplingSchedule out = CouplingSchedule::straight(spec, 0.0);
  ScheduleSegment seg;
  seg.length = length;
  seg.slope = slope;
  seg.start = out.final_bonds();
  seg.end = end;
  seg.walls_start = seg.walls_end = out.final_walls();
  out.append(std::move(seg));
  return out;
}

namespace {

struct OracleInput {
  std::string name;
  InputSpec spec;
  std::vector<fock::Operator> ops;
  double tolerance;
  bool gated = true;
};

double max_abs(const VectorXc& a, const VectorXc& b) { return (a - b).cwiseAbs().maxCoeff(); }

VerifyCase compare(const std::string& name, const CouplingSchedule& schedule, const OracleInput& in, double dz,
                   int cutoff) {
  const Index n = schedule.n_sites();
  fock::FockState psi(n, cutoff);
  for (const auto& op : in.ops) psi = fock::apply_operator(psi, op);
  psi = fock::evolve_exact(psi, schedule, dz);
  const fock::Expectations want = fock::expectations(psi);

  RunOptions options;
  options.dz = dz;
  options.sample_every = 1 << 30;
  ObservableRequest request;
  request.keep_final_tensor = true;
  const InitialState state = prepare(in.spec, n);
  const Trajectory traj = run(schedule, state, options, request);

  const Moments& got = traj.final_moments;
  const double e_n = (got.N - want.moments.N).cwiseAbs().maxCoeff();
  const double e_g2 = max_abs(traj.final_g2->data(), want.g2.data());
  double e_q = 0.0;
  std::vector<QuadratureMode> modes;
  for (Index i = 0; i < n; ++i) modes.push_back(QuadratureMode::single(i));
  modes.push_back(QuadratureMode::pair(0, n - 1));
  for (const auto& q : modes)
    for (double phi : {0.0, std::numbers::pi / 4, std::numbers::pi / 2, 1.1})
      e_q = std::max(e_q, std::abs(quadrature_variance(got, q, phi) - fock::quadrature_variance(psi, q, phi)));

  VerifyCase c;
  c.name = name + "/" + in.name;
  c.error = std::max({e_n, e_g2, e_q});
  c.tolerance = in.tolerance;
  c.passed = c.error <= c.tolerance;
  c.gated = in.gated;
  std::ostringstream os;
  os << "N " << e_n << ", g2 " << e_g2 << ", quadrature " << e_q << ", leakage " << psi.max_leakage();
  c.detail = os.str();
  return c;
}

}  // namespace

std::vector<VerifyCase> oracle_cases(double dz, int cutoff) {
  const double r = std::asinh(1.0);
  std::vector<VerifyCase> out;

  struct Lattice {
    std::string name;
    LatticeSpec spec;
    std::vector<BondKind> end;
  };
  const std::vector<Lattice> lattices = {
      {"dimer_ramp", {2, 0.69, 3.22, {}, {}, BondKind::intra}, {BondKind::inter}},
      {"trimer_swap", {3, 0.69, 3.22, {}, {}, BondKind::intra}, {BondKind::inter, BondKind::intra}},
  };
  for (const auto& lat : lattices) {
    const CouplingSchedule schedule = ramp_schedule(lat.spec, lat.end, 1.0);
    const Index last = lat.spec.n_sites - 1;
    const std::vector<OracleInput> inputs = {
        {"single_photon", {InputKind::single_photon, {0}, 1.0, 0.0, ""}, {fock::Create{0}}, 1e-6},
        {"coherent", {InputKind::coherent, {0}, 1.0, 0.3, ""}, {fock::Displace{0, std::polar(1.0, 0.3)}}, 1e-6},
        {"squeezed", {InputKind::squeezed, {0}, 0.4, 0.4, ""}, {fock::Squeeze{0, std::polar(0.4, 0.4)}}, 1e-3},
        {"squeezed_asinh1",
         {InputKind::squeezed, {0}, r, 0.4, ""},
         {fock::Squeeze{0, std::polar(r, 0.4)}},
         1e-3,
         false},
        {"two_mode_squeezed",
         {InputKind::two_mode_squeezed, {0, last}, 0.5, 0.2, ""},
         {fock::TwoModeSqueeze{0, last, std::polar(0.5, 0.2)}},
         1e-3},
    };
    for (const auto& in : inputs) out.push_back(compare(lat.name, schedule, in, dz, cutoff));
  }
  return out;
}

std::vector<VerifyCase> wick_cases() {
  const LatticeSpec spec{6, 0.69, 3.22, {2}, {}, BondKind::intra};
  const double z_m = 5.5;
  const CouplingSchedule schedule = move_schedule(spec, 0, Direction::right, {1.5, z_m});
  const double r = std::asinh(1.0);

  std::vector<std::pair<std::string, InitialState>> inputs;
  inputs.emplace_back("squeezed", init_sq_vacuum(6, 2, r, 0.3));
  inputs.emplace_back("coherent_plus_squeezed",
                      combine_gaussian(init_coherent(6, 2, std::polar(1.0, 0.7)).moments, init_sq_vacuum(6, 3, r).moments));
  inputs.emplace_back("two_mode_squeezed", init_two_mode_sq(6, 0, 2, r, 0.1));

  std::vector<VerifyCase> out;
  for (const auto& [name, state] : inputs) {
    RunOptions options;
    options.dz = z_m / 1000.0;
    options.sample_every = 1 << 30;
    options.stepwise_tensor = true;
    ObservableRequest request;
    request.keep_final_tensor = true;
    const Trajectory traj = run(schedule, state, options, request);
    const G2Tensor wick = wick_g2(traj.final_moments);
    const double scale = traj.final_g2->data().cwiseAbs().maxCoeff();
    VerifyCase c;
    c.name = "wick_closure/" + name;
    c.error = (traj.final_g2->data() - wick.data()).cwiseAbs().maxCoeff() / scale;
    c.tolerance = 1e-8;
    c.passed = c.error <= c.tolerance;
    std::ostringstream os;
    os << traj.meta.steps << " steps, relative to max |g2| = " << scale;
    c.detail = os.str();
    out.push_back(std::move(c));
  }
  return out;
}

bool all_gated_passed(const std::vector<VerifyCase>& cases) {
  for (const auto& c : cases)
    if (c.gated && !c.passed) return false;
  return true;
}

std::vector<VerifyCase> run_verification() {
  std::vector<VerifyCase> out = oracle_cases();
  for (auto& c : wick_cases()) out.push_back(std::move(c));
  return out;
}

}  // namespace sshq

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "sshq/fock_oracle.hpp"

using namespace sshq;
using namespace sshq::fock;

namespace {

double max_diff(const G2Tensor& a, const G2Tensor& b) { return (a.data() - b.data()).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("vacuum and basis layout") {
  const FockState s(3, 4);
  CHECK(s.dimension() == 125);
  CHECK(s.norm() == doctest::Approx(1.0));
  CHECK(total_photons(s) == 0.0);
  CHECK_THROWS_AS(FockState(5, 4), InvalidArgument);
  CHECK_THROWS_AS(FockState(2, 17), InvalidArgument);
}

TEST_CASE("zero displacement is the identity") {
  const FockState s = apply_operator(FockState(2, 6), Create{1});
  const FockState d = apply_operator(s, Displace{0, cplx(0.0)});
  CHECK((d.amplitudes() - s.amplitudes()).norm() < 1e-14);
}

TEST_CASE("single photon matches the closed form") {
  const FockState s = apply_operator(FockState(3, 4), Create{1});
  const Expectations e = expectations(s);
  const InitialState want = init_single_photon(3, 1);
  CHECK((e.moments.N - want.moments.N).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(max_diff(e.g2, want.g2) < 1e-14);
}

TEST_CASE("coherent state matches the closed form") {
  const cplx alpha = std::polar(1.0, 0.3);
  const FockState s = apply_operator(FockState(2, 14), Displace{0, alpha});
  const Expectations e = expectations(s);
  const InitialState want = init_coherent(2, 0, alpha);
  CHECK(e.g2(0, 0, 0, 0).real() == doctest::Approx(2.0).epsilon(1e-6));
  CHECK((e.moments.alpha - want.moments.alpha).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(max_diff(e.g2, want.g2) < 1e-6);
}

TEST_CASE("squeezed vacuum") {
  const double r = std::asinh(1.0);
  const FockState small = apply_operator(FockState(1, 16), Squeeze{0, cplx(0.4)});
  const InitialState want = init_sq_vacuum(1, 0, 0.4);
  CHECK(max_diff(expectations(small).g2, want.g2) < 1e-6);
  CHECK(quadrature_variance(small, QuadratureMode::single(0), 0.0) == doctest::Approx(std::exp(-0.8) / 4).epsilon(1e-6));

  // At r = asinh(1) the number distribution decays as 2^-k: the tail past the cutoff is visible in
  // <n> at the 1e-2 level for cutoff 12 and shrinks with the cutoff.
  const FockState c12 = apply_operator(FockState(1, 12), Squeeze{0, cplx(r)});
  const FockState c16 = apply_operator(FockState(1, 16), Squeeze{0, cplx(r)});
  const double e12 = std::abs(total_photons(c12) - 1.0), e16 = std::abs(total_photons(c16) - 1.0);
  CHECK(e16 < e12);
  CHECK(e16 < 1e-2);
  CHECK(c12.leakage_warning());
}

TEST_CASE("two-mode squeezing creates photons in pairs") {
  const FockState s = apply_operator(FockState(2, 16), TwoModeSqueeze{0, 1, std::polar(0.5, 0.2)});
  const Expectations e = expectations(s);
  CHECK(e.moments.N(0, 0).real() == doctest::Approx(e.moments.N(1, 1).real()).epsilon(1e-14));
  const InitialState want = init_two_mode_sq(2, 0, 1, 0.5, 0.2);
  CHECK((e.moments.M - want.moments.M).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(max_diff(e.g2, want.g2) < 1e-6);
}

TEST_CASE("evolution") {
  const LatticeSpec dimer{2, 0.69, 0.0, {}, {}, BondKind::intra};
  const FockState photon = apply_operator(FockState(2, 3), Create{0});

  const FockState still = evolve_step(photon, MatrixXr::Zero(2, 2), 0.5);
  CHECK((still.amplitudes() - photon.amplitudes()).norm() < 1e-14);

  const double z = 1.7;
  const FockState moved = evolve_exact(photon, CouplingSchedule::straight(dimer, z), 0.01);
  const Expectations e = expectations(moved);
  CHECK(e.moments.N(0, 0).real() == doctest::Approx(std::pow(std::cos(0.69 * z), 2)).epsilon(1e-8));
  CHECK(total_photons(moved) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(moved.norm() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("number conservation under a bent trimer") {
  const LatticeSpec trimer{3, 0.69, 3.22, {}, {}, BondKind::intra};
  CouplingSchedule s = CouplingSchedule::straight(trimer, 0.0);
  ScheduleSegment bend;
  bend.length = 1.0;
  bend.start = s.final_bonds();
  bend.end = {BondKind::inter, BondKind::intra};
  bend.walls_start = bend.walls_end = s.final_walls();
  s.append(bend);

  FockState in = apply_operator(FockState(3, 4), Create{0});
  in = apply_operator(in, Create{2});
  CHECK(total_photons(in) == doctest::Approx(2.0));
  const FockState out = evolve_exact(in, s, 0.01);
  CHECK(total_photons(out) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK_FALSE(out.leakage_warning());

  CHECK_THROWS_AS(evolve_exact(FockState(2, 4), s, 0.01), InvalidArgument);
}

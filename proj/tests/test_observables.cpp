#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "sshq/observables.hpp"
#include "sshq/states.hpp"

using namespace sshq;

namespace {
const double kR = std::asinh(1.0);
constexpr double kPi = std::numbers::pi;
}  // namespace

TEST_CASE("photon number and g2 lookups") {
  const InitialState s = init_single_photon(3, 1);
  CHECK(photon_number(s.moments, 1, 1) == cplx(1.0));
  CHECK(g2_entry(s.g2, 1, 1, 1, 1) == cplx(1.0));
  CHECK_THROWS_AS(g2_entry(s.g2, 0, 0, 0, 3), InvalidArgument);
}

TEST_CASE("vacuum and coherent quadratures sit at the vacuum level") {
  CHECK(quadrature_variance(Moments::vacuum(2), Index{0}, 0.3) == doctest::Approx(0.25));
  const InitialState c = init_coherent(2, 0, std::polar(1.0, 0.5));
  for (double phi : {0.0, 0.4, 1.3}) CHECK(quadrature_variance(c.moments, Index{0}, phi) == doctest::Approx(0.25));
}

TEST_CASE("single-photon quadrature is phase-insensitive") {
  const InitialState s = init_single_photon(2, 0);
  CHECK(quadrature_variance(s.moments, Index{0}, 0.0) == doctest::Approx(0.75));
  const PhaseLock lock = min_variance_phase(s.moments, QuadratureMode::single(0));
  CHECK_FALSE(lock.defined);
  CHECK(lock.variance == doctest::Approx(0.75));
}

TEST_CASE("squeezed vacuum at asinh(1)") {
  const InitialState s = init_sq_vacuum(2, 0, kR);
  const double var = quadrature_variance(s.moments, Index{0}, 0.0);
  CHECK(var == doctest::Approx(std::exp(-2 * kR) / 4));
  CHECK(var == doctest::Approx(0.042893).epsilon(1e-5));
  CHECK(squeezing_db(var) == doctest::Approx(-7.6555).epsilon(1e-4));
  CHECK(quadrature_variance(s.moments, Index{0}, kPi / 2) == doctest::Approx(std::exp(2 * kR) / 4));

  const PhaseLock lock = min_variance_phase(s.moments, QuadratureMode::single(0));
  CHECK(lock.defined);
  CHECK(lock.phase == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(lock.variance == doctest::Approx(var));
  CHECK(lock.max_variance == doctest::Approx(std::exp(2 * kR) / 4));
}

TEST_CASE("squeezed quadrature sits at -theta / 2") {
  const InitialState s = init_sq_vacuum(2, 0, 0.5, 1.0);
  const PhaseLock lock = min_variance_phase(s.moments, QuadratureMode::single(0));
  CHECK(lock.phase == doctest::Approx(kPi - 0.5));
  CHECK(lock.variance == doctest::Approx(std::exp(-1.0) / 4));
}

TEST_CASE("two-mode squeezed vacuum") {
  const InitialState s = init_two_mode_sq(3, 0, 2, kR);
  for (double phi : {0.0, 0.5, 1.0, 2.0})
    CHECK(squeezing_db(s.moments, Index{0}, phi) == doctest::Approx(10 * std::log10(std::cosh(2 * kR))));
  const PhaseLock pair = min_variance_phase(s.moments, QuadratureMode::pair(0, 2));
  CHECK(pair.variance == doctest::Approx(std::exp(-2 * kR) / 4));
  CHECK(two_mode_quadrature_variance(s.moments, 0, 2, pair.phase) == doctest::Approx(pair.variance));
  CHECK_THROWS_AS(QuadratureMode::pair(1, 1), InvalidArgument);
}

TEST_CASE("weights are normalized") {
  const InitialState s = init_sq_vacuum(2, 0, 0.3);
  const QuadratureMode scaled{{0}, {5.0}};
  CHECK(quadrature_variance(s.moments, scaled, 0.2) == doctest::Approx(quadrature_variance(s.moments, Index{0}, 0.2)));
  CHECK_THROWS_AS(quadrature_variance(s.moments, QuadratureMode{{0, 1}, {1.0}}, 0.0), InvalidArgument);
}

TEST_CASE("phase differences fold into a half-open interval") {
  CHECK(phase_difference(0.1, 0.0) == doctest::Approx(0.1));
  CHECK(phase_difference(3.0, 0.0) == doctest::Approx(3.0 - kPi));
  CHECK(phase_difference(0.0, kPi / 2) == doctest::Approx(kPi / 2));
  CHECK(phase_difference(kPi - 0.05, 0.05) == doctest::Approx(-0.1));
}

TEST_CASE("decibels") {
  CHECK(squeezing_db(0.25) == 0.0);
  CHECK(squeezing_db(2.5) == doctest::Approx(10.0));
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "sshq/states.hpp"

using namespace sshq;

namespace {

const double kR = std::asinh(1.0);

double max_diff(const G2Tensor& a, const G2Tensor& b) { return (a.data() - b.data()).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("single photon") {
  const InitialState s = init_single_photon(4, 2);
  CHECK(s.moments.alpha.isZero());
  CHECK(s.moments.M.isZero());
  CHECK(s.moments.total_photons() == 1.0);
  CHECK(s.g2(2, 2, 2, 2).real() == 1.0);
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 4; ++j)
      for (Index k = 0; k < 4; ++k)
        for (Index l = 0; l < 4; ++l) {
          const double want = (j == k && i == 2 && l == 2) ? 1.0 : 0.0;
          CHECK(s.g2(i, j, k, l) == cplx(want));
        }
  CHECK_THROWS_AS(init_single_photon(4, 4), InvalidArgument);
}

TEST_CASE("coherent state") {
  const InitialState s = init_coherent(3, 1, cplx(1.0));
  CHECK(s.moments.N(1, 1).real() == 1.0);
  CHECK(s.g2(1, 1, 1, 1).real() == doctest::Approx(2.0));
  CHECK(s.moments.M(1, 1) == cplx(1.0));

  const cplx a = std::polar(0.8, 0.4);
  const InitialState t = init_coherent(3, 0, a);
  CHECK(std::abs(t.moments.M(0, 0) - a * a) < 1e-15);
  CHECK(max_diff(t.g2, wick_g2(t.moments)) < 1e-12);

  const InitialState vac = init_coherent(3, 0, cplx(0.0));
  CHECK(vac.moments.N.isZero());
  CHECK(vac.g2.data().isZero());
}

TEST_CASE("squeezed vacuum") {
  const double theta = 0.3;
  const InitialState s = init_sq_vacuum(3, 0, kR, theta);
  CHECK(s.moments.N(0, 0).real() == doctest::Approx(1.0));
  CHECK(s.g2(0, 0, 0, 0).real() == doctest::Approx(5.0));
  const cplx want = -std::polar(1.0, theta) * std::sinh(kR) * std::cosh(kR);
  CHECK(std::abs(s.moments.M(0, 0) - want) < 1e-14);
  CHECK(s.moments.alpha.isZero());

  const InitialState vac = init_sq_vacuum(3, 0, 0.0);
  CHECK(vac.moments.N.isZero());
  CHECK(vac.moments.M.isZero());
  CHECK_THROWS_AS(init_sq_vacuum(3, 0, -0.1), InvalidArgument);
}

TEST_CASE("two-mode squeezed vacuum") {
  const InitialState s = init_two_mode_sq(4, 0, 3, kR, 0.2);
  CHECK(s.moments.N(0, 0).real() == doctest::Approx(1.0));
  CHECK(s.moments.N(3, 3).real() == doctest::Approx(1.0));
  CHECK(s.moments.N(0, 3) == cplx(0.0));
  CHECK(s.moments.M(0, 3) == s.moments.M(3, 0));
  CHECK(std::abs(s.moments.M(0, 3) + std::polar(1.0, 0.2) * std::sinh(kR) * std::cosh(kR)) < 1e-14);
  CHECK(s.moments.M(0, 0) == cplx(0.0));
  // <n_a n_b> = sinh^4 + sinh^2 cosh^2
  CHECK(s.g2(0, 0, 3, 3).real() == doctest::Approx(1.0 + 2.0));

  CHECK(init_two_mode_sq(4, 0, 3, 0.0).moments.N.isZero());
  CHECK_THROWS_AS(init_two_mode_sq(4, 1, 1, kR), InvalidArgument);
}

TEST_CASE("Wick factorization of the vacuum") { CHECK(wick_g2(Moments::vacuum(3)).data().isZero()); }

TEST_CASE("every initializer is Hermitian") {
  CHECK(init_single_photon(3, 1).g2.hermiticity_defect() == 0.0);
  CHECK(init_coherent(3, 1, std::polar(1.2, 0.7)).g2.hermiticity_defect() < 1e-14);
  CHECK(init_sq_vacuum(3, 1, kR, 0.4).g2.hermiticity_defect() < 1e-14);
  CHECK(init_two_mode_sq(3, 0, 2, kR, 0.4).g2.hermiticity_defect() < 1e-14);
}

TEST_CASE("independent Gaussian states combine") {
  const InitialState a = init_coherent(3, 0, cplx(0.5, 0.2));
  const InitialState b = init_sq_vacuum(3, 2, 0.4);
  const InitialState c = combine_gaussian(a.moments, b.moments);
  CHECK(c.moments.total_photons() == doctest::Approx(a.moments.total_photons() + b.moments.total_photons()));
  CHECK(c.g2(0, 0, 2, 2).real() == doctest::Approx(a.moments.N(0, 0).real() * b.moments.N(2, 2).real()));
  CHECK(combine_gaussian(Moments::vacuum(3), b.moments).g2.data().isApprox(b.g2.data()));
}

TEST_CASE("single precision") {
  const auto s = init_sq_vacuum<float>(3, 0, static_cast<float>(kR));
  CHECK(s.moments.N(0, 0).real() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(s.g2(0, 0, 0, 0).real() == doctest::Approx(5.0).epsilon(1e-5));
}

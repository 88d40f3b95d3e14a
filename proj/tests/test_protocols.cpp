#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sshq/protocols.hpp"

using namespace sshq;

namespace {

constexpr double kPi = std::numbers::pi;

ExperimentConfig small_transport() {
  ExperimentConfig cfg;
  cfg.name = "small";
  cfg.lattice = {20, 0.69, 3.22, {9}, {}, BondKind::intra};
  cfg.bend = {1.5, 5.5};
  cfg.moves = {{0, Direction::right}};
  cfg.dz = 5e-3;
  cfg.sample_every = 50;
  const double r = std::asinh(1.0);
  cfg.inputs = {{InputKind::single_photon, {}, 1.0, 0.0, "fock"},
                {InputKind::coherent, {}, 1.0, 0.0, "coherent"},
                {InputKind::squeezed, {}, r, 0.0, "squeezed"},
                {InputKind::two_mode_squeezed, {}, r, 0.0, "pair"}};
  return cfg;
}

ExperimentConfig small_splitter() {
  ExperimentConfig cfg;
  cfg.name = "splitter";
  cfg.lattice = {14, 0.69, 3.22, {4, 9}, {}, BondKind::intra};
  cfg.bend = {1.5, 3.0};
  cfg.dz = 1e-2;
  cfg.uz_int = {0.0, 0.5, 1.0, 1.5};
  cfg.inputs = {{InputKind::single_photon, {}, 1.0, 0.0, "fock"},
                {InputKind::squeezed, {}, std::asinh(1.0), 0.0, "squeezed"}};
  return cfg;
}

}  // namespace

TEST_CASE("input kinds round-trip through their names") {
  for (InputKind k : {InputKind::single_photon, InputKind::coherent, InputKind::squeezed, InputKind::two_mode_squeezed})
    CHECK(input_kind_from_string(to_string(k)) == k);
  CHECK_THROWS_AS(input_kind_from_string("thermal"), InvalidArgument);
}

TEST_CASE("preparing inputs") {
  CHECK(prepare({InputKind::single_photon, {2}, 1.0, 0.0, ""}, 4).moments.N(2, 2) == cplx(1.0));
  const InitialState two = prepare({InputKind::squeezed, {0, 3}, 0.5, 0.0, ""}, 4);
  CHECK(two.moments.N(0, 0).real() == doctest::Approx(std::pow(std::sinh(0.5), 2)));
  CHECK(two.moments.N(3, 3).real() == doctest::Approx(std::pow(std::sinh(0.5), 2)));
  CHECK(two.g2(0, 0, 3, 3).real() == doctest::Approx(std::pow(std::sinh(0.5), 4)));
  CHECK_THROWS_AS(prepare({InputKind::two_mode_squeezed, {1}, 0.5, 0.0, ""}, 4), InvalidArgument);
  CHECK_THROWS_AS(prepare({InputKind::single_photon, {}, 1.0, 0.0, ""}, 4), InvalidArgument);
  CHECK_THROWS_AS(prepare({InputKind::squeezed, {1, 1}, 0.5, 0.0, ""}, 4), InvalidArgument);
}

TEST_CASE("configuration validation") {
  ExperimentConfig cfg = small_transport();
  CHECK_NOTHROW(cfg.validate());
  cfg.dz = 0.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = small_transport();
  cfg.moves = {{3, Direction::right}};
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = small_transport();
  cfg.inputs[0].sites = {40};
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
}

TEST_CASE("default interaction grid") {
  const auto grid = default_uz_grid();
  REQUIRE(grid.size() == 40);
  CHECK(grid.front() == 0.0);
  CHECK(grid.back() == doctest::Approx(kPi));
}

TEST_CASE("transport through a small lattice") {
  const ExperimentConfig cfg = small_transport();
  const auto runs = transport_experiment(cfg);
  REQUIRE(runs.size() == 4);
  for (const auto& r : runs) {
    CHECK(r.source == 9);
    CHECK(r.target == 11);
    CHECK(r.transmission > 0.0);
    CHECK(r.transmission <= 1.0 + 1e-12);
    CHECK(r.trajectory.meta.max_trace_drift < 1e-10);
    CHECK(r.warnings.empty());
  }
  // photons launched at the wall move identically; the paired input also carries edge photons
  CHECK(runs[1].transmission == doctest::Approx(runs[0].transmission).epsilon(1e-10));
  CHECK(runs[2].transmission == doctest::Approx(runs[0].transmission).epsilon(1e-10));
  CHECK(runs[3].transmission == doctest::Approx(runs[0].transmission).epsilon(1e-3));
  // the squeezing axis rides along with the wall
  CHECK(std::abs(phase_difference(runs[2].single_end.phase, runs[2].single_start.phase)) < 0.05);
  CHECK(min_bulk_gap(transport_schedule(cfg), 16) > 0.5);
}

TEST_CASE("transport without moves is a straight section") {
  ExperimentConfig cfg = small_transport();
  cfg.moves.clear();
  const CouplingSchedule s = transport_schedule(cfg);
  REQUIRE(s.segments().size() == 1);
  CHECK_FALSE(s.segments()[0].is_bend());
  CHECK(s.total_length() == doctest::Approx(cfg.bend.length));
}

TEST_CASE("straight segment propagator is exact") {
  const LatticeSpec spec{6, 0.69, 3.22, {3}, {}, BondKind::intra};
  const CouplingSchedule s = CouplingSchedule::straight(spec, 2.0);
  const MatrixXc u = segment_propagator(s, 0, 0.01);
  CHECK((u - unitary_from_hamiltonian(build_ssh(spec), 2.0)).cwiseAbs().maxCoeff() < 1e-12);
  SegmentCache cache;
  CHECK((schedule_propagator(s, 0.01, &cache) - u).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("composed propagator matches the stepped run") {
  const ExperimentConfig cfg = small_transport();
  const CouplingSchedule s = transport_schedule(cfg).then(CouplingSchedule::straight(spec_at_end(cfg.lattice, transport_schedule(cfg)), 1.0));
  RunOptions options;
  options.dz = cfg.dz;
  const Trajectory t = run(s, init_single_photon(20, 9), options);
  CHECK((schedule_propagator(s, cfg.dz) - t.propagator).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("cos^2 fit") {
  std::vector<double> x, y;
  for (int k = 0; k < 30; ++k) {
    x.push_back(0.1 * k);
    y.push_back(0.7 * std::pow(std::cos(x.back() + 0.3), 2) + 0.1);
  }
  const Cos2Fit fit = fit_cos2(x, y, kPi);
  CHECK(fit.amplitude == doctest::Approx(0.7));
  CHECK(fit.offset == doctest::Approx(0.1));
  CHECK(fit.relative_error() < 1e-12);
  CHECK(fit_cos2(x, y, 2.5).relative_error() > 0.01);
  CHECK_THROWS_AS(fit_cos2({0.0, 1.0}, {1.0, 2.0}, kPi), InvalidArgument);
}

TEST_CASE("beam splitter on a small lattice") {
  const ExperimentConfig cfg = small_splitter();
  const BeamSplitterResult r = beamsplitter_experiment(cfg);
  CHECK(r.out_a == 4);
  CHECK(r.out_b == 9);
  REQUIRE(r.sweeps.size() == 2);
  REQUIRE(r.z_int.size() == 4);
  CHECK(r.z_int[2] == doctest::Approx(1.0 / 0.69));
  for (const auto& rec : r.sweeps[0].records) {
    CHECK(rec.n_a >= 0.0);
    CHECK(rec.n_a + rec.n_b <= rec.n_total + 1e-12);
    CHECK(rec.n_total == doctest::Approx(1.0));
    CHECK(std::abs(rec.g2_aabb) < 1e-12);
    CHECK(rec.accumulated_defect < 1e-10);
  }
  // one squeezer on each wall
  for (const auto& rec : r.sweeps[1].records) CHECK(rec.n_total == doctest::Approx(2.0).epsilon(1e-10));

  // the same uz point reached through two different grids gives the same record
  ExperimentConfig one = cfg;
  one.uz_int = {1.0};
  const BeamSplitterResult single = beamsplitter_experiment(one);
  CHECK(single.sweeps[0].records[0].n_a == doctest::Approx(r.sweeps[0].records[2].n_a).epsilon(1e-12));

  const auto obs = splitter_observables(r.sweeps[1].records[0]);
  for (const char* key : {"n_a", "n_b", "n_total", "g2_aaaa", "g2_bbbb", "g2_aabb", "single_a_min_variance",
                          "single_a_db", "pair_min_variance", "pair_db"})
    CHECK(obs.count(key) == 1);
}

TEST_CASE("aggregate") {
  const MeanStd same = aggregate({{0.1, 0.7}, {0.1, 0.7}, {0.1, 0.7}});
  CHECK(same.mean[0] == 0.1);
  CHECK(same.mean[1] == 0.7);
  CHECK(same.std[0] == 0.0);
  CHECK(same.std[1] == 0.0);
  const MeanStd spread = aggregate({{1.0}, {2.0}, {3.0}, {4.0}});
  CHECK(spread.mean[0] == doctest::Approx(2.5));
  CHECK(spread.std[0] == doctest::Approx(std::sqrt(1.25)));
  CHECK_THROWS_AS(aggregate({}), InvalidArgument);
  CHECK_THROWS_AS(aggregate({{1.0}, {1.0, 2.0}}), InvalidArgument);
}

TEST_CASE("disorder ensembles") {
  ExperimentConfig cfg = small_splitter();
  cfg.uz_int = {0.5, 1.2};
  cfg.disorder = DisorderSpec{DisorderKind::coupling, 0.0, 3, 11};
  const BeamSplitterResult clean = beamsplitter_experiment(cfg);

  const EnsembleResult zero = disorder_ensemble(cfg, DisorderKind::coupling, 0.0, 3);
  CHECK(zero.realizations.size() == 3);
  CHECK(zero.clamp_events == 0);
  const MeanStd& n_a = zero.stats.at("fock").at("n_a");
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(n_a.mean[k] == clean.sweeps[0].records[k].n_a);
    CHECK(n_a.std[k] == 0.0);
  }

  const EnsembleResult a = disorder_ensemble(cfg, DisorderKind::onsite, 0.3, 2);
  const EnsembleResult b = disorder_ensemble(cfg, DisorderKind::onsite, 0.3, 2);
  CHECK(a.stats.at("fock").at("n_a").mean == b.stats.at("fock").at("n_a").mean);
  CHECK(a.stats.at("fock").at("n_a").std[0] > 0.0);

  cfg.disorder->base_seed = 12;
  const EnsembleResult c = disorder_ensemble(cfg, DisorderKind::onsite, 0.3, 2);
  CHECK(c.stats.at("fock").at("n_a").mean != a.stats.at("fock").at("n_a").mean);
  // realization 1 of seed 11 is realization 0 of seed 12
  CHECK(c.realizations[0].sweeps[0].records[0].n_a == a.realizations[1].sweeps[0].records[0].n_a);

  const EnsembleResult coupling = disorder_ensemble(cfg, DisorderKind::coupling, 0.3, 2);
  for (double x : coupling.chiral_asymmetry) CHECK(x < 1e-12);
}

TEST_CASE("slope optimization") {
  ExperimentConfig cfg = small_transport();
  cfg.inputs.resize(1);
  const SlopeScan scan = optimize_slope(cfg, {0.5, 1.5, 5.0});
  REQUIRE(scan.transmission.size() == 3);
  double best = 0.0;
  for (double t : scan.transmission) best = std::max(best, t);
  CHECK(scan.best_transmission == best);

  const SlopeScan tie = optimize_slope(cfg, {1.5, 1.5});
  CHECK(tie.transmission[0] == tie.transmission[1]);
  CHECK(tie.best_slope == 1.5);

  const SlopeScan one = optimize_slope(cfg, {2.0});
  CHECK(one.best_slope == 2.0);
  CHECK_THROWS_AS(optimize_slope(cfg, {}), InvalidArgument);
  CHECK_THROWS_AS(optimize_slope(cfg, {-1.0}), InvalidArgument);
}

TEST_CASE("parallel_for") {
  std::vector<std::atomic<int>> hits(50);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i]++; });
  for (const auto& h : hits) CHECK(h.load() == 1);
  parallel_for(0, 4, [&](std::size_t) { FAIL("no work expected"); });
  CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) {
                    if (i == 7) throw std::runtime_error("boom");
                  }),
                  std::runtime_error);
}

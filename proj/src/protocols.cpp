// protocols.cpp: end-to-end experiments built on the moment engine

#include "sshq/protocols.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include <Eigen/Eigenvalues>

namespace sshq {

std::string to_string(InputKind kind) {
  switch (kind) {
    case InputKind::single_photon: return "single_photon";
    case InputKind::coherent: return "coherent";
    case InputKind::squeezed: return "squeezed";
    case InputKind::two_mode_squeezed: return "two_mode_squeezed";
  }
  return "unknown";
}

InputKind input_kind_from_string(const std::string& name) {
  if (name == "single_photon") return InputKind::single_photon;
  if (name == "coherent") return InputKind::coherent;
  if (name == "squeezed") return InputKind::squeezed;
  if (name == "two_mode_squeezed") return InputKind::two_mode_squeezed;
  throw InvalidArgument("unknown input kind '" + name + "'");
}

InitialState prepare(const InputSpec& input, Index n_sites) {
  require(!input.sites.empty(), "input needs at least one site");
  switch (input.kind) {
    case InputKind::single_photon:
      require(input.sites.size() == 1, "single photon input takes one site");
      return init_single_photon(n_sites, input.sites[0]);
    case InputKind::coherent:
      require(input.sites.size() == 1, "coherent input takes one site");
      return init_coherent(n_sites, input.sites[0], std::polar(input.magnitude, input.phase));
    case InputKind::squeezed: {
      InitialState state = init_sq_vacuum(n_sites, input.sites[0], input.magnitude, input.phase);
      for (std::size_t k = 1; k < input.sites.size(); ++k) {
        require(std::find(input.sites.begin(), input.sites.begin() + k, input.sites[k]) == input.sites.begin() + k,
                "squeezed input sites must be distinct");
        state = combine_gaussian(state.moments,
                                 init_sq_vacuum(n_sites, input.sites[k], input.magnitude, input.phase).moments);
      }
      return state;
    }
    case InputKind::two_mode_squeezed:
      require(input.sites.size() == 2, "two-mode squeezed input takes two sites");
      return init_two_mode_sq(n_sites, input.sites[0], input.sites[1], input.magnitude, input.phase);
  }
  throw InvalidArgument("unknown input kind");
}

void ExperimentConfig::validate() const {
  lattice.validate();
  require(bend.slope > 0.0 && std::isfinite(bend.slope), "bend slope must be positive");
  require(bend.length > 0.0 && std::isfinite(bend.length), "bend length must be positive");
  require(dz > 0.0 && std::isfinite(dz), "dz must be positive");
  require(sample_every > 0, "sample_every must be positive");
  require(threads >= 1, "threads must be at least 1");
  require(edge_site >= 0 && edge_site < lattice.n_sites, "edge site out of range");
  for (const auto& [wall, dir] : moves) require(wall < lattice.dw_positions.size(), "move refers to a missing wall");
  for (double x : uz_int) require(x >= 0.0 && std::isfinite(x), "uz_int values must be finite and non-negative");
  for (double s : slope_grid) require(s > 0.0 && std::isfinite(s), "slope grid values must be positive");
  for (const auto& in : inputs) {
    for (Index site : in.sites) require(site >= 0 && site < lattice.n_sites, "input site out of range");
    require(in.magnitude >= 0.0 && std::isfinite(in.magnitude), "input magnitude must be finite and non-negative");
    if (in.kind == InputKind::two_mode_squeezed && !in.sites.empty())
      require(in.sites.size() == 2 && in.sites[0] != in.sites[1], "two-mode squeezed input needs two distinct sites");
  }
  if (disorder) {
    require(disorder->delta >= 0.0 && std::isfinite(disorder->delta), "disorder strength must be non-negative");
    require(disorder->repetitions >= 1, "disorder repetitions must be at least 1");
  }
}

std::vector<double> default_uz_grid() {
  std::vector<double> grid(40);
  for (std::size_t k = 0; k < grid.size(); ++k) grid[k] = std::numbers::pi * static_cast<double>(k) / 39.0;
  return grid;
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& work) {
  const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, threads)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) work(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          work(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// ---------------------------------------------------------------------------
// Transport
// ---------------------------------------------------------------------------

CouplingSchedule transport_schedule(const ExperimentConfig& cfg) {
  if (cfg.moves.empty()) return CouplingSchedule::straight(cfg.lattice, cfg.bend.length);
  CouplingSchedule schedule = CouplingSchedule::straight(cfg.lattice, 0.0);
  for (const auto& [wall, direction] : cfg.moves)
    schedule = schedule.then(move_schedule(spec_at_end(cfg.lattice, schedule), wall, direction, cfg.bend));
  return schedule;
}

namespace {

std::string label_of(const InputSpec& in) { return in.label.empty() ? to_string(in.kind) : in.label; }

// True when some localized gap state of H peaks on `site`.
bool hosts_gap_state(const LatticeSpec& spec, Index site) {
  RealSpectrum spectrum = analyze(build_ssh(spec), default_gap_tolerance(spec));
  for (Index k : locate_gap_states(spectrum, default_gap_tolerance(spec))) {
    Index peak = 0;
    spectrum.states.col(k).cwiseAbs().maxCoeff(&peak);
    if (peak == site) return true;
  }
  return false;
}

}  // namespace

std::vector<TransportRun> transport_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  require(!cfg.inputs.empty(), "transport needs at least one input");
  const std::size_t wall = cfg.moves.empty() ? 0 : cfg.moves.front().first;
  require(wall < cfg.lattice.dw_positions.size(), "transport needs a domain wall");
  const CouplingSchedule schedule = transport_schedule(cfg);
  const Index source = cfg.lattice.dw_positions[wall];
  const Index target = schedule.final_walls()[wall];
  const Index n = cfg.lattice.n_sites;

  std::vector<std::string> shared;
  if (!hosts_gap_state(cfg.lattice, source)) {
    std::ostringstream os;
    os << "input site " << source << " does not host a gap state";
    shared.push_back(os.str());
  }

  std::vector<TransportRun> runs(cfg.inputs.size());
  parallel_for(runs.size(), cfg.threads, [&](std::size_t k) {
    TransportRun& out = runs[k];
    out.input = cfg.inputs[k];
    if (out.input.sites.empty()) {
      out.input.sites = {source};
      if (out.input.kind == InputKind::two_mode_squeezed) out.input.sites = {cfg.edge_site, source};
    }
    if (out.input.label.empty()) out.input.label = to_string(out.input.kind);
    out.source = source;
    out.target = target;
    out.warnings = shared;

    ObservableRequest request = cfg.extra_observables;
    request.site_photon_numbers = true;
    request.g2_entries.insert(request.g2_entries.begin(),
                              {G2Index{source, source, source, source}, G2Index{target, target, target, target}});
    const std::size_t q0 = request.quadratures.size();
    request.quadratures.push_back(QuadratureMode::single(source));
    request.quadratures.push_back(QuadratureMode::single(target));
    const bool pairs = cfg.edge_site != source && cfg.edge_site != target;
    if (pairs) {
      request.quadratures.push_back(QuadratureMode::pair(cfg.edge_site, source));
      request.quadratures.push_back(QuadratureMode::pair(cfg.edge_site, target));
    }

    RunOptions options;
    options.dz = cfg.dz;
    options.sample_every = cfg.sample_every;
    const InitialState state = prepare(out.input, n);
    out.trajectory = run(schedule, state, options, request);
    for (const auto& w : out.trajectory.meta.warnings) out.warnings.push_back(w);

    const double injected = state.moments.N(source, source).real();
    require(injected > 0.0, "input carries no photons at the moving wall");
    out.transmission = out.trajectory.samples.back().photon_numbers(target) / injected;
    const Sample& first = out.trajectory.samples.front();
    const Sample& last = out.trajectory.samples.back();
    out.single_start = first.min_phase[q0];
    out.single_end = last.min_phase[q0 + 1];
    if (pairs) {
      out.pair_start = first.min_phase[q0 + 2];
      out.pair_end = last.min_phase[q0 + 3];
    }
  });
  return runs;
}

double min_bulk_gap(const CouplingSchedule& schedule, int samples_per_segment) {
  require(samples_per_segment >= 1, "need at least one sample per segment");
  const double tol = 1e-3 * std::max(std::abs(schedule.u()), std::abs(schedule.v()));
  const RealSpectrum start = analyze(schedule.segment_hamiltonian(0, 0.0), tol);
  const std::size_t skip = locate_gap_states(start, tol).size();
  double gap = INFINITY;
  for (std::size_t s = 0; s < schedule.segments().size(); ++s) {
    const double length = schedule.segments()[s].length;
    for (int k = 0; k <= samples_per_segment; ++k) {
      const MatrixXr h = schedule.segment_hamiltonian(s, length * k / samples_per_segment);
      Eigen::SelfAdjointEigenSolver<MatrixXr> solver(h, Eigen::EigenvaluesOnly);
      gap = std::min(gap, bulk_gap(solver.eigenvalues(), skip));
    }
  }
  return gap;
}

// ---------------------------------------------------------------------------
// Beam splitter
// ---------------------------------------------------------------------------

MatrixXc segment_propagator(const CouplingSchedule& schedule, std::size_t segment, double dz) {
  const ScheduleSegment& seg = schedule.segments().at(segment);
  // A straight section has constant H, so its step product collapses to a single exponential.
  if (!seg.is_bend()) return unitary_from_hamiltonian(schedule.segment_hamiltonian(segment, 0.0), seg.length);
  const Index n = schedule.n_sites();
  MatrixXc total = MatrixXc::Identity(n, n);
  for (const Step& step : step_plan(schedule, dz))
    if (step.segment == segment) total = step_propagator(schedule, step) * total;
  return total;
}

const MatrixXc& SegmentCache::propagator(const CouplingSchedule& schedule, std::size_t segment, double dz) {
  std::lock_guard lock(mutex_);
  if (dz_ != dz) {
    entries_.clear();
    dz_ = dz;
  }
  const ScheduleSegment& key = schedule.segments().at(segment);
  for (const auto& [seg, u] : entries_)
    if (seg == key) return u;

  entries_.emplace_back(key, segment_propagator(schedule, segment, dz));
  return entries_.back().second;
}

MatrixXc schedule_propagator(const CouplingSchedule& schedule, double dz, SegmentCache* cache) {
  const Index n = schedule.n_sites();
  MatrixXc total = MatrixXc::Identity(n, n);
  for (std::size_t s = 0; s < schedule.segments().size(); ++s) {
    const bool cached = cache && schedule.segments()[s].is_bend();
    total = (cached ? cache->propagator(schedule, s, dz) : segment_propagator(schedule, s, dz)) * total;
  }
  return total;
}

Cos2Fit fit_cos2(const std::vector<double>& x, const std::vector<double>& y, double period) {
  require(x.size() == y.size() && x.size() >= 3, "cos^2 fit needs at least three points");
  require(period > 0.0, "period must be positive");
  // A cos^2(w x + phi) + c = (A/2 + c) + (A/2) cos(2 phi) cos(2 w x) - (A/2) sin(2 phi) sin(2 w x)
  const double w = std::numbers::pi / period;
  const Index m = static_cast<Index>(x.size());
  MatrixXr design(m, 3);
  VectorXr rhs(m);
  for (Index i = 0; i < m; ++i) {
    design(i, 0) = 1.0;
    design(i, 1) = std::cos(2.0 * w * x[i]);
    design(i, 2) = std::sin(2.0 * w * x[i]);
    rhs(i) = y[i];
  }
  const VectorXr coef = design.colPivHouseholderQr().solve(rhs);
  Cos2Fit fit;
  const double half = std::hypot(coef(1), coef(2));
  fit.amplitude = 2.0 * half;
  fit.phase = 0.5 * std::atan2(-coef(2), coef(1));
  fit.offset = coef(0) - half;
  fit.rms_residual = std::sqrt((design * coef - rhs).squaredNorm() / static_cast<double>(m));
  return fit;
}

namespace {

InputSpec resolve_splitter_input(InputSpec in, Index a, Index b) {
  if (in.sites.empty()) {
    if (in.kind == InputKind::single_photon || in.kind == InputKind::coherent)
      in.sites = {a};
    else
      in.sites = {a, b};
  }
  if (in.label.empty()) in.label = to_string(in.kind);
  return in;
}

SplitterRecord record_outputs(const InitialState& state, const MatrixXc& U, Index a, Index b) {
  const Moments m = evolve_moments(state.moments, U);
  SplitterRecord r;
  r.n_a = m.N(a, a).real();
  r.n_b = m.N(b, b).real();
  r.n_total = m.total_photons();
  r.g2_aaaa = evolved_g2_entry(state.g2, U, a, a, a, a).real();
  r.g2_bbbb = evolved_g2_entry(state.g2, U, b, b, b, b).real();
  r.g2_aabb = evolved_g2_entry(state.g2, U, a, a, b, b).real();
  r.single_a = min_variance_phase(m, QuadratureMode::single(a));
  r.single_b = min_variance_phase(m, QuadratureMode::single(b));
  r.pair = min_variance_phase(m, QuadratureMode::pair(a, b));
  r.accumulated_defect = unitarity_defect(U);
  return r;
}

CouplingSchedule with_offsets(CouplingSchedule schedule, const VectorXr* bonds, const VectorXr* sites) {
  if (!bonds && !sites) return schedule;
  const VectorXr b = bonds ? *bonds : schedule.bond_disorder();
  const VectorXr s = sites ? *sites : schedule.onsite_disorder();
  return schedule.with_disorder(b, s);
}

}  // namespace

BeamSplitterResult beamsplitter_experiment(const ExperimentConfig& cfg, const VectorXr* bond_offsets,
                                           const VectorXr* onsite_offsets) {
  cfg.validate();
  require(!cfg.inputs.empty(), "beam splitter needs at least one input");
  const LatticeSpec& spec = cfg.lattice;
  require(cfg.wall_b < spec.dw_positions.size() && cfg.wall_a < cfg.wall_b, "beam splitter needs two walls a < b");

  BeamSplitterResult out;
  out.uz_int = cfg.uz_int.empty() ? default_uz_grid() : cfg.uz_int;
  out.out_a = spec.dw_positions[cfg.wall_a];
  out.out_b = spec.dw_positions[cfg.wall_b];
  out.approach_length = approach_length(spec, cfg.wall_a, cfg.wall_b, cfg.bend);
  for (double uz : out.uz_int) out.z_int.push_back(uz / spec.u);

  const Index n = spec.n_sites;
  std::vector<InitialState> states;
  for (const auto& in : cfg.inputs) {
    out.sweeps.push_back({resolve_splitter_input(in, out.out_a, out.out_b), {}});
    states.push_back(prepare(out.sweeps.back().input, n));
    out.sweeps.back().records.resize(out.uz_int.size());
  }

  SegmentCache cache;
  std::vector<MatrixXc> propagators(out.uz_int.size());
  bool clamped = false;
  std::mutex flag_mutex;
  parallel_for(out.uz_int.size(), cfg.threads, [&](std::size_t k) {
    const CouplingSchedule schedule = with_offsets(
        merge_split_schedule(spec, cfg.wall_a, cfg.wall_b, out.z_int[k], cfg.bend), bond_offsets, onsite_offsets);
    if (schedule.coupling_clamped()) {
      std::lock_guard lock(flag_mutex);
      clamped = true;
    }
    const MatrixXc U = schedule_propagator(schedule, cfg.dz, &cache);
    for (std::size_t i = 0; i < states.size(); ++i)
      out.sweeps[i].records[k] = record_outputs(states[i], U, out.out_a, out.out_b);
    propagators[k] = U;
  });
  if (clamped) out.warnings.emplace_back("disorder drove at least one coupling below the floor; clamped");

  double worst = 0.0;
  for (const auto& U : propagators) worst = std::max(worst, unitarity_defect(U));
  if (worst > 1e-9) {
    std::ostringstream os;
    os << "accumulated propagator unitarity defect " << worst;
    out.warnings.push_back(os.str());
  }

  out.uz_offset = std::numeric_limits<double>::quiet_NaN();
  for (const auto& sweep : out.sweeps) {
    if (sweep.input.kind != InputKind::single_photon || out.uz_int.size() < 3) continue;
    std::vector<double> share;
    for (const auto& r : sweep.records) share.push_back(r.n_a / r.n_total);
    // Transfer follows cos^2(uz + offset); the fitted phase is that offset.
    out.uz_offset = fit_cos2(out.uz_int, share, std::numbers::pi).phase;
    break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Disorder ensembles
// ---------------------------------------------------------------------------

std::map<std::string, double> splitter_observables(const SplitterRecord& r) {
  return {
      {"n_a", r.n_a},
      {"n_b", r.n_b},
      {"n_total", r.n_total},
      {"g2_aaaa", r.g2_aaaa},
      {"g2_bbbb", r.g2_bbbb},
      {"g2_aabb", r.g2_aabb},
      {"single_a_min_variance", r.single_a.variance},
      {"single_b_min_variance", r.single_b.variance},
      {"pair_min_variance", r.pair.variance},
      {"single_a_db", squeezing_db(r.single_a.variance)},
      {"single_b_db", squeezing_db(r.single_b.variance)},
      {"pair_db", squeezing_db(r.pair.variance)},
  };
}

MeanStd aggregate(const std::vector<std::vector<double>>& samples) {
  require(!samples.empty(), "nothing to aggregate");
  const std::size_t width = samples.front().size();
  for (const auto& s : samples) require(s.size() == width, "ragged samples");
  const double count = static_cast<double>(samples.size());
  MeanStd out{std::vector<double>(width), std::vector<double>(width)};
  for (std::size_t k = 0; k < width; ++k) {
    // Shifted by the first sample so identical inputs give that value and zero spread exactly.
    const double pivot = samples.front()[k];
    double shift = 0.0;
    for (const auto& s : samples) shift += s[k] - pivot;
    shift /= count;
    double spread = 0.0;
    for (const auto& s : samples) {
      const double d = (s[k] - pivot) - shift;
      spread += d * d;
    }
    out.mean[k] = pivot + shift;
    out.std[k] = std::sqrt(spread / count);
  }
  return out;
}

namespace {

// Largest chiral asymmetry relative to the spectral radius along the schedule.
double schedule_chiral_asymmetry(const CouplingSchedule& schedule, int samples_per_segment) {
  double worst = 0.0;
  for (std::size_t s = 0; s < schedule.segments().size(); ++s) {
    const double length = schedule.segments()[s].length;
    for (int k = 0; k <= samples_per_segment; ++k) {
      const MatrixXr h = schedule.segment_hamiltonian(s, length * k / samples_per_segment);
      Eigen::SelfAdjointEigenSolver<MatrixXr> solver(h, Eigen::EigenvaluesOnly);
      const double scale = solver.eigenvalues().cwiseAbs().maxCoeff();
      if (scale > 0.0) worst = std::max(worst, chiral_asymmetry(solver.eigenvalues()) / scale);
    }
  }
  return worst;
}

}  // namespace

EnsembleResult disorder_ensemble(const ExperimentConfig& cfg, DisorderKind kind, double delta, int repetitions) {
  require(repetitions >= 1, "ensemble needs at least one repetition");
  require(delta >= 0.0, "disorder strength must be non-negative");
  EnsembleResult out;
  out.disorder.kind = kind;
  out.disorder.delta = delta;
  out.disorder.repetitions = repetitions;
  out.disorder.base_seed = cfg.disorder ? cfg.disorder->base_seed : 0;
  out.uz_int = cfg.uz_int.empty() ? default_uz_grid() : cfg.uz_int;

  // Realizations run one after another; each sweep is parallel over uz points.
  const CouplingSchedule reference = CouplingSchedule::straight(cfg.lattice, 0.0);
  const double longest = *std::max_element(out.uz_int.begin(), out.uz_int.end()) / cfg.lattice.u;
  for (int r = 0; r < repetitions; ++r) {
    const std::uint64_t seed = out.disorder.base_seed + static_cast<std::uint64_t>(r);
    const CouplingSchedule drawn = apply_disorder(reference, kind, delta, seed);
    try {
      BeamSplitterResult result = beamsplitter_experiment(cfg, &drawn.bond_disorder(), &drawn.onsite_disorder());
      const CouplingSchedule probe =
          merge_split_schedule(cfg.lattice, cfg.wall_a, cfg.wall_b, longest, cfg.bend)
              .with_disorder(drawn.bond_disorder(), drawn.onsite_disorder());
      if (probe.coupling_clamped()) ++out.clamp_events;
      out.chiral_asymmetry.push_back(schedule_chiral_asymmetry(probe, 16));
      out.realizations.push_back(std::move(result));
    } catch (const std::exception& e) {
      std::ostringstream os;
      os << "realization " << r << " (seed " << seed << "): " << e.what();
      out.failures.push_back(os.str());
    }
  }
  if (out.realizations.empty()) return out;

  const auto& first = out.realizations.front();
  for (std::size_t i = 0; i < first.sweeps.size(); ++i) {
    const std::string label = label_of(first.sweeps[i].input);
    std::map<std::string, std::vector<std::vector<double>>> by_name;
    for (const auto& real : out.realizations) {
      std::map<std::string, std::vector<double>> curve;
      for (const auto& rec : real.sweeps[i].records)
        for (const auto& [name, value] : splitter_observables(rec)) curve[name].push_back(value);
      for (auto& [name, values] : curve) by_name[name].push_back(std::move(values));
    }
    for (const auto& [name, samples] : by_name) out.stats[label][name] = aggregate(samples);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Slope optimization
// ---------------------------------------------------------------------------

SlopeScan optimize_slope(const ExperimentConfig& cfg, const std::vector<double>& slopes) {
  require(!slopes.empty(), "slope grid is empty");
  require(!cfg.inputs.empty(), "slope optimization needs an input");
  for (double s : slopes) require(s > 0.0 && std::isfinite(s), "slopes must be positive and finite");
  SlopeScan scan;
  scan.slopes = slopes;
  scan.transmission.resize(slopes.size());
  ExperimentConfig base = cfg;
  base.inputs = {cfg.inputs.front()};
  const int outer = cfg.threads;
  base.threads = 1;
  parallel_for(slopes.size(), outer, [&](std::size_t k) {
    ExperimentConfig local = base;
    local.bend.slope = slopes[k];
    scan.transmission[k] = transport_experiment(local).front().transmission;
  });
  scan.best_slope = slopes.front();
  scan.best_transmission = scan.transmission.front();
  for (std::size_t k = 1; k < slopes.size(); ++k) {
    const double t = scan.transmission[k];
    if (t > scan.best_transmission || (t == scan.best_transmission && slopes[k] < scan.best_slope)) {
      scan.best_slope = slopes[k];
      scan.best_transmission = t;
    }
  }
  return scan;
}

}  // namespace sshq

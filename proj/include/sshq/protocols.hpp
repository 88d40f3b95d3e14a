// protocols.hpp: end-to-end experiments: wall transport, two-wall beam splitter, disorder
// ensembles and bend-slope optimization

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "sshq/evolution.hpp"
#include "sshq/lattice.hpp"
#include "sshq/spectral.hpp"

namespace sshq {

enum class InputKind { single_photon, coherent, squeezed, two_mode_squeezed };

/// One input state. `squeezed` places an independent squeezer on every listed site;
/// `two_mode_squeezed` needs exactly two sites.
struct InputSpec {
  InputKind kind = InputKind::single_photon;
  std::vector<Index> sites;
  double magnitude = 1.0;  // |alpha| or r
  double phase = 0.0;      // arg alpha or theta
  std::string label;
};

std::string to_string(InputKind kind);
InputKind input_kind_from_string(const std::string& name);

InitialState prepare(const InputSpec& input, Index n_sites);

struct DisorderSpec {
  DisorderKind kind = DisorderKind::coupling;
  double delta = 0.0;
  int repetitions = 1;
  std::uint64_t base_seed = 0;
};

struct ExperimentConfig {
  std::string name = "experiment";
  LatticeSpec lattice;
  BendShape bend;
  std::vector<InputSpec> inputs;

  // transport: moves performed one after another (one bend segment each)
  std::vector<std::pair<std::size_t, Direction>> moves;
  Index edge_site = 0;  // partner of two-mode squeezed inputs and of two-mode quadratures

  // beam splitter
  std::size_t wall_a = 0;
  std::size_t wall_b = 1;
  std::vector<double> uz_int;  // dimensionless u z_int grid

  std::optional<DisorderSpec> disorder;
  std::vector<double> slope_grid;
  std::vector<double> band_deltas;

  double dz = 1e-3;
  int sample_every = 100;
  int threads = 1;
  ObservableRequest extra_observables;
  std::string config_hash;

  void validate() const;
};

/// 40 points over [0, pi].
std::vector<double> default_uz_grid();

// ---------------------------------------------------------------------------
// Transport
// ---------------------------------------------------------------------------

struct TransportRun {
  InputSpec input;
  Index source = 0;
  Index target = 0;
  Trajectory trajectory;
  double transmission = 0.0;
  PhaseLock single_start;  // single-mode quadrature at the source, z = 0
  PhaseLock single_end;    // single-mode quadrature at the target, z = end
  PhaseLock pair_start;    // (edge, source) two-mode quadrature at z = 0
  PhaseLock pair_end;      // (edge, target) two-mode quadrature at z = end
  std::vector<std::string> warnings;
};

/// Schedule made of the configured moves, in order.
CouplingSchedule transport_schedule(const ExperimentConfig& cfg);

/// Runs every configured input through the transport schedule. Inputs without sites are injected
/// at the moving wall.
std::vector<TransportRun> transport_experiment(const ExperimentConfig& cfg);

/// Minimum over z of the bulk gap around zero, skipping the states that sit in the gap at z = 0.
double min_bulk_gap(const CouplingSchedule& schedule, int samples_per_segment = 64);

// ---------------------------------------------------------------------------
// Beam splitter
// ---------------------------------------------------------------------------

/// Observables recorded at the two wall outputs for one interaction length.
struct SplitterRecord {
  double n_a = 0.0;
  double n_b = 0.0;
  double n_total = 0.0;
  double g2_aaaa = 0.0;
  double g2_bbbb = 0.0;
  double g2_aabb = 0.0;  // <n_a n_b>
  PhaseLock single_a;
  PhaseLock single_b;
  PhaseLock pair;  // (X_a + X_b)/sqrt 2
  double accumulated_defect = 0.0;
};

struct SplitterSweep {
  InputSpec input;
  std::vector<SplitterRecord> records;  // one per uz_int point
};

struct BeamSplitterResult {
  std::vector<double> uz_int;
  std::vector<double> z_int;
  Index out_a = 0;
  Index out_b = 0;
  double approach_length = 0.0;
  /// u times the interaction length picked up in the merge and split bends, from a cos^2 fit of the
  /// single-photon output (NaN when no single-photon input ran).
  double uz_offset = 0.0;
  std::vector<SplitterSweep> sweeps;  // one per input
  std::vector<std::string> warnings;
};

/// Product of one segment's steps; a straight section is a single exact exponential.
MatrixXc segment_propagator(const CouplingSchedule& schedule, std::size_t segment, double dz);

/// Propagators of every segment, reused across schedules sharing segments.
class SegmentCache {
 public:
  const MatrixXc& propagator(const CouplingSchedule& schedule, std::size_t segment, double dz);

 private:
  std::mutex mutex_;
  double dz_ = 0.0;
  std::vector<std::pair<ScheduleSegment, MatrixXc>> entries_;
};

/// Total propagator of a schedule, segment by segment with the same step plan as run().
MatrixXc schedule_propagator(const CouplingSchedule& schedule, double dz, SegmentCache* cache = nullptr);

/// y ~ A cos^2(pi x / period + phi) + c by linear least squares.
struct Cos2Fit {
  double amplitude = 0.0;
  double phase = 0.0;
  double offset = 0.0;
  double rms_residual = 0.0;
  double relative_error() const { return amplitude != 0.0 ? rms_residual / std::abs(amplitude) : INFINITY; }
};

Cos2Fit fit_cos2(const std::vector<double>& x, const std::vector<double>& y, double period);

/// Sweeps the interaction length. `bond_offsets` / `onsite_offsets` carry an optional static
/// disorder realization applied to every schedule of the sweep.
BeamSplitterResult beamsplitter_experiment(const ExperimentConfig& cfg, const VectorXr* bond_offsets = nullptr,
                                           const VectorXr* onsite_offsets = nullptr);

// ---------------------------------------------------------------------------
// Disorder ensembles
// ---------------------------------------------------------------------------

struct MeanStd {
  std::vector<double> mean;
  std::vector<double> std;
};

struct EnsembleResult {
  std::vector<double> uz_int;
  DisorderSpec disorder;
  /// stats[input label][observable name] over the uz grid
  std::map<std::string, std::map<std::string, MeanStd>> stats;
  std::vector<BeamSplitterResult> realizations;  // successful realizations only
  std::vector<std::string> failures;
  int clamp_events = 0;
  std::vector<double> chiral_asymmetry;  // per realization, max over sampled z, relative to ||H||
};

/// Scalar observables extracted from a splitter record, keyed by name.
std::map<std::string, double> splitter_observables(const SplitterRecord& r);

EnsembleResult disorder_ensemble(const ExperimentConfig& cfg, DisorderKind kind, double delta, int repetitions);

/// Mean and population standard deviation, two-pass.
MeanStd aggregate(const std::vector<std::vector<double>>& samples);

// ---------------------------------------------------------------------------
// Slope optimization
// ---------------------------------------------------------------------------

struct SlopeScan {
  std::vector<double> slopes;
  std::vector<double> transmission;
  double best_slope = 0.0;
  double best_transmission = 0.0;
};

/// Transmission of the first input for each slope; argmax with ties going to the smaller slope.
SlopeScan optimize_slope(const ExperimentConfig& cfg, const std::vector<double>& slopes);

/// Runs `work(i)` for i in [0, count) on up to `threads` workers.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& work);

}  // namespace sshq

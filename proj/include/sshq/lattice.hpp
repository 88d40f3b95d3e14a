// lattice.hpp: SSH chains with domain walls, bending schedules and static disorder

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sshq/types.hpp"

namespace sshq {

/// Which of the two SSH couplings a bond carries. Values are resolved against (u, v) late,
/// so moves and disorder act on the labelling and never on stale numbers.
enum class BondKind : std::uint8_t { intra, inter };

constexpr BondKind other(BondKind k) { return k == BondKind::intra ? BondKind::inter : BondKind::intra; }

/// Static description of a dimerized chain.
///
/// Bond b joins sites b and b+1. A domain wall at site m means bonds m-1 and m carry the same
/// wall coupling (u by default); the dimerization alternates outward from every wall. Without
/// walls, bond 0 is intra-cell (u).
struct LatticeSpec {
  Index n_sites = 0;
  double u = 0.0;  // intra-cell coupling, cm^-1
  double v = 0.0;  // inter-cell coupling, cm^-1
  std::vector<Index> dw_positions;
  VectorXr onsite;  // empty means all zero
  BondKind wall = BondKind::intra;

  double delta() const { return v / u; }
  bool topological() const { return delta() > 1.0; }
  double coupling(BondKind k) const { return k == BondKind::intra ? u : v; }

  /// Throws InvalidArgument when an invariant is broken.
  void validate() const;
};

/// Per-bond labels implied by the wall layout. Validates the spec.
std::vector<BondKind> bond_kinds(const LatticeSpec& spec);

/// Real symmetric tridiagonal Hamiltonian of the chain.
MatrixXr build_ssh(const LatticeSpec& spec);

/// Tridiagonal assembly from bond couplings (size n-1) and on-site terms (size n, or empty).
MatrixXr tridiagonal(const VectorXr& bonds, const VectorXr& onsite);

// ---------------------------------------------------------------------------
// Coupling versus waveguide separation, C = c2 exp(-c1 D)
// ---------------------------------------------------------------------------

struct DistanceModel {
  double c1 = 0.0;  // um^-1
  double c2 = 0.0;  // cm^-1
};

double coupling_from_distance(double distance_um, const DistanceModel& model);

/// Fits the exponential law through two (distance, coupling) anchors.
DistanceModel calibrate_distance_model(double d_a, double c_a, double d_b, double c_b);

// ---------------------------------------------------------------------------
// S-shaped bend profile
// ---------------------------------------------------------------------------

/// f(z) = A - B e^{-Z/z} / (s e^{-1/(1-z/Z)} + e^{-Z/z}), continuous on [0, Z] with f(0) = A and
/// f(Z) = A - B.
struct BendProfile {
  double A = 0.0;
  double B = 0.0;
  double s = 1.5;
  double z_m = 5.5;

  /// Validating constructor: rejects non-positive s or Z and non-monotone shapes.
  static BendProfile make(double A, double B, double s, double z_m);
};

double bend_profile(double z, const BendProfile& p);

/// Smooth switching function in [0, 1] shared by every profile: f = A - B * bend_fraction.
double bend_fraction(double z, double s, double z_m);

struct ProfileParams {
  double A;
  double B;
};

ProfileParams solve_profile_params(double c_start, double c_end);

/// Slope and duration shared by every bond modulated in a bend segment.
struct BendShape {
  double slope = 1.5;
  double length = 5.5;  // cm
};

// ---------------------------------------------------------------------------
// z-dependent coupling schedules
// ---------------------------------------------------------------------------

enum class Direction { left, right };

/// One piece of a schedule. Bonds whose kind differs between start and end are ramped with the
/// bend profile; the rest are constant. A segment with identical labels is a straight section.
struct ScheduleSegment {
  double length = 0.0;
  double slope = 1.5;
  std::vector<BondKind> start;
  std::vector<BondKind> end;
  std::vector<Index> walls_start;
  std::vector<Index> walls_end;

  bool is_bend() const { return start != end; }
  bool operator==(const ScheduleSegment&) const = default;
};

enum class DisorderKind { coupling, onsite };

/// Immutable H(z) evaluator over [0, total_length()].
class CouplingSchedule {
 public:
  static constexpr double kCouplingFloor = 1e-6;

  CouplingSchedule() = default;

  /// A straight (z-independent) schedule of the given length.
  static CouplingSchedule straight(const LatticeSpec& spec, double length);

  Index n_sites() const { return n_sites_; }
  double u() const { return u_; }
  double v() const { return v_; }
  double total_length() const;
  const std::vector<ScheduleSegment>& segments() const { return segments_; }
  const VectorXr& onsite() const { return onsite_; }
  const VectorXr& bond_disorder() const { return bond_disorder_; }
  const VectorXr& onsite_disorder() const { return onsite_disorder_; }
  bool coupling_clamped() const { return clamped_; }

  /// Wall sites at the end of the schedule.
  const std::vector<Index>& final_walls() const;
  const std::vector<BondKind>& final_bonds() const;

  /// Bond couplings at z, disorder included, clamped at kCouplingFloor.
  VectorXr bonds_at(double z) const;
  VectorXr onsite_at(double z) const;
  MatrixXr hamiltonian(double z) const;

  /// Appends a segment; its start labelling must equal the current end labelling.
  void append(ScheduleSegment segment);

  /// Appends every segment of `next`, which must describe the same lattice.
  CouplingSchedule then(const CouplingSchedule& next) const;

  /// Returns a copy carrying one static disorder realization.
  CouplingSchedule with_disorder(const VectorXr& bond_offsets, const VectorXr& onsite_offsets) const;

  /// Index of the segment containing z together with the segment's start coordinate.
  std::pair<std::size_t, double> locate(double z) const;

  /// H(z) restricted to one segment, with z measured from the segment start.
  MatrixXr segment_hamiltonian(std::size_t index, double local_z) const;

 private:
  CouplingSchedule(Index n, double u, double v, VectorXr onsite, std::vector<BondKind> bonds,
                   std::vector<Index> walls);

  double value(BondKind k) const { return k == BondKind::intra ? u_ : v_; }
  void refresh_clamp_flag();

  Index n_sites_ = 0;
  double u_ = 0.0;
  double v_ = 0.0;
  VectorXr onsite_;
  VectorXr bond_disorder_;
  VectorXr onsite_disorder_;
  std::vector<BondKind> initial_bonds_;
  std::vector<Index> initial_walls_;
  std::vector<ScheduleSegment> segments_;
  bool clamped_ = false;
};

/// Moves wall number `wall` by one unit cell. The waveguide between the wall and its target is
/// bent: its bond toward the wall ramps to the bulk coupling, its outer bond ramps to the wall
/// coupling.
CouplingSchedule move_schedule(const LatticeSpec& spec, std::size_t wall, Direction direction,
                               const BendShape& shape);

/// Several walls moved in the same bend segment. Modulated bonds must be disjoint.
CouplingSchedule simultaneous_moves(const LatticeSpec& spec,
                                    const std::vector<std::pair<std::size_t, Direction>>& moves,
                                    const BendShape& shape);

/// Approach, interaction for `z_int`, and return of walls `wall_a` < `wall_b`.
CouplingSchedule merge_split_schedule(const LatticeSpec& spec, std::size_t wall_a, std::size_t wall_b,
                                      double z_int, const BendShape& shape);

/// Length of the approach stage of merge_split_schedule.
double approach_length(const LatticeSpec& spec, std::size_t wall_a, std::size_t wall_b,
                       const BendShape& shape);

/// One static realization, uniform in [-delta, delta] per bond or per site.
CouplingSchedule apply_disorder(const CouplingSchedule& schedule, DisorderKind kind, double delta,
                                std::uint64_t seed);

/// Spec of the lattice reached at the end of the schedule (same u, v, on-site terms).
LatticeSpec spec_at_end(const LatticeSpec& spec, const CouplingSchedule& schedule);

/// Sublattice parity operator diag((-1)^i).
VectorXr sublattice_parity(Index n);

}  // namespace sshq

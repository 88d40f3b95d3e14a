// lattice.cpp: SSH chains with domain walls, bending schedules and static disorder

#include "sshq/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace sshq {

namespace {

std::string site_list(const std::vector<Index>& sites) {
  std::ostringstream os;
  for (std::size_t i = 0; i < sites.size(); ++i) os << (i ? "," : "") << sites[i];
  return os.str();
}

// Kind of bond b given the walls: alternate outward from the nearest wall to the left, or from the
// first wall when the bond lies left of every wall.
BondKind kind_of_bond(Index b, const std::vector<Index>& walls, BondKind wall_kind) {
  if (walls.empty()) return b % 2 == 0 ? BondKind::intra : BondKind::inter;
  auto right = std::upper_bound(walls.begin(), walls.end(), b);
  if (right == walls.begin()) {
    const Index d = walls.front();
    return (d - 1 - b) % 2 == 0 ? wall_kind : other(wall_kind);
  }
  const Index d = *std::prev(right);
  return (b - d) % 2 == 0 ? wall_kind : other(wall_kind);
}

}  // namespace

void LatticeSpec::validate() const {
  require(n_sites >= 2, "lattice needs at least two sites");
  require(u > 0.0 && v >= 0.0, "coupling u must be positive and v non-negative");
  require(onsite.size() == 0 || onsite.size() == n_sites, "onsite vector must have one entry per site");
  for (std::size_t i = 0; i < dw_positions.size(); ++i) {
    const Index p = dw_positions[i];
    require(p >= 1 && p <= n_sites - 2,
            "domain wall at site " + std::to_string(p) + " is not strictly inside the chain");
    if (i > 0) {
      const Index gap = p - dw_positions[i - 1];
      require(gap > 0, "domain wall positions must be strictly increasing: " + site_list(dw_positions));
      require(gap > 1, "domain walls at adjacent sites: " + site_list(dw_positions));
      require(gap % 2 == 1, "consecutive domain walls must be an odd number of sites apart: " +
                                site_list(dw_positions));
    }
  }
}

std::vector<BondKind> bond_kinds(const LatticeSpec& spec) {
  spec.validate();
  std::vector<BondKind> kinds(static_cast<std::size_t>(spec.n_sites - 1));
  for (Index b = 0; b + 1 < spec.n_sites; ++b) kinds[b] = kind_of_bond(b, spec.dw_positions, spec.wall);
  return kinds;
}

MatrixXr tridiagonal(const VectorXr& bonds, const VectorXr& onsite) {
  const Index n = bonds.size() + 1;
  MatrixXr h = MatrixXr::Zero(n, n);
  for (Index b = 0; b + 1 < n; ++b) h(b, b + 1) = h(b + 1, b) = bonds(b);
  if (onsite.size() == n) h.diagonal() = onsite;
  return h;
}

MatrixXr build_ssh(const LatticeSpec& spec) {
  const auto kinds = bond_kinds(spec);
  VectorXr bonds(spec.n_sites - 1);
  for (Index b = 0; b < bonds.size(); ++b) bonds(b) = spec.coupling(kinds[b]);
  return tridiagonal(bonds, spec.onsite);
}

VectorXr sublattice_parity(Index n) {
  VectorXr p(n);
  for (Index i = 0; i < n; ++i) p(i) = i % 2 == 0 ? 1.0 : -1.0;
  return p;
}

double coupling_from_distance(double distance_um, const DistanceModel& model) {
  require(distance_um > 0.0, "waveguide distance must be positive");
  return model.c2 * std::exp(-model.c1 * distance_um);
}

DistanceModel calibrate_distance_model(double d_a, double c_a, double d_b, double c_b) {
  require(c_a > 0.0 && c_b > 0.0, "anchor couplings must be positive");
  require(d_a != d_b, "anchor distances must differ");
  const double c1 = std::log(c_b / c_a) / (d_a - d_b);
  require(c1 != 0.0, "equal anchor couplings give a degenerate (zero-decay) model");
  return {c1, c_a * std::exp(c1 * d_a)};
}

double bend_fraction(double z, double s, double z_m) {
  const double x = z / z_m;
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  // e^{-Z/z} / (s e^{-1/(1-x)} + e^{-Z/z}) rewritten as 1 / (1 + s e^{1/x - 1/(1-x)})
  const double t = 1.0 / x - 1.0 / (1.0 - x);
  if (t > 700.0) return 0.0;
  return 1.0 / (1.0 + s * std::exp(t));
}

BendProfile BendProfile::make(double A, double B, double s, double z_m) {
  require(s > 0.0, "bend slope must be positive");
  require(z_m > 0.0, "modulation length must be positive");
  BendProfile p{A, B, s, z_m};
  constexpr int kGrid = 512;
  double previous = bend_fraction(0.0, s, z_m);
  for (int i = 1; i <= kGrid; ++i) {
    const double g = bend_fraction(z_m * i / kGrid, s, z_m);
    require(g >= previous, "bend profile is not monotone for these parameters");
    previous = g;
  }
  return p;
}

double bend_profile(double z, const BendProfile& p) {
  require(z >= 0.0 && z <= p.z_m, "bend profile evaluated outside [0, Z_m]");
  return p.A - p.B * bend_fraction(z, p.s, p.z_m);
}

ProfileParams solve_profile_params(double c_start, double c_end) {
  require(c_start > 0.0 && c_end > 0.0, "profile endpoint couplings must be positive");
  return {c_start, c_start - c_end};
}

// ---------------------------------------------------------------------------
// CouplingSchedule
// ---------------------------------------------------------------------------

CouplingSchedule::CouplingSchedule(Index n, double u, double v, VectorXr onsite, std::vector<BondKind> bonds,
                                   std::vector<Index> walls)
    : n_sites_(n),
      u_(u),
      v_(v),
      onsite_(onsite.size() == n ? std::move(onsite) : VectorXr::Zero(n)),
      bond_disorder_(VectorXr::Zero(n - 1)),
      onsite_disorder_(VectorXr::Zero(n)),
      initial_bonds_(std::move(bonds)),
      initial_walls_(std::move(walls)) {}

CouplingSchedule CouplingSchedule::straight(const LatticeSpec& spec, double length) {
  require(length >= 0.0, "schedule length must be non-negative");
  CouplingSchedule s(spec.n_sites, spec.u, spec.v, spec.onsite, bond_kinds(spec), spec.dw_positions);
  if (length > 0.0) {
    ScheduleSegment seg;
    seg.length = length;
    seg.start = seg.end = s.initial_bonds_;
    seg.walls_start = seg.walls_end = s.initial_walls_;
    s.segments_.push_back(std::move(seg));
  }
  return s;
}

double CouplingSchedule::total_length() const {
  double total = 0.0;
  for (const auto& s : segments_) total += s.length;
  return total;
}

const std::vector<Index>& CouplingSchedule::final_walls() const {
  return segments_.empty() ? initial_walls_ : segments_.back().walls_end;
}

const std::vector<BondKind>& CouplingSchedule::final_bonds() const {
  return segments_.empty() ? initial_bonds_ : segments_.back().end;
}

void CouplingSchedule::append(ScheduleSegment segment) {
  require(segment.start == final_bonds(), "segment does not continue the schedule's bond layout");
  require(segment.length >= 0.0, "segment length must be non-negative");
  segments_.push_back(std::move(segment));
  refresh_clamp_flag();
}

CouplingSchedule CouplingSchedule::then(const CouplingSchedule& next) const {
  require(next.n_sites_ == n_sites_ && next.u_ == u_ && next.v_ == v_ && next.onsite_ == onsite_,
          "schedules describe different lattices");
  CouplingSchedule out = *this;
  for (const auto& seg : next.segments_) out.append(seg);
  return out;
}

std::pair<std::size_t, double> CouplingSchedule::locate(double z) const {
  const double total = total_length();
  const double slack = 1e-12 * std::max(1.0, total);
  if (z < -slack || z > total + slack) {
    throw NumericalError("z = " + std::to_string(z) + " lies outside the schedule domain [0, " +
                         std::to_string(total) + "]");
  }
  double start = 0.0;
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    if (z <= start + segments_[i].length || i + 1 == segments_.size()) return {i, start};
    start += segments_[i].length;
  }
  return {0, 0.0};
}

MatrixXr CouplingSchedule::segment_hamiltonian(std::size_t index, double local_z) const {
  VectorXr bonds(n_sites_ - 1);
  if (segments_.empty()) {
    for (Index b = 0; b < bonds.size(); ++b) bonds(b) = value(initial_bonds_[b]);
  } else {
    const auto& seg = segments_.at(index);
    const double frac = seg.is_bend() ? bend_fraction(std::clamp(local_z, 0.0, seg.length), seg.slope, seg.length)
                                      : 0.0;
    for (Index b = 0; b < bonds.size(); ++b) {
      const double a = value(seg.start[b]);
      bonds(b) = seg.start[b] == seg.end[b] ? a : a - (a - value(seg.end[b])) * frac;
    }
  }
  bonds += bond_disorder_;
  bonds = bonds.cwiseMax(kCouplingFloor);
  return tridiagonal(bonds, onsite_ + onsite_disorder_);
}

VectorXr CouplingSchedule::bonds_at(double z) const {
  const MatrixXr h = hamiltonian(z);
  return h.diagonal(1);
}

VectorXr CouplingSchedule::onsite_at(double z) const { return hamiltonian(z).diagonal(); }

MatrixXr CouplingSchedule::hamiltonian(double z) const {
  const auto [index, start] = locate(z);
  return segment_hamiltonian(index, z - start);
}

void CouplingSchedule::refresh_clamp_flag() {
  clamped_ = false;
  auto check = [&](const std::vector<BondKind>& kinds) {
    for (Index b = 0; b < n_sites_ - 1; ++b)
      if (value(kinds[b]) + bond_disorder_(b) < kCouplingFloor) clamped_ = true;
  };
  check(initial_bonds_);
  // Ramps are monotone, so extrema sit at segment endpoints.
  for (const auto& seg : segments_) check(seg.end);
}

CouplingSchedule CouplingSchedule::with_disorder(const VectorXr& bond_offsets, const VectorXr& onsite_offsets) const {
  require(bond_offsets.size() == n_sites_ - 1, "bond disorder must have one entry per bond");
  require(onsite_offsets.size() == n_sites_, "onsite disorder must have one entry per site");
  CouplingSchedule out = *this;
  out.bond_disorder_ = bond_offsets;
  out.onsite_disorder_ = onsite_offsets;
  out.refresh_clamp_flag();
  return out;
}

namespace {

// Bend segment moving the listed walls by one unit cell each, starting from `schedule`'s end state.
ScheduleSegment move_segment(const CouplingSchedule& schedule, BondKind wall_kind,
                             const std::vector<std::pair<std::size_t, Direction>>& moves, const BendShape& shape) {
  require(shape.slope > 0.0 && shape.length > 0.0, "bend shape needs positive slope and length");
  require(!moves.empty(), "no wall moves requested");
  const Index n = schedule.n_sites();

  ScheduleSegment seg;
  seg.length = shape.length;
  seg.slope = shape.slope;
  seg.start = schedule.final_bonds();
  seg.end = seg.start;
  seg.walls_start = schedule.final_walls();
  seg.walls_end = seg.walls_start;

  std::vector<bool> touched(seg.start.size(), false);
  for (const auto& [wall, direction] : moves) {
    require(wall < seg.walls_start.size(), "no domain wall with index " + std::to_string(wall));
    const Index p = seg.walls_start[wall];
    // Bond between the wall and the bent guide, then the bond on the guide's far side.
    const Index near = direction == Direction::right ? p : p - 1;
    const Index far = direction == Direction::right ? p + 1 : p - 2;
    const Index target = direction == Direction::right ? p + 2 : p - 2;
    require(target >= 1 && target <= n - 2, "moving wall at site " + std::to_string(p) + " would leave the lattice");
    require(seg.start[near] == wall_kind && seg.start[far] == other(wall_kind),
            "moving wall at site " + std::to_string(p) + " collides with another wall");
    require(!touched[near] && !touched[far], "simultaneous moves modulate the same bond");
    touched[near] = touched[far] = true;
    seg.end[near] = other(wall_kind);
    seg.end[far] = wall_kind;
    seg.walls_end[wall] = target;
  }
  require(std::is_sorted(seg.walls_end.begin(), seg.walls_end.end()) &&
              std::adjacent_find(seg.walls_end.begin(), seg.walls_end.end()) == seg.walls_end.end(),
          "wall moves would reorder the walls");
  return seg;
}

}  // namespace

CouplingSchedule simultaneous_moves(const LatticeSpec& spec,
                                    const std::vector<std::pair<std::size_t, Direction>>& moves,
                                    const BendShape& shape) {
  CouplingSchedule s = CouplingSchedule::straight(spec, 0.0);
  s.append(move_segment(s, spec.wall, moves, shape));
  return s;
}

CouplingSchedule move_schedule(const LatticeSpec& spec, std::size_t wall, Direction direction,
                               const BendShape& shape) {
  return simultaneous_moves(spec, {{wall, direction}}, shape);
}

LatticeSpec spec_at_end(const LatticeSpec& spec, const CouplingSchedule& schedule) {
  LatticeSpec out = spec;
  out.dw_positions = schedule.final_walls();
  return out;
}

namespace {

// Stages bringing wall_a and wall_b next to each other. Both walls move while at least two unit
// cells separate them; a final single move of wall_a closes an odd remainder.
std::vector<std::vector<std::pair<std::size_t, Direction>>> approach_stages(const LatticeSpec& spec,
                                                                             std::size_t wall_a,
                                                                             std::size_t wall_b) {
  require(wall_a < wall_b && wall_b < spec.dw_positions.size(), "beam splitter needs two walls a < b");
  require(wall_b == wall_a + 1, "beam splitter walls must be neighbours");
  const Index gap = spec.dw_positions[wall_b] - spec.dw_positions[wall_a];
  Index cells = (gap - 1) / 2;
  std::vector<std::vector<std::pair<std::size_t, Direction>>> stages;
  while (cells >= 2) {
    stages.push_back({{wall_a, Direction::right}, {wall_b, Direction::left}});
    cells -= 2;
  }
  if (cells == 1) stages.push_back({{wall_a, Direction::right}});
  return stages;
}

}  // namespace

double approach_length(const LatticeSpec& spec, std::size_t wall_a, std::size_t wall_b, const BendShape& shape) {
  spec.validate();
  return static_cast<double>(approach_stages(spec, wall_a, wall_b).size()) * shape.length;
}

CouplingSchedule merge_split_schedule(const LatticeSpec& spec, std::size_t wall_a, std::size_t wall_b,
                                      double z_int, const BendShape& shape) {
  spec.validate();
  require(z_int >= 0.0, "interaction length must be non-negative");
  const auto stages = approach_stages(spec, wall_a, wall_b);

  CouplingSchedule out = CouplingSchedule::straight(spec, 0.0);
  auto advance = [&](const std::vector<std::pair<std::size_t, Direction>>& moves) {
    out.append(move_segment(out, spec.wall, moves, shape));
  };

  for (const auto& stage : stages) advance(stage);
  if (z_int > 0.0) {
    ScheduleSegment hold;
    hold.length = z_int;
    hold.slope = shape.slope;
    hold.start = hold.end = out.final_bonds();
    hold.walls_start = hold.walls_end = out.final_walls();
    out.append(std::move(hold));
  }
  for (auto it = stages.rbegin(); it != stages.rend(); ++it) {
    auto reversed = *it;
    for (auto& [wall, direction] : reversed)
      direction = direction == Direction::right ? Direction::left : Direction::right;
    advance(reversed);
  }
  return out;
}

CouplingSchedule apply_disorder(const CouplingSchedule& schedule, DisorderKind kind, double delta,
                                std::uint64_t seed) {
  require(delta >= 0.0, "disorder strength must be non-negative");
  if (delta == 0.0) return schedule;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> draw(-delta, delta);
  VectorXr bonds = schedule.bond_disorder();
  VectorXr sites = schedule.onsite_disorder();
  if (kind == DisorderKind::coupling) {
    for (Index b = 0; b < bonds.size(); ++b) bonds(b) += draw(rng);
  } else {
    for (Index i = 0; i < sites.size(); ++i) sites(i) += draw(rng);
  }
  return schedule.with_disorder(bonds, sites);
}

}  // namespace sshq

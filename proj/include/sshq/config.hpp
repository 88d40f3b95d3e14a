// config.hpp: JSON experiment configuration
//
// Schema (every block optional except "lattice"):
//
//   name                      string
//   lattice.sites             int
//   lattice.u, lattice.v      cm^-1, or lattice.distances {d_u, d_v} in um with either
//                             {c1, c2} or anchors [[d, C], [d, C]]
//   lattice.dw_positions      [int]
//   lattice.wall              "intra" | "inter"   coupling repeated at every wall
//   lattice.onsite            [double] (one per site)
//   bend.z_m, bend.slope      cm, dimensionless
//   inputs[]                  {kind, sites, magnitude, phase, label}
//   transport.moves[]         {wall, direction: "left" | "right"}
//   transport.edge_site       int
//   beamsplitter              {wall_a, wall_b, uz_int: [..] | {points, max}}
//   disorder                  {kind: "coupling" | "onsite", delta, repetitions, seed}
//   optimize.slopes           [double]
//   bands.deltas              [double] | {from, to, points}
//   observables               {g2: [[i,j,k,l]], quadratures: [{sites, weights}], phases: [..]}
//   numerics                  {dz, sample_every, threads}

#pragma once

#include <cstdint>
#include <string>

#include "sshq/protocols.hpp"

namespace sshq {

/// Parses and validates a configuration document. Throws InvalidArgument with the offending key.
ExperimentConfig parse_config(const std::string& text);

ExperimentConfig load_config(const std::string& path);

/// Canonical JSON echo of a configuration (sorted keys), overrides included.
std::string config_to_json(const ExperimentConfig& cfg, int indent = -1);

/// FNV-1a 64 of the canonical echo without the thread count, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace sshq

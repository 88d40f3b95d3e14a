// io.hpp: long-format CSV tables and JSON metadata sidecars
//
// Column layouts are documented in docs/output_schema.md. Numbers are printed with 17
// significant digits so identical runs give byte-identical files.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sshq/protocols.hpp"
#include "sshq/spectral.hpp"

namespace sshq {

inline constexpr const char* kOutputSchema = "sshq-output/1";

std::string format_number(double x);

/// "i-j-k" style site label.
std::string site_label(const std::vector<Index>& sites);

/// input,z,observable,sites,phase,value
std::string transport_csv(const std::vector<TransportRun>& runs);

/// input,uz_int,z_int,observable,value
std::string beamsplitter_csv(const BeamSplitterResult& result);

/// input,uz_int,observable,statistic,value with statistic in {mean, std, clean}
std::string ensemble_csv(const EnsembleResult& result, const BeamSplitterResult* clean = nullptr);

/// input,realization,uz_int,observable,value over every successful realization
std::string ensemble_raw_csv(const EnsembleResult& result);

/// delta,state,energy,ipr,gap_state
std::string bands_csv(const std::vector<BandPoint>& points);

/// slope,transmission,best
std::string slopes_csv(const SlopeScan& scan);

struct Sidecar {
  std::string experiment;
  std::string config_json;  // canonical echo
  std::string config_hash;
  std::uint64_t seed = 0;
  double dz = 0.0;
  int threads = 1;
  double runtime_seconds = 0.0;
  std::vector<std::string> warnings;
  std::vector<std::string> outputs;
  std::map<std::string, double> summary;
  std::map<std::string, std::string> notes;
};

std::string sidecar_json(const Sidecar& sidecar);

/// Writes `content` to `path`, creating parent directories.
void write_file(const std::string& path, const std::string& content);

}  // namespace sshq

// io.cpp: CSV and JSON serialization of experiment results

#include "sshq/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace sshq {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string site_label(const std::vector<Index>& sites) {
  std::string out;
  for (std::size_t k = 0; k < sites.size(); ++k) {
    if (k) out += '-';
    out += std::to_string(sites[k]);
  }
  return out;
}

namespace {

// Labels are user text; quote them when they would break the CSV.
std::string field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

void transport_rows(std::ostringstream& os, const TransportRun& r) {
  const std::string in = field(r.input.label);
  const ObservableRequest& req = r.trajectory.request;
  auto row = [&](double z, const char* obs, const std::string& sites, const std::string& phase, double value) {
    os << in << ',' << format_number(z) << ',' << obs << ',' << sites << ',' << phase << ',' << format_number(value)
       << '\n';
  };
  for (const Sample& s : r.trajectory.samples) {
    for (Index i = 0; i < s.photon_numbers.size(); ++i) row(s.z, "photon_number", std::to_string(i), "", s.photon_numbers(i));
    row(s.z, "total_photons", "", "", s.total_photons);
    for (std::size_t g = 0; g < s.g2.size(); ++g) {
      const auto& idx = req.g2_entries[g];
      const std::string sites = site_label({idx.begin(), idx.end()});
      row(s.z, "g2_real", sites, "", s.g2[g].real());
      row(s.z, "g2_imag", sites, "", s.g2[g].imag());
    }
    for (std::size_t q = 0; q < s.min_phase.size(); ++q) {
      const std::string sites = site_label(req.quadratures[q].sites);
      const PhaseLock& lock = s.min_phase[q];
      row(s.z, "min_variance", sites, format_number(lock.phase), lock.variance);
      row(s.z, "squeezing_db", sites, format_number(lock.phase), squeezing_db(lock.variance));
      row(s.z, "max_variance", sites, "", lock.max_variance);
      for (std::size_t p = 0; p < req.phases.size(); ++p)
        row(s.z, "variance", sites, format_number(req.phases[p]), s.fixed_phase[q][p]);
    }
  }
}

}  // namespace

std::string transport_csv(const std::vector<TransportRun>& runs) {
  std::ostringstream os;
  os << "input,z,observable,sites,phase,value\n";
  for (const auto& r : runs) transport_rows(os, r);
  return os.str();
}

std::string beamsplitter_csv(const BeamSplitterResult& result) {
  std::ostringstream os;
  os << "input,uz_int,z_int,observable,value\n";
  for (const auto& sweep : result.sweeps) {
    const std::string in = field(sweep.input.label);
    for (std::size_t k = 0; k < sweep.records.size(); ++k) {
      const SplitterRecord& r = sweep.records[k];
      auto row = [&](const std::string& obs, double value) {
        os << in << ',' << format_number(result.uz_int[k]) << ',' << format_number(result.z_int[k]) << ',' << obs
           << ',' << format_number(value) << '\n';
      };
      for (const auto& [name, value] : splitter_observables(r)) row(name, value);
      row("single_a_phase", r.single_a.phase);
      row("single_b_phase", r.single_b.phase);
      row("pair_phase", r.pair.phase);
      row("accumulated_defect", r.accumulated_defect);
    }
  }
  return os.str();
}

std::string ensemble_csv(const EnsembleResult& result, const BeamSplitterResult* clean) {
  std::ostringstream os;
  os << "input,uz_int,observable,statistic,value\n";
  for (const auto& [label, table] : result.stats)
    for (const auto& [name, ms] : table)
      for (std::size_t k = 0; k < result.uz_int.size(); ++k) {
        const std::string head = field(label) + ',' + format_number(result.uz_int[k]) + ',' + name + ',';
        os << head << "mean," << format_number(ms.mean[k]) << '\n';
        os << head << "std," << format_number(ms.std[k]) << '\n';
      }
  if (clean)
    for (const auto& sweep : clean->sweeps)
      for (std::size_t k = 0; k < sweep.records.size(); ++k)
        for (const auto& [name, value] : splitter_observables(sweep.records[k]))
          os << field(sweep.input.label) << ',' << format_number(clean->uz_int[k]) << ',' << name << ",clean,"
             << format_number(value) << '\n';
  return os.str();
}

std::string ensemble_raw_csv(const EnsembleResult& result) {
  std::ostringstream os;
  os << "input,realization,uz_int,observable,value\n";
  for (std::size_t r = 0; r < result.realizations.size(); ++r)
    for (const auto& sweep : result.realizations[r].sweeps)
      for (std::size_t k = 0; k < sweep.records.size(); ++k)
        for (const auto& [name, value] : splitter_observables(sweep.records[k]))
          os << field(sweep.input.label) << ',' << r << ',' << format_number(result.uz_int[k]) << ',' << name << ','
             << format_number(value) << '\n';
  return os.str();
}

std::string bands_csv(const std::vector<BandPoint>& points) {
  std::ostringstream os;
  os << "delta,state,energy,ipr,gap_state\n";
  for (const auto& p : points)
    for (Index k = 0; k < p.spectrum.energies.size(); ++k) {
      const bool gap = std::find(p.gap_states.begin(), p.gap_states.end(), k) != p.gap_states.end();
      os << format_number(p.delta) << ',' << k << ',' << format_number(p.spectrum.energies(k)) << ','
         << format_number(p.spectrum.ipr(k)) << ',' << (gap ? 1 : 0) << '\n';
    }
  return os.str();
}

std::string slopes_csv(const SlopeScan& scan) {
  std::ostringstream os;
  os << "slope,transmission,best\n";
  for (std::size_t k = 0; k < scan.slopes.size(); ++k)
    os << format_number(scan.slopes[k]) << ',' << format_number(scan.transmission[k]) << ','
       << (scan.slopes[k] == scan.best_slope ? 1 : 0) << '\n';
  return os.str();
}

std::string sidecar_json(const Sidecar& s) {
  nlohmann::json j;
  j["schema"] = kOutputSchema;
  j["experiment"] = s.experiment;
  j["config"] = s.config_json.empty() ? nlohmann::json() : nlohmann::json::parse(s.config_json);
  j["config_hash"] = s.config_hash;
  j["seed"] = s.seed;
  j["dz"] = s.dz;
  j["threads"] = s.threads;
  j["runtime_seconds"] = s.runtime_seconds;
  j["warnings"] = s.warnings;
  j["outputs"] = s.outputs;
  nlohmann::json summary = nlohmann::json::object();
  for (const auto& [k, v] : s.summary) summary[k] = std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(format_number(v));
  j["summary"] = summary;
  j["notes"] = s.notes;
  return j.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
  if (!out) throw std::runtime_error("failed while writing '" + path + "'");
}

}  // namespace sshq

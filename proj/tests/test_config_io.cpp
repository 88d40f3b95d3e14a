#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sshq/config.hpp"
#include "sshq/io.hpp"

using namespace sshq;

namespace {

const char* kMinimal = R"({
  "name": "mini",
  "lattice": {"sites": 8, "u": 0.69, "v": 3.22, "dw_positions": [3]},
  "inputs": [{"kind": "single_photon", "label": "fock"}],
  "transport": {"moves": [{"wall": 0, "direction": "right"}]},
  "bend": {"z_m": 2.0},
  "numerics": {"dz": 0.01, "sample_every": 20}
})";

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const InvalidArgument& e) {
    return e.what();
  }
  return "";
}

std::string with(const std::string& key, const std::string& value) {
  nlohmann::json j = nlohmann::json::parse(kMinimal);
  j[nlohmann::json::json_pointer(key)] = nlohmann::json::parse(value);
  return j.dump();
}

}  // namespace

TEST_CASE("every preset parses") {
  for (const auto& entry : std::filesystem::directory_iterator(SSHQ_CONFIG_DIR)) {
    CAPTURE(entry.path().string());
    const ExperimentConfig cfg = load_config(entry.path().string());
    CHECK(cfg.config_hash.size() == 16);
    CHECK_NOTHROW(cfg.validate());
  }
}

TEST_CASE("minimal config") {
  const ExperimentConfig cfg = parse_config(kMinimal);
  CHECK(cfg.name == "mini");
  CHECK(cfg.lattice.n_sites == 8);
  CHECK(cfg.lattice.dw_positions == std::vector<Index>{3});
  CHECK(cfg.bend.length == 2.0);
  CHECK(cfg.bend.slope == 1.5);
  CHECK(cfg.dz == 0.01);
  CHECK(cfg.threads == 1);
  REQUIRE(cfg.moves.size() == 1);
  CHECK(cfg.moves[0].second == Direction::right);
}

TEST_CASE("distances resolve through the exponential law") {
  const ExperimentConfig cfg = load_config(std::string(SSHQ_CONFIG_DIR) + "/transport32.json");
  CHECK(cfg.lattice.u == doctest::Approx(0.69));
  CHECK(cfg.lattice.v == doctest::Approx(3.22));
  const ExperimentConfig direct =
      parse_config(with("/lattice", R"({"sites": 8, "dw_positions": [3], "distances": {"d_u": 22, "d_v": 10, "c1": 0.1284, "c2": 11.6}})"));
  CHECK(direct.lattice.u == doctest::Approx(11.6 * std::exp(-0.1284 * 22)));
}

TEST_CASE("errors name the offending key") {
  CHECK(error_of("{").find("JSON") != std::string::npos);
  CHECK(error_of(R"({"name": "x"})").find("lattice") != std::string::npos);
  CHECK(error_of(with("/lattice/spin", "1")).find("lattice.spin") != std::string::npos);
  CHECK(error_of(with("/lattice/sites", "\"eight\"")).find("lattice.sites") != std::string::npos);
  CHECK(error_of(with("/inputs/0/kind", "\"thermal\"")).find("thermal") != std::string::npos);
  CHECK(error_of(with("/transport/moves/0/direction", "\"up\"")).find("direction") != std::string::npos);
  CHECK(error_of(with("/numerics/dz", "-1")).find("dz") != std::string::npos);
  CHECK(error_of(with("/lattice/dw_positions", "[3, 4]")) != "");
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), InvalidArgument);
}

TEST_CASE("grids expand") {
  const ExperimentConfig a = parse_config(with("/bands", R"({"deltas": {"from": 0.5, "to": 2.5, "points": 5}})"));
  CHECK(a.band_deltas == std::vector<double>{0.5, 1.0, 1.5, 2.0, 2.5});
  const ExperimentConfig b =
      parse_config(with("/beamsplitter", R"({"wall_a": 0, "wall_b": 0, "uz_int": {"min": 0, "max": 1, "points": 3}})"));
  CHECK(b.uz_int == std::vector<double>{0.0, 0.5, 1.0});
}

TEST_CASE("hash is stable and ignores the thread count") {
  const ExperimentConfig a = parse_config(kMinimal);
  ExperimentConfig b = a;
  b.threads = 8;
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a) == parse_config(kMinimal).config_hash);
  b.dz = 0.02;
  CHECK(config_hash(a) != config_hash(b));
  CHECK(parse_config(config_to_json(a)).config_hash == a.config_hash);
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("number formatting round-trips") {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-17, 6.02214076e23}) CHECK(std::stod(format_number(x)) == x);
  CHECK(format_number(NAN) == "nan");
  CHECK(format_number(-INFINITY) == "-inf");
  CHECK(site_label({3, 1, 4}) == "3-1-4");
  CHECK(site_label({}) == "");
}

TEST_CASE("transport CSV layout and determinism") {
  const ExperimentConfig cfg = parse_config(kMinimal);
  const auto runs = transport_experiment(cfg);
  const std::string csv = transport_csv(runs);
  CHECK(first_line(csv) == "input,z,observable,sites,phase,value");
  CHECK(csv.find("fock,0,photon_number,3,,1\n") != std::string::npos);
  CHECK(csv.find(",total_photons,,,") != std::string::npos);
  CHECK(csv.find(",g2_real,3-3-3-3,,") != std::string::npos);
  CHECK(csv == transport_csv(transport_experiment(cfg)));

  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) CHECK(std::count(line.begin(), line.end(), ',') == 5);
}

TEST_CASE("labels with commas are quoted") {
  ExperimentConfig cfg = parse_config(kMinimal);
  cfg.inputs[0].label = "a,\"b\"";
  const std::string csv = transport_csv(transport_experiment(cfg));
  CHECK(csv.find("\"a,\"\"b\"\"\",0,") != std::string::npos);
}

TEST_CASE("remaining CSV headers") {
  const LatticeSpec spec{8, 0.69, 3.22, {3}, {}, BondKind::intra};
  CHECK(first_line(bands_csv(band_sweep(spec, {1.0, 4.6}))) == "delta,state,energy,ipr,gap_state");
  SlopeScan scan{{1.0, 2.0}, {0.5, 0.6}, 2.0, 0.6};
  CHECK(slopes_csv(scan) == "slope,transmission,best\n1,0.5,0\n2,0.59999999999999998,1\n");

  BeamSplitterResult bs;
  bs.uz_int = {0.5};
  bs.z_int = {0.5 / 0.69};
  bs.sweeps.push_back({{InputKind::single_photon, {3}, 1.0, 0.0, "fock"}, {SplitterRecord{}}});
  const std::string b = beamsplitter_csv(bs);
  CHECK(first_line(b) == "input,uz_int,z_int,observable,value");
  CHECK(b.find("fock,0.5,") != std::string::npos);
  CHECK(b.find(",accumulated_defect,0\n") != std::string::npos);

  EnsembleResult ens;
  ens.uz_int = {0.5};
  ens.stats["fock"]["n_a"] = {{0.25}, {0.0}};
  ens.realizations.push_back(bs);
  CHECK(ensemble_csv(ens) == "input,uz_int,observable,statistic,value\nfock,0.5,n_a,mean,0.25\nfock,0.5,n_a,std,0\n");
  CHECK(ensemble_csv(ens, &bs).find("fock,0.5,n_a,clean,0\n") != std::string::npos);
  CHECK(first_line(ensemble_raw_csv(ens)) == "input,realization,uz_int,observable,value");
  CHECK(ensemble_raw_csv(ens).find("fock,0,0.5,n_total,0\n") != std::string::npos);
}

TEST_CASE("sidecar JSON") {
  const ExperimentConfig cfg = parse_config(kMinimal);
  Sidecar s;
  s.experiment = "transport";
  s.config_json = config_to_json(cfg);
  s.config_hash = cfg.config_hash;
  s.seed = 42;
  s.dz = cfg.dz;
  s.warnings = {"w"};
  s.outputs = {"mini_transport.csv"};
  s.summary["transmission/fock"] = 0.5;
  s.summary["bad"] = NAN;
  s.notes["k"] = "v";
  const nlohmann::json j = nlohmann::json::parse(sidecar_json(s));
  CHECK(j["schema"] == kOutputSchema);
  CHECK(j["experiment"] == "transport");
  CHECK(j["config"]["name"] == "mini");
  CHECK(j["config_hash"] == cfg.config_hash);
  CHECK(j["seed"] == 42);
  CHECK(j["dz"] == 0.01);
  CHECK(j["threads"] == 1);
  CHECK(j["warnings"].size() == 1);
  CHECK(j["outputs"][0] == "mini_transport.csv");
  CHECK(j["summary"]["transmission/fock"] == 0.5);
  CHECK(j["summary"]["bad"] == "nan");
  CHECK(j["notes"]["k"] == "v");
  CHECK(j.contains("runtime_seconds"));
}

TEST_CASE("write_file creates directories") {
  const auto dir = std::filesystem::temp_directory_path() / "sshq_test_io";
  std::filesystem::remove_all(dir);
  const std::string path = (dir / "a" / "b.csv").string();
  write_file(path, "x,y\n");
  std::ifstream in(path);
  std::string content((std::istreambuf_iterator<char>(in)), {});
  CHECK(content == "x,y\n");
  std::filesystem::remove_all(dir);
}

TEST_CASE("schema document lists every header") {
  std::ifstream in(SSHQ_SCHEMA_DOC);
  REQUIRE(in);
  const std::string doc((std::istreambuf_iterator<char>(in)), {});
  CHECK(doc.find(kOutputSchema) != std::string::npos);
  for (const char* header : {"input,z,observable,sites,phase,value", "input,uz_int,z_int,observable,value",
                             "input,uz_int,observable,statistic,value", "input,realization,uz_int,observable,value",
                             "delta,state,energy,ipr,gap_state", "slope,transmission,best",
                             "case,error,tolerance,passed,gated"})
    CHECK(doc.find(std::string("\n") + header + "\n") != std::string::npos);
  for (const auto& [name, value] : splitter_observables(SplitterRecord{})) {
    CAPTURE(name);
    CHECK(doc.find("`" + name + "`") != std::string::npos);
  }
}

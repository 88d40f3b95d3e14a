// config.cpp: JSON configuration parsing and canonical echo

#include "sshq/config.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace sshq {

using nlohmann::json;

namespace {

const json& at(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw InvalidArgument("config: missing '" + where + key + "'");
  return j.at(key);
}

template <typename T>
T get(const json& j, const std::string& key, const std::string& where) {
  try {
    return at(j, key, where).get<T>();
  } catch (const json::exception& e) {
    throw InvalidArgument("config: bad value for '" + where + key + "': " + e.what());
  }
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return get<T>(j, key, where);
}

// Rejects keys outside `allowed` so typos fail loudly.
void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw InvalidArgument("config: '" + where + "' must be an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw InvalidArgument("config: unknown key '" + where + key + "'");
  }
}

std::vector<double> parse_grid(const json& j, const std::string& where, const char* lo, const char* hi) {
  if (j.is_array()) return j.get<std::vector<double>>();
  check_keys(j, {lo, hi, "points"}, where + ".");
  const int points = get<int>(j, "points", where + ".");
  const double a = get_or<double>(j, lo, 0.0, where + ".");
  const double b = get<double>(j, hi, where + ".");
  require(points >= 1, "config: '" + where + ".points' must be at least 1");
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) grid[k] = points == 1 ? a : a + (b - a) * k / (points - 1);
  return grid;
}

LatticeSpec parse_lattice(const json& j) {
  check_keys(j, {"sites", "u", "v", "distances", "dw_positions", "wall", "onsite"}, "lattice.");
  LatticeSpec spec;
  spec.n_sites = get<Index>(j, "sites", "lattice.");
  if (j.contains("distances")) {
    const json& d = j.at("distances");
    check_keys(d, {"d_u", "d_v", "c1", "c2", "anchors"}, "lattice.distances.");
    DistanceModel model;
    if (d.contains("anchors")) {
      const auto anchors = get<std::vector<std::array<double, 2>>>(d, "anchors", "lattice.distances.");
      require(anchors.size() == 2, "config: 'lattice.distances.anchors' needs two [distance, coupling] pairs");
      model = calibrate_distance_model(anchors[0][0], anchors[0][1], anchors[1][0], anchors[1][1]);
    } else {
      model = {get<double>(d, "c1", "lattice.distances."), get<double>(d, "c2", "lattice.distances.")};
    }
    spec.u = coupling_from_distance(get<double>(d, "d_u", "lattice.distances."), model);
    spec.v = coupling_from_distance(get<double>(d, "d_v", "lattice.distances."), model);
    require(!j.contains("u") && !j.contains("v"), "config: give either lattice.u/v or lattice.distances, not both");
  } else {
    spec.u = get<double>(j, "u", "lattice.");
    spec.v = get<double>(j, "v", "lattice.");
  }
  spec.dw_positions = get_or<std::vector<Index>>(j, "dw_positions", {}, "lattice.");
  const std::string wall = get_or<std::string>(j, "wall", "intra", "lattice.");
  if (wall == "intra")
    spec.wall = BondKind::intra;
  else if (wall == "inter")
    spec.wall = BondKind::inter;
  else
    throw InvalidArgument("config: 'lattice.wall' must be \"intra\" or \"inter\"");
  if (j.contains("onsite")) {
    const auto e = get<std::vector<double>>(j, "onsite", "lattice.");
    spec.onsite = Eigen::Map<const VectorXr>(e.data(), static_cast<Index>(e.size()));
  }
  return spec;
}

InputSpec parse_input(const json& j, std::size_t index) {
  const std::string where = "inputs[" + std::to_string(index) + "].";
  check_keys(j, {"kind", "sites", "magnitude", "phase", "label"}, where);
  InputSpec in;
  in.kind = input_kind_from_string(get<std::string>(j, "kind", where));
  in.sites = get_or<std::vector<Index>>(j, "sites", {}, where);
  in.magnitude = get_or<double>(j, "magnitude", 1.0, where);
  in.phase = get_or<double>(j, "phase", 0.0, where);
  in.label = get_or<std::string>(j, "label", to_string(in.kind), where);
  return in;
}

DisorderKind disorder_kind(const std::string& s) {
  if (s == "coupling") return DisorderKind::coupling;
  if (s == "onsite") return DisorderKind::onsite;
  throw InvalidArgument("config: 'disorder.kind' must be \"coupling\" or \"onsite\"");
}

const char* name_of(DisorderKind k) { return k == DisorderKind::coupling ? "coupling" : "onsite"; }

json to_json(const ExperimentConfig& cfg) {
  json j;
  j["name"] = cfg.name;
  const LatticeSpec& l = cfg.lattice;
  j["lattice"] = {{"sites", l.n_sites},
                  {"u", l.u},
                  {"v", l.v},
                  {"dw_positions", l.dw_positions},
                  {"wall", l.wall == BondKind::intra ? "intra" : "inter"}};
  if (l.onsite.size() > 0) j["lattice"]["onsite"] = std::vector<double>(l.onsite.data(), l.onsite.data() + l.onsite.size());
  j["bend"] = {{"z_m", cfg.bend.length}, {"slope", cfg.bend.slope}};
  j["inputs"] = json::array();
  for (const auto& in : cfg.inputs)
    j["inputs"].push_back({{"kind", to_string(in.kind)},
                           {"sites", in.sites},
                           {"magnitude", in.magnitude},
                           {"phase", in.phase},
                           {"label", in.label}});
  json moves = json::array();
  for (const auto& [wall, dir] : cfg.moves)
    moves.push_back({{"wall", wall}, {"direction", dir == Direction::right ? "right" : "left"}});
  j["transport"] = {{"moves", moves}, {"edge_site", cfg.edge_site}};
  j["beamsplitter"] = {{"wall_a", cfg.wall_a}, {"wall_b", cfg.wall_b},
                       {"uz_int", cfg.uz_int.empty() ? default_uz_grid() : cfg.uz_int}};
  if (cfg.disorder)
    j["disorder"] = {{"kind", name_of(cfg.disorder->kind)},
                     {"delta", cfg.disorder->delta},
                     {"repetitions", cfg.disorder->repetitions},
                     {"seed", cfg.disorder->base_seed}};
  if (!cfg.slope_grid.empty()) j["optimize"] = {{"slopes", cfg.slope_grid}};
  if (!cfg.band_deltas.empty()) j["bands"] = {{"deltas", cfg.band_deltas}};
  json obs;
  obs["g2"] = json::array();
  for (const auto& g : cfg.extra_observables.g2_entries) obs["g2"].push_back(std::vector<Index>(g.begin(), g.end()));
  obs["quadratures"] = json::array();
  for (const auto& q : cfg.extra_observables.quadratures)
    obs["quadratures"].push_back({{"sites", q.sites}, {"weights", q.weights}});
  obs["phases"] = cfg.extra_observables.phases;
  j["observables"] = obs;
  j["numerics"] = {{"dz", cfg.dz}, {"sample_every", cfg.sample_every}, {"threads", cfg.threads}};
  return j;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("config: not valid JSON: ") + e.what());
  }
  check_keys(root, {"name", "lattice", "bend", "inputs", "transport", "beamsplitter", "disorder", "optimize", "bands",
                    "observables", "numerics"},
             "");
  ExperimentConfig cfg;
  cfg.name = get_or<std::string>(root, "name", "experiment", "");
  cfg.lattice = parse_lattice(at(root, "lattice", ""));

  if (root.contains("bend")) {
    const json& b = root.at("bend");
    check_keys(b, {"z_m", "slope"}, "bend.");
    cfg.bend.length = get_or<double>(b, "z_m", cfg.bend.length, "bend.");
    cfg.bend.slope = get_or<double>(b, "slope", cfg.bend.slope, "bend.");
  }
  if (root.contains("inputs")) {
    const json& ins = root.at("inputs");
    require(ins.is_array(), "config: 'inputs' must be an array");
    for (std::size_t i = 0; i < ins.size(); ++i) cfg.inputs.push_back(parse_input(ins[i], i));
  }
  if (root.contains("transport")) {
    const json& t = root.at("transport");
    check_keys(t, {"moves", "edge_site"}, "transport.");
    if (t.contains("moves"))
      for (const auto& m : t.at("moves")) {
        check_keys(m, {"wall", "direction"}, "transport.moves[].");
        const std::string d = get<std::string>(m, "direction", "transport.moves[].");
        require(d == "left" || d == "right", "config: move direction must be \"left\" or \"right\"");
        cfg.moves.emplace_back(get<std::size_t>(m, "wall", "transport.moves[]."),
                               d == "right" ? Direction::right : Direction::left);
      }
    cfg.edge_site = get_or<Index>(t, "edge_site", 0, "transport.");
  }
  if (root.contains("beamsplitter")) {
    const json& b = root.at("beamsplitter");
    check_keys(b, {"wall_a", "wall_b", "uz_int"}, "beamsplitter.");
    cfg.wall_a = get_or<std::size_t>(b, "wall_a", 0, "beamsplitter.");
    cfg.wall_b = get_or<std::size_t>(b, "wall_b", 1, "beamsplitter.");
    if (b.contains("uz_int")) cfg.uz_int = parse_grid(b.at("uz_int"), "beamsplitter.uz_int", "min", "max");
  }
  if (root.contains("disorder")) {
    const json& d = root.at("disorder");
    check_keys(d, {"kind", "delta", "repetitions", "seed"}, "disorder.");
    DisorderSpec spec;
    spec.kind = disorder_kind(get_or<std::string>(d, "kind", "coupling", "disorder."));
    spec.delta = get<double>(d, "delta", "disorder.");
    spec.repetitions = get_or<int>(d, "repetitions", 20, "disorder.");
    spec.base_seed = get_or<std::uint64_t>(d, "seed", 0, "disorder.");
    cfg.disorder = spec;
  }
  if (root.contains("optimize")) {
    const json& o = root.at("optimize");
    check_keys(o, {"slopes"}, "optimize.");
    cfg.slope_grid = parse_grid(at(o, "slopes", "optimize."), "optimize.slopes", "from", "to");
  }
  if (root.contains("bands")) {
    const json& b = root.at("bands");
    check_keys(b, {"deltas"}, "bands.");
    cfg.band_deltas = parse_grid(at(b, "deltas", "bands."), "bands.deltas", "from", "to");
  }
  if (root.contains("observables")) {
    const json& o = root.at("observables");
    check_keys(o, {"g2", "quadratures", "phases"}, "observables.");
    for (const auto& g : get_or<std::vector<std::array<Index, 4>>>(o, "g2", {}, "observables."))
      cfg.extra_observables.g2_entries.push_back(g);
    if (o.contains("quadratures"))
      for (const auto& q : o.at("quadratures")) {
        check_keys(q, {"sites", "weights"}, "observables.quadratures[].");
        QuadratureMode mode;
        mode.sites = get<std::vector<Index>>(q, "sites", "observables.quadratures[].");
        mode.weights = get_or<std::vector<double>>(q, "weights", std::vector<double>(mode.sites.size(), 1.0),
                                                   "observables.quadratures[].");
        require(!mode.sites.empty() && mode.sites.size() == mode.weights.size(),
                "config: quadrature needs matching, non-empty sites and weights");
        for (Index s : mode.sites) require(s >= 0 && s < cfg.lattice.n_sites, "config: quadrature site out of range");
        cfg.extra_observables.quadratures.push_back(std::move(mode));
      }
    cfg.extra_observables.phases = get_or<std::vector<double>>(o, "phases", {}, "observables.");
    for (const auto& g : cfg.extra_observables.g2_entries)
      for (Index s : g) require(s >= 0 && s < cfg.lattice.n_sites, "config: g2 index out of range");
  }
  if (root.contains("numerics")) {
    const json& n = root.at("numerics");
    check_keys(n, {"dz", "sample_every", "threads"}, "numerics.");
    cfg.dz = get_or<double>(n, "dz", cfg.dz, "numerics.");
    cfg.sample_every = get_or<int>(n, "sample_every", cfg.sample_every, "numerics.");
    cfg.threads = get_or<int>(n, "threads", cfg.threads, "numerics.");
  }
  cfg.validate();
  cfg.config_hash = config_hash(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string config_to_json(const ExperimentConfig& cfg, int indent) { return to_json(cfg).dump(indent); }

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash(const ExperimentConfig& cfg) {
  json j = to_json(cfg);
  j["numerics"].erase("threads");
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(j.dump())));
  return buf;
}

}  // namespace sshq

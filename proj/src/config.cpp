#include "cqed/config.hpp"

#include <algorithm>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "cqed/errors.hpp"

namespace cqed {

namespace pt = boost::property_tree;

namespace {

const std::set<std::string> kCircuitKeys = {"ej1",    "ej2",         "c1",          "c2",     "flux_bias",
                                            "pump_amplitude", "pump_frequency", "length", "cap_per_len",
                                            "ind_per_len",    "n_modes",        "e_bar"};
const std::set<std::string> kOutputKeys = {"dir", "snapshot_times"};
const std::set<std::string> kCommonKeys = {"name", "cutoff", "points", "atol", "rtol", "seed"};
const std::set<std::string> kRwaKeys = {"terms_file", "drive_frequency", "tolerance", "kerr"};
const std::map<std::string, std::set<std::string>> kScenarioKeys = {
    {"3spdc", {"g0", "gt_max", "kerr", "hamiltonian", "families", "optimize_s", "restarts", "iterations"}},
    {"22spdc", {"g", "pump_phase", "gt_max", "frequencies", "pumps", "optimize_s", "restarts", "iterations"}},
    {"hybrid-swap", {"g0", "lambda", "lambda_ratio", "detuning", "gt_max", "dv_order", "dv_aggregate"}},
    {"dce-rabi", {"omega", "qubit_omega", "envelope", "amplitude", "frequency", "phase", "amplitude2", "frequency2",
                  "phase2", "velocity", "wavenumber", "x0", "t_max", "window"}}};

bool known_scenario_key(const std::string& key) {
  if (kCommonKeys.count(key) || kRwaKeys.count(key)) return true;
  return std::any_of(kScenarioKeys.begin(), kScenarioKeys.end(), [&](const auto& kv) { return kv.second.count(key) > 0; });
}

double to_double(const std::string& section, const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size() || !std::isfinite(d)) throw std::invalid_argument("");
    return d;
  } catch (const std::exception&) {
    throw ConfigError("[" + section + "] " + key + ": expected a number, got '" + v + "'");
  }
}

long to_long(const std::string& section, const std::string& key, const std::string& v) {
  const double d = to_double(section, key, v);
  if (d != std::floor(d) || std::abs(d) > 9e15) throw ConfigError("[" + section + "] " + key + ": expected an integer");
  return static_cast<long>(d);
}

std::vector<std::string> split(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> to_list(const std::string& section, const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& s : split(v)) out.push_back(to_double(section, key, s));
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
  if (v == "false" || v == "no" || v == "0" || v == "off") return false;
  throw ConfigError("[scenario] " + key + ": expected a boolean, got '" + v + "'");
}

class ScenarioView {
 public:
  ScenarioView(const CliConfig& c, const std::string& name) : keys_(c.scenario_keys) {
    auto it = kScenarioKeys.find(name);
    if (it == kScenarioKeys.end()) throw ConfigError("unknown scenario '" + name + "'");
    for (const auto& [k, v] : keys_)
      if (!kCommonKeys.count(k) && !kRwaKeys.count(k) && !it->second.count(k))
        throw ConfigError("[scenario] key '" + k + "' does not apply to scenario " + name);
    if (name != "3spdc" && keys_.count("kerr")) throw ConfigError("[scenario] kerr applies to 3spdc only");
  }
  bool has(const std::string& k) const { return keys_.count(k) > 0; }
  const std::string& raw(const std::string& k) const { return keys_.at(k); }
  double num(const std::string& k, double fallback) const { return has(k) ? to_double("scenario", k, raw(k)) : fallback; }
  long integer(const std::string& k, long fallback) const { return has(k) ? to_long("scenario", k, raw(k)) : fallback; }
  bool flag(const std::string& k, bool fallback) const { return has(k) ? to_bool(k, raw(k)) : fallback; }
  template <std::size_t N>
  std::array<double, N> triple(const std::string& k) const {
    const auto v = to_list("scenario", k, raw(k));
    if (v.size() != N) throw ConfigError("[scenario] " + k + ": expected " + std::to_string(N) + " values");
    std::array<double, N> out{};
    std::copy(v.begin(), v.end(), out.begin());
    return out;
  }

 private:
  const std::map<std::string, std::string>& keys_;
};

void apply_control(const ScenarioView& v, StepControl& c) {
  c.atol = v.num("atol", c.atol);
  c.rtol = v.num("rtol", c.rtol);
  if (!(c.atol > 0.0) || !(c.rtol > 0.0)) throw ConfigError("[scenario] atol and rtol must be positive");
}

int positive_int(const ScenarioView& v, const std::string& k, int fallback) {
  const long x = v.integer(k, fallback);
  if (x < 1 || x > 100000000) throw ConfigError("[scenario] " + k + " must be a positive integer");
  return static_cast<int>(x);
}

double positive(const ScenarioView& v, const std::string& k, double fallback) {
  const double x = v.num(k, fallback);
  if (!(x > 0.0)) throw ConfigError("[scenario] " + k + " must be positive");
  return x;
}

void apply_search(const ScenarioView& v, VlfSearch& s) {
  s.restarts = positive_int(v, "restarts", s.restarts);
  s.iterations = positive_int(v, "iterations", s.iterations);
  s.seed = static_cast<std::uint64_t>(v.integer("seed", static_cast<long>(s.seed)));
}

}  // namespace

std::optional<Circuit> CliConfig::circuit() const {
  if (!squid || !cavity) return std::nullopt;
  return Circuit{*squid, *cavity, n_modes};
}

CliConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  pt::ptree tree;
  try {
    std::istringstream is(text);
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  CliConfig c;
  c.base_dir = base_dir;
  for (const auto& [section, body] : tree) {
    if (section != "circuit" && section != "scenario" && section != "output")
      throw ConfigError("unknown top-level entry '" + section + "' (sections are [circuit], [scenario], [output])");
    for (const auto& [key, node] : body) {
      const auto value = node.get_value<std::string>();
      if (section == "circuit" && !kCircuitKeys.count(key)) throw ConfigError("[circuit] unknown key '" + key + "'");
      if (section == "output" && !kOutputKeys.count(key)) throw ConfigError("[output] unknown key '" + key + "'");
      if (section == "scenario" && !known_scenario_key(key)) throw ConfigError("[scenario] unknown key '" + key + "'");
    }
  }
  if (auto circuit = tree.get_child_optional("circuit")) {
    std::map<std::string, std::string> kv;
    for (const auto& [key, node] : *circuit) kv[key] = node.get_value<std::string>();
    auto num = [&](const std::string& k, std::optional<double> fallback) {
      if (kv.count(k)) return to_double("circuit", k, kv.at(k));
      if (!fallback) throw ConfigError("[circuit] missing key '" + k + "'");
      return *fallback;
    };
    if (kv.count("n_modes")) {
      const long n = to_long("circuit", "n_modes", kv.at("n_modes"));
      if (n < 1 || n > 64) throw ConfigError("[circuit] n_modes must be between 1 and 64");
      c.n_modes = static_cast<int>(n);
    }
    const bool any_cavity = kv.count("length") || kv.count("cap_per_len") || kv.count("ind_per_len");
    if (any_cavity) {
      CavityParams cav{num("length", {}), num("cap_per_len", {}), num("ind_per_len", {})};
      try {
        validate(cav);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("[circuit] ") + e.what());
      }
      c.cavity = cav;
    }
    if (kv.count("e_bar")) {
      c.e_bar = num("e_bar", {});
      if (*c.e_bar < 0.0) throw ConfigError("[circuit] e_bar must be non-negative");
    }
    const bool any_squid = kv.count("ej1") || kv.count("ej2") || kv.count("flux_bias");
    if (any_squid || !c.e_bar) {
      SquidParams s{num("ej1", {}),          num("ej2", {}),          num("c1", 0.0), num("c2", 0.0),
                    num("flux_bias", {}),    num("pump_amplitude", 0.0), num("pump_frequency", 0.0)};
      try {
        validate(s);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("[circuit] ") + e.what());
      }
      c.squid = s;
    }
    if (!c.cavity) throw ConfigError("[circuit] needs length, cap_per_len and ind_per_len");
  }
  if (auto sc = tree.get_child_optional("scenario")) {
    for (const auto& [key, node] : *sc) c.scenario_keys[key] = node.get_value<std::string>();
    if (c.scenario_keys.count("name")) {
      c.scenario = c.scenario_keys.at("name");
      const auto& names = scenario_names();
      if (std::find(names.begin(), names.end(), c.scenario) == names.end())
        throw ConfigError("[scenario] unknown scenario name '" + c.scenario + "'");
    }
    if (c.scenario_keys.count("kerr")) {
      try {
        kerr_mode_from_name(c.scenario_keys.at("kerr"));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("[scenario] ") + e.what());
      }
    }
  }
  if (auto out = tree.get_child_optional("output")) {
    if (auto dir = out->get_optional<std::string>("dir")) c.output_dir = *dir;
    if (auto snaps = out->get_optional<std::string>("snapshot_times")) c.snapshot_times = to_list("output", "snapshot_times", *snaps);
  }
  return c;
}

CliConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.has_parent_path() ? path.parent_path() : std::filesystem::path("."));
}

void set_scenario_key(CliConfig& config, const std::string& key, const std::string& value) {
  if (!known_scenario_key(key)) throw ConfigError("[scenario] unknown key '" + key + "'");
  config.scenario_keys[key] = value;
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {"3spdc", "22spdc", "hybrid-swap", "dce-rabi"};
  return names;
}

Spdc3Config spdc3_config(const CliConfig& config) {
  ScenarioView v(config, "3spdc");
  Spdc3Config c;
  c.circuit = config.circuit();
  c.g0 = v.num("g0", c.g0);
  c.cutoff = positive_int(v, "cutoff", c.cutoff);
  c.gt_max = positive(v, "gt_max", c.gt_max);
  c.points = static_cast<std::size_t>(positive_int(v, "points", static_cast<int>(c.points)));
  if (v.has("kerr")) c.kerr = kerr_mode_from_name(v.raw("kerr"));
  if (v.has("hamiltonian")) {
    const auto& h = v.raw("hamiltonian");
    if (h != "rwa" && h != "full") throw ConfigError("[scenario] hamiltonian must be rwa or full");
    c.full_hamiltonian = h == "full";
    if (c.full_hamiltonian && !c.circuit) throw ConfigError("[scenario] hamiltonian = full needs a [circuit] section");
  }
  if (v.has("families")) {
    static const std::map<std::string, unsigned> fam = {{"free", kFree}, {"m1", kM1}, {"m2", kM2},
                                                        {"m3", kM3},     {"n4", kN4}, {"m4", kM4}};
    c.families = 0;
    for (const auto& f : split(v.raw("families"))) {
      auto it = fam.find(f);
      if (it == fam.end()) throw ConfigError("[scenario] unknown Hamiltonian family '" + f + "'");
      c.families |= it->second;
    }
  }
  c.optimize_s = v.flag("optimize_s", c.optimize_s);
  apply_search(v, c.search);
  apply_control(v, c.control);
  return c;
}

Spdc22Config spdc22_config(const CliConfig& config) {
  ScenarioView v(config, "22spdc");
  Spdc22Config c;
  c.g = v.num("g", c.g);
  c.pump_phase = v.num("pump_phase", c.pump_phase);
  c.cutoff = positive_int(v, "cutoff", c.cutoff);
  c.gt_max = positive(v, "gt_max", c.gt_max);
  c.points = static_cast<std::size_t>(positive_int(v, "points", static_cast<int>(c.points)));
  if (v.has("frequencies")) c.frequencies = v.triple<3>("frequencies");
  if (v.has("pumps")) c.pumps = v.triple<2>("pumps");
  c.optimize_s = v.flag("optimize_s", c.optimize_s);
  apply_search(v, c.search);
  apply_control(v, c.control);
  return c;
}

HybridConfig hybrid_config(const CliConfig& config) {
  ScenarioView v(config, "hybrid-swap");
  HybridConfig c;
  c.g0 = v.num("g0", c.g0);
  if (v.has("lambda") && v.has("lambda_ratio")) throw ConfigError("[scenario] give lambda or lambda_ratio, not both");
  if (v.has("lambda")) c.lambda = v.triple<3>("lambda");
  const double ratio = v.num("lambda_ratio", 10.0);
  if (!v.has("lambda")) c.lambda = {ratio * c.g0, ratio * c.g0, ratio * c.g0};
  for (double l : c.lambda)
    if (!(l >= 0.0)) throw ConfigError("[scenario] Jaynes-Cummings couplings must be non-negative");
  if (v.has("detuning")) c.detuning = v.triple<3>("detuning");
  c.cutoff = positive_int(v, "cutoff", c.cutoff);
  c.gt_max = positive(v, "gt_max", c.gt_max);
  c.points = static_cast<std::size_t>(positive_int(v, "points", static_cast<int>(c.points)));
  if (v.has("dv_order")) {
    const auto& o = v.raw("dv_order");
    if (o != "normal" && o != "antinormal") throw ConfigError("[scenario] dv_order must be normal or antinormal");
    c.order = o == "normal" ? MomentOrder::normal : MomentOrder::antinormal;
  }
  if (v.has("dv_aggregate")) {
    const auto& a = v.raw("dv_aggregate");
    if (a != "sum" && a != "max") throw ConfigError("[scenario] dv_aggregate must be sum or max");
    c.aggregate = a == "sum" ? Aggregate::sum : Aggregate::max;
  }
  apply_control(v, c.control);
  return c;
}

DceConfig dce_config(const CliConfig& config) {
  ScenarioView v(config, "dce-rabi");
  DceConfig c;
  c.omega = positive(v, "omega", c.omega);
  c.qubit_omega = positive(v, "qubit_omega", c.qubit_omega);
  const std::string kind = v.has("envelope") ? v.raw("envelope") : "two-tone";
  const double a = v.num("amplitude", 0.008);
  if (kind == "constant") {
    c.envelope = Envelope::constant(a);
  } else if (kind == "cosine") {
    c.envelope = Envelope::cosine(a, v.num("frequency", c.omega + c.qubit_omega), v.num("phase", 0.0));
  } else if (kind == "two-tone") {
    c.envelope = Envelope::two_tone(a, v.num("frequency", 1.7), v.num("amplitude2", a), v.num("frequency2", 0.3),
                                    v.num("phase", 0.0), v.num("phase2", 0.0));
  } else if (kind == "motional") {
    c.envelope = Envelope::motional(a, v.num("velocity", 0.0), v.num("wavenumber", 0.0), v.num("x0", 0.0));
  } else {
    throw ConfigError("[scenario] envelope must be constant, cosine, two-tone or motional");
  }
  c.cutoff = positive_int(v, "cutoff", c.cutoff);
  c.t_max = positive(v, "t_max", c.t_max);
  c.points = static_cast<std::size_t>(positive_int(v, "points", static_cast<int>(c.points)));
  c.window = positive(v, "window", c.window);
  apply_control(v, c.control);
  return c;
}

ScenarioResult run_scenario(const std::string& name, const CliConfig& config, std::optional<std::uint64_t> seed) {
  if (name == "3spdc") {
    auto c = spdc3_config(config);
    if (seed) c.search.seed = *seed;
    return run_3spdc(c);
  }
  if (name == "22spdc") {
    auto c = spdc22_config(config);
    if (seed) c.search.seed = *seed;
    return run_22spdc(c);
  }
  if (name == "hybrid-swap") return run_hybrid_swap(hybrid_config(config));
  if (name == "dce-rabi") return run_dce(dce_config(config));
  throw ConfigError("unknown scenario '" + name + "'");
}

}  // namespace cqed

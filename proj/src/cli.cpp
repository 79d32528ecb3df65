#include "cqed/cli.hpp"

#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cqed/config.hpp"
#include "cqed/errors.hpp"
#include "cqed/io.hpp"
#include "cqed/rwa.hpp"
#include "cqed/witnesses.hpp"

namespace cqed {

namespace {

std::vector<std::size_t> parse_indices(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    const long v = std::stol(item, &pos);
    if (pos != item.size() || v < 0) throw std::invalid_argument("bad index list '" + s + "'");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

void write_result(const ScenarioResult& r, const std::filesystem::path& dir, const std::string& stem,
                  const std::vector<double>& snapshots) {
  // Render everything before touching the filesystem.
  std::vector<std::pair<std::filesystem::path, std::string>> files;
  files.emplace_back(dir / (stem + ".csv"), trajectory_csv(r));
  files.emplace_back(dir / (stem + "_summary.json"), r.summary.dump(2) + "\n");
  for (double t : snapshots) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < r.times.size(); ++i)
      if (std::abs(r.times[i] - t) < std::abs(r.times[best] - t)) best = i;
    auto j = state_to_json(r.states[best]);
    j["time"] = r.times[best];
    std::ostringstream name;
    name << stem << "_state_" << std::setprecision(6) << r.times[best] << ".json";
    files.emplace_back(dir / name.str(), j.dump() + "\n");
  }
  for (const auto& [path, content] : files) atomic_write(path, content);
}

std::string pad(const std::string& s, std::size_t w) { return s.size() >= w ? s + " " : s + std::string(w - s.size(), ' '); }

int cmd_modes(const std::string& config_path, int n_modes, const std::string& out_path, const std::string& json_path,
              std::ostream& out) {
  const auto cfg = load_config(config_path);
  if (!cfg.cavity) throw ConfigError("modes needs a [circuit] section with cavity parameters");
  const int k = n_modes > 0 ? n_modes : cfg.n_modes;
  const double e_bar = cfg.e_bar ? *cfg.e_bar : effective_junction(*cfg.squid).e_bar;
  const auto spec = mode_spectrum(*cfg.cavity, e_bar, k);
  const auto csv = spectrum_csv(spec);
  std::string json;
  if (!json_path.empty()) {
    nlohmann::json j = {{"e_bar", e_bar}, {"spectrum", spectrum_json(spec)}};
    if (cfg.squid) {
      auto eff = effective_junction(*cfg.squid);
      eff.e_bar = e_bar;
      const auto table = coupling_table(spec, eff);
      j["junction"] = {{"e_bar", eff.e_bar}, {"delta_e", eff.delta_e}, {"delta_alpha", eff.delta_alpha}, {"c_total", eff.c_total}};
      j["couplings"] = coupling_json(table);
      if (k >= 3) j["g0"] = g0_3spdc(table, cfg.squid->pump_amplitude);
    }
    json = j.dump(2) + "\n";
  }
  if (out_path.empty())
    out << csv;
  else
    atomic_write(out_path, csv);
  if (!json.empty()) atomic_write(json_path, json);
  return kExitOk;
}

int cmd_rwa(const std::string& config_path, std::optional<double> tolerance, const std::string& kerr_name,
            const std::string& json_path, std::ostream& out) {
  const auto cfg = load_config(config_path);
  std::vector<LadderMonomial> terms;
  std::vector<double> freqs;
  double drive = 0.0;
  KerrMode kerr = KerrMode::drop;
  if (cfg.scenario_keys.count("kerr")) kerr = kerr_mode_from_name(cfg.scenario_keys.at("kerr"));
  if (!kerr_name.empty()) kerr = kerr_mode_from_name(kerr_name);
  if (cfg.scenario_keys.count("terms_file")) {
    const auto path = cfg.base_dir / cfg.scenario_keys.at("terms_file");
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read terms file '" + path.string() + "'");
    nlohmann::json j;
    try {
      in >> j;
      freqs = j.at("frequencies").get<std::vector<double>>();
      drive = j.value("drive", 0.0);
      for (const auto& t : j.at("terms")) terms.push_back(t.get<LadderMonomial>());
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("terms file: ") + e.what());
    }
    if (cfg.scenario_keys.count("drive_frequency")) drive = std::stod(cfg.scenario_keys.at("drive_frequency"));
    std::vector<double> boson;
    std::vector<bool> seen(freqs.size(), false);
    for (const auto& t : terms)
      for (const auto& f : t.factors)
        if (is_ladder(f.kind) && f.subsystem < freqs.size() && !seen[f.subsystem]) {
          seen[f.subsystem] = true;
          boson.push_back(freqs[f.subsystem]);
        }
    check_nondegenerate(boson);
  } else {
    if (!cfg.cavity) throw ConfigError("rwa needs a [circuit] section or [scenario] terms_file");
    const double e_bar = cfg.e_bar ? *cfg.e_bar : effective_junction(*cfg.squid).e_bar;
    const auto spec = mode_spectrum(*cfg.cavity, e_bar, cfg.n_modes);
    check_nondegenerate(spec.frequencies);
    if (!cfg.squid) throw ConfigError("rwa on a circuit needs the SQUID parameters");
    const auto model = derive(*cfg.circuit());
    freqs = model.spectrum.frequencies;
    drive = model.pump_frequency;
    if (cfg.scenario_keys.count("drive_frequency")) drive = std::stod(cfg.scenario_keys.at("drive_frequency"));
    terms = circuit_terms(model.spectrum, model.table, cfg.squid->pump_amplitude, kAllFamilies & ~kFree);
  }
  double tol = tolerance ? *tolerance : default_tolerance(freqs);
  if (!tolerance && cfg.scenario_keys.count("tolerance")) tol = std::stod(cfg.scenario_keys.at("tolerance"));
  const auto merged = simplify(terms);
  const auto cls = classify_terms(merged, freqs, drive, tol);
  const auto reduced = rwa_reduce(terms, freqs, drive, tol, kerr);
  std::size_t kerr_count = 0;
  for (const auto& t : cls.resonant) kerr_count += is_kerr_like(t);

  out << "drive " << format_double(drive) << "  tolerance " << format_double(tol) << "  kerr " << kerr_mode_name(kerr)
      << "\n\nresonant terms (" << reduced.size() << ")\n";
  out << pad("coefficient", 28) << "operator\n";
  for (const auto& t : reduced) {
    std::ostringstream c;
    c << format_double(t.coeff.real()) << (t.coeff.imag() < 0 ? "" : "+") << format_double(t.coeff.imag()) << "i";
    out << pad(c.str(), 28) << to_string({t.factors, 1.0, t.drive_sign}).substr(4) << "\n";
  }
  out << "\nkerr-like resonant terms in input: " << kerr_count << "\n";
  out << "\ncounter-rotating terms (" << cls.counter_rotating.size() << ")\n";
  out << pad("detuning", 26) << pad("coefficient", 28) << "operator\n";
  for (const auto& [t, w] : cls.counter_rotating) {
    std::ostringstream c;
    c << format_double(t.coeff.real()) << (t.coeff.imag() < 0 ? "" : "+") << format_double(t.coeff.imag()) << "i";
    out << pad(format_double(w), 26) << pad(c.str(), 28) << to_string({t.factors, 1.0, t.drive_sign}).substr(4) << "\n";
  }
  if (!json_path.empty()) {
    nlohmann::json j = {{"drive", drive}, {"tolerance", tol}, {"kerr", kerr_mode_name(kerr)}, {"resonant", reduced}};
    auto cr = nlohmann::json::array();
    for (const auto& [t, w] : cls.counter_rotating) cr.push_back({{"term", t}, {"detuning", w}});
    j["counter_rotating"] = cr;
    atomic_write(json_path, j.dump(2) + "\n");
  }
  return kExitOk;
}

std::string resolve_scenario(const std::string& cli_name, const CliConfig& cfg) {
  if (!cli_name.empty() && !cfg.scenario.empty() && cli_name != cfg.scenario)
    throw ConfigError("--scenario " + cli_name + " contradicts [scenario] name = " + cfg.scenario);
  const std::string name = cli_name.empty() ? cfg.scenario : cli_name;
  if (name.empty()) throw ConfigError("no scenario named on the command line or in [scenario]");
  return name;
}

std::filesystem::path resolve_out(const std::string& cli_out, const CliConfig& cfg) {
  if (!cli_out.empty()) return cli_out;
  if (!cfg.output_dir.empty()) return cfg.output_dir.is_absolute() ? cfg.output_dir : cfg.base_dir / cfg.output_dir;
  throw ConfigError("no output directory (--out or [output] dir)");
}

int cmd_run(const std::string& scenario, const std::string& config_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed, std::ostream& out) {
  const auto cfg = config_path.empty() ? CliConfig{} : load_config(config_path);
  const auto name = resolve_scenario(scenario, cfg);
  const auto dir = resolve_out(out_dir, cfg);
  const auto r = run_scenario(name, cfg, seed);
  write_result(r, dir, name, cfg.snapshot_times);
  out << r.summary.dump(2) << "\n";
  return r.converged ? kExitOk : kExitNotConverged;
}

int cmd_witness(const std::string& state_path, const std::string& modes_s, const std::string& qubits_s, int restarts,
                std::uint64_t seed, const std::string& json_path, std::ostream& out) {
  std::ifstream in(state_path);
  if (!in) throw ConfigError("cannot read state file '" + state_path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("state file: ") + e.what());
  }
  const auto state = state_from_json(j);
  const auto& layout = state.layout();
  auto pick = [&](const std::string& s, SubsystemKind kind) -> std::optional<ModeTriple> {
    std::vector<std::size_t> idx;
    if (!s.empty()) {
      idx = parse_indices(s);
    } else {
      for (std::size_t i = 0; i < layout.size() && idx.size() < 3; ++i)
        if (layout[i].kind == kind) idx.push_back(i);
      if (idx.size() < 3) return std::nullopt;
    }
    if (idx.size() != 3) throw ConfigError("witnesses need exactly three subsystems");
    return ModeTriple{idx[0], idx[1], idx[2]};
  };
  std::vector<WitnessReport> reports;
  if (auto m = pick(modes_s, SubsystemKind::boson)) {
    VlfSearch search;
    search.restarts = restarts;
    search.seed = seed;
    reports.push_back(optimize_vlf(state, search, *m));
    for (std::size_t a = 0; a < 3; ++a) reports.push_back(hz_inseparability(state, a, *m));
    reports.push_back(genuine_g1(state, *m));
    reports.push_back(genuine_g2(state, *m));
  }
  if (auto q = pick(qubits_s, SubsystemKind::qubit)) {
    for (auto order : {MomentOrder::normal, MomentOrder::antinormal})
      for (auto agg : {Aggregate::max, Aggregate::sum}) {
        auto r = dv_genuine(state, order, agg, *q);
        r.name = std::string("DV_") + (order == MomentOrder::normal ? "normal" : "antinormal") + "_" +
                 (agg == Aggregate::max ? "max" : "sum");
        reports.push_back(r);
      }
  }
  for (std::size_t i = 0; i < layout.size() && layout.size() > 1; ++i) {
    WitnessReport r;
    r.name = "negativity";
    r.value = state.is_pure() ? pure_state_negativity(state, {i}) : ppt_negativity(state, {i});
    r.detects = r.value > 1e-12;
    r.argmax = std::to_string(i) + "|rest";
    reports.push_back(r);
  }
  out << pad("name", 22) << pad("value", 26) << pad("detects", 9) << "bipartition\n";
  for (const auto& r : reports)
    out << pad(r.name, 22) << pad(format_double(r.value), 26) << pad(r.detects ? "yes" : "no", 9) << r.argmax << "\n";
  if (!json_path.empty()) {
    auto arr = nlohmann::json::array();
    for (const auto& r : reports) arr.push_back(report_to_json(r));
    atomic_write(json_path, arr.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_sweep(const std::string& scenario, const std::string& config_path, const std::string& param,
              const std::vector<std::string>& values, const std::string& out_dir, int jobs,
              std::optional<std::uint64_t> seed, std::ostream& out) {
  const auto base = config_path.empty() ? CliConfig{} : load_config(config_path);
  const auto name = resolve_scenario(scenario, base);
  const auto dir = resolve_out(out_dir, base);
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  std::vector<CliConfig> configs;
  for (const auto& v : values) {
    auto c = base;
    set_scenario_key(c, param, v);
    configs.push_back(std::move(c));
  }
  // Validate every configuration before any run starts.
  for (const auto& c : configs) {
    if (name == "3spdc") spdc3_config(c);
    else if (name == "22spdc") spdc22_config(c);
    else if (name == "hybrid-swap") hybrid_config(c);
    else dce_config(c);
  }
  std::vector<ScenarioResult> results(configs.size());
  const std::size_t width = static_cast<std::size_t>(std::max(1, jobs));
  for (std::size_t start = 0; start < configs.size(); start += width) {
    std::vector<std::future<ScenarioResult>> batch;
    for (std::size_t i = start; i < std::min(configs.size(), start + width); ++i)
      batch.push_back(std::async(std::launch::async, [&, i] { return run_scenario(name, configs[i], seed); }));
    for (std::size_t k = 0; k < batch.size(); ++k) results[start + k] = batch[k].get();
  }
  std::vector<std::string> keys;
  for (const auto& [k, v] : results.front().summary.items())
    if (v.is_number() || v.is_boolean()) keys.push_back(k);
  std::ostringstream csv;
  csv << "index," << param;
  for (const auto& k : keys) csv << "," << k;
  csv << "\n";
  bool converged = true;
  for (std::size_t i = 0; i < results.size(); ++i) {
    csv << i << "," << values[i];
    for (const auto& k : keys) {
      const auto& v = results[i].summary.contains(k) ? results[i].summary.at(k) : nlohmann::json(nullptr);
      csv << "," << (v.is_boolean() ? (v.get<bool>() ? "1" : "0") : v.is_number() ? format_double(v.get<double>()) : "");
    }
    csv << "\n";
    converged = converged && results[i].converged;
  }
  for (std::size_t i = 0; i < results.size(); ++i) write_result(results[i], dir, name + "_" + std::to_string(i), {});
  atomic_write(dir / "sweep.csv", csv.str());
  out << csv.str();
  return converged ? kExitOk : kExitNotConverged;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"cqedsim: circuit-QED three-mode down-conversion and entanglement witness toolkit"};
  app.require_subcommand(1);

  std::string config, out_path, json_path, scenario, state_path, modes, qubits, kerr, param;
  int n_modes = 0, restarts = 100, jobs = 1;
  std::optional<double> tolerance;
  std::optional<std::uint64_t> seed;
  std::uint64_t witness_seed = 1;
  std::vector<std::string> values;

  auto* modes_cmd = app.add_subcommand("modes", "solve the cavity mode spectrum and write it as CSV");
  modes_cmd->add_option("--config", config, "circuit config file")->required();
  modes_cmd->add_option("--n-modes", n_modes, "number of modes (default: [circuit] n_modes)");
  modes_cmd->add_option("--out", out_path, "CSV output path (default: standard output)");
  modes_cmd->add_option("--json", json_path, "also write spectrum, junction and coupling tables as JSON");

  auto* rwa_cmd = app.add_subcommand("rwa", "classify Hamiltonian terms into resonant and counter-rotating sets");
  rwa_cmd->add_option("--config", config, "circuit config or config with [scenario] terms_file")->required();
  rwa_cmd->add_option("--tolerance", tolerance, "resonance tolerance in rad/s (default 1e-6 min w)");
  rwa_cmd->add_option("--kerr", kerr, "keep, drop or constant-shift (default drop)");
  rwa_cmd->add_option("--json", json_path, "also write the classification as JSON");

  auto* run_cmd = app.add_subcommand("run", "run a scenario and write trajectory CSV plus summary JSON");
  run_cmd->add_option("--scenario", scenario, "3spdc, 22spdc, hybrid-swap or dce-rabi");
  run_cmd->add_option("--config", config, "scenario config file");
  run_cmd->add_option("--out", out_path, "output directory (default: [output] dir)");
  run_cmd->add_option("--seed", seed, "seed for the witness optimizer");

  auto* wit_cmd = app.add_subcommand("witness", "evaluate witnesses on a saved state");
  wit_cmd->add_option("--state", state_path, "state JSON file")->required();
  wit_cmd->add_option("--modes", modes, "three bosonic subsystem indices, e.g. 0,1,2");
  wit_cmd->add_option("--qubits", qubits, "three qubit subsystem indices, e.g. 3,4,5");
  wit_cmd->add_option("--restarts", restarts, "optimizer restarts for S")->check(CLI::PositiveNumber);
  wit_cmd->add_option("--seed", witness_seed, "optimizer seed");
  wit_cmd->add_option("--json", json_path, "also write the reports as JSON");

  auto* sweep_cmd = app.add_subcommand("sweep", "run a scenario over values of one [scenario] key");
  sweep_cmd->add_option("--scenario", scenario, "scenario name");
  sweep_cmd->add_option("--config", config, "base config file");
  sweep_cmd->add_option("--param", param, "[scenario] key to vary")->required();
  sweep_cmd->add_option("--values", values, "values (comma separated)")->required()->delimiter(',');
  sweep_cmd->add_option("--out", out_path, "output directory");
  sweep_cmd->add_option("--jobs", jobs, "concurrent runs")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--seed", seed, "seed for the witness optimizer");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*modes_cmd) return cmd_modes(config, n_modes, out_path, json_path, out);
    if (*rwa_cmd) return cmd_rwa(config, tolerance, kerr, json_path, out);
    if (*run_cmd) return cmd_run(scenario, config, out_path, seed, out);
    if (*wit_cmd) return cmd_witness(state_path, modes, qubits, restarts, witness_seed, json_path, out);
    if (*sweep_cmd) return cmd_sweep(scenario, config, param, values, out_path, jobs, seed, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::out_of_range& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitOk;
}

}  // namespace cqed

#include "tisim/app.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "tisim/parallel.hpp"

namespace tisim {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double x) {
  char b[64];
  std::snprintf(b, sizeof b, "%.12g", x);
  return b;
}

template <class T>
T get_field(const json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config field '" + key + "' has the wrong type");
  }
}

void reject_unknown(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
  if (!j.is_object()) throw ConfigError("config field '" + where + "' must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : keys) ok = ok || it.key() == k;
    if (!ok) throw ConfigError("unknown config key '" + (where.empty() ? "" : where + ".") + it.key() + "'");
  }
}

}  // namespace

void RunConfig::validate() const {
  auto need = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  need(A > 0, "A: must be > 0");
  need(delta > 0, "delta: must be > 0");
  need(eps_b >= 0, "eps_b: must be >= 0");
  need(ky_steps >= 2, "ky steps: steps >= 2 required");
  need(ky_max > ky_min, "ky range: max must exceed min");
  need(n >= 1, "n: n >= 1 required");
  for (int x : n_list) need(x >= 1, "n_list: entries must be >= 1");
  need(!n_list.empty(), "n_list: must not be empty");
  need(t >= 0, "t: must be >= 0");
  need(M >= 4, "M: at least 4 samples required");
  need(dt >= 0, "dt: must be >= 0 (0 selects the default)");
  need(tier == "gate" || tier == "pulse" || tier == "noisy", "tier: must be gate, pulse or noisy");
  need(readout == "xy" || readout == "x", "readout: must be xy or x");
  need(shots >= 0, "shots: must be >= 0");
  need(state_mode == "eigenstate" || state_mode == "amplitudes" || state_mode == "random",
       "state.mode: must be eigenstate, amplitudes or random");
  need(state_index >= 0 && state_index <= 3, "state.index: must be in 0..3");
  need(state_mode != "amplitudes" || amplitudes.size() == 4, "state.amplitudes: 4 entries required");
  need(basis == "eigen" || basis == "computational", "state.basis: must be eigen or computational");
  need(t2_star > 0, "noise.t2_star: must be > 0");
  need(t2 >= t2_star, "noise.t2: must be >= t2_star");
  need(mc_samples >= 1, "noise.mc_samples: must be >= 1");
  need(!s_values.empty(), "s_values: must not be empty");
  for (double s : s_values) need(s > 0, "s_values: entries must be > 0");
  need(window == "hann" || window == "rect", "window: must be hann or rect");
  need(threshold > 0 && threshold < 1, "threshold: must be in (0, 1)");
  need(loop_radius > 0, "loop.radius: must be > 0");
  need(loop_points >= 3, "loop.points: must be >= 3");
  need(band == 0 || band == 1, "loop.band: must be 0 or 1");
  need(B0 >= 0, "nv.B0: must be >= 0");
  need(jobs >= 0, "jobs: must be >= 0");
}

json RunConfig::to_json() const {
  json amps = json::array();
  for (auto c : amplitudes) amps.push_back({c.real(), c.imag()});
  return {{"A", A},
          {"delta", delta},
          {"eps_b", eps_b},
          {"kx", kx},
          {"ky", ky},
          {"ky_range", {ky_min, ky_max, ky_steps}},
          {"n", n},
          {"n_list", n_list},
          {"t", t},
          {"M", M},
          {"dt", dt},
          {"tier", tier},
          {"exact_u", exact_u},
          {"readout", readout},
          {"shots", shots},
          {"state", {{"mode", state_mode}, {"index", state_index}, {"amplitudes", amps}, {"basis", basis}}},
          {"noise", {{"t2_star", t2_star}, {"t2", t2}, {"mc_samples", mc_samples}, {"t2_envelope", t2_envelope}}},
          {"s_values", s_values},
          {"window", window},
          {"threshold", threshold},
          {"loop", {{"center", {loop_kx, loop_ky}}, {"radius", loop_radius}, {"points", loop_points}, {"band", band}}},
          {"nv", {{"B0", B0}}},
          {"seed", seed}};
}

RunConfig RunConfig::from_json(const json& j) {
  reject_unknown(j, {"A", "delta", "eps_b", "s", "kx", "ky", "ky_range", "n", "n_list", "t", "M", "dt",
                     "tier", "exact_u", "readout", "shots", "state", "noise", "s_values", "window",
                     "threshold", "loop", "nv", "seed", "jobs", "out"},
                 "");
  RunConfig c;
  auto num = [&](const char* k, double& v) {
    if (j.contains(k)) v = get_field<double>(j[k], k);
  };
  auto integer = [&](const char* k, int& v) {
    if (j.contains(k)) v = get_field<int>(j[k], k);
  };
  auto str = [&](const char* k, std::string& v) {
    if (j.contains(k)) v = get_field<std::string>(j[k], k);
  };
  num("A", c.A);
  num("delta", c.delta);
  num("eps_b", c.eps_b);
  if (j.contains("s")) {
    if (j.contains("eps_b")) throw ConfigError("give either eps_b or s, not both");
    c.eps_b = get_field<double>(j["s"], "s") * c.delta;
  }
  num("kx", c.kx);
  num("ky", c.ky);
  if (j.contains("ky_range")) {
    const auto r = get_field<std::vector<double>>(j["ky_range"], "ky_range");
    if (r.size() != 3) throw ConfigError("ky_range must be [min, max, steps]");
    c.ky_min = r[0], c.ky_max = r[1], c.ky_steps = static_cast<int>(r[2]);
  }
  integer("n", c.n);
  if (j.contains("n_list")) c.n_list = get_field<std::vector<int>>(j["n_list"], "n_list");
  num("t", c.t);
  integer("M", c.M);
  num("dt", c.dt);
  str("tier", c.tier);
  if (j.contains("exact_u")) c.exact_u = get_field<bool>(j["exact_u"], "exact_u");
  str("readout", c.readout);
  integer("shots", c.shots);
  if (j.contains("state")) {
    const auto& s = j["state"];
    reject_unknown(s, {"mode", "index", "amplitudes", "basis"}, "state");
    if (s.contains("mode")) c.state_mode = get_field<std::string>(s["mode"], "state.mode");
    if (s.contains("index")) c.state_index = get_field<int>(s["index"], "state.index");
    if (s.contains("basis")) c.basis = get_field<std::string>(s["basis"], "state.basis");
    if (s.contains("amplitudes")) {
      c.amplitudes.clear();
      for (const auto& a : s["amplitudes"]) {
        const auto v = get_field<std::vector<double>>(a, "state.amplitudes");
        if (v.size() != 2) throw ConfigError("state.amplitudes entries must be [re, im]");
        c.amplitudes.emplace_back(v[0], v[1]);
      }
    }
  }
  if (j.contains("noise")) {
    const auto& s = j["noise"];
    reject_unknown(s, {"t2_star", "t2", "mc_samples", "t2_envelope"}, "noise");
    if (s.contains("t2_star")) c.t2_star = get_field<double>(s["t2_star"], "noise.t2_star");
    if (s.contains("t2")) c.t2 = get_field<double>(s["t2"], "noise.t2");
    if (s.contains("mc_samples")) c.mc_samples = get_field<int>(s["mc_samples"], "noise.mc_samples");
    if (s.contains("t2_envelope")) c.t2_envelope = get_field<bool>(s["t2_envelope"], "noise.t2_envelope");
  }
  if (j.contains("s_values")) c.s_values = get_field<std::vector<double>>(j["s_values"], "s_values");
  str("window", c.window);
  num("threshold", c.threshold);
  if (j.contains("loop")) {
    const auto& s = j["loop"];
    reject_unknown(s, {"center", "radius", "points", "band"}, "loop");
    if (s.contains("center")) {
      const auto v = get_field<std::vector<double>>(s["center"], "loop.center");
      if (v.size() != 2) throw ConfigError("loop.center must be [kx, ky]");
      c.loop_kx = v[0], c.loop_ky = v[1];
    }
    if (s.contains("radius")) c.loop_radius = get_field<double>(s["radius"], "loop.radius");
    if (s.contains("points")) c.loop_points = get_field<int>(s["points"], "loop.points");
    if (s.contains("band")) c.band = get_field<int>(s["band"], "loop.band");
  }
  if (j.contains("nv")) {
    reject_unknown(j["nv"], {"B0"}, "nv");
    if (j["nv"].contains("B0")) c.B0 = get_field<double>(j["nv"]["B0"], "nv.B0");
  }
  if (j.contains("seed")) c.seed = get_field<std::uint64_t>(j["seed"], "seed");
  integer("jobs", c.jobs);
  str("out", c.out);
  return c;
}

NoiseModel RunConfig::noise() const {
  NoiseModel m;
  m.t2_star_e = t2_star;
  m.t2_e = t2;
  m.mc_samples = mc_samples;
  m.seed = seed;
  m.t2_envelope = t2_envelope;
  return m;
}

NVParams RunConfig::nv() const {
  NVParams p;
  p.B0 = B0;
  return p;
}

SignalOptions RunConfig::signal() const {
  SignalOptions o;
  o.tier = parse_tier(tier);
  o.exact_u = exact_u;
  o.n = n;
  o.M = M;
  o.dt = dt;
  o.y_readout = readout == "xy";
  o.shots = shots;
  o.seed = seed;
  o.noise = noise();
  o.nv = nv();
  o.jobs = jobs;
  return o;
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash(const RunConfig& c) {
  char b[32];
  std::snprintf(b, sizeof b, "%016llx", static_cast<unsigned long long>(fnv1a64(c.to_json().dump())));
  return b;
}

namespace {

struct Ctx {
  RunConfig cfg;
  std::string command;
  std::ostream& out;
  json meta() const {
    return {{"tool", "tisim"}, {"version", kVersion}, {"command", command},
            {"config_hash", config_hash(cfg)}, {"seed", cfg.seed}};
  }
  std::string csv_header() const {
    return "# tisim " + std::string(kVersion) + " command=" + command + " config_hash=" +
           config_hash(cfg) + " seed=" + std::to_string(cfg.seed) + "\n";
  }
  void write(const std::string& name, const std::string& body) const {
    fs::create_directories(cfg.out);
    std::ofstream f(fs::path(cfg.out) / name, std::ios::binary);
    if (!f) throw ConfigError("out: cannot write " + (fs::path(cfg.out) / name).string());
    f << body;
  }
  void write_json(const std::string& name, json body) const {
    body["metadata"] = meta();
    write(name, body.dump(2) + "\n");
  }
  void write_config() const { write("config.json", cfg.to_json().dump(2) + "\n"); }
};

InputStateSpec state_of(const RunConfig& c) {
  InputStateSpec s;
  s.mode = c.state_mode == "eigenstate" ? StateMode::Eigenstate
           : c.state_mode == "random"   ? StateMode::Random
                                        : StateMode::Amplitudes;
  s.index = c.state_index;
  s.amplitudes = c.amplitudes;
  s.basis = c.basis;
  s.seed = c.seed;
  return s;
}

void cmd_bands(const Ctx& x) {
  const auto t = band_scan(x.cfg.ti(), x.cfg.kx, x.cfg.ky_min, x.cfg.ky_max, x.cfg.ky_steps);
  x.write("bands.csv", x.csv_header() + t.to_csv());
  x.write_config();
  double gmin = 1e300;
  for (const auto& e : t.E) gmin = std::min(gmin, e[2] - e[1]);
  x.out << "rows " << t.ky.size() << " min E3-E2 " << fmt(gmin) << "\n";
}

void cmd_spectrum(const Ctx& x) {
  const auto p = x.cfg.ti();
  const Momentum k{x.cfg.kx, x.cfg.ky};
  const auto sig = run_signal(state_of(x.cfg), p, k, x.cfg.signal());
  ExtractOptions eo;
  eo.window = x.cfg.window;
  eo.threshold = x.cfg.threshold;
  const auto sp = extract_spectrum(sig, eo);
  const auto exact = spectrum_exact(p, k);
  x.write("signal.csv", x.csv_header() + sig.to_csv());
  json body{{"spectrum", sp.to_json()},
            {"exact_energies", std::vector<double>(exact.E.begin(), exact.E.end())},
            {"dt", sig.dt},
            {"M", static_cast<int>(sig.t.size())},
            {"tier", x.cfg.tier},
            {"leakage", sig.leakage}};
  x.write_json("spectrum.json", body);
  x.write_config();
  x.out << "peaks";
  for (const auto& pk : sp.peaks) x.out << " " << fmt(pk.energy) << "(" << fmt(pk.weight) << ")";
  x.out << "\nresolution " << fmt(sp.resolution) << "\n";
}

void cmd_qpt(const Ctx& x) {
  QptOptions o;
  o.s_values = x.cfg.s_values;
  o.A = x.cfg.A;
  o.delta = x.cfg.delta;
  o.ky_min = x.cfg.ky_min;
  o.ky_max = x.cfg.ky_max;
  o.ky_steps = x.cfg.ky_steps;
  o.signal = x.cfg.signal();
  const auto res = qpt_scan(o);
  json arr = json::array();
  for (const auto& q : res) {
    json rows = json::array();
    for (size_t i = 0; i < q.bands.ky.size(); ++i)
      rows.push_back({{"ky", q.bands.ky[i]}, {"E", std::vector<double>(q.bands.E[i].begin(), q.bands.E[i].end())}});
    arr.push_back({{"s", q.s}, {"phase", to_string(q.phase)}, {"min_gap", q.min_gap},
                   {"crossings", q.crossings}, {"resolution", q.resolution},
                   {"exact_phase", to_string(minimal_gap({x.cfg.A, x.cfg.delta, q.s * x.cfg.delta}).phase)},
                   {"bands", rows}});
    x.out << "s=" << fmt(q.s) << " " << to_string(q.phase) << " min_gap " << fmt(q.min_gap);
    for (double c : q.crossings) x.out << " ky=" << fmt(c);
    x.out << "\n";
  }
  x.write_json("qpt.json", {{"results", arr}});
  x.write_config();
}

void cmd_fidelity(const Ctx& x) {
  FidelityGrid g;
  g.A = x.cfg.A;
  g.delta = x.cfg.delta;
  g.s_values = x.cfg.s_values;
  json arr = json::array();
  std::vector<double> err;
  for (int n : x.cfg.n_list) {
    const auto st = fidelity_sweep(g, n, x.cfg.jobs);
    err.push_back(st.max_error);
    arr.push_back({{"n", n}, {"min_fidelity", st.min_fidelity}, {"mean_fidelity", st.mean_fidelity},
                   {"max_error", st.max_error}});
    x.out << "n=" << n << " min_fidelity " << fmt(st.min_fidelity) << " mean " << fmt(st.mean_fidelity) << "\n";
  }
  json body{{"results", arr}};
  if (x.cfg.n_list.size() >= 2) {
    body["error_exponent"] = fit_exponent(x.cfg.n_list, err);
    x.out << "error exponent " << fmt(body["error_exponent"].get<double>()) << "\n";
  }
  x.write_json("fidelity.json", body);
  x.write_config();
}

void cmd_timing(const Ctx& x) {
  const auto p = x.cfg.ti();
  auto plan = make_plan(p, x.cfg.t, x.cfg.n, Tier::Pulse);
  const auto s = full_run_schedule(plan, p, {x.cfg.kx, x.cfg.ky}, x.cfg.nv());
  const auto t = schedule_timing(s);
  x.write_json("timing.json", {{"timing", to_json(t)}});
  x.write_json("schedule.json", {{"schedule", to_json(s)}});
  x.write_config();
  x.out << "total_us " << fmt(t.total_us) << " rf_us " << fmt(t.rf_us) << " mw_us " << fmt(t.mw_us)
        << " free_us " << fmt(t.free_us) << "\n";
}

void cmd_winding(const Ctx& x) {
  const auto p = x.cfg.ti();
  const auto loop = circle_loop(x.cfg.loop_kx, x.cfg.loop_ky, x.cfg.loop_radius, x.cfg.loop_points);
  const auto w = winding_number(p, loop, x.cfg.band);
  x.write_json("winding.json", {{"winding", w.winding}, {"berry_phase", w.berry_phase},
                                {"residue", w.residue}, {"dirac_points", dirac_points(p)}});
  x.write_config();
  x.out << "winding " << w.winding << " berry_phase " << fmt(w.berry_phase) << " residue " << fmt(w.residue) << "\n";
}

// "min:max:steps" or a single value
void parse_ky(const std::string& s, RunConfig& c, bool& single) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string tok;
  try {
    while (std::getline(ss, tok, ':')) v.push_back(std::stod(tok));
  } catch (...) {
    throw ConfigError("ky: expected a number or min:max:steps");
  }
  if (v.size() == 1) {
    c.ky = v[0];
    single = true;
  } else if (v.size() == 3) {
    c.ky_min = v[0], c.ky_max = v[1], c.ky_steps = static_cast<int>(v[2]);
  } else {
    throw ConfigError("ky: expected a number or min:max:steps");
  }
}

template <class T>
std::vector<T> parse_list(const std::string& s, const char* what) {
  std::vector<T> v;
  std::stringstream ss(s);
  std::string tok;
  try {
    while (std::getline(ss, tok, ',')) v.push_back(static_cast<T>(std::stod(tok)));
  } catch (...) {
    throw ConfigError(std::string(what) + ": expected a comma separated list");
  }
  return v;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Topological insulator thin film simulated on an NV register"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  struct Flags {
    std::optional<std::string> config, outdir, tier, ky, s, n, state, loop_center;
    std::optional<std::uint64_t> seed;
    std::optional<int> jobs, steps, M, mc, shots, state_index, points, band;
    std::optional<double> A, delta, eps_b, kx, t, dt, t2_star, radius;
    bool exact_u = false, x_only = false;
  } f;

  auto common = [&](CLI::App* c) {
    c->add_option("--config", f.config, "JSON config file");
    c->add_option("--out", f.outdir, "output directory");
    c->add_option("--seed", f.seed, "master seed");
    c->add_option("--tier", f.tier, "gate, pulse or noisy");
    c->add_option("--jobs", f.jobs, "worker threads (0 = all cores)");
    c->add_option("--A", f.A, "spin-orbit constant");
    c->add_option("--delta", f.delta, "tunnel coupling");
    c->add_option("--eps-b", f.eps_b, "magnetic energy");
  };
  auto* bands = app.add_subcommand("bands", "band structure table");
  auto* spectrum = app.add_subcommand("spectrum", "simulate the eigenvalue-finding algorithm");
  auto* qpt = app.add_subcommand("qpt", "phase-transition scan over eps_b / delta");
  auto* fid = app.add_subcommand("fidelity", "Trotter state fidelity sweep");
  auto* timing = app.add_subcommand("timing", "pulse schedule timing budget");
  auto* winding = app.add_subcommand("winding", "Berry phase winding around a loop");
  for (auto* c : {bands, spectrum, qpt, fid, timing, winding}) common(c);

  for (auto* c : {bands, spectrum, timing, qpt}) c->add_option("--ky", f.ky, "ky value or min:max:steps");
  for (auto* c : {bands, spectrum, timing}) c->add_option("--kx", f.kx, "kx");
  for (auto* c : {bands, qpt}) c->add_option("--steps", f.steps, "ky steps");
  for (auto* c : {spectrum, qpt, timing, fid})
    c->add_option("--s", f.s, "eps_b / delta (comma list for qpt and fidelity)");
  for (auto* c : {spectrum, qpt, timing, fid}) c->add_option("--n", f.n, "Trotter slices (list for fidelity)");
  for (auto* c : {spectrum, qpt}) {
    c->add_option("--M", f.M, "samples");
    c->add_option("--dt", f.dt, "sample spacing");
    c->add_flag("--exact-u", f.exact_u, "exact controlled-U reference mode");
    c->add_option("--t2-star", f.t2_star, "electron T2* (us)");
    c->add_option("--mc", f.mc, "Monte Carlo samples");
    c->add_option("--shots", f.shots, "readout shots per point (0 = exact)");
  }
  spectrum->add_option("--state", f.state, "eigenstate, random or amplitudes");
  spectrum->add_option("--state-index", f.state_index, "eigenstate index 0..3");
  spectrum->add_flag("--x-only", f.x_only, "cosine readout only");
  timing->add_option("--t", f.t, "simulated time per controlled-U");
  winding->add_option("--center", f.loop_center, "loop center kx,ky");
  winding->add_option("--radius", f.radius, "loop radius");
  winding->add_option("--points", f.points, "loop points");
  winding->add_option("--band", f.band, "lower-pair band index");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion& e) {
    out << kVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    // subcommand help lands here too
    if (e.get_exit_code() == 0) {
      out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands()[0]->help());
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string cmd = sub->get_name();
  try {
    RunConfig c;
    if (f.config) {
      std::ifstream in(*f.config);
      if (!in) throw ConfigError("config: cannot open " + *f.config);
      json j;
      try {
        in >> j;
      } catch (const json::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
      }
      c = RunConfig::from_json(j);
    }
    if (f.A) c.A = *f.A;
    if (f.delta) c.delta = *f.delta;
    if (f.eps_b) c.eps_b = *f.eps_b;
    if (f.s) {
      if (f.eps_b) throw ConfigError("give either --eps-b or --s, not both");
      if (cmd == "qpt" || cmd == "fidelity")
        c.s_values = parse_list<double>(*f.s, "s");
      else
        c.eps_b = std::stod(*f.s) * c.delta;
    }
    if (f.kx) c.kx = *f.kx;
    if (f.ky) {
      bool single = false;
      parse_ky(*f.ky, c, single);
    }
    if (f.steps) c.ky_steps = *f.steps;
    if (f.n) {
      const auto v = parse_list<int>(*f.n, "n");
      if (v.empty()) throw ConfigError("n: empty list");
      if (cmd == "fidelity")
        c.n_list = v;
      else
        c.n = v.front();
    }
    if (f.M) c.M = *f.M;
    if (f.dt) c.dt = *f.dt;
    if (f.exact_u) c.exact_u = true;
    if (f.t2_star) c.t2_star = *f.t2_star;
    if (f.mc) c.mc_samples = *f.mc;
    if (f.shots) c.shots = *f.shots;
    if (f.state) c.state_mode = *f.state;
    if (f.state_index) c.state_index = *f.state_index;
    if (f.x_only) c.readout = "x";
    if (f.t) c.t = *f.t;
    if (f.loop_center) {
      const auto v = parse_list<double>(*f.loop_center, "center");
      if (v.size() != 2) throw ConfigError("center: expected kx,ky");
      c.loop_kx = v[0], c.loop_ky = v[1];
    }
    if (f.radius) c.loop_radius = *f.radius;
    if (f.points) c.loop_points = *f.points;
    if (f.band) c.band = *f.band;
    if (f.tier) c.tier = *f.tier;
    if (f.seed) c.seed = *f.seed;
    if (f.jobs) c.jobs = *f.jobs;
    if (f.outdir) c.out = *f.outdir;
    if (c.jobs == 0) c.jobs = default_jobs();
    c.validate();

    Ctx x{c, cmd, out};
    if (cmd == "bands") cmd_bands(x);
    if (cmd == "spectrum") cmd_spectrum(x);
    if (cmd == "qpt") cmd_qpt(x);
    if (cmd == "fidelity") cmd_fidelity(x);
    if (cmd == "timing") cmd_timing(x);
    if (cmd == "winding") cmd_winding(x);
    return 0;
  } catch (const ContractError& e) {
    err << "contract violation: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace tisim

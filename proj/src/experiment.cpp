// Copyright 2026 The jdrsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "jdr/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <Eigen/Core>

#include "jdr/limits.hpp"
#include "jdr/seed.hpp"

namespace jdr {

using nlohmann::json;

namespace {

std::vector<double> number_or_list(const json& j, const char* key) {
  const json& v = j.at(key);
  if (v.is_number()) return {v.get<double>()};
  if (!v.is_array()) throw ConfigError(std::string(key) + ": expected a number or a list of numbers");
  return v.get<std::vector<double>>();
}

std::vector<int> int_or_list(const json& j, const char* key) {
  const json& v = j.at(key);
  if (v.is_number_integer()) return {v.get<int>()};
  if (!v.is_array()) throw ConfigError(std::string(key) + ": expected an integer or a list of integers");
  return v.get<std::vector<int>>();
}

double hz(const json& j, const char* key) { return kTwoPi * j.at(key).get<double>(); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration

json default_config_json() { return to_json(ExperimentConfig{}); }

json to_json(const ExperimentConfig& c) {
  const auto& p = c.transducer;
  json j;
  j["transducer"] = {
      {"omega1_hz", p.omega1 / kTwoPi}, {"omega2_hz", p.omega2 / kTwoPi}, {"omega3_hz", p.omega3 / kTwoPi},
      {"kappa1_hz", p.kappa1 / kTwoPi}, {"kappa3_hz", p.kappa3 / kTwoPi}, {"gamma_hz", p.gamma / kTwoPi},
      {"g1_hz", p.g1_max / kTwoPi},     {"g3_hz", p.g3_max / kTwoPi},     {"G1_hz", p.G1_max / kTwoPi},
      {"G3_hz", p.G3_max / kTwoPi},     {"compensation_loss_exponent", c.compensation_loss_exponent}};
  j["temperature"] = c.temperatures;
  j["jc"] = {{"chi_hz", c.jc.chi / kTwoPi},
             {"time_window", c.jc.time_window},
             {"capacity_time_window", c.capacity_time_window},
             {"grid_points", c.jc.grid_points},
             {"refine", c.jc.refine},
             {"leakage_tol", c.jc.leakage_tol}};
  j["rmpn"] = c.rmpn;
  j["capacity_grid"] = {{"lo", c.capacity_grid.lo}, {"hi", c.capacity_grid.hi}, {"count", c.capacity_grid.count}};
  j["code"] = {{"n", c.code.n}, {"M", c.code.M}, {"kind", to_string(c.code.kind)}, {"seed", c.code.seed}};
  j["circuit"] = {{"layers", c.circuit.layers}, {"include_unitary", c.circuit.include_unitary}};
  const auto& o = c.optimizer;
  j["optimizer"] = {{"restarts", o.restarts},
                    {"max_iters", o.max_iters},
                    {"tol", o.tol},
                    {"learning_rate", o.learning_rate},
                    {"min_learning_rate", o.min_learning_rate},
                    {"patience", o.patience}};
  j["noise"] = {{"p1", c.noise.p1}, {"p2", c.noise.p2}, {"pm", c.noise.pm}};
  j["jobs"] = c.jobs;
  j["seed"] = c.seed;
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  try {
    const json& t = j.at("transducer");
    auto& p = c.transducer;
    p.omega1 = hz(t, "omega1_hz");
    p.omega2 = hz(t, "omega2_hz");
    p.omega3 = hz(t, "omega3_hz");
    p.kappa1 = hz(t, "kappa1_hz");
    p.kappa3 = hz(t, "kappa3_hz");
    p.gamma = hz(t, "gamma_hz");
    p.g1_max = hz(t, "g1_hz");
    p.g3_max = hz(t, "g3_hz");
    p.G1_max = hz(t, "G1_hz");
    p.G3_max = hz(t, "G3_hz");
    c.compensation_loss_exponent = t.at("compensation_loss_exponent").get<double>();
    c.temperatures = number_or_list(j, "temperature");
    const json& jc = j.at("jc");
    c.jc.chi = hz(jc, "chi_hz");
    c.jc.time_window = jc.at("time_window").get<double>();
    c.capacity_time_window = jc.at("capacity_time_window").get<double>();
    c.jc.grid_points = jc.at("grid_points").get<int>();
    c.jc.refine = jc.at("refine").get<bool>();
    c.jc.leakage_tol = jc.at("leakage_tol").get<double>();
    c.rmpn = number_or_list(j, "rmpn");
    const json& g = j.at("capacity_grid");
    c.capacity_grid = {g.at("lo").get<double>(), g.at("hi").get<double>(), g.at("count").get<int>()};
    const json& code = j.at("code");
    c.code.n = code.at("n").get<int>();
    c.code.M = code.at("M").get<int>();
    c.code.kind = parse_codebook_kind(code.at("kind").get<std::string>());
    c.code.seed = code.at("seed").get<std::uint64_t>();
    c.circuit.layers = int_or_list(j.at("circuit"), "layers");
    c.circuit.include_unitary = j.at("circuit").at("include_unitary").get<bool>();
    const json& o = j.at("optimizer");
    c.optimizer.restarts = o.at("restarts").get<int>();
    c.optimizer.max_iters = o.at("max_iters").get<int>();
    c.optimizer.tol = o.at("tol").get<double>();
    c.optimizer.learning_rate = o.at("learning_rate").get<double>();
    c.optimizer.min_learning_rate = o.at("min_learning_rate").get<double>();
    c.optimizer.patience = o.at("patience").get<int>();
    const json& nz = j.at("noise");
    c.noise = {nz.at("p1").get<double>(), nz.at("p2").get<double>(), nz.at("pm").get<double>()};
    c.jobs = j.at("jobs").get<int>();
    c.seed = j.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

void ExperimentConfig::validate() const {
  try {
    if (temperatures.empty()) throw ConfigError("temperature: at least one value is required");
    for (double T : temperatures) {
      TransducerParams p = transducer;
      p.temperature = T;
      jdr::validate(p);
    }
    if (!(compensation_loss_exponent >= 0.0)) throw ConfigError("compensation_loss_exponent must be >= 0");
    jdr::validate(jc);
    if (!(capacity_time_window > 0.0)) throw ConfigError("jc.capacity_time_window must be > 0");
    for (double r : rmpn)
      if (!(r >= 0.0) || !std::isfinite(r)) throw ConfigError("rmpn values must be finite and >= 0");
    if (!(capacity_grid.lo > 0.0) || !(capacity_grid.hi >= capacity_grid.lo) || capacity_grid.count < 1)
      throw ConfigError("capacity_grid: need 0 < lo <= hi and count >= 1");
    if (code.n > kDefaultMaxQubits) throw ConfigError("code.n exceeds the simulator limit");
    make_codebook(code.n, code.M, code.kind, code.seed);
    for (int L : circuit.layers)
      if (L < 0) throw ConfigError("circuit.layers must be >= 0");
    const auto& o = optimizer;
    if (o.restarts < 1 || o.max_iters < 1 || o.patience < 1 || !(o.tol >= 0.0) || !(o.learning_rate > 0.0) ||
        !(o.min_learning_rate > 0.0))
      throw ConfigError("optimizer: invalid settings");
    jdr::validate(noise);
    if (jobs < 1) throw ConfigError("jobs must be >= 1");
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

void merge_config(json& base, const json& overlay, const std::string& where) {
  if (!overlay.is_object()) throw ConfigError("config" + (where.empty() ? "" : " '" + where + "'") + ": expected an object");
  for (const auto& [key, value] : overlay.items()) {
    const std::string path = where.empty() ? key : where + "." + key;
    if (!base.contains(key)) throw ConfigError("unknown config key '" + path + "'");
    if (base[key].is_object())
      merge_config(base[key], value, path);
    else
      base[key] = value;
  }
}

void apply_override(json& tree, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "' is not KEY=VALUE");
  const std::string key = assignment.substr(0, eq), text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  json patch = value;
  std::string rest = key;
  std::vector<std::string> parts;
  for (std::size_t pos; (pos = rest.find('.')) != std::string::npos; rest = rest.substr(pos + 1))
    parts.push_back(rest.substr(0, pos));
  parts.push_back(rest);
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) patch = json{{*it, patch}};
  merge_config(tree, patch);
}

ExperimentConfig load_config(const std::optional<std::string>& path, const std::vector<std::string>& overrides) {
  json tree = default_config_json();
  if (path) {
    std::ifstream in(*path);
    if (!in) throw ConfigError("cannot open config file '" + *path + "'");
    json file = json::parse(in, nullptr, false, true);
    if (file.is_discarded()) throw ConfigError("config file '" + *path + "' is not valid JSON");
    merge_config(tree, file);
  }
  for (const auto& o : overrides) apply_override(tree, o);
  return config_from_json(tree);
}

std::string config_hash(const ExperimentConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : to_json(cfg).dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

TransductionChannel channel_for(const ExperimentConfig& cfg, double temperature) {
  TransducerParams p = cfg.transducer;
  p.temperature = temperature;
  ChannelOptions opts;
  opts.compensation_loss_exponent = cfg.compensation_loss_exponent;
  return transduction_channel(p, opts);
}

JcConfig capacity_jc(const ExperimentConfig& cfg) {
  JcConfig jc = cfg.jc;
  jc.time_window = cfg.capacity_time_window;
  return jc;
}

// ---------------------------------------------------------------------------
// Tables

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void Table::write(std::ostream& os) const {
  os << "# schema_version=" << kSchemaVersion << " command=" << command << "\n";
  for (std::size_t k = 0; k < columns.size(); ++k) os << (k ? "," : "") << columns[k];
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << csv_field(row[k]);
    os << "\n";
  }
}

double pulsewise_limit(double rmpn, int n) { return n >= 2 ? n_helstrom(rmpn, n) : helstrom_bpsk(rmpn); }

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& task) {
  const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(jobs, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) task(i);
    });
  for (auto& t : pool) t.join();
}

namespace {

struct GridPoint {
  double temperature;
  double rmpn;
  std::optional<int> layers;  // empty: full unitary
};

std::vector<GridPoint> sweep_grid(const ExperimentConfig& cfg, bool with_unitary) {
  std::vector<GridPoint> grid;
  for (double T : cfg.temperatures)
    for (double r : cfg.rmpn) {
      for (int L : cfg.circuit.layers) grid.push_back({T, r, L});
      if (with_unitary) grid.push_back({T, r, std::nullopt});
    }
  return grid;
}

DecodeSpec decode_spec(const ExperimentConfig& cfg, const GridPoint& g, std::uint64_t seed) {
  DecodeSpec spec;
  spec.beta = Complex(std::sqrt(g.rmpn), 0.0);
  spec.channel = channel_for(cfg, g.temperature);
  spec.jc = cfg.jc;
  spec.book = make_codebook(cfg.code.n, cfg.code.M, cfg.code.kind, cfg.code.seed);
  if (g.layers) spec.layout = CircuitLayout::ansatz(cfg.code.n, *g.layers);
  spec.noise = cfg.noise;
  spec.train = cfg.optimizer;
  spec.train.seed = seed;
  return spec;
}

}  // namespace

std::vector<ResultRow> run_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto grid = sweep_grid(cfg, cfg.circuit.include_unitary);
  std::vector<ResultRow> rows(grid.size());
  parallel_for(grid.size(), cfg.jobs, [&](std::size_t i) {
    const auto start = std::chrono::steady_clock::now();
    const GridPoint& g = grid[i];
    ResultRow& row = rows[i];
    row.index = i;
    row.rmpn = g.rmpn;
    row.temperature = g.temperature;
    row.n = cfg.code.n;
    row.M = cfg.code.M;
    row.L = g.layers ? std::to_string(*g.layers) : "U";
    row.seed = derive_seed(cfg.seed, i);
    try {
      const auto result = decode_error(decode_spec(cfg, g, row.seed));
      row.p_n_helstrom = pulsewise_limit(g.rmpn, cfg.code.n);
      row.J = result.J;
      row.p_err = result.error;
      row.tau = result.pair.tau;
      row.t_star = result.pair.t_star;
    } catch (const std::exception& e) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      row.p_err = row.p_n_helstrom = row.tau = row.t_star = row.J = nan;
      row.status = std::string("error: ") + e.what();
    }
    row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  });
  return rows;
}

Table sweep_table(const std::vector<ResultRow>& rows) {
  Table t{"sweep",
          {"rmpn", "temperature", "n", "M", "L", "p_err", "p_n_helstrom", "tau", "t_star", "J", "seed", "status"},
          {}};
  for (const auto& r : rows)
    t.rows.push_back({format_number(r.rmpn), format_number(r.temperature), std::to_string(r.n),
                      std::to_string(r.M), r.L, format_number(r.p_err), format_number(r.p_n_helstrom),
                      format_number(r.tau), format_number(r.t_star), format_number(r.J), std::to_string(r.seed),
                      r.status});
  return t;
}

Table channel_table(const ExperimentConfig& cfg) {
  Table t{"channel", {"temperature", "eta_tr", "nbar_tr", "tau1", "tau3", "nbar0"}, {}};
  for (double T : cfg.temperatures) {
    const auto ch = channel_for(cfg, T);
    t.rows.push_back({format_number(T), format_number(ch.eta_tr), format_number(ch.nbar_tr), format_number(ch.tau1),
                      format_number(ch.tau3), format_number(ch.nbar0)});
  }
  return t;
}

Table qubits_table(const ExperimentConfig& cfg) {
  Table t{"qubits",
          {"rmpn", "temperature", "t_star", "tau", "plus_x", "plus_y", "plus_z", "minus_x", "minus_y", "minus_z"},
          {}};
  for (double T : cfg.temperatures) {
    const auto ch = channel_for(cfg, T);
    for (double r : cfg.rmpn) {
      const auto pair = transduce_bpsk(Complex(std::sqrt(r), 0.0), ch, cfg.jc);
      const auto p = bloch_vector(pair.rho_plus), m = bloch_vector(pair.rho_minus);
      t.rows.push_back({format_number(r), format_number(T), format_number(pair.t_star), format_number(pair.tau),
                        format_number(p.x), format_number(p.y), format_number(p.z), format_number(m.x),
                        format_number(m.y), format_number(m.z)});
    }
  }
  return t;
}

Table capacity_table(const ExperimentConfig& cfg) {
  const auto grid = log_grid(cfg.capacity_grid.lo, cfg.capacity_grid.hi, cfg.capacity_grid.count);
  const auto channel = channel_for(cfg, cfg.temperatures.front());
  const auto jc = capacity_jc(cfg);
  Table t{"capacity", {"rmpn", "c1", "holevo_optical", "jdr_ideal", "jdr_channel"}, {}};
  t.rows.resize(grid.size());
  parallel_for(grid.size(), cfg.jobs, [&](std::size_t i) {
    const double r = grid[i];
    t.rows[i] = {format_number(r), format_number(c1_capacity(r)), format_number(optical_bpsk_holevo(r)),
                 format_number(jdr_capacity(r, TransductionChannel::ideal(), jc)),
                 format_number(jdr_capacity(r, channel, jc))};
  });
  return t;
}

Table noise_table(const ExperimentConfig& cfg) {
  const auto grid = sweep_grid(cfg, false);
  Table t{"noise",
          {"rmpn", "temperature", "n", "M", "L", "p1", "p2", "pm", "p_err_noiseless", "p_err_noisy", "p_n_helstrom",
           "seed", "status"},
          {}};
  t.rows.resize(grid.size());
  parallel_for(grid.size(), cfg.jobs, [&](std::size_t i) {
    const GridPoint& g = grid[i];
    const std::uint64_t seed = derive_seed(cfg.seed, i);
    std::string clean = "nan", noisy = "nan", status = "ok";
    try {
      const auto result = decode_error(decode_spec(cfg, g, seed));
      clean = format_number(1.0 - result.trained.J);
      noisy = format_number(result.error);
    } catch (const std::exception& e) {
      status = std::string("error: ") + e.what();
    }
    t.rows[i] = {format_number(g.rmpn), format_number(g.temperature), std::to_string(cfg.code.n),
                 std::to_string(cfg.code.M), std::to_string(*g.layers), format_number(cfg.noise.p1),
                 format_number(cfg.noise.p2), format_number(cfg.noise.pm), clean, noisy,
                 format_number(pulsewise_limit(g.rmpn, cfg.code.n)), std::to_string(seed), status};
  });
  return t;
}

json make_manifest(const ExperimentConfig& cfg, const std::string& command, const json& extra) {
  json m;
  m["tool"] = "jdr";
  m["version"] = kToolVersion;
  m["schema_version"] = kSchemaVersion;
  m["command"] = command;
  m["config"] = to_json(cfg);
  m["config_hash"] = config_hash(cfg);
  m["seed"] = cfg.seed;
  m["eigen_version"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                       std::to_string(EIGEN_MINOR_VERSION);
  m["compiler"] = __VERSION__;
  if (!extra.is_null()) m.update(extra);
  return m;
}

// ---------------------------------------------------------------------------
// Trained models

ModelArtifact train_model(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.rmpn.empty()) throw ConfigError("train: rmpn is empty");
  GridPoint g{cfg.temperatures.front(), cfg.rmpn.front(), std::nullopt};
  if (!cfg.circuit.layers.empty()) g.layers = cfg.circuit.layers.front();
  ModelArtifact model;
  model.seed = derive_seed(cfg.seed, 0);
  const auto spec = decode_spec(cfg, g, model.seed);
  const auto result = decode_error(spec);
  model.layout = spec.layout;
  model.angles = result.trained.angles;
  model.unitary = result.trained.unitary;
  model.n = cfg.code.n;
  model.J = result.J;
  model.config_hash = config_hash(cfg);
  return model;
}

json to_json(const ModelArtifact& m) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["n"] = m.n;
  if (m.layout) {
    j["kind"] = "circuit";
    j["layout"] = {{"layers", m.layout->layers}, {"edges", m.layout->edges}};
    j["angles"] = std::vector<double>(m.angles.data(), m.angles.data() + m.angles.size());
  } else {
    j["kind"] = "unitary";
    std::vector<std::vector<double>> entries;  // row-major (re, im)
    for (Eigen::Index r = 0; r < m.unitary.rows(); ++r)
      for (Eigen::Index c = 0; c < m.unitary.cols(); ++c)
        entries.push_back({m.unitary(r, c).real(), m.unitary(r, c).imag()});
    j["dim"] = m.unitary.rows();
    j["unitary"] = entries;
  }
  j["J"] = m.J;
  j["seed"] = m.seed;
  j["config_hash"] = m.config_hash;
  return j;
}

ModelArtifact model_from_json(const json& j) {
  ModelArtifact m;
  try {
    m.n = j.at("n").get<int>();
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "circuit") {
      const json& l = j.at("layout");
      m.layout = CircuitLayout::from_edges(m.n, l.at("layers").get<int>(),
                                           l.at("edges").get<std::vector<std::pair<int, int>>>());
      const auto a = j.at("angles").get<std::vector<double>>();
      if (static_cast<int>(a.size()) != m.layout->parameter_count())
        throw ConfigError("model: angle count does not match the layout");
      m.angles = Eigen::Map<const VectorXd>(a.data(), static_cast<Eigen::Index>(a.size()));
    } else if (kind == "unitary") {
      const auto dim = j.at("dim").get<Eigen::Index>();
      const auto entries = j.at("unitary").get<std::vector<std::vector<double>>>();
      if (static_cast<Eigen::Index>(entries.size()) != dim * dim) throw ConfigError("model: unitary has the wrong size");
      m.unitary.resize(dim, dim);
      for (Eigen::Index k = 0; k < dim * dim; ++k) {
        const auto& e = entries[static_cast<std::size_t>(k)];
        if (e.size() != 2) throw ConfigError("model: unitary entries must be [re, im]");
        m.unitary(k / dim, k % dim) = Complex(e[0], e[1]);
      }
    } else {
      throw ConfigError("model: unknown kind '" + kind + "'");
    }
    m.J = j.at("J").get<double>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.config_hash = j.at("config_hash").get<std::string>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
  return m;
}

}  // namespace jdr

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

// Command-line front end: channel, qubits, train, sweep, capacity, noise.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jdr/experiment.hpp"

namespace {

constexpr int kUsageExit = 2;

struct CommonFlags {
  std::string config;
  std::vector<std::string> overrides;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
};

void add_common(CLI::App* sub, CommonFlags& f) {
  sub->add_option("--config", f.config, "JSON configuration file");
  sub->add_option("--set", f.overrides, "override a config value, KEY=VALUE with a dotted key")->take_all();
  sub->add_option("--out", f.out, "output path (default: stdout)");
  sub->add_option("--seed", f.seed, "root seed");
  sub->add_option("--jobs", f.jobs, "worker threads");
}

jdr::ExperimentConfig resolve(const CommonFlags& f) {
  auto overrides = f.overrides;
  if (f.seed) overrides.push_back("seed=" + std::to_string(*f.seed));
  if (f.jobs) overrides.push_back("jobs=" + std::to_string(*f.jobs));
  std::optional<std::string> path;
  if (!f.config.empty()) path = f.config;
  return jdr::load_config(path, overrides);
}

template <class Writer>
void emit(const std::string& out, Writer&& write) {
  if (out.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream os(out);
  if (!os) throw jdr::Error("cannot write '" + out + "'");
  write(os);
}

void write_manifest(const std::string& out, const nlohmann::json& manifest) {
  if (out.empty()) return;
  std::ofstream os(out + ".manifest.json");
  if (!os) throw jdr::Error("cannot write manifest for '" + out + "'");
  os << manifest.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint detection receiver simulator"};
  app.require_subcommand(1);
  CommonFlags flags;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"channel", "loss and added noise of the transducer"},
      {"qubits", "transduced qubit pairs and their Bloch vectors"},
      {"train", "train one decoder and write the model"},
      {"sweep", "error probability over the configured grid"},
      {"capacity", "per-pulse capacities on a log grid"},
      {"noise", "noise-free training evaluated under gate and readout noise"}};
  for (const auto& [name, help] : commands) add_common(app.add_subcommand(name, help), flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageExit;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  jdr::ExperimentConfig cfg;
  try {
    cfg = resolve(flags);
  } catch (const jdr::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageExit;
  }

  try {
    const auto start = std::chrono::steady_clock::now();
    nlohmann::json extra = nlohmann::json::object();
    if (command == "train") {
      const auto model = jdr::train_model(cfg);
      emit(flags.out, [&](std::ostream& os) { os << jdr::to_json(model).dump(2) << "\n"; });
      extra["J"] = model.J;
    } else {
      jdr::Table table;
      if (command == "channel") {
        for (double T : cfg.temperatures) {
          auto p = cfg.transducer;
          p.temperature = T;
          for (const auto& w : jdr::strong_coupling_warnings(p)) std::cerr << "warning: " << w << "\n";
        }
        table = jdr::channel_table(cfg);
      } else if (command == "qubits") {
        table = jdr::qubits_table(cfg);
      } else if (command == "sweep") {
        const auto rows = jdr::run_sweep(cfg);
        table = jdr::sweep_table(rows);
        nlohmann::json info = nlohmann::json::array();
        for (const auto& r : rows)
          info.push_back({{"index", r.index}, {"seed", r.seed}, {"wall_time", r.wall_time}, {"status", r.status}});
        extra["rows"] = info;
      } else if (command == "capacity") {
        table = jdr::capacity_table(cfg);
      } else {
        table = jdr::noise_table(cfg);
      }
      emit(flags.out, [&](std::ostream& os) { table.write(os); });
    }
    extra["wall_time"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(flags.out, jdr::make_manifest(cfg, command, extra));
  } catch (const jdr::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

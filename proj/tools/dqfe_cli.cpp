// dqfe: command-line front end for the quantum feature extraction pipeline.
//
//   dqfe benchmark --config run.cfg
//   dqfe mi|graph|qfeatures|train|eval|export-qasm --config run.cfg [--key value ...]
//   dqfe synth --out data.csv [--seed N]

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dqfe/error.hpp"
#include "dqfe/parallel.hpp"
#include "dqfe/pipeline.hpp"
#include "dqfe/synthetic.hpp"

namespace {

struct ConfigFlags {
  std::string config_path;
  std::map<std::string, std::string> values;
  std::size_t threads = 0;
};

// Every config key becomes --<key>; explicit flags override the file.
void add_config_flags(CLI::App* cmd, ConfigFlags& flags) {
  cmd->add_option("-c,--config", flags.config_path, "key=value configuration file");
  cmd->add_option("--threads", flags.threads, "worker threads (default: DQFE_THREADS or all cores)");
  for (const auto& key : dqfe::config_keys()) {
    cmd->add_option_function<std::string>(
        "--" + key.name, [&flags, name = key.name](const std::string& v) { flags.values[name] = v; }, key.help);
  }
}

dqfe::PipelineConfig resolve(const ConfigFlags& flags) {
  dqfe::PipelineConfig config = flags.config_path.empty() ? dqfe::PipelineConfig{} : dqfe::load_config(flags.config_path);
  if (auto it = flags.values.find("seed"); it != flags.values.end()) dqfe::apply_setting(config, "seed", it->second);
  for (const auto& [k, v] : flags.values)
    if (k != "seed") dqfe::apply_setting(config, k, v);
  if (flags.threads > 0) dqfe::set_default_threads(flags.threads);
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Digitized quantum feature extraction: encode, simulate, classify"};
  app.require_subcommand(1);

  ConfigFlags bench_flags;
  auto* bench = app.add_subcommand("benchmark", "run mi, graph, qfeatures, train and eval in order");
  add_config_flags(bench, bench_flags);

  struct StageCommand {
    dqfe::Stage stage;
    CLI::App* cmd;
    ConfigFlags flags;
  };
  std::vector<std::unique_ptr<StageCommand>> stages;
  const std::pair<dqfe::Stage, const char*> stage_help[] = {
      {dqfe::Stage::mi, "fit scaling and write the mutual-information matrix"},
      {dqfe::Stage::graph, "optimize the qubit ordering and write the interaction graph"},
      {dqfe::Stage::qfeatures, "compute quantum features (simulated, or replayed from --counts_dir)"},
      {dqfe::Stage::train, "grid-search cross-validation and final models per feature set"},
      {dqfe::Stage::eval, "test accuracy over seeds, confusion, PCA, Fisher, report"},
      {dqfe::Stage::export_qasm, "write one OpenQASM 3 circuit per sample"},
  };
  for (const auto& [stage, help] : stage_help) {
    auto sc = std::make_unique<StageCommand>();
    sc->stage = stage;
    sc->cmd = app.add_subcommand(dqfe::to_string(stage), help);
    add_config_flags(sc->cmd, sc->flags);
    stages.push_back(std::move(sc));
  }
  // --from-counts is the documented spelling for the replay input.
  for (auto& sc : stages) {
    if (sc->stage != dqfe::Stage::qfeatures) continue;
    auto* flags = &sc->flags;
    sc->cmd->add_option_function<std::string>(
        "--from-counts", [flags](const std::string& v) { flags->values["counts_dir"] = v; },
        "directory of sample_NNNNN.json shot records");
  }

  dqfe::BlobSpec blobs;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "write a synthetic Gaussian-blob dataset");
  synth->add_option("-o,--out", synth_out, "output CSV")->required();
  synth->add_option("--classes", blobs.classes);
  synth->add_option("--features", blobs.features);
  synth->add_option("--train-per-class", blobs.train_per_class);
  synth->add_option("--test-per-class", blobs.test_per_class);
  synth->add_option("--spread", blobs.center_spread, "class centre standard deviation");
  synth->add_option("--overlap", blobs.overlap_distance, "distance between the last two class centres");
  synth->add_option("--noise", blobs.noise);
  synth->add_option("--seed", blobs.seed);

  CLI11_PARSE(app, argc, argv);

  std::string stage_name = "config";
  try {
    if (bench->parsed()) {
      const auto config = resolve(bench_flags);
      stage_name = "benchmark";
      dqfe::run_benchmark(config);
      std::cout << dqfe::read_text(config.output / dqfe::artifacts::report_csv);
      return 0;
    }
    for (const auto& sc : stages) {
      if (!sc->cmd->parsed()) continue;
      const auto config = resolve(sc->flags);
      stage_name = dqfe::to_string(sc->stage);
      dqfe::run_stage(sc->stage, config);
      return 0;
    }
    if (synth->parsed()) {
      stage_name = "synth";
      dqfe::save_table(dqfe::make_blobs(blobs), synth_out);
      return 0;
    }
  } catch (const dqfe::StageError& e) {
    std::cerr << "[" << e.stage() << "] error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "[" << stage_name << "] error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

#include "dqfe/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "dqfe/analysis.hpp"
#include "dqfe/cd_circuit.hpp"
#include "dqfe/error.hpp"
#include "dqfe/forest.hpp"

namespace dqfe {

namespace fs = std::filesystem;

namespace {

constexpr FeatureSetKind kKinds[] = {FeatureSetKind::classical, FeatureSetKind::quantum, FeatureSetKind::hybrid};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    T v{};
    if constexpr (std::is_same_v<T, double>) {
      v = std::stod(value, &used);
    } else if constexpr (std::is_same_v<T, int>) {
      v = std::stoi(value, &used);
    } else {
      if (!value.empty() && value[0] == '-') throw std::invalid_argument(value);
      v = static_cast<T>(std::stoull(value, &used));
    }
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::logic_error&) {
    throw ValidationError("config key '" + key + "': cannot parse '" + value + "' as a number");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ValidationError("config key '" + key + "': expected true or false, got '" + value + "'");
}

std::string format_real(double v) {
  nlohmann::json j = v;
  return j.dump();
}

std::string seeds_text(const std::vector<std::uint64_t>& seeds) {
  std::string s;
  for (std::size_t i = 0; i < seeds.size(); ++i) s += (i ? "," : "") + std::to_string(seeds[i]);
  return s;
}

std::string edges_text(const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  std::string s;
  for (std::size_t i = 0; i < edges.size(); ++i)
    s += (i ? "," : "") + std::to_string(edges[i].first) + "-" + std::to_string(edges[i].second);
  return s;
}

nlohmann::json scaling_to_json(const ScalingSpec& spec) {
  nlohmann::json j;
  j["method"] = to_string(spec.method);
  nlohmann::json cols = nlohmann::json::array();
  for (const auto& c : spec.columns) cols.push_back({{"offset", c.offset}, {"scale", c.scale}});
  j["columns"] = std::move(cols);
  return j;
}

ScalingSpec scaling_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    ScalingSpec spec;
    spec.method = parse_scaling_method(j.at("method").get<std::string>());
    for (const auto& c : j.at("columns"))
      spec.columns.push_back({c.at("offset").get<double>(), c.at("scale").get<double>()});
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed scaling JSON: ") + e.what());
  }
}

fs::path require(const PipelineConfig& config, const std::string& name) {
  const fs::path p = config.output / name;
  if (!fs::exists(p)) throw IoError("missing upstream artifact " + p.string());
  return p;
}

FeatureTable load_dataset(const PipelineConfig& config) { return load_table(config.dataset, config.label_column); }

FeatureTable encoding_table(const PipelineConfig& config) {
  const FeatureTable raw = load_dataset(config);
  const ScalingSpec spec = scaling_from_json(read_text(require(config, artifacts::scaling)));
  return apply_scaling(raw, spec);
}

ExtractionOptions extraction_options(const PipelineConfig& config) {
  ExtractionOptions o;
  o.impulse = config.impulse;
  o.shots = config.shots;
  o.mode = config.mode;
  o.scope = config.pair_scope;
  o.seed = config.seed;
  o.sign = config.transverse_sign;
  o.max_qubits = config.max_qubits;
  return o;
}

FeatureTable classifier_input(const FeatureTable& table, const PipelineConfig& config) {
  return apply_scaling(table, fit_scaling(table, config.rf_scaling));
}

FeatureTable feature_set(const PipelineConfig& config, FeatureSetKind kind) {
  const FeatureTable raw = load_dataset(config);
  if (kind == FeatureSetKind::classical) return classifier_input(raw, config);
  const FeatureTable quantum = load_table(require(config, artifacts::quantum));
  if (quantum.rows() != raw.rows() || quantum.labels() != raw.labels() || quantum.splits() != raw.splits())
    throw ValidationError(std::string(artifacts::quantum) + " does not match the dataset rows");
  if (kind == FeatureSetKind::quantum) return classifier_input(quantum, config);
  return classifier_input(make_hybrid(raw, quantum), config);
}

double majority_baseline(const FeatureTable& table) {
  const auto test = table.indices(Split::test);
  if (test.empty()) return 0.0;
  std::vector<std::size_t> counts(static_cast<std::size_t>(table.num_classes()), 0);
  for (std::size_t r : test) ++counts[static_cast<std::size_t>(table.labels()[r])];
  return static_cast<double>(*std::max_element(counts.begin(), counts.end())) / static_cast<double>(test.size());
}

void stage_mi(const PipelineConfig& config) {
  const FeatureTable raw = load_dataset(config);
  const ScalingSpec spec = fit_scaling(raw, config.scaling);
  write_text(config.output / artifacts::scaling, scaling_to_json(spec).dump(2) + "\n");
  write_text(config.output / artifacts::mi, mi_to_json(mi_matrix(apply_scaling(raw, spec), config.bins)));
}

void stage_graph(const PipelineConfig& config) {
  const MiMatrix mi = mi_from_json(read_text(require(config, artifacts::mi)));
  InteractionGraph graph;
  std::vector<std::size_t> identity(mi.n);
  for (std::size_t i = 0; i < mi.n; ++i) identity[i] = i;
  switch (config.topology) {
    case Topology::chain:
      graph = optimize_chain(mi, config.restarts > 0 ? config.restarts : static_cast<int>(mi.n), config.seed);
      break;
    case Topology::all_pairs:
      graph = build_graph(mi, Topology::all_pairs, identity);
      break;
    case Topology::custom_edge_list:
      if (config.custom_edges.empty()) throw ValidationError("custom_edge_list topology needs custom_edges");
      graph = build_graph(mi, Topology::custom_edge_list, identity, config.custom_edges);
      break;
  }
  write_text(config.output / artifacts::graph, graph_to_json(graph));
}

void stage_qfeatures(const PipelineConfig& config) {
  const FeatureTable table = encoding_table(config);
  const InteractionGraph graph = graph_from_json(read_text(require(config, artifacts::graph)));
  const ExtractionOptions options = extraction_options(config);

  FeatureTable quantum;
  nlohmann::json prov;
  prov["graph"] = artifacts::graph;
  if (config.counts_dir) {
    std::vector<ShotCounts> counts;
    counts.reserve(table.rows());
    for (std::size_t r = 0; r < table.rows(); ++r) {
      const fs::path p = *config.counts_dir / artifacts::sample_file(r, ".json");
      if (!fs::exists(p)) throw IoError("missing shot record " + p.string());
      counts.push_back(counts_from_json(read_text(p)));
    }
    quantum = features_from_counts(table, graph, counts, config.pair_scope);
    prov["mode"] = "counts";
    prov["counts_dir"] = config.counts_dir->string();
  } else {
    std::vector<ShotCounts> counts;
    const bool dump = config.dump_counts && config.mode == ExtractionMode::sampled;
    quantum = extract_quantum_features(table, graph, options, dump ? &counts : nullptr);
    if (dump) {
      fs::create_directories(config.output / "counts");
      for (std::size_t r = 0; r < counts.size(); ++r)
        write_text(config.output / "counts" / artifacts::sample_file(r, ".json"), counts_to_json(counts[r]));
    }
    prov["mode"] = to_string(config.mode);
  }
  prov["theta"] = config.impulse.theta;
  prov["lambda_eval"] = config.impulse.lambda_eval;
  prov["shots"] = config.shots;
  prov["seed"] = config.seed;
  prov["pair_scope"] = to_string(config.pair_scope);
  prov["transverse_sign"] = to_string(config.transverse_sign);
  prov["initial_state"] = config.transverse_sign == TransverseSign::plus ? "minus" : "plus";
  prov["columns"] = quantum.column_names();
  save_table(quantum, config.output / artifacts::quantum);
  write_text(config.output / artifacts::provenance, prov.dump(2) + "\n");
}

void stage_export_qasm(const PipelineConfig& config) {
  const FeatureTable table = encoding_table(config);
  const InteractionGraph graph = graph_from_json(read_text(require(config, artifacts::graph)));
  const ExtractionOptions options = extraction_options(config);
  const fs::path dir = config.output / "qasm";
  fs::create_directories(dir);
  for (std::size_t r = 0; r < table.rows(); ++r) {
    const QuantumCircuit c = sample_circuit(table.row(r), graph, options, static_cast<std::int64_t>(r));
    write_text(dir / artifacts::sample_file(r, ".qasm"), export_qasm(c));
  }
}

void stage_train(const PipelineConfig& config) {
  const auto grid = effective_grid(config);
  for (FeatureSetKind kind : kKinds) {
    const FeatureTable table = feature_set(config, kind);
    const GridSearchResult gs = grid_search(table, grid, config.folds, config.repetitions, config.seed);
    nlohmann::json j;
    j["kind"] = to_string(kind);
    j["features"] = table.cols();
    nlohmann::json g = nlohmann::json::array();
    for (const auto& p : grid) g.push_back(params_to_json(p));
    j["grid"] = std::move(g);
    j["grid_means"] = gs.means;
    j["best_index"] = gs.best_index;
    j["report"] = cv_report_to_json(gs.report);
    write_text(config.output / artifacts::cv(kind), j.dump(2) + "\n");

    ForestParams final_params = gs.best;
    final_params.seed = config.seeds.front();
    write_text(config.output / artifacts::model(kind), forest_to_json(train_forest(table, final_params)));
  }
}

void stage_eval(const PipelineConfig& config) {
  nlohmann::json report;
  report["config"] = config_to_json(config);
  nlohmann::json rows = nlohmann::json::array();
  std::ostringstream csv;
  csv << "kind,features,test_accuracy_mean_pct,test_accuracy_std_pct,cv_accuracy_mean_pct,fisher_mean\n";
  double baseline = 0.0;

  for (FeatureSetKind kind : kKinds) {
    const FeatureTable table = feature_set(config, kind);
    baseline = majority_baseline(table);
    const auto cv_json = nlohmann::json::parse(read_text(require(config, artifacts::cv(kind))));
    const CvReport cv = cv_report_from_json(cv_json.at("report"));
    const TrainedForest model = forest_from_json(read_text(require(config, artifacts::model(kind))));

    const SeedEvaluation eval = multi_seed_eval(table, cv.params, config.seeds);
    const auto test = table.indices(Split::test);
    const auto predicted = predict(model, table, test);
    std::vector<int> truth;
    for (std::size_t r : test) truth.push_back(table.labels()[r]);
    const ConfusionMatrix cm = confusion(truth, predicted, table.num_classes());
    // Degenerate feature sets (for example every quantum column zero at
    // theta = 0) have no 2-D projection; the rest of the report still stands.
    std::optional<PcaProjection> pca;
    std::string pca_error;
    try {
      pca = pca2(table);
    } catch (const ValidationError& e) {
      pca_error = e.what();
    }
    const FisherReport fisher = fisher_mean(table, config.fisher_cap);

    write_text(config.output / artifacts::confusion(kind), confusion_to_csv(cm));
    write_text(config.output / artifacts::pca(kind),
               pca ? projection_to_csv(*pca, table.labels()) : std::string("pc1,pc2,label\n"));

    nlohmann::json m;
    m["kind"] = to_string(kind);
    m["features"] = table.cols();
    m["accuracy"] = eval.mean;
    m["accuracy_std"] = eval.stddev;
    m["seeds"] = eval.seeds;
    m["test_accuracies"] = eval.accuracies;
    m["confusion_accuracy"] = cm.accuracy();
    m["cv_mean"] = cv.mean;
    m["cv_std"] = cv.stddev;
    m["best_params"] = params_to_json(cv.params);
    m["fisher_mean"] = fisher.mean;
    m["fisher_ratios"] = fisher.ratios;
    if (pca) {
      m["explained_variance"] = {pca->explained[0], pca->explained[1]};
    } else {
      m["explained_variance"] = nullptr;
      m["pca_error"] = pca_error;
    }
    write_text(config.output / artifacts::metrics(kind), m.dump(2) + "\n");

    nlohmann::json row;
    row["kind"] = to_string(kind);
    row["features"] = table.cols();
    row["test_mean"] = eval.mean;
    row["test_std"] = eval.stddev;
    row["test_accuracies"] = eval.accuracies;
    row["cv_mean"] = cv.mean;
    row["cv_std"] = cv.stddev;
    row["fisher_mean"] = fisher.mean;
    row["best_params"] = params_to_json(cv.params);
    rows.push_back(std::move(row));

    char line[256];
    std::snprintf(line, sizeof line, "%s,%zu,%.2f,%.2f,%.2f,%.6g\n", to_string(kind).c_str(), table.cols(),
                  100.0 * eval.mean, 100.0 * eval.stddev, 100.0 * cv.mean, fisher.mean);
    csv << line;
  }
  report["rows"] = std::move(rows);
  report["majority_baseline"] = baseline;
  write_text(config.output / artifacts::report, report.dump(2) + "\n");
  write_text(config.output / artifacts::report_csv, csv.str());
}

}  // namespace

namespace artifacts {
std::string cv(FeatureSetKind kind) { return "cv_" + to_string(kind) + ".json"; }
std::string model(FeatureSetKind kind) { return "model_" + to_string(kind) + ".json"; }
std::string metrics(FeatureSetKind kind) { return "metrics_" + to_string(kind) + ".json"; }
std::string confusion(FeatureSetKind kind) { return "confusion_" + to_string(kind) + ".csv"; }
std::string pca(FeatureSetKind kind) { return "pca_" + to_string(kind) + ".csv"; }
std::string sample_file(std::size_t index, const std::string& extension) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "sample_%05zu", index);
  return buf + extension;
}
}  // namespace artifacts

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = {
      {"dataset", "input CSV (feature columns, label, optional split)"},
      {"label_column", "name of the label column"},
      {"scaling", "scaling before encoding: minmax_symmetric | zscore | none"},
      {"rf_scaling", "scaling before the classifier: minmax_symmetric | zscore | none"},
      {"bins", "equal-frequency bins for mutual information"},
      {"topology", "interaction graph: chain | all_pairs | custom_edge_list"},
      {"custom_edges", "qubit pairs for custom_edge_list, e.g. 0-1,1-2"},
      {"restarts", "chain optimizer restarts (0 = one per column)"},
      {"theta", "impulse strength in radians per unit coefficient"},
      {"lambda_eval", "schedule evaluation point in (0, 1)"},
      {"transverse_sign", "sign of the starting transverse field: plus | minus"},
      {"shots", "measurement shots per circuit (sampled mode)"},
      {"mode", "expectation values: exact | sampled"},
      {"pair_scope", "two-body features: edges | all_pairs"},
      {"max_qubits", "simulation width cap"},
      {"grid", "forest grid 'trees:depth:leaf:features;...' or 'default'"},
      {"folds", "cross-validation folds"},
      {"repetitions", "cross-validation repetitions"},
      {"seeds", "comma-separated training seeds for test evaluation"},
      {"output", "output directory"},
      {"seed", "global seed (folds, chain restarts, shots)"},
      {"counts_dir", "replay shot records sample_NNNNN.json from this directory"},
      {"dump_counts", "write shot records in sampled mode: true | false"},
      {"fisher_cap", "Fisher ratio reported for zero within-class variance"},
  };
  return keys;
}

void apply_setting(PipelineConfig& c, const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (key == "dataset") c.dataset = v;
  else if (key == "label_column") c.label_column = v;
  else if (key == "scaling") c.scaling = parse_scaling_method(v);
  else if (key == "rf_scaling") c.rf_scaling = parse_scaling_method(v);
  else if (key == "bins") c.bins = parse_number<int>(key, v);
  else if (key == "topology") c.topology = parse_topology(v);
  else if (key == "custom_edges") {
    c.custom_edges.clear();
    for (const auto& e : split(v, ',')) {
      const auto dash = e.find('-');
      if (dash == std::string::npos) throw ValidationError("custom_edges entries look like i-j, got '" + e + "'");
      c.custom_edges.emplace_back(parse_number<std::size_t>(key, trim(e.substr(0, dash))),
                                  parse_number<std::size_t>(key, trim(e.substr(dash + 1))));
    }
  } else if (key == "restarts") c.restarts = parse_number<int>(key, v);
  else if (key == "theta") c.impulse.theta = parse_number<double>(key, v);
  else if (key == "lambda_eval") c.impulse.lambda_eval = parse_number<double>(key, v);
  else if (key == "transverse_sign") c.transverse_sign = parse_transverse_sign(v);
  else if (key == "shots") c.shots = parse_number<std::uint64_t>(key, v);
  else if (key == "mode") c.mode = parse_extraction_mode(v);
  else if (key == "pair_scope") c.pair_scope = parse_pair_scope(v);
  else if (key == "max_qubits") c.max_qubits = parse_number<std::size_t>(key, v);
  else if (key == "grid") c.grid = (v == "default" || v.empty()) ? std::vector<ForestParams>{} : parse_grid(v, c.seed);
  else if (key == "folds") c.folds = parse_number<int>(key, v);
  else if (key == "repetitions") c.repetitions = parse_number<int>(key, v);
  else if (key == "seeds") {
    c.seeds.clear();
    for (const auto& s : split(v, ',')) c.seeds.push_back(parse_number<std::uint64_t>(key, s));
  } else if (key == "output") c.output = v;
  else if (key == "seed") {
    c.seed = parse_number<std::uint64_t>(key, v);
    for (auto& p : c.grid) p.seed = c.seed;
  } else if (key == "counts_dir") {
    if (v.empty()) c.counts_dir.reset();
    else c.counts_dir = fs::path(v);
  } else if (key == "dump_counts") c.dump_counts = parse_bool(key, v);
  else if (key == "fisher_cap") c.fisher_cap = parse_number<double>(key, v);
  else throw ValidationError("unknown config key '" + key + "'");
}

PipelineConfig parse_config(const std::string& text) {
  PipelineConfig config;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  // "seed" must be applied before "grid" so grid entries pick it up.
  std::vector<std::pair<std::string, std::string>> settings;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(line.substr(0, line.find('#')));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config line " + std::to_string(line_no) + ": expected key=value");
    settings.emplace_back(trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
  }
  std::stable_partition(settings.begin(), settings.end(), [](const auto& kv) { return kv.first == "seed"; });
  for (const auto& [k, v] : settings) apply_setting(config, k, v);
  return config;
}

PipelineConfig load_config(const fs::path& path) { return parse_config(read_text(path)); }

std::vector<ForestParams> parse_grid(const std::string& text, std::uint64_t seed) {
  std::vector<ForestParams> grid;
  for (const auto& entry : split(text, ';')) {
    const auto parts = split(entry, ':');
    if (parts.size() != 4)
      throw ValidationError("grid entry '" + entry + "' must be trees:depth:leaf:features");
    ForestParams p;
    p.n_trees = parse_number<int>("grid", parts[0]);
    if (parts[1] != "none") p.max_depth = parse_number<int>("grid", parts[1]);
    p.min_samples_leaf = parse_number<int>("grid", parts[2]);
    p.max_features = parse_max_features(parts[3]);
    p.seed = seed;
    validate_params(p);
    grid.push_back(p);
  }
  if (grid.empty()) throw ValidationError("grid is empty");
  return grid;
}

std::string format_grid(const std::vector<ForestParams>& grid) {
  std::string s;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& p = grid[i];
    s += (i ? ";" : "") + std::to_string(p.n_trees) + ":" + (p.max_depth ? std::to_string(*p.max_depth) : "none") +
         ":" + std::to_string(p.min_samples_leaf) + ":" + to_string(p.max_features);
  }
  return s;
}

std::vector<ForestParams> effective_grid(const PipelineConfig& config) {
  return config.grid.empty() ? default_grid(config.seed) : config.grid;
}

nlohmann::json config_to_json(const PipelineConfig& c) {
  nlohmann::json j;
  j["dataset"] = c.dataset.string();
  j["label_column"] = c.label_column;
  j["scaling"] = to_string(c.scaling);
  j["rf_scaling"] = to_string(c.rf_scaling);
  j["bins"] = c.bins;
  j["topology"] = to_string(c.topology);
  j["custom_edges"] = edges_text(c.custom_edges);
  j["restarts"] = c.restarts;
  j["theta"] = c.impulse.theta;
  j["lambda_eval"] = c.impulse.lambda_eval;
  j["transverse_sign"] = to_string(c.transverse_sign);
  j["shots"] = c.shots;
  j["mode"] = to_string(c.mode);
  j["pair_scope"] = to_string(c.pair_scope);
  j["max_qubits"] = c.max_qubits;
  j["grid"] = format_grid(effective_grid(c));
  j["folds"] = c.folds;
  j["repetitions"] = c.repetitions;
  j["seeds"] = seeds_text(c.seeds);
  j["output"] = c.output.string();
  j["seed"] = c.seed;
  j["counts_dir"] = c.counts_dir ? c.counts_dir->string() : "";
  j["dump_counts"] = c.dump_counts;
  j["fisher_cap"] = format_real(c.fisher_cap);
  return j;
}

void validate_config(const PipelineConfig& c) {
  if (c.dataset.empty()) throw ValidationError("config: dataset is not set");
  if (!fs::exists(c.dataset)) throw ValidationError("config: dataset " + c.dataset.string() + " does not exist");
  if (c.counts_dir && !fs::is_directory(*c.counts_dir))
    throw ValidationError("config: counts_dir " + c.counts_dir->string() + " is not a directory");
  if (c.bins < 1) throw ValidationError("config: bins must be positive");
  if (c.restarts < 0) throw ValidationError("config: restarts must be >= 0");
  if (c.folds < 2) throw ValidationError("config: folds must be >= 2");
  if (c.repetitions < 1) throw ValidationError("config: repetitions must be >= 1");
  if (c.seeds.empty()) throw ValidationError("config: seeds must not be empty");
  if (c.mode == ExtractionMode::sampled && c.shots == 0) throw ValidationError("config: shots must be >= 1");
  if (c.max_qubits < 1 || c.max_qubits > 30) throw ValidationError("config: max_qubits must be in 1..30");
  if (!(c.fisher_cap > 0.0)) throw ValidationError("config: fisher_cap must be positive");
  validate_impulse(c.impulse);
  for (const auto& p : c.grid) validate_params(p);
}

StageError::StageError(std::string stage, const std::string& cause)
    : std::runtime_error(stage + ": " + cause), stage_(std::move(stage)) {}

Stage parse_stage(const std::string& name) {
  if (name == "mi") return Stage::mi;
  if (name == "graph") return Stage::graph;
  if (name == "qfeatures") return Stage::qfeatures;
  if (name == "train") return Stage::train;
  if (name == "eval") return Stage::eval;
  if (name == "export-qasm" || name == "export_qasm") return Stage::export_qasm;
  throw ValidationError("unknown stage '" + name + "'");
}

std::string to_string(Stage stage) {
  switch (stage) {
    case Stage::mi: return "mi";
    case Stage::graph: return "graph";
    case Stage::qfeatures: return "qfeatures";
    case Stage::train: return "train";
    case Stage::eval: return "eval";
    case Stage::export_qasm: return "export-qasm";
  }
  return "?";
}

void run_stage(Stage stage, const PipelineConfig& config) {
  const std::string name = to_string(stage);
  try {
    validate_config(config);
    fs::create_directories(config.output);
    switch (stage) {
      case Stage::mi: stage_mi(config); break;
      case Stage::graph: stage_graph(config); break;
      case Stage::qfeatures: stage_qfeatures(config); break;
      case Stage::train: stage_train(config); break;
      case Stage::eval: stage_eval(config); break;
      case Stage::export_qasm: stage_export_qasm(config); break;
    }
  } catch (const std::exception& e) {
    try {
      if (fs::is_directory(config.output))
        write_text(config.output / artifacts::incomplete, "stage: " + name + "\nerror: " + e.what() + "\n");
    } catch (const std::exception&) {
      // The original error is more useful than a failure to write the marker.
    }
    throw StageError(name, e.what());
  }
}

std::string run_benchmark(const PipelineConfig& config) {
  if (!config.output.empty()) {
    std::error_code ec;
    fs::remove(config.output / artifacts::incomplete, ec);
  }
  for (Stage s : {Stage::mi, Stage::graph, Stage::qfeatures, Stage::train, Stage::eval}) run_stage(s, config);
  return read_text(config.output / artifacts::report);
}

}  // namespace dqfe

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dqfe/cross_validation.hpp"
#include "dqfe/dataset.hpp"
#include "dqfe/features.hpp"
#include "dqfe/mi_graph.hpp"

namespace dqfe {

/// Every knob of a benchmark run. Read from a key=value file; CLI flags
/// override individual keys.
struct PipelineConfig {
  std::filesystem::path dataset;
  std::string label_column = "label";
  ScalingMethod scaling = ScalingMethod::minmax_symmetric;
  ScalingMethod rf_scaling = ScalingMethod::none;
  int bins = 8;
  Topology topology = Topology::chain;
  /// Qubit pairs for the custom_edge_list topology.
  std::vector<std::pair<std::size_t, std::size_t>> custom_edges;
  int restarts = 0;  // 0: one per feature column
  ImpulseParams impulse;
  TransverseSign transverse_sign = TransverseSign::plus;
  std::uint64_t shots = 4096;
  ExtractionMode mode = ExtractionMode::exact;
  PairScope pair_scope = PairScope::edges;
  std::size_t max_qubits = 24;
  std::vector<ForestParams> grid;  // empty: default_grid(seed)
  int folds = 5;
  int repetitions = 10;
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
  std::filesystem::path output = "dqfe_out";
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> counts_dir;
  bool dump_counts = false;
  double fisher_cap = 1e6;
};

struct ConfigKey {
  std::string name;
  std::string help;
};

/// Recognised configuration keys, in serialization order.
const std::vector<ConfigKey>& config_keys();

/// Sets one key from its textual value. Throws ValidationError on unknown
/// keys or malformed values.
void apply_setting(PipelineConfig& config, const std::string& key, const std::string& value);

/// key=value lines; '#' starts a comment; blank lines ignored.
PipelineConfig parse_config(const std::string& text);
PipelineConfig load_config(const std::filesystem::path& path);

/// Grid entries "n_trees:max_depth:min_samples_leaf:max_features" separated
/// by ';'. max_depth may be "none".
std::vector<ForestParams> parse_grid(const std::string& text, std::uint64_t seed);
std::string format_grid(const std::vector<ForestParams>& grid);

/// Resolved configuration as JSON (every key, defaults filled in).
nlohmann::json config_to_json(const PipelineConfig& config);

/// Checks ranges and that the dataset (and counts directory, if any) exist.
void validate_config(const PipelineConfig& config);

std::vector<ForestParams> effective_grid(const PipelineConfig& config);

/// Error raised inside a pipeline stage; what() is "<stage>: <cause>".
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& cause);
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

enum class Stage { mi, graph, qfeatures, train, eval, export_qasm };

Stage parse_stage(const std::string& name);
std::string to_string(Stage stage);

/// Runs exactly one stage, reading upstream artifacts from config.output
/// and writing its own artifacts there. On failure an INCOMPLETE marker
/// naming the stage is written to the output directory.
void run_stage(Stage stage, const PipelineConfig& config);

/// mi -> graph -> qfeatures -> train -> eval. Returns the report JSON text
/// also written to report.json.
std::string run_benchmark(const PipelineConfig& config);

/// Artifact file names inside the output directory.
namespace artifacts {
inline constexpr const char* scaling = "scaling.json";
inline constexpr const char* mi = "mi.json";
inline constexpr const char* graph = "graph.json";
inline constexpr const char* quantum = "quantum_features.csv";
inline constexpr const char* provenance = "quantum_provenance.json";
inline constexpr const char* report = "report.json";
inline constexpr const char* report_csv = "report.csv";
inline constexpr const char* incomplete = "INCOMPLETE";
std::string cv(FeatureSetKind kind);
std::string model(FeatureSetKind kind);
std::string metrics(FeatureSetKind kind);
std::string confusion(FeatureSetKind kind);
std::string pca(FeatureSetKind kind);
std::string sample_file(std::size_t index, const std::string& extension);
}  // namespace artifacts

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace dqfe

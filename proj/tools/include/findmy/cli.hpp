#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "findmy/concrete_crypto.hpp"
#include "findmy/protocol.hpp"
#include "findmy/trace_engine.hpp"

namespace findmy::cli {

using json = nlohmann::ordered_json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitRegression = 1;
inline constexpr int kExitUsage = 2;

std::string_view tool_version();

/// Malformed or inconsistent configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Backend { Symbolic, Concrete };

struct ScenarioConfig {
  ScenarioBounds bounds;
  /// Replaces every lemma's own reveal profile when set.
  std::optional<RevealSet> reveals;
  EngineOptions options;
  Backend backend = Backend::Symbolic;
  /// Names to check; empty selects every builtin and every custom lemma.
  std::vector<std::string> lemmas;
  std::vector<Lemma> custom_lemmas;
  std::optional<std::filesystem::path> report_path;
  std::optional<std::filesystem::path> dump_path;
  std::optional<std::filesystem::path> store_path;
  std::uint64_t seed = 1;
  std::uint32_t demo_epochs = 3;
  unsigned jobs = 1;
  bool timing = false;
};

ScenarioConfig config_from_json(const json& j);
ScenarioConfig load_config(const std::filesystem::path& path);
json config_to_json(const ScenarioConfig& config);

/// Applies one KEY=VAL override. Keys: sessions, epochs, reports,
/// injection_bound, deduction_depth, reveals (comma-separated d0,sk0,di,ski).
void apply_bound(ScenarioConfig& config, std::string_view assignment);

RevealSet parse_reveals(const std::vector<std::string>& names);
std::vector<std::string> reveal_names(const RevealSet& r);

/// The lemmas a run checks, in report order. Custom lemmas shadow builtins
/// of the same name.
std::vector<Lemma> selected_lemmas(const ScenarioConfig& config);

json proof_json(const ProofNode& proof);
json step_json(const StepInstance& step, std::size_t index);
json result_json(const Lemma& lemma, const LemmaResult& result, bool timing);
json verdict_report(const ScenarioConfig& config, const std::vector<Lemma>& lemmas,
                    const std::vector<LemmaResult>& results);

/// Runs the selected lemmas and writes the verdict report to the report
/// path or `out`. Returns kExitOk when every lemma meets its expectation.
int cmd_verify(const ScenarioConfig& config, std::ostream& out, std::ostream& err);

/// One JSON line per step of every maximal trace; an empty trace is a
/// single line with step 0 and a null rule.
ExplorationStats write_trace_dump(const ScenarioConfig& config, std::ostream& out);
int cmd_dump_traces(const ScenarioConfig& config, std::ostream& out, std::ostream& err);

/// Append-only JSONL report store keyed by hex report id.
class FileReportStore {
 public:
  explicit FileReportStore(std::filesystem::path path) : path_(std::move(path)) {}

  const std::filesystem::path& path() const { return path_; }

  void store(const protocol::LocationReport<crypto::ConcreteProvider>& report, std::uint64_t upload_time);
  std::vector<protocol::LocationReport<crypto::ConcreteProvider>> fetch(const protocol::OwnerSession& session,
                                                                       const crypto::Digest& report_id) const;

 private:
  std::filesystem::path path_;
};

/// Raised by the demo pipeline with the name of the stage that failed.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& what)
      : std::runtime_error(what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct DemoResult {
  std::vector<std::string> transcript;
  crypto::Bytes location;
  std::uint64_t finder_time = 0;
};

/// Concrete end-to-end run: pair, rotate, beacon, seal, store, match,
/// decrypt, plus a check that the previous (or next) epoch's keys are
/// rejected. Throws StageError.
DemoResult run_demo(std::uint64_t seed, std::uint32_t epochs, const std::filesystem::path& store_path);
int cmd_demo(const ScenarioConfig& config, std::ostream& out, std::ostream& err);

/// Worker count from FINDMY_VERIF_JOBS, if set.
std::optional<unsigned> jobs_from_env();

}  // namespace findmy::cli

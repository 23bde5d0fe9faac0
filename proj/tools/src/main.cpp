#include <iostream>

#include <CLI11.hpp>

#include "findmy/cli.hpp"

namespace {

struct Flags {
  std::string config;
  std::vector<std::string> lemmas;
  std::vector<std::string> bounds;
  std::string backend;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint32_t> epochs;
  std::string out;
  std::optional<unsigned> jobs;
  bool no_symmetry = false;
  bool timing = false;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON scenario config")->check(CLI::ExistingFile);
  cmd->add_option("--bounds", f.bounds, "bound override KEY=VAL (repeatable)");
  cmd->add_option("--backend", f.backend, "symbolic or concrete")->check(CLI::IsMember({"symbolic", "concrete"}));
  cmd->add_option("--jobs", f.jobs, "parallel explorations (falls back to FINDMY_VERIF_JOBS)")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--no-symmetry-reduction", f.no_symmetry, "let rules draw any agent from the pools");
}

findmy::cli::ScenarioConfig build(const Flags& f, std::string_view command) {
  using namespace findmy::cli;
  ScenarioConfig c = f.config.empty() ? ScenarioConfig{} : load_config(f.config);
  for (const auto& b : f.bounds) apply_bound(c, b);
  if (!f.backend.empty()) c.backend = f.backend == "concrete" ? Backend::Concrete : Backend::Symbolic;
  if (!f.lemmas.empty()) c.lemmas = f.lemmas;
  if (f.seed) c.seed = *f.seed;
  if (f.epochs) c.demo_epochs = *f.epochs;
  if (f.jobs) {
    c.jobs = *f.jobs;
  } else if (auto env = jobs_from_env()) {
    c.jobs = *env;
  }
  if (f.no_symmetry) c.options.symmetry_reduction = false;
  if (f.timing) c.timing = true;
  if (!f.out.empty()) {
    if (command == "verify") c.report_path = f.out;
    if (command == "dump-traces") c.dump_path = f.out;
    if (command == "demo") c.store_path = f.out;
  }
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounded symbolic verifier and concrete demo for the offline-finding protocol"};
  app.set_version_flag("--version", std::string(findmy::cli::tool_version()));
  app.require_subcommand(1);
  Flags f;

  auto* verify = app.add_subcommand("verify", "check lemmas and write a JSON verdict report");
  add_common(verify, f);
  verify->add_option("--lemma", f.lemmas, "lemma to check (repeatable; default all)");
  verify->add_option("--out", f.out, "report path (default stdout)");
  verify->add_flag("--timing", f.timing, "include elapsed seconds in the report");

  auto* dump = app.add_subcommand("dump-traces", "write every bounded trace as JSON lines");
  add_common(dump, f);
  dump->add_option("--out", f.out, "dump path (default stdout)");

  auto* demo = app.add_subcommand("demo", "run the concrete P-224 / AES-GCM pipeline end to end");
  add_common(demo, f);
  demo->add_option("--seed", f.seed, "seed for all key material");
  demo->add_option("--epochs", f.epochs, "epochs to rotate before the beacon")->check(CLI::PositiveNumber);
  demo->add_option("--out", f.out, "JSONL report store (default findmy_reports.jsonl)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return findmy::cli::kExitUsage;
  }

  auto* cmd = app.get_subcommands().front();
  findmy::cli::ScenarioConfig config;
  try {
    config = build(f, cmd->get_name());
  } catch (const findmy::cli::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return findmy::cli::kExitUsage;
  }
  if (cmd == verify) return findmy::cli::cmd_verify(config, std::cout, std::cerr);
  if (cmd == dump) return findmy::cli::cmd_dump_traces(config, std::cout, std::cerr);
  return findmy::cli::cmd_demo(config, std::cout, std::cerr);
}

#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "taforge/errors.hpp"
#include "taforge/hash.hpp"
#include "taforge/pipeline.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::string run_id = "run";
  std::string backend = "replay";
  bool record = false;
};

taforge::pipeline::RunContext make_context(const CommonOptions& opts) {
  taforge::pipeline::RunContext ctx;
  ctx.config = taforge::pipeline::load_config(opts.config_path);
  ctx.config_hash = taforge::hash_file(opts.config_path);
  ctx.run_id = opts.run_id;
  if (opts.backend == "live")
    ctx.backend = taforge::gateway::BackendKind::live;
  else if (opts.backend == "replay")
    ctx.backend = taforge::gateway::BackendKind::replay;
  else
    throw taforge::ValidationError("--backend must be live or replay");
  ctx.record = opts.record;
  return ctx;
}

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "Run configuration file (JSON)")->required();
  cmd->add_option("--run-id", opts.run_id, "Run identifier (artifact directory name)");
  cmd->add_option("--backend", opts.backend, "Backend: live or replay");
  cmd->add_flag("--record", opts.record, "Record live exchanges into the replay store");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"taforge: thematic-analysis pipeline over a chat-completion model"};
  app.require_subcommand(1);

  CommonOptions opts;
  std::string chosen_phase;
  for (const char* phase :
       {"clean", "chunk", "code", "reduce", "themes", "review", "name", "compare"}) {
    CLI::App* cmd = app.add_subcommand(phase, std::string("Run the ") + phase + " phase");
    add_common(cmd, opts);
    cmd->callback([&chosen_phase, phase] { chosen_phase = phase; });
  }
  CLI::App* verify = app.add_subcommand("verify", "Verify run artifacts against the manifest");
  add_common(verify, opts);
  verify->callback([&chosen_phase] { chosen_phase = "verify"; });

  CLI11_PARSE(app, argc, argv);

  try {
    taforge::pipeline::RunContext ctx = make_context(opts);
    if (chosen_phase == "verify") {
      taforge::pipeline::VerifyReport report = taforge::pipeline::verify_manifest(ctx);
      for (const auto& a : report.ok) std::cout << "ok        " << a << "\n";
      for (const auto& a : report.edited) std::cout << "edited    " << a << " (editable artifact)\n";
      for (const auto& a : report.drifted) std::cout << "DRIFTED   " << a << "\n";
      for (const auto& a : report.missing) std::cout << "MISSING   " << a << "\n";
      return report.clean() ? 0 : static_cast<int>(taforge::ExitCode::validation);
    }
    taforge::pipeline::Phase phase = taforge::pipeline::phase_from_name(chosen_phase);
    taforge::pipeline::PhaseOutcome outcome = taforge::pipeline::run_phase(ctx, phase);
    for (const auto& note : outcome.notes) std::cerr << "note: " << note << "\n";
    for (const auto& [rel, hash] : outcome.artifacts)
      std::cout << rel << "  " << hash << "\n";
    return 0;
  } catch (const taforge::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(taforge::ExitCode::validation);
  }
}

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "ontolearn/pipeline.hpp"

namespace {

std::optional<std::string> env(const char* name) {
  const char* v = std::getenv(name);
  if (!v || !*v) return std::nullopt;
  return std::string(v);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ontology learning pipelines: term/type extraction, typing and taxonomy discovery"};
  std::string config_path;
  ontolearn::pipeline::Overrides ov;
  std::uint64_t seed = 0;
  std::string endpoint, out;

  app.add_option("--config", config_path, "Run config (JSON)")->required()->check(CLI::ExistingFile);
  auto* seed_opt = app.add_option("--seed", seed, "Random seed (overrides the config)");
  auto* endpoint_opt = app.add_option("--endpoint", endpoint, "Service URL (overrides ONTOLEARN_ENDPOINT and the config)");
  app.add_flag("--mock-llm", ov.mock_llm, "Use the deterministic offline completion backend");
  auto* out_opt = app.add_option("--out", out, "Output directory (overrides the config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  if (*seed_opt) ov.seed = seed;
  if (*endpoint_opt) ov.endpoint = endpoint;
  else ov.endpoint = env("ONTOLEARN_ENDPOINT");
  if (*out_opt) ov.out = out;
  ov.api_key = env("ONTOLEARN_API_KEY");

  const auto r = ontolearn::pipeline::run(config_path, ov);
  if (r.exit_code == 0) {
    std::cout << r.message << " (" << r.manifest.string() << ")\n";
  } else {
    std::cerr << "error: " << r.message << '\n';
  }
  return r.exit_code;
}

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <utility>

#include "ttl/error.hpp"
#include "ttl/job.hpp"

int main(int argc, char** argv) {
  CLI::App app{"ttl: transfer identities for theta correspondences"};
  app.require_subcommand(1);
  std::string config_path, out_path;
  int threads = 0, m_max = 0;
  const std::pair<const char*, const char*> commands[] = {
      {"verify-transfer", "compare the Whittaker and X-side orbital integrals"},
      {"verify-fl", "check the basic function: restriction, volume, torus values, identity"},
      {"verify-weil", "check Weil index, Fourier, Plancherel and the group law"},
      {"density", "fiber volumes and joint densities"},
      {"lfactor", "L_X^# and the assembly identity over Satake parameters"},
      {"hecke-check", "Hecke cosets, K-invariance and the identity at the translate"},
  };
  for (const auto& [name, desc] : commands) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", config_path, "JSON or TOML job file")->required();
    sub->add_option("--out", out_path, "report path (default: stdout)");
    sub->add_option("--threads", threads, "worker threads");
    sub->add_option("--m-max", m_max, "descent cap");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : ttl::kConfigError;
  }
  std::string command = app.get_subcommands().front()->get_name();
  try {
    ttl::JobConfig cfg = ttl::load_job_config(config_path);
    cfg.command = ttl::parse_command(command);
    if (threads > 0) cfg.threads = threads;
    if (m_max > 0) cfg.m_max = m_max;
    if (out_path.empty()) out_path = cfg.output;
    ttl::Report rep = ttl::run_job(cfg);
    std::string text = rep.json.dump(2) + "\n";
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(out_path);
      if (!out) throw ttl::Error(ttl::ErrorKind::ConfigError, "cannot write " + out_path);
      out << text;
      std::cerr << command << ": " << (rep.json["pass"].get<bool>() ? "pass" : "FAIL") << " ("
                << rep.json["cases"].size() << " cases) -> " << out_path << "\n";
    }
    return rep.exit_code;
  } catch (const ttl::Error& e) {
    std::cerr << "ttl: " << e.what() << "\n";
    return e.kind() == ttl::ErrorKind::ConfigError ? ttl::kConfigError : ttl::kMismatch;
  }
}

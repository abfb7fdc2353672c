// Command-line driver over the C interface.
#include <glob.h>

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cgks/cgks_c.h"

namespace {

struct Overrides {
  std::string cfl, cf, recon, flux, threads, output_dir;
};

int exit_code(int rc) { return rc == CGKS_OK ? 0 : (rc == CGKS_ERR_ABORT ? 2 : 1); }

int fail(int rc) {
  std::fprintf(stderr, "cgks: %s\n", cgks_last_error());
  return exit_code(rc);
}

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--cfl", o.cfl, "CFL number");
  cmd->add_option("--cf", o.cf, "gradient compression factor")->check(CLI::IsMember({"on", "off"}));
  cmd->add_option("--recon", o.recon, "reconstruction")->check(CLI::IsMember({"linear", "weno"}));
  cmd->add_option("--flux", o.flux, "flux form")->check(CLI::IsMember({"full", "smooth"}));
  cmd->add_option("--threads", o.threads, "worker threads (0: all cores)");
  cmd->add_option("--output-dir", o.output_dir, "directory for VTK, CSV and checkpoints");
}

int load(const std::string& path, const Overrides& o, cgks_config** cfg) {
  int rc = cgks_config_load(path.c_str(), cfg);
  if (rc != CGKS_OK) return rc;
  const std::pair<const char*, const std::string*> keys[] = {
      {"solver.cfl", &o.cfl},         {"solver.cf", &o.cf},           {"solver.recon", &o.recon},
      {"solver.flux", &o.flux},       {"solver.threads", &o.threads}, {"output.dir", &o.output_dir},
  };
  for (const auto& [key, value] : keys) {
    if (value->empty()) continue;
    rc = cgks_config_set(*cfg, key, value->c_str());
    if (rc != CGKS_OK) {
      cgks_config_free(*cfg);
      *cfg = nullptr;
      return rc;
    }
  }
  return CGKS_OK;
}

void print_progress(long step, double time, void* user) {
  const long every = *static_cast<long*>(user);
  if (every > 0 && step % every == 0) std::printf("step %ld  t = %.6g\n", step, time);
}

int run(const std::string& path, const Overrides& o, long progress_every) {
  cgks_config* cfg = nullptr;
  int rc = load(path, o, &cfg);
  if (rc != CGKS_OK) return fail(rc);
  cgks_result* r = nullptr;
  rc = cgks_run(cfg, print_progress, &progress_every, &r);
  cgks_config_free(cfg);
  if (rc != CGKS_OK) return fail(rc);
  std::printf("cells %zu  steps %ld  t = %.6g  wall %.2f s  flux fallbacks %ld\n", cgks_result_cell_count(r),
              cgks_result_steps(r), cgks_result_time(r), cgks_result_seconds(r), cgks_result_flux_fallbacks(r));
  double l1, l2, linf;
  if (cgks_result_errors(r, &l1, &l2, &linf) == CGKS_OK)
    std::printf("density error  L1 %.6e  L2 %.6e  Linf %.6e\n", l1, l2, linf);
  cgks_result_free(r);
  return 0;
}

std::vector<std::string> expand(const std::vector<std::string>& patterns) {
  std::vector<std::string> out;
  for (const auto& p : patterns) {
    glob_t g{};
    if (glob(p.c_str(), 0, nullptr, &g) == 0) {
      for (size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
    } else {
      out.push_back(p);  // reported as missing by the loader
    }
    globfree(&g);
  }
  return out;
}

int convergence(const std::vector<std::string>& patterns, const Overrides& o, const std::string& table_path) {
  std::vector<std::string> labels;
  std::vector<double> norms;
  for (const auto& path : expand(patterns)) {
    cgks_config* cfg = nullptr;
    int rc = load(path, o, &cfg);
    if (rc != CGKS_OK) return fail(rc);
    std::string label(cgks_config_label(cfg, nullptr, 0), '\0');
    cgks_config_label(cfg, label.data(), label.size() + 1);
    cgks_result* r = nullptr;
    rc = cgks_run(cfg, nullptr, nullptr, &r);
    cgks_config_free(cfg);
    if (rc != CGKS_OK) return fail(rc);
    double e[3];
    rc = cgks_result_errors(r, &e[0], &e[1], &e[2]);
    std::fprintf(stderr, "%s: %ld steps, %.1f s\n", path.c_str(), cgks_result_steps(r), cgks_result_seconds(r));
    cgks_result_free(r);
    if (rc != CGKS_OK) return fail(rc);
    labels.push_back(label);
    norms.insert(norms.end(), e, e + 3);
  }
  std::vector<const char*> ptrs;
  for (const auto& l : labels) ptrs.push_back(l.c_str());
  std::string table(cgks_convergence_table(ptrs.data(), norms.data(), labels.size(), nullptr, 0), '\0');
  cgks_convergence_table(ptrs.data(), norms.data(), labels.size(), table.data(), table.size() + 1);
  std::fputs(table.c_str(), stdout);
  if (!table_path.empty()) {
    std::ofstream out(table_path);
    if (!(out << table)) {
      std::fprintf(stderr, "cgks: cannot write '%s'\n", table_path.c_str());
      return 1;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compact gas-kinetic finite-volume solver"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cgks_version()));

  Overrides run_o, conv_o;
  std::string config, table, spec, out;
  std::vector<std::string> patterns;
  long progress = 0;
  double length = 2.0;
  bool periodic = false;

  auto* run_cmd = app.add_subcommand("run", "run one configured case");
  run_cmd->add_option("config", config, "case configuration file")->required();
  run_cmd->add_option("--progress", progress, "print a line every N steps");
  add_overrides(run_cmd, run_o);

  auto* conv_cmd = app.add_subcommand("convergence", "run a refinement series and print the error table");
  conv_cmd->add_option("configs", patterns, "configuration files or glob patterns, coarse to fine")->required();
  conv_cmd->add_option("--table", table, "also write the table to this file");
  add_overrides(conv_cmd, conv_o);

  auto* mesh_cmd = app.add_subcommand("mesh-gen", "write a generated mesh file");
  mesh_cmd->add_option("spec", spec, "hex:N, hex:NXxNYxNZ or hybrid:N")->required();
  mesh_cmd->add_option("-o,--output", out, "output mesh file")->required();
  mesh_cmd->add_option("--length", length, "edge length of the cubic box");
  mesh_cmd->add_flag("--periodic", periodic, "pair opposite boundary faces");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  if (*run_cmd) return run(config, run_o, progress);
  if (*conv_cmd) return convergence(patterns, conv_o, table);
  size_t cells = 0;
  const int rc = cgks_mesh_generate(spec.c_str(), length, periodic ? 1 : 0, out.c_str(), &cells);
  if (rc != CGKS_OK) return fail(rc);
  std::printf("wrote %zu cells to %s\n", cells, out.c_str());
  return 0;
}

#include <cstring>
#include <memory>
#include <sstream>
#include <string>

#include "cgks/cgks_c.h"
#include "cgks/harness.hpp"

struct cgks_config {
  cgks::harness::CaseConfig cfg;
};

struct cgks_result {
  cgks::harness::RunResult run;
};

namespace {

thread_local std::string last_error;

// Runs `body`, mapping exceptions to return codes.
template <class Fn>
int guarded(Fn&& body) {
  try {
    body();
    last_error.clear();
    return CGKS_OK;
  } catch (const cgks::ConfigError& e) {
    last_error = e.what();
    return CGKS_ERR_CONFIG;
  } catch (const cgks::MeshError& e) {
    last_error = e.what();
    return CGKS_ERR_CONFIG;
  } catch (const cgks::InvalidState& e) {
    last_error = e.what();
    return CGKS_ERR_CONFIG;
  } catch (const cgks::SolverAbort& e) {
    last_error = e.what();
    return CGKS_ERR_ABORT;
  } catch (const cgks::IoError& e) {
    last_error = e.what();
    return CGKS_ERR_IO;
  } catch (const std::invalid_argument& e) {
    last_error = e.what();
    return CGKS_ERR_INVALID;
  } catch (const std::exception& e) {
    last_error = e.what();
    return CGKS_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return CGKS_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

size_t copy_out(const std::string& s, char* buf, size_t len) {
  if (buf && len > 0) {
    const size_t n = std::min(s.size(), len - 1);
    std::memcpy(buf, s.data(), n);
    buf[n] = '\0';
  }
  return s.size();
}

}  // namespace

extern "C" {

const char* cgks_last_error(void) { return last_error.c_str(); }

const char* cgks_version(void) { return "1.0.0"; }

int cgks_config_new(cgks_config** out) {
  return guarded([&] {
    require(out != nullptr, "null output pointer");
    *out = new cgks_config{};
  });
}

int cgks_config_load(const char* path, cgks_config** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = new cgks_config{cgks::harness::load_config(path)};
  });
}

int cgks_config_set(cgks_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    require(cfg && key && value, "null argument");
    cgks::harness::set_option(cfg->cfg, key, value);
  });
}

size_t cgks_config_label(const cgks_config* cfg, char* buf, size_t len) {
  if (!cfg) return copy_out("", buf, len);
  const auto& c = cfg->cfg;
  std::string label;
  if (c.generator == "file") {
    label = c.mesh_file;
  } else if (c.name == "sinwave") {
    label = (c.generator == "hybrid" ? "1.6 x " : "") + std::to_string(c.n) + "^3";
  } else {
    label = c.nx > 0 ? std::to_string(c.nx) : "default";
  }
  return copy_out(label, buf, len);
}

void cgks_config_free(cgks_config* cfg) { delete cfg; }

int cgks_run(const cgks_config* cfg, cgks_progress_fn progress, void* user, cgks_result** out) {
  return guarded([&] {
    require(cfg != nullptr && out != nullptr, "null argument");
    std::function<void(const cgks::Solver&)> cb;
    if (progress) cb = [&](const cgks::Solver& s) { progress(s.steps(), s.time(), user); };
    auto r = std::make_unique<cgks_result>();
    r->run = cgks::harness::run_case(cfg->cfg, cb);
    *out = r.release();
  });
}

size_t cgks_result_cell_count(const cgks_result* r) { return r ? r->run.cells.size() : 0; }
long cgks_result_steps(const cgks_result* r) { return r ? r->run.steps : 0; }
double cgks_result_time(const cgks_result* r) { return r ? r->run.time : 0.0; }
double cgks_result_seconds(const cgks_result* r) { return r ? r->run.seconds : 0.0; }
long cgks_result_flux_fallbacks(const cgks_result* r) { return r ? r->run.flux_fallbacks : 0; }

int cgks_result_errors(const cgks_result* r, double* l1, double* l2, double* linf) {
  return guarded([&] {
    require(r != nullptr, "null result");
    require(r->run.errors.has_value(), "case has no exact solution");
    if (l1) *l1 = r->run.errors->l1;
    if (l2) *l2 = r->run.errors->l2;
    if (linf) *linf = r->run.errors->linf;
  });
}

int cgks_result_density(const cgks_result* r, double* out, size_t n) {
  return guarded([&] {
    require(r && out, "null argument");
    require(n == r->run.cells.size(), "size does not match the cell count");
    for (size_t c = 0; c < n; ++c) out[c] = r->run.cells[c].W[0];
  });
}

int cgks_result_alpha(const cgks_result* r, double* out, size_t n) {
  return guarded([&] {
    require(r && out, "null argument");
    require(n == r->run.cells.size(), "size does not match the cell count");
    for (size_t c = 0; c < n; ++c) out[c] = c < r->run.alpha.size() ? r->run.alpha[c].alpha : 1.0;
  });
}

void cgks_result_free(cgks_result* r) { delete r; }

size_t cgks_convergence_table(const char* const* labels, const double* norms, size_t rows, char* buf, size_t len) {
  std::vector<cgks::harness::ErrorReport> reports;
  for (size_t i = 0; i < rows && labels && norms; ++i) {
    reports.push_back({labels[i] ? labels[i] : "", {norms[3 * i], norms[3 * i + 1], norms[3 * i + 2]}});
  }
  std::ostringstream s;
  cgks::harness::write_convergence_table(reports, s);
  return copy_out(s.str(), buf, len);
}

int cgks_mesh_generate(const char* spec, double box_length, int periodic, const char* path, size_t* cells) {
  return guarded([&] {
    require(spec && path, "null argument");
    if (!(box_length > 0.0)) throw cgks::ConfigError("box length must be positive");
    const std::string s(spec);
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw cgks::ConfigError("mesh spec must look like hex:N or hybrid:N");
    const std::string kind = s.substr(0, colon), dims = s.substr(colon + 1);
    std::array<int, 3> n{};
    auto parse_int = [&](const std::string& t) {
      size_t used = 0;
      int v = 0;
      try {
        v = std::stoi(t, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != t.size() || v < 1) throw cgks::ConfigError("bad mesh size '" + t + "' in '" + s + "'");
      return v;
    };
    std::vector<std::string> parts;
    std::stringstream ss(dims);
    for (std::string p; std::getline(ss, p, 'x');) parts.push_back(p);
    if (parts.size() == 1) {
      n.fill(parse_int(parts[0]));
    } else if (parts.size() == 3 && kind == "hex") {
      for (int d = 0; d < 3; ++d) n[d] = parse_int(parts[d]);
    } else {
      throw cgks::ConfigError("bad mesh size in '" + s + "'");
    }
    const cgks::Box box{{0, 0, 0}, {box_length, box_length, box_length}};
    const bool p = periodic != 0;
    cgks::Mesh mesh;
    if (kind == "hex") {
      mesh = cgks::build_structured_hex(n, box, {p, p, p});
    } else if (kind == "hybrid") {
      mesh = cgks::build_hybrid_cube(n[0], box, {p, p, p});
    } else {
      throw cgks::ConfigError("unknown mesh generator '" + kind + "'");
    }
    cgks::write_mesh_ascii(mesh, path);
    if (cells) *cells = mesh.cell_count();
  });
}

}  // extern "C"

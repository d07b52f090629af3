#include "blowup/blowup.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "core/commands.hpp"
#include "core/config.hpp"
#include "core/error.hpp"
#include "core/io.hpp"
#include "core/pipeline.hpp"
#include "core/surface.hpp"
#include "core/verifier.hpp"

struct blowup_config {
  blowup::RunConfig cfg;
};

struct blowup_record {
  blowup::CauchyDataRecord rec;
};

struct blowup_map {
  blowup::BlowupMap map;
};

namespace {

thread_local std::string g_error;
thread_local std::string g_kind;

void clear_error() {
  g_error.clear();
  g_kind.clear();
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p) std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

blowup_status fail_argument(const char* what) {
  g_error = what;
  g_kind = "Argument";
  return BLOWUP_ERR_ARGUMENT;
}

// Runs fn and maps exceptions onto status codes.
template <class F>
blowup_status guarded(F&& fn) {
  clear_error();
  try {
    fn();
    return BLOWUP_OK;
  } catch (const blowup::Error& e) {
    g_error = e.what();
    g_kind = blowup::to_string(e.kind());
    return e.category() == blowup::ErrorCategory::Validation ? BLOWUP_ERR_VALIDATION : BLOWUP_ERR_NUMERICAL;
  } catch (const std::exception& e) {
    g_error = e.what();
    g_kind = "Internal";
    return BLOWUP_ERR_NUMERICAL;
  } catch (...) {
    g_error = "unknown failure";
    g_kind = "Internal";
    return BLOWUP_ERR_NUMERICAL;
  }
}

}  // namespace

extern "C" {

const char* blowup_version(void) { return "0.1.0"; }
const char* blowup_last_error(void) { return g_error.c_str(); }
const char* blowup_last_error_kind(void) { return g_kind.c_str(); }
void blowup_string_free(char* s) { std::free(s); }

blowup_status blowup_config_default(blowup_config** out) {
  if (!out) return fail_argument("null output pointer");
  return guarded([&] { *out = new blowup_config{blowup::default_config()}; });
}

blowup_status blowup_config_load(const char* path, blowup_config** out) {
  if (!path || !out) return fail_argument("null argument");
  return guarded([&] { *out = new blowup_config{blowup::load_config(path)}; });
}

blowup_status blowup_config_parse(const char* ini_text, blowup_config** out) {
  if (!ini_text || !out) return fail_argument("null argument");
  return guarded([&] { *out = new blowup_config{blowup::parse_config(ini_text)}; });
}

blowup_status blowup_config_set(blowup_config* cfg, const char* key, const char* value) {
  if (!cfg || !key || !value) return fail_argument("null argument");
  return guarded([&] { blowup::apply_override(cfg->cfg, std::string(key) + "=" + value); });
}

blowup_status blowup_config_to_ini(const blowup_config* cfg, char** out) {
  if (!cfg || !out) return fail_argument("null argument");
  return guarded([&] { *out = dup(blowup::to_ini(cfg->cfg)); });
}

void blowup_config_free(blowup_config* cfg) { delete cfg; }

int blowup_run(const blowup_config* cfg, const char* command, const char* out_dir, const char* record_path,
               char** summary_json) {
  if (!cfg || !command) return fail_argument("null argument");
  clear_error();
  blowup::CommandOptions opt;
  if (out_dir) opt.out_dir = out_dir;
  if (record_path) opt.record_path = record_path;
  const blowup::CommandResult r = blowup::run_command(command, cfg->cfg, opt);
  if (r.summary.contains("message")) {
    g_error = r.summary["message"].get<std::string>();
    g_kind = r.summary.value("error_kind", "");
  }
  if (summary_json) *summary_json = dup(r.summary.dump());
  return r.exit_code;
}

const char* const* blowup_command_names(size_t* count) {
  static const char* const names[] = {"expand", "simulate", "construct", "verify", "sweep", "check"};
  if (count) *count = sizeof names / sizeof names[0];
  return names;
}

blowup_status blowup_choose_alpha(const blowup_config* cfg, double* alpha) {
  if (!cfg || !alpha) return fail_argument("null argument");
  return guarded([&] { *alpha = blowup::choose_alpha(cfg->cfg.epsilon, cfg->cfg.s0, cfg->cfg.grid); });
}

blowup_status blowup_construct(const blowup_config* cfg, blowup_record** out) {
  if (!cfg || !out) return fail_argument("null argument");
  return guarded([&] {
    cfg->cfg.validate();
    *out = new blowup_record{blowup::run_pipeline(cfg->cfg.pipeline())};
  });
}

blowup_status blowup_record_load(const char* path, blowup_record** out) {
  if (!path || !out) return fail_argument("null argument");
  return guarded([&] { *out = new blowup_record{blowup::record_from_json(blowup::read_json(path))}; });
}

size_t blowup_record_size(const blowup_record* rec) { return rec ? rec->rec.u.size() : 0; }
double blowup_record_alpha(const blowup_record* rec) { return rec ? rec->rec.alpha : 0.0; }

blowup_status blowup_record_fields(const blowup_record* rec, double* u, double* ut) {
  if (!rec) return fail_argument("null record");
  clear_error();
  if (u) std::memcpy(u, rec->rec.u.data(), rec->rec.u.size() * sizeof(double));
  if (ut) std::memcpy(ut, rec->rec.ut.data(), rec->rec.ut.size() * sizeof(double));
  return BLOWUP_OK;
}

blowup_status blowup_record_budget(const blowup_record* rec, double norms[4], int* pass) {
  if (!rec) return fail_argument("null record");
  clear_error();
  const blowup::ControlBudget& b = rec->rec.budget;
  if (norms) {
    norms[0] = b.norm_exact;
    norms[1] = b.norm_phi;
    norms[2] = b.norm_tail;
    norms[3] = b.total;
  }
  if (pass) *pass = b.pass ? 1 : 0;
  return BLOWUP_OK;
}

blowup_status blowup_record_to_json(const blowup_record* rec, char** out) {
  if (!rec || !out) return fail_argument("null argument");
  return guarded([&] { *out = dup(blowup::record_to_json(rec->rec).dump()); });
}

void blowup_record_free(blowup_record* rec) { delete rec; }

blowup_status blowup_verify(const blowup_config* cfg, const blowup_record* rec, blowup_map** out) {
  if (!cfg || !rec || !out) return fail_argument("null argument");
  return guarded([&] {
    const blowup::RunConfig& c = cfg->cfg;
    const blowup::BlowupSurface s = blowup::build_surface(c.scaled_surface(), rec->rec.grid);
    const blowup::VerifierConfig v = c.verifier_for(rec->rec.alpha, blowup::min_of(s.psi()));
    *out = new blowup_map{blowup::solve_direct(rec->rec.grid, rec->rec.u, rec->rec.ut, v).map};
  });
}

size_t blowup_map_size(const blowup_map* map) { return map ? map->map.x.size() : 0; }

blowup_status blowup_map_times(const blowup_map* map, double* x, double* t_blow, int* sign) {
  if (!map) return fail_argument("null map");
  clear_error();
  const auto& m = map->map;
  for (std::size_t j = 0; j < m.x.size(); ++j) {
    if (x) x[j] = m.x[j];
    if (t_blow) t_blow[j] = m.t_extrap[j];
    if (sign) sign[j] = m.sign[j];
  }
  return BLOWUP_OK;
}

double blowup_map_first(const blowup_map* map) { return map ? map->map.first_blowup() : 0.0; }

void blowup_map_free(blowup_map* map) { delete map; }

}  // extern "C"

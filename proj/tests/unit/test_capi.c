#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "blowup/blowup.h"

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                 \
    }                                                             \
  } while (0)

int main(int argc, char** argv) {
  const char* out = argc > 1 ? argv[1] : "capi_out";
  char path[4096];

  EXPECT(strlen(blowup_version()) > 0);

  size_t ncmd = 0;
  const char* const* names = blowup_command_names(&ncmd);
  EXPECT(ncmd == 6);
  EXPECT(names != NULL && strcmp(names[0], "expand") == 0);

  blowup_config* cfg = NULL;
  EXPECT(blowup_config_default(&cfg) == BLOWUP_OK);
  EXPECT(blowup_config_set(cfg, "grid.points", "64") == BLOWUP_OK);
  EXPECT(blowup_config_set(cfg, "grid.nonsense", "1") == BLOWUP_ERR_VALIDATION);
  EXPECT(strcmp(blowup_last_error_kind(), "InvalidConfig") == 0);
  EXPECT(blowup_config_set(NULL, "grid.points", "64") == BLOWUP_ERR_ARGUMENT);

  char* ini = NULL;
  EXPECT(blowup_config_to_ini(cfg, &ini) == BLOWUP_OK);
  EXPECT(ini != NULL && strstr(ini, "points = 64") != NULL);
  blowup_config* copy = NULL;
  EXPECT(blowup_config_parse(ini, &copy) == BLOWUP_OK);
  blowup_config_free(copy);
  blowup_string_free(ini);

  double alpha = 0.0;
  EXPECT(blowup_choose_alpha(cfg, &alpha) == BLOWUP_OK);
  EXPECT(alpha == 11.0);

  blowup_record* rec = NULL;
  EXPECT(blowup_construct(cfg, &rec) == BLOWUP_OK);
  if (rec) {
    EXPECT(blowup_record_size(rec) == 64);
    EXPECT(blowup_record_alpha(rec) == 11.0);
    double u[64], ut[64], norms[4];
    int pass = -1;
    EXPECT(blowup_record_fields(rec, u, ut) == BLOWUP_OK);
    EXPECT(u[0] > 0.0 && ut[0] > 0.0);
    EXPECT(blowup_record_budget(rec, norms, &pass) == BLOWUP_OK);
    EXPECT(norms[3] > 0.0 && (pass == 0 || pass == 1));

    blowup_map* map = NULL;
    EXPECT(blowup_verify(cfg, rec, &map) == BLOWUP_OK);
    if (map) {
      double x[64], tb[64];
      int sign[64];
      EXPECT(blowup_map_size(map) == 64);
      EXPECT(blowup_map_times(map, x, tb, sign) == BLOWUP_OK);
      EXPECT(fabs(blowup_map_first(map) - 11.0) < 0.25); /* raw time on a coarse grid */
      EXPECT(sign[0] == 1);
      blowup_map_free(map);
    }
    char* js = NULL;
    EXPECT(blowup_record_to_json(rec, &js) == BLOWUP_OK);
    EXPECT(js != NULL && strstr(js, "\"alpha\"") != NULL);
    blowup_string_free(js);
    blowup_record_free(rec);
  }

  char* summary = NULL;
  snprintf(path, sizeof path, "%s/construct", out);
  EXPECT(blowup_run(cfg, "construct", path, NULL, &summary) == 0);
  EXPECT(summary != NULL && strstr(summary, "budget") != NULL);
  blowup_string_free(summary);

  char record[4096];
  snprintf(record, sizeof record, "%s/construct/record.json", out);
  blowup_record* loaded = NULL;
  EXPECT(blowup_record_load(record, &loaded) == BLOWUP_OK);
  EXPECT(loaded && blowup_record_size(loaded) == 64);
  blowup_record_free(loaded);
  EXPECT(blowup_record_load("/nonexistent/record.json", &loaded) == BLOWUP_ERR_VALIDATION);

  EXPECT(blowup_config_set(cfg, "verifier.courant", "0.95") == BLOWUP_OK);
  snprintf(path, sizeof path, "%s/cfl", out);
  EXPECT(blowup_run(cfg, "verify", path, NULL, NULL) == 2);
  EXPECT(blowup_run(cfg, "nonsense", path, NULL, NULL) == 1);
  blowup_config_free(cfg);

  if (failures) fprintf(stderr, "%d failure(s)\n", failures);
  return failures ? 1 : 0;
}

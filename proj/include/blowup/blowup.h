#ifndef BLOWUP_BLOWUP_H
#define BLOWUP_BLOWUP_H

#include <stddef.h>

#if defined(BLOWUP_BUILDING_LIBRARY)
#define BLOWUP_API __attribute__((visibility("default")))
#else
#define BLOWUP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Values 1 and 2 double as process exit codes. */
typedef enum {
  BLOWUP_OK = 0,
  BLOWUP_ERR_VALIDATION = 1,
  BLOWUP_ERR_NUMERICAL = 2,
  BLOWUP_ERR_ARGUMENT = 3
} blowup_status;

typedef struct blowup_config blowup_config;
typedef struct blowup_record blowup_record;
typedef struct blowup_map blowup_map;

BLOWUP_API const char* blowup_version(void);

/* Message and error kind of the last failure on the calling thread ("" if none). */
BLOWUP_API const char* blowup_last_error(void);
BLOWUP_API const char* blowup_last_error_kind(void);

/* Strings returned through char** are owned by the caller. */
BLOWUP_API void blowup_string_free(char* s);

BLOWUP_API blowup_status blowup_config_default(blowup_config** out);
BLOWUP_API blowup_status blowup_config_load(const char* path, blowup_config** out);
BLOWUP_API blowup_status blowup_config_parse(const char* ini_text, blowup_config** out);
/* key is "section.key". */
BLOWUP_API blowup_status blowup_config_set(blowup_config* cfg, const char* key, const char* value);
BLOWUP_API blowup_status blowup_config_to_ini(const blowup_config* cfg, char** out);
BLOWUP_API void blowup_config_free(blowup_config* cfg);

/* Runs a subcommand (expand, simulate, construct, verify, sweep, check) into out_dir.
   record_path is only used by verify and may be NULL. The returned status is the exit
   code; summary_json (may be NULL) receives the run summary. */
BLOWUP_API int blowup_run(const blowup_config* cfg, const char* command, const char* out_dir, const char* record_path,
                          char** summary_json);

BLOWUP_API const char* const* blowup_command_names(size_t* count);

/* Smallest admissible slice time for the given budget on the configured box. */
BLOWUP_API blowup_status blowup_choose_alpha(const blowup_config* cfg, double* alpha);

/* Full construction: Cauchy data on t = 0 after time reversal. */
BLOWUP_API blowup_status blowup_construct(const blowup_config* cfg, blowup_record** out);
BLOWUP_API blowup_status blowup_record_load(const char* path, blowup_record** out);
BLOWUP_API size_t blowup_record_size(const blowup_record* rec);
BLOWUP_API double blowup_record_alpha(const blowup_record* rec);
/* Copies n = blowup_record_size values into each non-NULL buffer. */
BLOWUP_API blowup_status blowup_record_fields(const blowup_record* rec, double* u, double* ut);
/* norms[0..3] = exact, phi, tail, total. */
BLOWUP_API blowup_status blowup_record_budget(const blowup_record* rec, double norms[4], int* pass);
BLOWUP_API blowup_status blowup_record_to_json(const blowup_record* rec, char** out);
BLOWUP_API void blowup_record_free(blowup_record* rec);

/* Direct periodic solve from the record with the verifier settings of cfg. */
BLOWUP_API blowup_status blowup_verify(const blowup_config* cfg, const blowup_record* rec, blowup_map** out);
BLOWUP_API size_t blowup_map_size(const blowup_map* map);
/* Blow-up times (extrapolated; +inf where none). Copies blowup_map_size values. */
BLOWUP_API blowup_status blowup_map_times(const blowup_map* map, double* x, double* t_blow, int* sign);
BLOWUP_API double blowup_map_first(const blowup_map* map);
BLOWUP_API void blowup_map_free(blowup_map* map);

#ifdef __cplusplus
}
#endif

#endif

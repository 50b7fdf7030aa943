/*
 * reflow.h - C interface to the reflow-profile simulator.
 *
 * Every function returns a reflow_status. On failure a message describing the
 * error is available from reflow_last_error() on the calling thread until the
 * next call into the library from that thread. Objects are opaque handles
 * released with the matching *_free function; passing NULL to *_free is a
 * no-op. Output handles are only written on success.
 *
 * Units: temperatures in degrees Celsius, positions in cm, times in s, belt
 * speed in cm/min, welding coefficient q in 1/s.
 */
#ifndef REFLOW_REFLOW_H
#define REFLOW_REFLOW_H

#include <stddef.h>

#if defined(REFLOW_BUILDING_LIBRARY)
#define REFLOW_API __attribute__((visibility("default")))
#else
#define REFLOW_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum reflow_status {
  REFLOW_OK = 0,
  REFLOW_E_INVALID_ARGUMENT = 1, /* NULL handle, bad enum, buffer misuse */
  REFLOW_E_DOMAIN = 2,           /* value outside the function's domain */
  REFLOW_E_CONFIG = 3,           /* configuration cannot be resolved */
  REFLOW_E_PARSE = 4,            /* malformed input file */
  REFLOW_E_IO = 5,               /* file could not be read or written */
  REFLOW_E_UNDEFINED = 6,        /* quantity undefined for the data */
  REFLOW_E_INTERNAL = 7
} reflow_status;

typedef struct reflow_config reflow_config;
typedef struct reflow_trace reflow_trace;
typedef struct reflow_buffer reflow_buffer;

REFLOW_API const char* reflow_version(void);
REFLOW_API const char* reflow_status_name(reflow_status status);
REFLOW_API const char* reflow_last_error(void);

/* ---- configuration ---------------------------------------------------- */

/* Defaults: reference oven layout, 175/195/235/255/25 C, 70 cm/min, q = 0.021, p = 0.8. */
REFLOW_API reflow_status reflow_config_new(reflow_config** out);
REFLOW_API reflow_status reflow_config_load(const char* path, reflow_config** out);
REFLOW_API reflow_status reflow_config_parse(const char* json_text, reflow_config** out);
REFLOW_API void reflow_config_free(reflow_config* config);

/* Keys are "section.name" (see reflow_config_key_name). Lists and intervals are comma separated. */
REFLOW_API reflow_status reflow_config_set(reflow_config* config, const char* key, const char* value);
REFLOW_API reflow_status reflow_config_get(const reflow_config* config, const char* key, reflow_buffer** out);
REFLOW_API reflow_status reflow_config_validate(const reflow_config* config);
REFLOW_API reflow_status reflow_config_dump(const reflow_config* config, reflow_buffer** out);

REFLOW_API size_t reflow_config_key_count(void);
/* NULL when index is out of range. */
REFLOW_API const char* reflow_config_key_name(size_t index);
REFLOW_API const char* reflow_config_key_help(size_t index);

/* ---- byte buffers ------------------------------------------------------- */

REFLOW_API const char* reflow_buffer_data(const reflow_buffer* buffer); /* NUL-terminated */
REFLOW_API size_t reflow_buffer_size(const reflow_buffer* buffer);
REFLOW_API void reflow_buffer_free(reflow_buffer* buffer);

/* ---- ambient field and simulation -------------------------------------- */

REFLOW_API reflow_status reflow_ambient_at(const reflow_config* config, double x_cm, double* temp_c);

/* RK4 trace of the configured scenario, sampled every grid.dt_out seconds. */
REFLOW_API reflow_status reflow_simulate(const reflow_config* config, reflow_trace** out);

/* Two-column files (t_s,temp_c) rebuild positions from belt_speed, which must then
 * be positive. Three-column files (t_s,x_cm,temp_c) infer the speed and ignore it. */
REFLOW_API reflow_status reflow_trace_load_csv(const char* path, double belt_speed, reflow_trace** out);
REFLOW_API reflow_status reflow_trace_write_csv(const reflow_trace* trace, const char* path);
REFLOW_API reflow_status reflow_trace_to_csv(const reflow_trace* trace, reflow_buffer** out);
REFLOW_API void reflow_trace_free(reflow_trace* trace);

REFLOW_API size_t reflow_trace_size(const reflow_trace* trace);
REFLOW_API double reflow_trace_dt(const reflow_trace* trace);
REFLOW_API double reflow_trace_belt_speed(const reflow_trace* trace);
REFLOW_API reflow_status reflow_trace_sample(const reflow_trace* trace, size_t index, double* t_s, double* x_cm,
                                             double* temp_c);

/* ---- process limits ----------------------------------------------------- */

typedef struct reflow_metrics {
  double max_slope;  /* C/s */
  double min_slope;  /* C/s */
  int has_rise_time; /* 0 when 150 or 190 C is never reached before the peak */
  double rise_time_150_190;
  double duration_above_217;
  double peak_temp;
  double peak_time;
} reflow_metrics;

enum { REFLOW_LIMIT_COUNT = 5 };

typedef struct reflow_limit_row {
  const char* name; /* static string */
  int has_measured;
  double measured;
  double lo;
  double hi;
  int pass;
} reflow_limit_row;

typedef struct reflow_verdict {
  reflow_limit_row rows[REFLOW_LIMIT_COUNT]; /* max_slope, min_slope, rise_150_190, time_above_217, peak */
  int pass;
} reflow_verdict;

REFLOW_API reflow_status reflow_compute_metrics(const reflow_trace* trace, reflow_metrics* out);
/* Limits come from the configuration's limits.* keys. */
REFLOW_API reflow_status reflow_check_limits(const reflow_config* config, const reflow_metrics* metrics,
                                             reflow_verdict* out);

/* ---- scoring ------------------------------------------------------------ */

REFLOW_API reflow_status reflow_discrepancy(const reflow_trace* measured, const reflow_trace* simulated,
                                            double* mse);
REFLOW_API reflow_status reflow_pearson(const reflow_trace* measured, const reflow_trace* simulated, double* r);
/* area_domain: 0 = position (C*cm), 1 = time (C*s). */
REFLOW_API reflow_status reflow_area(const reflow_trace* trace, int area_domain, double* area);
REFLOW_API reflow_status reflow_symmetry(const reflow_trace* trace, double* score);

/* ---- commands (one per CLI subcommand) ---------------------------------- */

typedef enum reflow_optimize_mode {
  REFLOW_OPTIMIZE_SPEED = 0,
  REFLOW_OPTIMIZE_AREA = 1,
  REFLOW_OPTIMIZE_SYMMETRY = 2
} reflow_optimize_mode;

/* Each output pointer may be NULL when that artifact is not wanted. */
REFLOW_API reflow_status reflow_cmd_field(const reflow_config* config, reflow_buffer** csv);
REFLOW_API reflow_status reflow_cmd_simulate(const reflow_config* config, reflow_buffer** trace_csv,
                                             reflow_buffer** verdict_csv, reflow_buffer** report);
REFLOW_API reflow_status reflow_cmd_check(const reflow_config* config, const reflow_trace* trace,
                                          reflow_buffer** verdict_csv, reflow_buffer** report);
REFLOW_API reflow_status reflow_cmd_calibrate(const reflow_config* config, const reflow_trace* measured,
                                              reflow_buffer** table_csv, reflow_buffer** report);
REFLOW_API reflow_status reflow_cmd_optimize(const reflow_config* config, reflow_optimize_mode mode,
                                             reflow_buffer** report, reflow_buffer** candidates_csv);

#ifdef __cplusplus
}
#endif

#endif /* REFLOW_REFLOW_H */

/* gridcarbon: C API for the grid carbon-accounting engine.
 *
 * Every object returned through an out-parameter is owned by the caller and
 * released with the matching *_free function. Functions returning gc_status
 * report failure details through gc_last_error(), which is thread-local and
 * valid until the next failing call on the same thread.
 */
#ifndef GRIDCARBON_H
#define GRIDCARBON_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define GC_API __declspec(dllexport)
#else
#define GC_API __attribute__((visibility("default")))
#endif

typedef enum gc_status {
    GC_OK = 0,
    GC_ERROR_ARGUMENT = 1,   /* bad pointer, range, or enum value */
    GC_ERROR_IO = 2,         /* file missing or unreadable/unwritable */
    GC_ERROR_PARSE = 3,      /* malformed case or series text */
    GC_ERROR_VALIDATION = 4, /* well-formed but inconsistent input */
    GC_ERROR_INFEASIBLE = 5, /* dispatch has no feasible point */
    GC_ERROR_UNBOUNDED = 6,  /* dispatch cost unbounded below */
    GC_ERROR_NUMERIC = 7,    /* solver lost numerical footing */
    GC_ERROR_INTERNAL = 8    /* invariant violation; please report */
} gc_status;

typedef enum gc_metric {
    GC_METRIC_ACE = 0,
    GC_METRIC_LMCE = 1,
    GC_METRIC_ALMCE = 2,
    GC_METRIC_LACE = 3
} gc_metric;

GC_API const char* gc_version(void);
GC_API const char* gc_status_name(gc_status status);
GC_API const char* gc_last_error(void);

typedef struct gc_network gc_network;
typedef struct gc_series gc_series;
typedef struct gc_dispatch gc_dispatch;
typedef struct gc_intensities gc_intensities;

/* ---- network ---- */
GC_API gc_status gc_network_load(const char* path, gc_network** out);
GC_API gc_status gc_network_parse(const char* text, gc_network** out);
GC_API void gc_network_free(gc_network* network);
GC_API int gc_network_num_buses(const gc_network* network);
GC_API int gc_network_num_lines(const gc_network* network);
GC_API int gc_network_num_generators(const gc_network* network);
GC_API int gc_network_num_loads(const gc_network* network);
/* Append one datacenter load of nominal_mw at each listed bus. */
GC_API gc_status gc_network_add_datacenters(gc_network* network, const int* bus_ids,
                                            int count, double nominal_mw);

/* ---- time series ----
 * Column ids are checked against the network the series will drive. */
GC_API gc_status gc_series_load(const gc_network* network, const char* path, gc_series** out);
GC_API gc_status gc_series_parse(const gc_network* network, const char* text, gc_series** out);
GC_API void gc_series_free(gc_series* series);
GC_API int gc_series_num_steps(const gc_series* series);

/* ---- dispatch ---- */
/* step is 1-based into the series; pass series = NULL and step = 0 to
 * dispatch the base case. */
GC_API gc_status gc_solve_dispatch(const gc_network* network, const gc_series* series,
                                   int step, gc_dispatch** out);
GC_API void gc_dispatch_free(gc_dispatch* dispatch);
GC_API double gc_dispatch_objective(const gc_dispatch* dispatch);
GC_API double gc_dispatch_total_emissions(const gc_dispatch* dispatch);
GC_API gc_status gc_dispatch_generation(const gc_dispatch* dispatch, int gen_id,
                                        double* out_mw);

/* ---- nodal intensities ---- */
GC_API gc_status gc_compute_intensities(const gc_network* network, const gc_series* series,
                                        int step, gc_intensities** out);
GC_API void gc_intensities_free(gc_intensities* intensities);
/* Undefined entries (failed finite differences, zero-inflow buses) come back
 * as a quiet NaN with GC_OK. */
GC_API gc_status gc_intensity_value(const gc_intensities* intensities, gc_metric metric,
                                    int bus_id, double* out);
GC_API double gc_intensities_true_emissions(const gc_intensities* intensities);
GC_API gc_status gc_accounted_total(const gc_intensities* intensities, gc_metric metric,
                                    double* out);

/* ---- batch jobs (what the CLI drives) ---- */
typedef struct gc_metrics_job {
    const char* case_path;
    const char* series_path; /* NULL: evaluate the base case as one step */
    const char* out_dir;
    const char* formats;     /* comma list from {json,csv}; NULL = "json,csv" */
    const char* metrics;     /* comma list from {ace,lmce,almce,lace} or "all" */
    int jobs;                /* parallel workers; <= 0 means 1 */
} gc_metrics_job;

GC_API gc_status gc_run_metrics(const gc_metrics_job* job);

typedef struct gc_study_job {
    const char* case_path;
    const char* series_path;
    const char* out_dir;
    const char* formats;         /* comma list from {json,csv,svg} */
    const char* shift_metrics;   /* comma list or "all" */
    const char* account_metrics; /* comma list or "all" */
    const int* dc_buses;
    int dc_bus_count;
    double dnom;    /* nominal datacenter demand per bus per step, MW */
    double eps;     /* shifting flexibility, in [0, 1) */
    int horizon;    /* steps per shifting window; <= 0 means 24 */
    int jobs;
} gc_study_job;

GC_API gc_status gc_run_study(const gc_study_job* job);

/* Re-render SVG plots from <study_dir>/study.json. */
GC_API gc_status gc_run_export_plot(const char* study_dir);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* GRIDCARBON_H */

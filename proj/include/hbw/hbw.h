#ifndef HBW_HBW_H
#define HBW_HBW_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define HBW_API __attribute__((visibility("default")))
#else
#define HBW_API
#endif

typedef enum hbw_status {
  HBW_OK = 0,
  HBW_INVALID_ARGUMENT = 1,
  HBW_INDEX_OUT_OF_RANGE = 2,
  HBW_LENGTH_MISMATCH = 3,
  HBW_DEGENERATE_ATOM = 4,
  HBW_BLOCK_EXHAUSTED = 5,
  HBW_BUDGET_INFEASIBLE = 6,
  HBW_EMPTY_BLOCK = 7,
  HBW_IO_ERROR = 8,
  HBW_FORMAT_ERROR = 9,
  HBW_OUT_OF_MEMORY = 10,
  HBW_INTERNAL_ERROR = 11
} hbw_status;

typedef enum hbw_dictionary_kind { HBW_DICT_COS = 0, HBW_DICT_SIN = 1, HBW_DICT_COSSIN = 2 } hbw_dictionary_kind;
typedef enum hbw_strategy {
  HBW_STRATEGY_INDEPENDENT = 0,
  HBW_STRATEGY_HBW = 1,
  HBW_STRATEGY_HBW_BOOMP = 2,
  HBW_STRATEGY_HBW_SBR = 3
} hbw_strategy;
typedef enum hbw_criterion { HBW_CRITERION_OMP = 0, HBW_CRITERION_OOMP = 1 } hbw_criterion;
typedef enum hbw_ranking { HBW_RANKING_OPTIMIZED = 0, HBW_RANKING_LEGACY = 1 } hbw_ranking;
typedef enum hbw_encoding { HBW_PCM16 = 0, HBW_FLOAT32 = 1 } hbw_encoding;

/* Opaque handles. */
typedef struct hbw_signal hbw_signal;
typedef struct hbw_decomposition hbw_decomposition;

/* Message for the most recent failure on the calling thread ("" if none). */
HBW_API const char* hbw_last_error(void);
HBW_API const char* hbw_status_string(hbw_status status);

/* ---- signals */

HBW_API hbw_status hbw_signal_create(const double* samples, size_t count, uint32_t sample_rate,
                                     hbw_signal** out);
HBW_API hbw_status hbw_signal_read_wav(const char* path, hbw_signal** out);
HBW_API hbw_status hbw_signal_write_wav(const hbw_signal* signal, const char* path, hbw_encoding encoding);
HBW_API size_t hbw_signal_length(const hbw_signal* signal);
HBW_API uint32_t hbw_signal_sample_rate(const hbw_signal* signal);
HBW_API const double* hbw_signal_data(const hbw_signal* signal);
/* Channel count of the source file; > 1 means the samples were averaged. */
HBW_API uint16_t hbw_signal_source_channels(const hbw_signal* signal);
HBW_API void hbw_signal_free(hbw_signal* signal);

/* ---- approximation */

typedef struct hbw_approx_config {
  hbw_dictionary_kind dictionary;
  uint32_t redundancy;
  uint32_t block_size;
  hbw_strategy strategy; /* independent or hbw */
  hbw_criterion criterion;
  hbw_ranking ranking;
  int use_budget; /* nonzero: stop at budget; zero: stop at target_snr */
  uint64_t budget;
  double target_snr;
  uint32_t segment_blocks; /* 0: one segment */
  uint64_t seed;
  int randomize;
  uint32_t jobs;
} hbw_approx_config;

/* Defaults: cosine-sine dictionary, redundancy 4, blocks of 1024, hbw, oomp. */
HBW_API void hbw_approx_config_init(hbw_approx_config* config);

HBW_API hbw_status hbw_approximate(const hbw_signal* signal, const hbw_approx_config* config,
                                   hbw_decomposition** out);
HBW_API hbw_status hbw_downgrade(const hbw_decomposition* in, uint64_t budget, hbw_decomposition** out);
HBW_API hbw_status hbw_downgrade_to_snr(const hbw_decomposition* in, const hbw_signal* signal,
                                        double target_snr, hbw_decomposition** out);
/* max_swaps 0 selects the default guard. swaps and guard_hit may be NULL. */
HBW_API hbw_status hbw_refine(const hbw_decomposition* in, const hbw_signal* signal,
                              hbw_criterion criterion, uint64_t max_swaps, uint32_t jobs,
                              hbw_decomposition** out, uint64_t* swaps, int* guard_hit);
HBW_API hbw_status hbw_reconstruct(const hbw_decomposition* decomposition, hbw_signal** out);

typedef struct hbw_report_row {
  uint64_t samples;
  uint64_t coefficients;
  double sr;  /* 0 when there are no coefficients */
  double snr; /* +inf for an exact reconstruction */
} hbw_report_row;

HBW_API hbw_status hbw_report(const hbw_decomposition* decomposition, const hbw_signal* signal,
                              hbw_report_row* out);

/* ---- decomposition files */

HBW_API hbw_status hbw_decomposition_save(const hbw_decomposition* decomposition, const char* path);
HBW_API hbw_status hbw_decomposition_load(const char* path, hbw_decomposition** out);
/* Serialized bytes; call with buffer NULL to query the size. */
HBW_API hbw_status hbw_decomposition_serialize(const hbw_decomposition* decomposition, uint8_t* buffer,
                                               size_t capacity, size_t* size);
HBW_API hbw_status hbw_decomposition_deserialize(const uint8_t* bytes, size_t size, hbw_decomposition** out);

HBW_API uint64_t hbw_decomposition_sample_count(const hbw_decomposition* decomposition);
HBW_API size_t hbw_decomposition_block_count(const hbw_decomposition* decomposition);
HBW_API uint64_t hbw_decomposition_total_atoms(const hbw_decomposition* decomposition);
HBW_API hbw_strategy hbw_decomposition_strategy(const hbw_decomposition* decomposition);
/* Short dictionary name such as "Bc" or "Dcs4". */
HBW_API const char* hbw_decomposition_dictionary_label(const hbw_decomposition* decomposition);
/* Atom indices are 1-based. Any output pointer may be NULL. */
HBW_API hbw_status hbw_decomposition_block(const hbw_decomposition* decomposition, size_t block,
                                           size_t* count, const uint32_t** atoms,
                                           const double** coefficients);
HBW_API void hbw_decomposition_free(hbw_decomposition* decomposition);

#ifdef __cplusplus
}
#endif

#endif

#ifndef PDCLASS_H
#define PDCLASS_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/*
 * C surface of the PRPD classification library. All functions returning
 * pd_status leave a diagnostic for the calling thread in pd_last_error()
 * on failure. Handles are opaque; every pd_*_free accepts NULL.
 */

typedef enum pd_status {
  PD_OK = 0,
  PD_ERROR_INVALID_ARGUMENT = 1,
  PD_ERROR_IO = 2,
  PD_ERROR_VALIDATION = 3,
  PD_ERROR_NUMERIC = 4,
  PD_ERROR_INTERNAL = 5
} pd_status;

typedef enum pd_feature_kind {
  PD_FEATURES_PHASE = 0,
  PD_FEATURES_ALIGNED = 1,
  PD_FEATURES_META = 2
} pd_feature_kind;

#define PD_NUM_CLASSES 4

typedef struct pd_dataset pd_dataset;
typedef struct pd_features pd_features;
typedef struct pd_model pd_model;
typedef struct pd_report pd_report;

const char* pd_version(void);

/* Message for the most recent failure on this thread; never NULL. */
const char* pd_last_error(void);

/* Frees strings returned through char** out parameters. */
void pd_string_free(char* text);

/* Class code (0..3) to its lowercase name; NULL for other codes. */
const char* pd_label_name(int label);

/* ------------------------------------------------------------------ */
/* datasets                                                           */

/*
 * Synthesizes a labeled corpus with counts[k] samples of class k.
 * profile_json optionally overrides generator profiles (strict JSON,
 * unknown keys rejected). phases/cycles of 0 select the 64x60 default.
 */
pd_status pd_dataset_generate(const size_t counts[PD_NUM_CLASSES],
                              uint64_t seed, const char* profile_json,
                              size_t phases, size_t cycles, pd_dataset** out);

/* expect_labels nonzero requires a known label on every row. */
pd_status pd_dataset_load_csv(const char* path, int expect_labels,
                              size_t phases, size_t cycles, pd_dataset** out);

pd_status pd_dataset_save_csv(const pd_dataset* dataset, const char* path);

size_t pd_dataset_size(const pd_dataset* dataset);

/* Writes the sample with the given id as a binary PGM heatmap. */
pd_status pd_dataset_render_pgm(const pd_dataset* dataset, const char* id,
                                const char* path);

void pd_dataset_free(pd_dataset* dataset);

/* ------------------------------------------------------------------ */
/* features                                                           */

/* threshold is the significance ratio for the empty-band feature. */
pd_status pd_features_extract(const pd_dataset* dataset, pd_feature_kind kind,
                              double threshold, pd_features** out);

pd_status pd_features_load_csv(const char* path, pd_features** out);

pd_status pd_features_save_csv(const pd_features* features, const char* path);

size_t pd_features_rows(const pd_features* features);
size_t pd_features_cols(const pd_features* features);

void pd_features_free(pd_features* features);

/* ------------------------------------------------------------------ */
/* models                                                             */

/*
 * Trains a classifier on labeled features. kind is one of
 * lr | rf | svm | fsvm | gb | stack. config_json optionally supplies a
 * strict hyperparameter document whose kind must match.
 */
pd_status pd_model_train(const pd_features* features, const char* kind,
                         const char* config_json, uint64_t seed,
                         pd_model** out);

pd_status pd_model_save(const pd_model* model, const char* path);

pd_status pd_model_load(const char* path, pd_model** out);

const char* pd_model_kind(const pd_model* model);
size_t pd_model_input_width(const pd_model* model);

/*
 * Predicts features row by row. labels (length rows) and probabilities
 * (length rows * PD_NUM_CLASSES, row-major) may each be NULL.
 */
pd_status pd_model_predict(const pd_model* model, const pd_features* features,
                           int* labels, double* probabilities);

/* CSV text `id,label,p_corona,p_floating,p_particle,p_void`. */
pd_status pd_model_classify_csv(const pd_model* model,
                                const pd_features* features, char** out_csv);

void pd_model_free(pd_model* model);

/* ------------------------------------------------------------------ */
/* evaluation                                                         */

/*
 * Repeated stratified-split protocol: extracts the requested features from
 * a labeled dataset, then trials times (split, fit, score) with seeds
 * derived from seed. stratified 0 switches to unstratified splits.
 */
pd_status pd_evaluate(const pd_dataset* dataset, pd_feature_kind kind,
                      double threshold, const char* model_kind,
                      const char* config_json, int trials,
                      double train_fraction, int stratified, uint64_t seed,
                      pd_report** out);

pd_status pd_report_json(const pd_report* report, char** out_text);
pd_status pd_report_table(const pd_report* report, char** out_text);
pd_status pd_report_accuracy(const pd_report* report, double* mean,
                             double* std_dev);

void pd_report_free(pd_report* report);

#ifdef __cplusplus
}
#endif

#endif /* PDCLASS_H */

#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ethde/evolve.hpp"
#include "ethde/models.hpp"
#include "ethde/pulses.hpp"
#include "ethde/response.hpp"
#include "ethde/series.hpp"
#include "ethde/spectra.hpp"

namespace ethde {

/// How initial states are chosen for a study.
struct StateSelector {
  enum class Mode { beta_window, thermal, index };
  Mode mode = Mode::beta_window;
  double beta = 0.5;                     // thermal
  double beta_lo = 0.2, beta_hi = 1.0;   // beta_window (negative = upper half)
  int count = 20;
  Eigen::Index index = 0;

  static StateSelector from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct ExperimentSpec {
  ModelSpec model;
  StateSelector state;
  Pulse pulse = Pulse::delta_kick(0.5);
  std::vector<double> lambdas = {0.1, 0.2, 0.5, 1.0};  // kick strengths
  int max_order = 8;
  EvolutionConfig evolution;
  uint64_t seed = 0;
  std::string cache_dir;  // empty disables the eigensystem cache

  static ExperimentSpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  std::string content_hash() const;  // FNV-1a of the canonical JSON
};

/// Model built and diagonalized once, cache-aware.
struct PreparedModel {
  ModelSpec spec;
  HermitianMatrix H;
  HermitianMatrix O;
  Eigensystem eig;
  double kernel_width;

  double max_abs_energy() const;
};

PreparedModel prepare_model(const ModelSpec& spec, const std::string& cache_dir);

struct KickRow {
  Eigen::Index state;  // -1 for a thermal mixture row
  double energy, beta_eff, lambda;
  double de_exact;
  double de_operator;         // commutator-form response, normalized weights
  double de_operator_unnorm;  // same with raw e^{-beta E} weights
  double de_series;           // partial sum to max_order (NaN for mixtures)
  double max_route_gap;       // worst even-order route disagreement
  double r4;                  // |4 S_1| / |3 D_4|
};

struct KickStudy {
  std::vector<KickRow> rows;
  double positive_fraction;  // of exact dE over eigenstate rows
  double mean, standard_error;
  nlohmann::json summary;
};

KickStudy run_kick_study(const ExperimentSpec& spec);

struct ResponseRung {
  double amplitude;
  double de_exact, de_lr_lehmann, de_lr_broadened;
  double rel_error_lehmann, rel_error_broadened;
};

struct ResponseStudy {
  std::vector<ResponseRung> rungs;  // amplitudes lam0, lam0/2, lam0/4
  SpectralFunction spectral;
  nlohmann::json summary;
};

/// Thermal state required; lam0 picked so the linear-response dE is about
/// 1e-3 of the spectral scale (the amplitude of the configured pulse is
/// treated as a shape template).
ResponseStudy run_response_study(const ExperimentSpec& spec);

struct ScalingPoint {
  int L;
  Eigen::Index dim;
  double median_r4;
  double median_abs_odd3;  // |Im <K_3>|, exactly 0 for real bases
};

struct ScalingStudy {
  std::vector<ScalingPoint> chaotic, integrable;
  double chaotic_slope, integrable_slope;  // d ln(median r4) / d ln(dim)
  bool integrable_outside_window;          // slope outside or non-monotone
  nlohmann::json summary;
};

/// Suppression-scaling contrast across chain sizes; needs >= 3 sizes.
ScalingStudy run_scaling_study(const std::vector<int>& sizes,
                               const std::string& cache_dir,
                               int states_per_size = 20);

// --- report output -------------------------------------------------------

/// Shortest decimal that round-trips the float64 exactly.
std::string format_double(double x);

void write_text_atomic(const std::string& path, const std::string& content);

std::string kick_csv(const KickStudy& study, const std::string& model_tag);
std::string response_csv(const ResponseStudy& study);
std::string spectral_csv(const SpectralFunction& spec,
                         const std::vector<Complex>& green);
std::string scaling_csv(const ScalingStudy& study);
std::string eth_diag_csv(const EthStatistics& stats);
std::string eth_entropy_csv(const EthStatistics& stats);
std::string eth_bins_csv(const EthStatistics& stats);

}  // namespace ethde

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dsmooth/noise_moments.hpp"
#include "dsmooth/rng.hpp"
#include "dsmooth/smooth_test.hpp"

namespace dsmooth {

enum class ModelId { MOD1, MOD2, MOD3, MOD4, A11, A12, A13, A21, A22, A23, A24 };

std::string_view to_string(ModelId id) noexcept;
/// Case-insensitive; throws std::invalid_argument for unknown ids.
ModelId parse_model_id(std::string_view text);

inline constexpr std::array<ModelId, 4> kNullModels{ModelId::MOD1, ModelId::MOD2, ModelId::MOD3, ModelId::MOD4};
inline constexpr std::array<ModelId, 7> kAlternatives{ModelId::A11, ModelId::A12, ModelId::A13, ModelId::A21,
                                                      ModelId::A22, ModelId::A23, ModelId::A24};
inline constexpr std::array<int, 4> kStudySizes{30, 50, 100, 200};

/// X = Y + Z, U = V + W with the noise laws of Z and W known to the test.
struct ModelSpec {
  ModelId id = ModelId::MOD1;
  Distribution y, z, v, w;
  NoiseMomentSpec noise_z, noise_w;
  bool null_hypothesis = true;
};

ModelSpec model_registry(ModelId id);

enum class MethodKind { data_driven, fixed_k, mann_whitney };

struct Method {
  MethodKind kind = MethodKind::data_driven;
  int k = 1;  // fixed_k only
};

std::string to_string(const Method& method);

struct SimulationConfig {
  ModelId model = ModelId::MOD1;
  int n = 30;
  std::int64_t replications = 10000;
  std::uint64_t master_seed = 42;
  int max_order = kDefaultMaxOrder;
  double alpha = 0.05;
  Method method;
  /// Probability that an observation pair shares the randomness of Y and V.
  /// 0 reproduces independent samples; any other value is an extension.
  double paired_rho = 0.0;
  /// OpenMP workers; 0 keeps the runtime default. Never affects results.
  int threads = 0;
};

/// Throws std::invalid_argument on invalid settings.
void validate(const SimulationConfig& config);

struct PairedDraw {
  std::vector<double> x;
  std::vector<double> u;
};

PairedDraw generate_sample(const ModelSpec& model, int n, double paired_rho, RandomStream& rng);

struct ReplicateOutcome {
  bool singular = false;
  bool reject = false;
  int selected_order = 0;
  double statistic = 0.0;
  double p_value = 1.0;
  double lambda_min = 0.0;
};

/// Parallel over replications; outcome r depends only on (master_seed, r).
std::vector<ReplicateOutcome> run_replicates(const SimulationConfig& config);

/// One-thread reference for run_replicates.
std::vector<ReplicateOutcome> run_replicates_serial(const SimulationConfig& config);

struct SimulationReport {
  std::int64_t replications = 0;
  /// Replications whose covariance was singular already at order 1; they are
  /// left out of the rejection-rate denominator.
  std::int64_t singular = 0;
  std::int64_t rejections = 0;
  double rejection_rate = 0.0;
  /// sqrt(rate (1 - rate) / valid replications)
  double monte_carlo_se = 0.0;
  /// Selected order -> count for the smooth methods; singular replications
  /// are filed under 0 so the counts add up to `replications`.
  std::map<int, std::int64_t> selected_order_histogram;
  double mean_lambda_min_at_selected = 0.0;
};

SimulationReport summarize(const SimulationConfig& config, std::span<const ReplicateOutcome> outcomes);

SimulationReport run_simulation(const SimulationConfig& config);
SimulationReport run_simulation_serial(const SimulationConfig& config);

/// Seed for one (model, n) cell of a suite, derived from the suite seed.
std::uint64_t derive_seed(std::uint64_t master_seed, ModelId model, int n, std::uint64_t salt = 0);

struct SuiteCell {
  ModelId model;
  int n;
  Method method;
  SimulationReport report;
};

struct SuiteOptions {
  std::int64_t replications = 10000;
  std::uint64_t master_seed = 42;
  int max_order = kDefaultMaxOrder;
  double alpha = 0.05;
  int threads = 0;
};

/// Empirical levels for every null model at every study size.
std::vector<SuiteCell> run_level_table(const SuiteOptions& options);

/// Power of the data-driven test for every alternative and study size, plus
/// Mann-Whitney under A13.
std::vector<SuiteCell> run_power_curves(const SuiteOptions& options);

}  // namespace dsmooth

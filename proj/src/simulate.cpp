#include "dsmooth/simulate.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

#include <omp.h>

#include "dsmooth/mann_whitney.hpp"

namespace dsmooth {
namespace {

constexpr std::array<std::string_view, 11> kModelNames{"MOD1", "MOD2", "MOD3", "MOD4", "A11", "A12",
                                                       "A13",  "A21",  "A22",  "A23",  "A24"};

NoiseMomentSpec noise_of(const Distribution& d) {
  if (const auto* n = std::get_if<NormalDist>(&d)) return NoiseMomentSpec::normal(n->mean, n->sd);
  if (const auto* p = std::get_if<PoissonDist>(&d)) return NoiseMomentSpec::poisson(p->lambda);
  throw std::logic_error("no moment provider for noise " + describe(d));
}

ModelSpec make(ModelId id, Distribution y, Distribution z, Distribution v, Distribution w, bool null_hyp) {
  ModelSpec m;
  m.id = id;
  m.y = y;
  m.z = z;
  m.v = v;
  m.w = w;
  m.noise_z = noise_of(z);
  m.noise_w = noise_of(w);
  m.null_hypothesis = null_hyp;
  return m;
}

struct Bases {
  PolynomialBasis x, u;
};

ReplicateOutcome run_one(const SimulationConfig& config, const ModelSpec& model, const Bases* bases,
                         std::int64_t r) {
  RandomStream rng = RandomStream::for_replication(config.master_seed, static_cast<std::uint64_t>(r));
  const PairedDraw draw = generate_sample(model, config.n, config.paired_rho, rng);

  ReplicateOutcome out;
  if (config.method.kind == MethodKind::mann_whitney) {
    const MWResult mw = mann_whitney(draw.x, draw.u);
    out.statistic = mw.z_score;
    out.p_value = mw.p_value;
    out.reject = mw.p_value <= config.alpha;
    return out;
  }
  try {
    const TestResult res = config.method.kind == MethodKind::fixed_k
                               ? fixed_k_test(draw.x, draw.u, bases->x, bases->u, config.method.k)
                               : select_order(draw.x, draw.u, bases->x, bases->u, config.max_order);
    out.selected_order = res.selected_order;
    out.statistic = res.statistic;
    out.p_value = res.p_value;
    out.lambda_min = res.lambda_min_at_selected();
    out.reject = res.p_value <= config.alpha;
  } catch (const SingularCovariance&) {
    out.singular = true;
  }
  return out;
}

Bases make_bases(const SimulationConfig& config, const ModelSpec& model) {
  const int order = config.method.kind == MethodKind::fixed_k ? config.method.k : config.max_order;
  return {build_basis(model.noise_z, order), build_basis(model.noise_w, order)};
}

}  // namespace

std::string_view to_string(ModelId id) noexcept { return kModelNames[static_cast<std::size_t>(id)]; }

ModelId parse_model_id(std::string_view text) {
  std::string upper(text);
  for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (std::size_t i = 0; i < kModelNames.size(); ++i)
    if (kModelNames[i] == upper) return static_cast<ModelId>(i);
  throw std::invalid_argument("unknown model id '" + std::string(text) + "'");
}

ModelSpec model_registry(ModelId id) {
  const Distribution chi2_2 = ChiSquareDist{2};
  const Distribution chi2_3 = ChiSquareDist{3};
  const Distribution n02 = NormalDist{0.0, 2.0};
  const Distribution b10 = BinomialDist{10, 0.5};
  const Distribution p2 = PoissonDist{2.0};
  const Distribution p1 = PoissonDist{1.0};
  switch (id) {
    case ModelId::MOD1: return make(id, chi2_2, n02, chi2_2, NormalDist{0.0, 0.1}, true);
    case ModelId::MOD2: return make(id, chi2_2, n02, chi2_2, NormalDist{0.0, 1.0}, true);
    case ModelId::MOD3: return make(id, chi2_2, n02, chi2_2, n02, true);
    case ModelId::MOD4: return make(id, b10, p2, b10, p1, true);
    case ModelId::A11: return make(id, chi2_2, n02, chi2_3, NormalDist{0.0, 0.1}, false);
    case ModelId::A12: return make(id, chi2_2, n02, chi2_3, NormalDist{0.0, 1.0}, false);
    case ModelId::A13: return make(id, chi2_2, n02, chi2_3, n02, false);
    case ModelId::A21: return make(id, b10, p2, BinomialDist{10, 0.4}, p1, false);
    case ModelId::A22: return make(id, b10, p2, BinomialDist{10, 0.6}, p1, false);
    case ModelId::A23: return make(id, b10, p2, BinomialDist{9, 0.5}, p1, false);
    case ModelId::A24: return make(id, b10, p2, BinomialDist{11, 0.5}, p1, false);
  }
  throw std::invalid_argument("unknown model id");
}

std::string to_string(const Method& method) {
  switch (method.kind) {
    case MethodKind::data_driven: return "data_driven";
    case MethodKind::fixed_k: return "fixed_k(" + std::to_string(method.k) + ")";
    case MethodKind::mann_whitney: return "mann_whitney";
  }
  return "unknown";
}

void validate(const SimulationConfig& config) {
  if (config.n < 2) throw std::invalid_argument("sample size must be >= 2");
  if (config.replications < 1) throw std::invalid_argument("replications must be >= 1");
  if (!(config.alpha > 0.0 && config.alpha <= 1.0)) throw std::invalid_argument("alpha must be in (0, 1]");
  if (config.max_order < 1 || config.max_order > kMaxMomentOrder)
    throw std::invalid_argument("maximum order must be in [1, 20]");
  if (config.method.kind == MethodKind::fixed_k && (config.method.k < 1 || config.method.k > kMaxMomentOrder))
    throw std::invalid_argument("fixed order must be in [1, 20]");
  if (!(config.paired_rho >= 0.0 && config.paired_rho <= 1.0))
    throw std::invalid_argument("paired rho must be in [0, 1]");
  if (config.threads < 0) throw std::invalid_argument("threads must be >= 0");
}

PairedDraw generate_sample(const ModelSpec& model, int n, double paired_rho, RandomStream& rng) {
  PairedDraw d;
  d.x.resize(n);
  d.u.resize(n);
  for (int s = 0; s < n; ++s) {
    double y, v;
    if (paired_rho > 0.0) {
      // Coupled pairs draw V from a replay of the stream that produced Y.
      const bool coupled = rng.uniform() < paired_rho;
      const RandomStream shared(rng.next_u64());
      RandomStream fresh(rng.next_u64());
      RandomStream ys = shared;
      RandomStream vs = coupled ? shared : fresh;
      y = sample_draw(ys, model.y);
      v = sample_draw(vs, model.v);
    } else {
      y = sample_draw(rng, model.y);
      v = sample_draw(rng, model.v);
    }
    d.x[s] = y + sample_draw(rng, model.z);
    d.u[s] = v + sample_draw(rng, model.w);
  }
  return d;
}

std::vector<ReplicateOutcome> run_replicates(const SimulationConfig& config) {
  validate(config);
  const ModelSpec model = model_registry(config.model);
  const Bases bases = make_bases(config, model);
  std::vector<ReplicateOutcome> out(static_cast<std::size_t>(config.replications));
  const int threads = config.threads > 0 ? config.threads : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
  for (std::int64_t r = 0; r < config.replications; ++r) out[r] = run_one(config, model, &bases, r);
  return out;
}

std::vector<ReplicateOutcome> run_replicates_serial(const SimulationConfig& config) {
  validate(config);
  const ModelSpec model = model_registry(config.model);
  const Bases bases = make_bases(config, model);
  std::vector<ReplicateOutcome> out;
  out.reserve(static_cast<std::size_t>(config.replications));
  for (std::int64_t r = 0; r < config.replications; ++r) out.push_back(run_one(config, model, &bases, r));
  return out;
}

SimulationReport summarize(const SimulationConfig& config, std::span<const ReplicateOutcome> outcomes) {
  SimulationReport rep;
  rep.replications = static_cast<std::int64_t>(outcomes.size());
  const bool smooth = config.method.kind != MethodKind::mann_whitney;
  double lambda_sum = 0.0;
  for (const auto& o : outcomes) {
    if (o.singular) {
      ++rep.singular;
      if (smooth) ++rep.selected_order_histogram[0];
      continue;
    }
    if (o.reject) ++rep.rejections;
    if (smooth) {
      ++rep.selected_order_histogram[o.selected_order];
      lambda_sum += o.lambda_min;
    }
  }
  const std::int64_t valid = rep.replications - rep.singular;
  if (valid > 0) {
    rep.rejection_rate = static_cast<double>(rep.rejections) / static_cast<double>(valid);
    rep.monte_carlo_se = std::sqrt(rep.rejection_rate * (1.0 - rep.rejection_rate) / static_cast<double>(valid));
    if (smooth) rep.mean_lambda_min_at_selected = lambda_sum / static_cast<double>(valid);
  }
  return rep;
}

SimulationReport run_simulation(const SimulationConfig& config) { return summarize(config, run_replicates(config)); }

SimulationReport run_simulation_serial(const SimulationConfig& config) {
  return summarize(config, run_replicates_serial(config));
}

std::uint64_t derive_seed(std::uint64_t master_seed, ModelId model, int n, std::uint64_t salt) {
  std::uint64_t z = master_seed ^ (0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(model) + 1)) ^
                    (0xC2B2AE3D27D4EB4FULL * static_cast<std::uint64_t>(n)) ^ (0x165667B19E3779F9ULL * salt);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

SuiteCell run_cell(const SuiteOptions& options, ModelId model, int n, Method method, std::uint64_t salt) {
  SimulationConfig config;
  config.model = model;
  config.n = n;
  config.replications = options.replications;
  config.master_seed = derive_seed(options.master_seed, model, n, salt);
  config.max_order = options.max_order;
  config.alpha = options.alpha;
  config.method = method;
  config.threads = options.threads;
  return {model, n, method, run_simulation(config)};
}

}  // namespace

std::vector<SuiteCell> run_level_table(const SuiteOptions& options) {
  std::vector<SuiteCell> cells;
  for (ModelId m : kNullModels)
    for (int n : kStudySizes) cells.push_back(run_cell(options, m, n, Method{}, 0));
  return cells;
}

std::vector<SuiteCell> run_power_curves(const SuiteOptions& options) {
  std::vector<SuiteCell> cells;
  for (ModelId m : kAlternatives)
    for (int n : kStudySizes) cells.push_back(run_cell(options, m, n, Method{}, 0));
  // Same seeds as the smooth A13 cells: both tests see identical samples.
  for (int n : kStudySizes)
    cells.push_back(run_cell(options, ModelId::A13, n, Method{MethodKind::mann_whitney, 1}, 0));
  return cells;
}

}  // namespace dsmooth

#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dsmooth/deconv_poly.hpp"
#include "dsmooth/errors.hpp"
#include "dsmooth/ingest.hpp"
#include "dsmooth/mann_whitney.hpp"
#include "dsmooth/simulate.hpp"
#include "dsmooth/smooth_test.hpp"

namespace dsmooth::cli {
namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

constexpr int kExitInput = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Format { table, json, csv };

Format pick_format(bool as_json, bool as_csv) {
  if (as_json && as_csv) throw UsageError("--json and --csv are mutually exclusive");
  return as_json ? Format::json : as_csv ? Format::csv : Format::table;
}

NoiseMomentSpec parse_noise(const std::string& text) {
  try {
    return NoiseMomentSpec::parse(text);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

int default_threads() {
  if (const char* env = std::getenv("DSMOOTH_THREADS")) {
    try {
      const int t = std::stoi(env);
      if (t > 0) return t;
    } catch (const std::exception&) {
    }
  }
  return 0;
}

json to_json(const TestResult& r) {
  json per_k = json::array();
  for (const auto& s : r.per_k)
    per_k.push_back({{"k", s.k}, {"statistic", s.statistic}, {"penalized_score", s.penalized}, {"lambda_min", s.lambda_min}});
  return {{"mode", std::string(to_string(r.mode))},
          {"n", r.n},
          {"selected_order", r.selected_order},
          {"statistic", r.statistic},
          {"p_value", r.p_value},
          {"requested_max_order", r.requested_max_order},
          {"effective_max_order", r.effective_max_order},
          {"capped", r.capped()},
          {"per_k", per_k}};
}

json to_json(const MWResult& r) {
  return {{"u_statistic", r.u_statistic}, {"z_score", r.z_score}, {"p_value", r.p_value}};
}

json to_json(const SimulationReport& r) {
  json hist = json::object();
  for (const auto& [k, c] : r.selected_order_histogram) hist[std::to_string(k)] = c;
  return {{"replications", r.replications},
          {"singular", r.singular},
          {"rejections", r.rejections},
          {"rejection_rate", r.rejection_rate},
          {"monte_carlo_se", r.monte_carlo_se},
          {"selected_order_histogram", hist},
          {"mean_lambda_min_at_selected", r.mean_lambda_min_at_selected}};
}

json to_json(const UefaAnalysis& a) {
  return {{"model", std::string(to_string(a.model))},
          {"lambda_x", a.lambda_x},
          {"lambda_u", a.lambda_u},
          {"result", to_json(a.result)}};
}

json envelope(const std::string& command, json config, json result, Clock::time_point start) {
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  return {{"schema_version", kSchemaVersion},
          {"command", command},
          {"config", std::move(config)},
          {"result", std::move(result)},
          {"timing", {{"wall_seconds", secs}}}};
}

void print_result_table(std::ostream& out, const TestResult& r) {
  out << "mode               " << to_string(r.mode) << "\n"
      << "n                  " << r.n << "\n"
      << "selected order     " << r.selected_order << "\n"
      << "statistic          " << r.statistic << "\n"
      << "p-value            " << r.p_value << "\n"
      << "orders scanned     " << r.effective_max_order << " of " << r.requested_max_order
      << (r.capped() ? " (capped: covariance singular beyond)" : "") << "\n\n"
      << std::setw(4) << "k" << std::setw(16) << "T_n(k)" << std::setw(16) << "T - k log n" << std::setw(16)
      << "lambda_min" << "\n";
  for (const auto& s : r.per_k)
    out << std::setw(4) << s.k << std::setw(16) << s.statistic << std::setw(16) << s.penalized << std::setw(16)
        << s.lambda_min << "\n";
}

void print_result_csv(std::ostream& out, const TestResult& r) {
  out << "k,statistic,penalized_score,lambda_min,selected\n";
  for (const auto& s : r.per_k)
    out << s.k << ',' << s.statistic << ',' << s.penalized << ',' << s.lambda_min << ','
        << (s.k == r.selected_order ? 1 : 0) << '\n';
}

void dump_polys(std::ostream& out, const NoiseMomentSpec& noise, int order, const std::string& side) {
  const PolynomialBasis basis = build_basis(noise, order);
  out << std::setprecision(17);
  for (int i = 1; i <= order; ++i) {
    if (!side.empty()) out << side << ',';
    out << i;
    for (double c : basis[i].coeffs()) out << ',' << c;
    out << '\n';
  }
}

Method parse_method(const std::string& name, int fixed_k) {
  if (name == "mw") return {MethodKind::mann_whitney, 1};
  if (fixed_k > 0) return {MethodKind::fixed_k, fixed_k};
  if (name == "smooth") return {};
  throw UsageError("unknown method '" + name + "' (expected smooth or mw)");
}

// ---------------------------------------------------------------- test

struct TestArgs {
  std::string x_path, u_path, data_path;
  std::string x_col = "1", u_col = "1";
  std::string noise_x = "point(0)", noise_u = "point(0)";
  int dmax = kDefaultMaxOrder;
  int fixed_k = 0;
  std::string method = "smooth";
  bool json = false, csv = false, dump = false;
};

int run_test(const TestArgs& a, std::ostream& out) {
  const auto start = Clock::now();
  const Format fmt = pick_format(a.json, a.csv);
  const NoiseMomentSpec nx = parse_noise(a.noise_x);
  const NoiseMomentSpec nu = parse_noise(a.noise_u);
  if (a.dmax < 1 || a.dmax > kMaxMomentOrder) throw UsageError("--dmax must be in [1, 20]");
  if (a.fixed_k < 0 || a.fixed_k > kMaxMomentOrder) throw UsageError("--fixed-k must be in [1, 20]");

  if (a.dump) {
    const int order = a.fixed_k > 0 ? a.fixed_k : a.dmax;
    out << "side,order,coefficients...\n";
    dump_polys(out, nx, order, "x");
    dump_polys(out, nu, order, "u");
    return 0;
  }

  std::vector<double> x, u;
  if (!a.data_path.empty()) {
    Dataset d = load_csv(a.data_path, a.x_col == "1" ? "X" : a.x_col, a.u_col == "1" ? "U" : a.u_col);
    x = std::move(d.x);
    u = std::move(d.u);
  } else {
    if (a.x_path.empty() || a.u_path.empty()) throw UsageError("test needs --x and --u, or --data");
    x = load_column(a.x_path, a.x_col);
    u = load_column(a.u_path, a.u_col);
    if (x.size() != u.size())
      throw ParseError("--x has " + std::to_string(x.size()) + " rows but --u has " + std::to_string(u.size()));
  }

  const Method method = parse_method(a.method, a.fixed_k);
  json config = {{"noise_x", nx.to_string()},
                 {"noise_u", nu.to_string()},
                 {"method", to_string(method)},
                 {"dmax", a.dmax},
                 {"n", x.size()}};

  if (method.kind == MethodKind::mann_whitney) {
    const MWResult r = mann_whitney(x, u);
    if (fmt == Format::json) {
      out << envelope("test", config, to_json(r), start).dump(2) << '\n';
    } else if (fmt == Format::csv) {
      out << "u_statistic,z_score,p_value\n" << r.u_statistic << ',' << r.z_score << ',' << r.p_value << '\n';
    } else {
      out << "Mann-Whitney U      " << r.u_statistic << "\nz                  " << r.z_score
          << "\np-value            " << r.p_value << '\n';
    }
    return 0;
  }

  const PairedSample sample(std::move(x), std::move(u), nx, nu);
  const TestResult r = method.kind == MethodKind::fixed_k ? fixed_k_test(sample, method.k) : select_order(sample, a.dmax);
  if (fmt == Format::json) out << envelope("test", config, to_json(r), start).dump(2) << '\n';
  else if (fmt == Format::csv) print_result_csv(out, r);
  else print_result_table(out, r);
  return 0;
}

// ---------------------------------------------------------------- simulate

struct SimArgs {
  std::string model = "MOD1";
  int n = 100;
  std::int64_t reps = 10000;
  std::uint64_t seed = 42;
  int dmax = kDefaultMaxOrder;
  double alpha = 0.05;
  std::string method = "smooth";
  int fixed_k = 0;
  double paired = 0.0;
  int threads = 0;
  std::string suite;
  bool json = false, csv = false;
};

json suite_config(const SuiteOptions& o, const std::string& suite) {
  return {{"suite", suite}, {"replications", o.replications}, {"seed", o.master_seed},
          {"dmax", o.max_order}, {"alpha", o.alpha}};
}

int run_suite(const SimArgs& a, Format fmt, std::ostream& out) {
  const auto start = Clock::now();
  SuiteOptions o;
  o.replications = a.reps;
  o.master_seed = a.seed;
  o.max_order = a.dmax;
  o.alpha = a.alpha;
  o.threads = a.threads > 0 ? a.threads : default_threads();
  if (a.reps < 1) throw UsageError("--reps must be >= 1");
  if (!(a.alpha > 0.0 && a.alpha <= 1.0)) throw UsageError("--alpha must be in (0, 1]");

  if (a.suite == "table1") {
    const auto cells = run_level_table(o);
    if (fmt == Format::json) {
      json rows = json::array();
      for (const auto& c : cells)
        rows.push_back({{"model", std::string(to_string(c.model))}, {"n", c.n}, {"report", to_json(c.report)}});
      out << envelope("simulate", suite_config(o, a.suite), rows, start).dump(2) << '\n';
      return 0;
    }
    // Percentages, one row per model.
    out << (fmt == Format::csv ? "model,n30,n50,n100,n200\n" : "model      n=30     n=50    n=100    n=200\n");
    out << std::fixed << std::setprecision(2);
    for (std::size_t m = 0; m < kNullModels.size(); ++m) {
      out << to_string(kNullModels[m]);
      for (std::size_t j = 0; j < kStudySizes.size(); ++j) {
        const double pct = 100.0 * cells[m * kStudySizes.size() + j].report.rejection_rate;
        if (fmt == Format::csv) out << ',' << pct;
        else out << std::setw(9) << pct;
      }
      out << '\n';
    }
    return 0;
  }
  if (a.suite == "figures") {
    const auto cells = run_power_curves(o);
    if (fmt == Format::json) {
      json rows = json::array();
      for (const auto& c : cells)
        rows.push_back({{"model", std::string(to_string(c.model))},
                        {"method", to_string(c.method)},
                        {"n", c.n},
                        {"report", to_json(c.report)}});
      out << envelope("simulate", suite_config(o, a.suite), rows, start).dump(2) << '\n';
      return 0;
    }
    out << "n,model,power,se\n" << std::setprecision(6);
    for (const auto& c : cells) {
      std::string label(to_string(c.model));
      if (c.method.kind == MethodKind::mann_whitney) label += "-MW";
      out << c.n << ',' << label << ',' << c.report.rejection_rate << ',' << c.report.monte_carlo_se << '\n';
    }
    return 0;
  }
  throw UsageError("unknown suite '" + a.suite + "' (expected table1 or figures)");
}

int run_simulate(const SimArgs& a, std::ostream& out) {
  const auto start = Clock::now();
  const Format fmt = pick_format(a.json, a.csv);
  if (!a.suite.empty()) return run_suite(a, fmt, out);

  SimulationConfig c;
  try {
    c.model = parse_model_id(a.model);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  c.n = a.n;
  c.replications = a.reps;
  c.master_seed = a.seed;
  c.max_order = a.dmax;
  c.alpha = a.alpha;
  c.method = parse_method(a.method, a.fixed_k);
  c.paired_rho = a.paired;
  c.threads = a.threads > 0 ? a.threads : default_threads();
  try {
    validate(c);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const SimulationReport r = run_simulation(c);

  json config = {{"model", std::string(to_string(c.model))},
                 {"n", c.n},
                 {"replications", c.replications},
                 {"seed", c.master_seed},
                 {"dmax", c.max_order},
                 {"alpha", c.alpha},
                 {"method", to_string(c.method)},
                 {"paired_rho", c.paired_rho}};
  if (fmt == Format::json) {
    out << envelope("simulate", config, to_json(r), start).dump(2) << '\n';
  } else if (fmt == Format::csv) {
    out << "model,n,method,replications,singular,rejection_rate,se\n"
        << to_string(c.model) << ',' << c.n << ',' << to_string(c.method) << ',' << r.replications << ','
        << r.singular << ',' << r.rejection_rate << ',' << r.monte_carlo_se << '\n';
  } else {
    out << "model " << to_string(c.model) << ", n = " << c.n << ", " << r.replications << " replications, seed "
        << c.master_seed << ", method " << to_string(c.method) << ", alpha " << c.alpha << ", dmax " << c.max_order
        << (c.paired_rho > 0 ? ", paired rho " + std::to_string(c.paired_rho) + " (extension)" : "") << "\n"
        << "rejection rate     " << r.rejection_rate << " (se " << r.monte_carlo_se << ")\n"
        << "singular           " << r.singular << "\n";
    if (!r.selected_order_histogram.empty()) {
      out << "selected orders   ";
      for (const auto& [k, cnt] : r.selected_order_histogram) out << ' ' << k << ':' << cnt;
      out << "\n";
    }
  }
  return 0;
}

// ---------------------------------------------------------------- uefa

struct UefaArgs {
  std::string model = "both";
  int dmax = kDefaultMaxOrder;
  std::string export_path;
  bool json = false, csv = false;
};

int run_uefa(const UefaArgs& a, std::ostream& out) {
  const auto start = Clock::now();
  const Format fmt = pick_format(a.json, a.csv);
  const Dataset& data = uefa_dataset();
  if (!a.export_path.empty()) {
    std::ofstream f(a.export_path);
    if (!f) throw InputError("cannot write '" + a.export_path + "'");
    write_csv(f, data);
    return 0;
  }
  if (a.model != "both" && a.model != "additive" && a.model != "multiplicative")
    throw UsageError("--model must be additive or multiplicative");
  if (a.dmax < 1 || a.dmax > kMaxMomentOrder) throw UsageError("--dmax must be in [1, 20]");

  std::vector<UefaAnalysis> analyses;
  if (a.model != "multiplicative") analyses.push_back(uefa_additive(data, a.dmax));
  if (a.model != "additive") analyses.push_back(uefa_multiplicative(data, a.dmax));

  const char* caveat = "Poisson means are plug-in estimates treated as known moments";
  if (fmt == Format::json) {
    json config = {{"model", a.model}, {"dmax", a.dmax}, {"n", data.size()}, {"caveat", caveat}};
    json result;
    if (analyses.size() == 1) {
      result = to_json(analyses.front());
    } else {
      result = json::array();
      for (const auto& an : analyses) result.push_back(to_json(an));
    }
    out << envelope("uefa", config, result, start).dump(2) << '\n';
    return 0;
  }
  if (fmt == Format::csv) {
    out << "model,lambda_x,lambda_u,selected_order,statistic,p_value\n";
    for (const auto& an : analyses)
      out << to_string(an.model) << ',' << an.lambda_x << ',' << an.lambda_u << ',' << an.result.selected_order
          << ',' << an.result.statistic << ',' << an.result.p_value << '\n';
    return 0;
  }
  for (const auto& an : analyses) {
    out << "== " << to_string(an.model) << " model (n = " << data.size() << ", lambda_x = " << an.lambda_x
        << ", lambda_u = " << an.lambda_u << ")\n";
    print_result_table(out, an.result);
    out << "\n";
  }
  out << "note: " << caveat << ".\n";
  return 0;
}

// ---------------------------------------------------------------- dump-polys

struct DumpArgs {
  std::string noise = "point(0)";
  int order = 4;
};

int run_dump(const DumpArgs& a, std::ostream& out) {
  if (a.order < 1 || a.order > kMaxMomentOrder) throw UsageError("--order must be in [1, 20]");
  const NoiseMomentSpec noise = parse_noise(a.noise);
  out << "order,coefficients...\n";
  dump_polys(out, noise, a.order, "");
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Data-driven smooth two-sample test for contaminated data"};
  app.require_subcommand(1);

  TestArgs test_args;
  auto* test = app.add_subcommand("test", "Test L(Y) = L(V) from X = Y + Z and U = V + W");
  test->add_option("--x", test_args.x_path, "CSV file holding the X sample");
  test->add_option("--u", test_args.u_path, "CSV file holding the U sample");
  test->add_option("--data", test_args.data_path, "CSV file holding both columns");
  test->add_option("--x-col", test_args.x_col, "X column: header name or 1-based index");
  test->add_option("--u-col", test_args.u_col, "U column: header name or 1-based index");
  test->add_option("--noise-x", test_args.noise_x, "Noise law of Z, e.g. normal(0,2)");
  test->add_option("--noise-u", test_args.noise_u, "Noise law of W, e.g. poisson(1)");
  auto* dmax = test->add_option("--dmax", test_args.dmax, "Largest candidate order d(n)");
  test->add_option("--fixed-k", test_args.fixed_k, "Use T_n(K) with a chi-square(K) p-value")->excludes(dmax);
  test->add_option("--method", test_args.method, "smooth or mw");
  test->add_flag("--json", test_args.json, "JSON output");
  test->add_flag("--csv", test_args.csv, "CSV output");
  test->add_flag("--dump-polys", test_args.dump, "Print both polynomial bases as CSV and exit");

  SimArgs sim_args;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo level / power study");
  sim->add_option("--model", sim_args.model, "MOD1..MOD4, A11..A13, A21..A24");
  sim->add_option("--n", sim_args.n, "Sample size");
  sim->add_option("--reps", sim_args.reps, "Replications");
  sim->add_option("--seed", sim_args.seed, "Master seed");
  sim->add_option("--dmax", sim_args.dmax, "Largest candidate order d(n)");
  sim->add_option("--alpha", sim_args.alpha, "Nominal level");
  sim->add_option("--method", sim_args.method, "smooth or mw");
  sim->add_option("--fixed-k", sim_args.fixed_k, "Fixed order instead of data-driven selection");
  sim->add_option("--paired", sim_args.paired, "Share Y/V randomness with this probability (extension)");
  sim->add_option("--threads", sim_args.threads, "Worker threads (default: DSMOOTH_THREADS or all cores)");
  sim->add_option("--suite", sim_args.suite, "table1 or figures");
  sim->add_flag("--json", sim_args.json, "JSON output");
  sim->add_flag("--csv", sim_args.csv, "CSV output");

  UefaArgs uefa_args;
  auto* uefa = app.add_subcommand("uefa", "Champions League first-goal analyses");
  uefa->add_option("--model", uefa_args.model, "additive, multiplicative (default: both)");
  uefa->add_option("--dmax", uefa_args.dmax, "Largest candidate order d(n)");
  uefa->add_option("--export", uefa_args.export_path, "Write the embedded data as CSV and exit");
  uefa->add_flag("--json", uefa_args.json, "JSON output");
  uefa->add_flag("--csv", uefa_args.csv, "CSV output");

  DumpArgs dump_args;
  auto* dump = app.add_subcommand("dump-polys", "Print a deconvolution polynomial basis as CSV");
  dump->add_option("--noise", dump_args.noise, "Noise law, e.g. normal(0,2)");
  dump->add_option("--order", dump_args.order, "Highest order");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (test->parsed()) return run_test(test_args, out);
    if (sim->parsed()) return run_simulate(sim_args, out);
    if (uefa->parsed()) return run_uefa(uefa_args, out);
    if (dump->parsed()) return run_dump(dump_args, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SingularCovariance& e) {
    err << "error: " << e.what() << "; the test cannot run on these data\n";
    return kExitInput;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitUsage;
}

}  // namespace dsmooth::cli

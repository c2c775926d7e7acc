// Batch experiment runner over the shared-library C API. One command per
// invocation; all randomness is seeded (default 0) and every artifact embeds
// the resolved configuration, so identical config + seed gives byte-identical
// files.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "superlab.h"

using nlohmann::json;

namespace {

constexpr const char* kArtifactVersion = "0.1.0";
constexpr double kInf = std::numeric_limits<double>::infinity();

struct CliError {
  int code;
  std::string message;
};

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json json_num(double v) {
  if (std::isinf(v)) return json(v > 0 ? "inf" : "-inf");
  return json(v);
}

void require_ok(int status) {
  if (status != SLAB_OK) throw CliError{status, slab_last_error()};
}

std::string take_string(char* s) {
  std::string out(s ? s : "");
  slab_string_free(s);
  return out;
}

json take_json(char* s) { return json::parse(take_string(s)); }

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliError{1, "cannot open output file: " + path};
  out << content;
}

json artifact(const std::string& command, json config, json results) {
  return json{{"artifact-version", kArtifactVersion},
              {"command", command},
              {"config", std::move(config)},
              {"results", std::move(results)}};
}

// Shared output options.
struct OutputOptions {
  std::string out_dir = ".";
  std::string format = "both";

  bool csv() const { return format == "csv" || format == "both"; }
  bool jsn() const { return format == "json" || format == "both"; }
  std::string path(const std::string& name) const {
    return out_dir + "/" + name;
  }
};

void add_output_options(CLI::App* cmd, OutputOptions* opts) {
  cmd->add_option("--out", opts->out_dir, "Output directory")
      ->capture_default_str();
  cmd->add_option("--format", opts->format, "Artifact format")
      ->check(CLI::IsMember({"csv", "json", "both"}))
      ->capture_default_str();
  static std::string config_doc;
  cmd->add_option("--config", config_doc,
                  "Flat key=value file; command-line flags win");
}

// Flat key=value config file, applied as extra flags for any key the command
// line does not already set, so explicit flags always win. Handled before
// CLI11 parsing because its own config reader wants sectioned files.
std::string strip_config_flag(std::vector<std::string>* args) {
  std::string path;
  for (std::size_t i = 0; i < args->size();) {
    if ((*args)[i] == "--config" && i + 1 < args->size()) {
      path = (*args)[i + 1];
      args->erase(args->begin() + i, args->begin() + i + 2);
    } else if ((*args)[i].rfind("--config=", 0) == 0) {
      path = (*args)[i].substr(9);
      args->erase(args->begin() + i);
    } else {
      ++i;
    }
  }
  return path;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

void apply_config_file(const std::string& path, std::vector<std::string>* args) {
  std::ifstream in(path);
  if (!in) throw CliError{2, "cannot read config file: " + path};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw CliError{2, "config line " + std::to_string(lineno) +
                            ": expected key=value"};
    }
    const std::string flag = "--" + trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    bool present = false;
    for (const auto& arg : *args) {
      if (arg == flag || arg.rfind(flag + "=", 0) == 0) {
        present = true;
        break;
      }
    }
    if (!present) {
      args->push_back(flag);
      args->push_back(value);
    }
  }
}

// Model / estimator option bundles.
struct ModelOptions {
  double sigma = 1.0;
  double theta_lo = -kInf;
  double theta_hi = kInf;

  slab_model* create() const {
    slab_model* model = nullptr;
    require_ok(slab_model_create(sigma, theta_lo, theta_hi, &model));
    return model;
  }
  json to_json() const {
    return json{{"sigma", sigma},
                {"theta_lo", json_num(theta_lo)},
                {"theta_hi", json_num(theta_hi)}};
  }
};

void add_model_options(CLI::App* cmd, ModelOptions* opts) {
  cmd->add_option("--sigma", opts->sigma, "Known standard deviation")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--theta-lo", opts->theta_lo, "Parameter space lower edge");
  cmd->add_option("--theta-hi", opts->theta_hi, "Parameter space upper edge");
}

struct EstimatorOptions {
  std::string kind = "hodges";
  double pivot = 0.0;
  double pivot2 = 0.0;
  double value = 0.0;

  slab_estimator* create() const {
    slab_estimator* est = nullptr;
    if (kind == "mle") {
      require_ok(slab_estimator_mle(&est));
    } else if (kind == "hodges") {
      require_ok(slab_estimator_hodges(pivot, &est));
    } else if (kind == "constant") {
      require_ok(slab_estimator_constant(value, &est));
    } else {
      require_ok(slab_estimator_two_pivot_hodges(pivot, pivot2, &est));
    }
    return est;
  }
  json to_json() const {
    return json{{"kind", kind},
                {"pivot", pivot},
                {"pivot2", pivot2},
                {"value", value}};
  }
};

void add_estimator_options(CLI::App* cmd, EstimatorOptions* opts) {
  cmd->add_option("--estimator", opts->kind, "Estimator kind")
      ->check(CLI::IsMember({"mle", "hodges", "constant", "two-pivot-hodges"}))
      ->capture_default_str();
  cmd->add_option("--pivot", opts->pivot, "Hodges pivot")
      ->capture_default_str();
  cmd->add_option("--pivot2", opts->pivot2, "Second pivot (two-pivot variant)")
      ->capture_default_str();
  cmd->add_option("--value", opts->value, "Constant estimator value")
      ->capture_default_str();
}

// ---- affinity / tv ------------------------------------------------------

struct DistanceArgs {
  ModelOptions model;
  OutputOptions out;
  std::vector<double> theta_grid{-1.0, -0.3, 0.0, 0.4, 1.2};
  std::vector<long> n_grid{1, 10, 100, 1000};
};

int run_distance(const DistanceArgs& args, bool variation) {
  slab_model* model = args.model.create();
  const char* name = variation ? "tv" : "affinity";
  std::string csv =
      "sigma,theta1,theta2,n,closed_form,oracle,gap\n";
  json rows = json::array();
  for (std::size_t i = 0; i < args.theta_grid.size(); ++i) {
    for (std::size_t j = i; j < args.theta_grid.size(); ++j) {
      const double t1 = args.theta_grid[i];
      const double t2 = args.theta_grid[j];
      for (long n : args.n_grid) {
        double aff = 0.0, tv = 0.0, oracle = 0.0;
        require_ok(slab_affinity_gaussian(model, t1, t2, n, &aff));
        require_ok(slab_tv_gaussian(model, t1, t2, n, &tv));
        double closed;
        if (variation) {
          closed = tv;
          oracle = 1.0 - 2.0 * aff;  // via the affinity closed form
        } else {
          closed = aff;
          require_ok(slab_affinity_lower_bound_from_tv(tv, &oracle));
        }
        const double gap = std::fabs(closed - oracle);
        csv += fmt(args.model.sigma) + "," + fmt(t1) + "," + fmt(t2) + "," +
               std::to_string(n) + "," + fmt(closed) + "," + fmt(oracle) +
               "," + fmt(gap) + "\n";
        rows.push_back({{"theta1", t1},
                        {"theta2", t2},
                        {"n", n},
                        {"closed_form", closed},
                        {"oracle", oracle},
                        {"gap", gap}});
      }
    }
  }
  slab_model_free(model);
  json config = args.model.to_json();
  config["theta_grid"] = args.theta_grid;
  config["n_grid"] = args.n_grid;
  if (args.out.csv()) {
    write_file(args.out.path(std::string(name) + ".csv"), csv);
  }
  if (args.out.jsn()) {
    write_file(args.out.path(std::string(name) + ".json"),
               artifact(name, config, json{{"rows", rows}}).dump(2) + "\n");
  }
  return 0;
}

// ---- concentration ------------------------------------------------------

struct ConcentrationArgs {
  ModelOptions model;
  EstimatorOptions estimator;
  OutputOptions out;
  std::vector<double> theta_grid{-0.5, 0.0, 0.7};
  std::vector<long> n_grid{16, 100, 1024};
  std::vector<double> c_grid{0.5, 1.0, 2.0};
  long samples = 100000;
  unsigned long long seed = 0;
};

int run_concentration(const ConcentrationArgs& args) {
  slab_model* model = args.model.create();
  slab_estimator* est = args.estimator.create();
  std::string csv = "n,theta,c,radius,p_exact,p_mc,std_error,z_score\n";
  json rows = json::array();
  unsigned long long stream = args.seed;
  for (double theta : args.theta_grid) {
    for (long n : args.n_grid) {
      for (double c : args.c_grid) {
        const double radius = c / std::sqrt(static_cast<double>(n));
        double p_exact = 0.0, p_mc = 0.0, se = 0.0;
        require_ok(slab_concentration_exact(model, est, theta, n, radius,
                                            theta, &p_exact));
        require_ok(slab_concentration_mc(model, est, theta, n, radius, theta,
                                         args.samples, stream++, 0, &p_mc,
                                         &se));
        const double z = se > 0.0 ? (p_mc - p_exact) / se : 0.0;
        csv += std::to_string(n) + "," + fmt(theta) + "," + fmt(c) + "," +
               fmt(radius) + "," + fmt(p_exact) + "," + fmt(p_mc) + "," +
               fmt(se) + "," + fmt(z) + "\n";
        rows.push_back({{"n", n},
                        {"theta", theta},
                        {"c", c},
                        {"radius", radius},
                        {"p_exact", p_exact},
                        {"p_mc", p_mc},
                        {"std_error", se},
                        {"z_score", z}});
      }
    }
  }
  slab_estimator_free(est);
  slab_model_free(model);
  json config = args.model.to_json();
  config["estimator"] = args.estimator.to_json();
  config["theta_grid"] = args.theta_grid;
  config["n_grid"] = args.n_grid;
  config["c_grid"] = args.c_grid;
  config["samples"] = args.samples;
  config["seed"] = args.seed;
  if (args.out.csv()) write_file(args.out.path("concentration.csv"), csv);
  if (args.out.jsn()) {
    write_file(
        args.out.path("concentration.json"),
        artifact("concentration", config, json{{"rows", rows}}).dump(2) + "\n");
  }
  return 0;
}

// ---- efficiency ---------------------------------------------------------

struct EfficiencyArgs {
  ModelOptions model;
  EstimatorOptions estimator;
  OutputOptions out;
  double theta = 0.0;
  std::vector<double> c_grid{1.0, 2.0, 5.0, 8.0, 10.0};
  std::vector<long> n_grid{100, 10000, 1000000};
};

int run_efficiency(const EfficiencyArgs& args) {
  slab_model* model = args.model.create();
  slab_estimator* est = args.estimator.create();
  char* out = nullptr;
  const int status = slab_ae_estimate_json(
      model, est, args.theta, args.c_grid.data(),
      static_cast<int>(args.c_grid.size()), args.n_grid.data(),
      static_cast<int>(args.n_grid.size()), &out);
  slab_estimator_free(est);
  slab_model_free(model);
  require_ok(status);
  const json estimate = take_json(out);

  std::string csv = "c,n,inner_value\n";
  for (std::size_t ci = 0; ci < args.c_grid.size(); ++ci) {
    for (std::size_t ni = 0; ni < args.n_grid.size(); ++ni) {
      const json& cell = estimate["inner_values"][ci][ni];
      csv += fmt(args.c_grid[ci]) + "," + std::to_string(args.n_grid[ni]) +
             "," +
             (cell.is_string() ? cell.get<std::string>()
                               : fmt(cell.get<double>())) +
             "\n";
    }
  }
  json config = args.model.to_json();
  config["estimator"] = args.estimator.to_json();
  config["theta"] = args.theta;
  config["c_grid"] = args.c_grid;
  config["n_grid"] = args.n_grid;
  if (args.out.csv()) write_file(args.out.path("efficiency.csv"), csv);
  if (args.out.jsn()) {
    write_file(args.out.path("efficiency.json"),
               artifact("efficiency", config, estimate).dump(2) + "\n");
  }
  return 0;
}

// ---- extract / demo -----------------------------------------------------

struct ExtractArgs {
  ModelOptions model;
  EstimatorOptions estimator;
  OutputOptions out;
  std::string c = "1";
  std::string a = "1/2";
  std::string i_bar = "101/100";
  std::string epsilon = "1/10";
  std::string L = "-1/20";
  std::string R = "1/20";
  long n_min = 1;
  long grid_points = 64;
  double tolerance = 1e-3;
  long max_iterations = 100;
};

int outcome_exit_code(const std::string& outcome) {
  if (outcome == "converged") return 0;
  if (outcome == "no_superefficient_point") return 4;
  if (outcome == "width_error") return 3;
  if (outcome == "assumption_violation") return 5;
  return 1;  // max_iterations_reached
}

int run_extract(const ExtractArgs& args, const char* name) {
  slab_model* model = args.model.create();
  slab_estimator* est = args.estimator.create();
  slab_extraction_config config{args.c.c_str(),      args.a.c_str(),
                                args.i_bar.c_str(),  args.epsilon.c_str(),
                                args.L.c_str(),      args.R.c_str(),
                                args.n_min,          args.grid_points,
                                args.tolerance,      args.max_iterations};
  char* out = nullptr;
  char* text = nullptr;
  const int status = slab_extract_json(model, est, &config, &out, &text);
  slab_estimator_free(est);
  slab_model_free(model);
  require_ok(status);
  json trace = take_json(out);
  const std::string rendering = take_string(text);

  json cli_config = args.model.to_json();
  cli_config["estimator"] = args.estimator.to_json();
  cli_config["extraction"] = trace["config"];
  if (args.out.jsn()) {
    write_file(args.out.path(std::string(name) + ".json"),
               artifact(name, cli_config, trace).dump(2) + "\n");
  }
  write_file(args.out.path(std::string(name) + ".txt"), rendering);
  std::printf("%s", rendering.c_str());
  return outcome_exit_code(trace["outcome"].get<std::string>());
}

// ---- check-assumptions --------------------------------------------------

struct CheckArgs {
  ModelOptions model;
  OutputOptions out;
  double theta = 0.0;
  double epsilon = 0.0;
  std::vector<double> delta_grid{-0.8, -0.2, 0.5, 1.1};
  std::vector<long> n_grid{1, 16, 400};
  double lambda = 1.0;
  long lan_n = 100;
  long samples = 10000;
  unsigned long long seed = 0;
};

int run_check_assumptions(const CheckArgs& args) {
  slab_model* model = args.model.create();
  std::vector<double> theta1, theta2;
  std::vector<long> n_list;
  for (double delta : args.delta_grid) {
    for (long n : args.n_grid) {
      theta1.push_back(args.theta);
      theta2.push_back(args.theta + delta);
      n_list.push_back(n);
    }
  }
  const int len = static_cast<int>(n_list.size());
  json reports = json::array();
  std::string csv = "assumption,theta1,theta2,n,lhs,rhs,slack,pass,rejected\n";
  bool all_pass = true;
  for (int which : {1, 2, 4}) {
    char* out = nullptr;
    const int status = slab_check_assumption_json(
        model, which, args.theta, theta1.data(), theta2.data(), n_list.data(),
        len, args.epsilon, &out);
    if (status != SLAB_OK) {
      slab_model_free(model);
      throw CliError{status, slab_last_error()};
    }
    json report = take_json(out);
    for (const auto& row : report["rows"]) {
      const bool rejected = row["rejected"].get<bool>();
      if (!rejected && !row["pass"].get<bool>()) all_pass = false;
      csv += std::to_string(which) + "," + fmt(row["theta1"].get<double>()) +
             "," + fmt(row["theta2"].get<double>()) + "," +
             std::to_string(row["n"].get<long>()) + "," +
             fmt(row["lhs"].get<double>()) + "," +
             fmt(row["rhs"].get<double>()) + "," +
             fmt(row["slack"].get<double>()) + "," +
             (row["pass"].get<bool>() ? "1" : "0") + "," +
             (rejected ? "1" : "0") + "\n";
    }
    reports.push_back(std::move(report));
  }
  char* lan_out = nullptr;
  const int lan_status =
      slab_check_lan_json(model, args.theta, args.lambda, args.lan_n,
                          args.samples, args.seed, &lan_out);
  slab_model_free(model);
  require_ok(lan_status);
  json lan = take_json(lan_out);
  if (!lan["ks_pass"].get<bool>() ||
      lan["max_abs_residual"].get<double>() > 1e-10) {
    all_pass = false;
  }

  json config = args.model.to_json();
  config["theta"] = args.theta;
  config["epsilon"] = args.epsilon;
  config["delta_grid"] = args.delta_grid;
  config["n_grid"] = args.n_grid;
  config["lambda"] = args.lambda;
  config["lan_n"] = args.lan_n;
  config["samples"] = args.samples;
  config["seed"] = args.seed;
  if (args.out.csv()) write_file(args.out.path("check_assumptions.csv"), csv);
  if (args.out.jsn()) {
    write_file(args.out.path("check_assumptions.json"),
               artifact("check-assumptions", config,
                        json{{"assumptions", reports}, {"lan", lan}})
                       .dump(2) +
                   "\n");
  }
  return all_pass ? 0 : 5;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Superefficiency laboratory"};
  app.require_subcommand(1);

  DistanceArgs affinity_args;
  auto* affinity = app.add_subcommand(
      "affinity", "Gaussian affinity table, closed form vs oracle bound");
  add_model_options(affinity, &affinity_args.model);
  affinity->add_option("--theta-grid", affinity_args.theta_grid)
      ->delimiter(',');
  affinity->add_option("--n-grid", affinity_args.n_grid)->delimiter(',');
  add_output_options(affinity, &affinity_args.out);

  DistanceArgs tv_args;
  auto* tv = app.add_subcommand(
      "tv", "Gaussian variation-distance table, closed form vs oracle");
  add_model_options(tv, &tv_args.model);
  tv->add_option("--theta-grid", tv_args.theta_grid)->delimiter(',');
  tv->add_option("--n-grid", tv_args.n_grid)->delimiter(',');
  add_output_options(tv, &tv_args.out);

  ConcentrationArgs conc_args;
  auto* conc = app.add_subcommand(
      "concentration", "Exact vs Monte Carlo concentration probabilities");
  add_model_options(conc, &conc_args.model);
  add_estimator_options(conc, &conc_args.estimator);
  conc->add_option("--theta-grid", conc_args.theta_grid)->delimiter(',');
  conc->add_option("--n-grid", conc_args.n_grid)->delimiter(',');
  conc->add_option("--c-grid", conc_args.c_grid)->delimiter(',');
  conc->add_option("--samples", conc_args.samples)
      ->check(CLI::Range(100L, 100000000L))
      ->capture_default_str();
  conc->add_option("--seed", conc_args.seed)->capture_default_str();
  add_output_options(conc, &conc_args.out);

  EfficiencyArgs eff_args;
  auto* eff = app.add_subcommand(
      "efficiency", "Inner efficiency values and the ae summary");
  add_model_options(eff, &eff_args.model);
  add_estimator_options(eff, &eff_args.estimator);
  eff->add_option("--theta", eff_args.theta)->capture_default_str();
  eff->add_option("--c-grid", eff_args.c_grid)->delimiter(',');
  eff->add_option("--n-grid", eff_args.n_grid)->delimiter(',');
  add_output_options(eff, &eff_args.out);

  ExtractArgs extract_args;
  auto* extract = app.add_subcommand(
      "extract", "Interval-shrinking extraction of a superefficiency point");
  add_model_options(extract, &extract_args.model);
  add_estimator_options(extract, &extract_args.estimator);
  extract->add_option("--c", extract_args.c, "Rational c > 0")
      ->capture_default_str();
  extract->add_option("--a", extract_args.a, "Rational a in (0,1)")
      ->capture_default_str();
  extract->add_option("--i-bar", extract_args.i_bar, "Rational bound on I(q)")
      ->capture_default_str();
  extract->add_option("--epsilon", extract_args.epsilon, "Rational epsilon")
      ->capture_default_str();
  extract->add_option("--interval-lo", extract_args.L, "Rational L")
      ->capture_default_str();
  extract->add_option("--interval-hi", extract_args.R, "Rational R")
      ->capture_default_str();
  extract->add_option("--n-min", extract_args.n_min)->capture_default_str();
  extract->add_option("--grid-points", extract_args.grid_points)
      ->capture_default_str();
  extract->add_option("--tolerance", extract_args.tolerance)
      ->capture_default_str();
  extract->add_option("--max-iterations", extract_args.max_iterations)
      ->capture_default_str();
  add_output_options(extract, &extract_args.out);

  CheckArgs check_args;
  auto* check = app.add_subcommand(
      "check-assumptions", "Slack tables for the model assumptions plus LAN");
  add_model_options(check, &check_args.model);
  check->add_option("--theta", check_args.theta)->capture_default_str();
  check->add_option("--epsilon", check_args.epsilon)->capture_default_str();
  check->add_option("--delta-grid", check_args.delta_grid)->delimiter(',');
  check->add_option("--n-grid", check_args.n_grid)->delimiter(',');
  check->add_option("--lambda", check_args.lambda)->capture_default_str();
  check->add_option("--lan-n", check_args.lan_n)->capture_default_str();
  check->add_option("--samples", check_args.samples)->capture_default_str();
  check->add_option("--seed", check_args.seed)->capture_default_str();
  add_output_options(check, &check_args.out);

  ExtractArgs demo_args;  // canonical Hodges pivot recovery
  auto* demo = app.add_subcommand(
      "demo", "Canonical Hodges pivot-recovery scenario end to end");
  add_output_options(demo, &demo_args.out);

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    const std::string config_path = strip_config_flag(&args);
    if (!config_path.empty()) apply_config_file(config_path, &args);
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const CliError& e) {
    std::fprintf(stderr, "%s\n",
                 json{{"error", e.message}, {"status", e.code}}.dump().c_str());
    return e.code;
  }

  try {
    if (affinity->parsed()) return run_distance(affinity_args, false);
    if (tv->parsed()) return run_distance(tv_args, true);
    if (conc->parsed()) return run_concentration(conc_args);
    if (eff->parsed()) return run_efficiency(eff_args);
    if (extract->parsed()) return run_extract(extract_args, "extract");
    if (check->parsed()) return run_check_assumptions(check_args);
    if (demo->parsed()) return run_extract(demo_args, "demo");
  } catch (const CliError& e) {
    std::fprintf(stderr, "%s\n",
                 json{{"error", e.message}, {"status", e.code}}.dump().c_str());
    return e.code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "%s\n",
                 json{{"error", e.what()}, {"status", 1}}.dump().c_str());
    return 1;
  }
  return 2;
}

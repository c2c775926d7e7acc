#include "superlab.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include <json.hpp>

#include "superlab/efficiency.hpp"
#include "superlab/estimators.hpp"
#include "superlab/extraction.hpp"
#include "superlab/models.hpp"
#include "superlab/normal.hpp"

using nlohmann::json;

struct slab_model {
  superlab::GaussianLocationModel impl;
};

struct slab_estimator {
  superlab::EstimatorSpec impl;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    return SLAB_OK;
  } catch (const superlab::WidthError& e) {
    g_last_error = e.what();
    return SLAB_ERR_WIDTH;
  } catch (const superlab::AssumptionViolation& e) {
    g_last_error = e.what();
    return SLAB_ERR_ASSUMPTION;
  } catch (const std::domain_error& e) {
    g_last_error = e.what();
    return SLAB_ERR_INVALID;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return SLAB_ERR_INVALID;
  } catch (const std::length_error& e) {
    g_last_error = e.what();
    return SLAB_ERR_INVALID;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SLAB_ERR;
  }
}

// JSON has no infinity literal; +/-inf values are emitted as strings.
json json_num(double v) {
  if (std::isinf(v)) return json(v > 0 ? "inf" : "-inf");
  return json(v);
}

superlab::DiscreteModelPair make_pair_checked(const double* p, const double* q,
                                              int k) {
  if (p == nullptr || q == nullptr || k < 1) {
    throw std::invalid_argument("null or empty probability vectors");
  }
  return superlab::DiscreteModelPair(std::vector<double>(p, p + k),
                                     std::vector<double>(q, q + k));
}

superlab::ExtractionConfig make_config(const slab_extraction_config* c) {
  if (c == nullptr) throw std::invalid_argument("null config");
  superlab::ExtractionConfig cfg;
  cfg.c = superlab::rational_from_string(c->c ? c->c : "");
  cfg.a = superlab::rational_from_string(c->a ? c->a : "");
  cfg.i_bar = superlab::rational_from_string(c->i_bar ? c->i_bar : "");
  cfg.epsilon = superlab::rational_from_string(c->epsilon ? c->epsilon : "");
  cfg.L = superlab::rational_from_string(c->L ? c->L : "");
  cfg.R = superlab::rational_from_string(c->R ? c->R : "");
  cfg.n_min = c->n_min;
  cfg.grid_points = c->grid_points;
  cfg.tolerance = c->tolerance;
  cfg.max_iterations = c->max_iterations;
  return cfg;
}

json config_to_json(const superlab::ExtractionConfig& cfg) {
  return json{{"c", superlab::rational_to_string(cfg.c)},
              {"a", superlab::rational_to_string(cfg.a)},
              {"i_bar", superlab::rational_to_string(cfg.i_bar)},
              {"epsilon", superlab::rational_to_string(cfg.epsilon)},
              {"L", superlab::rational_to_string(cfg.L)},
              {"R", superlab::rational_to_string(cfg.R)},
              {"n_min", cfg.n_min},
              {"grid_points", cfg.grid_points},
              {"tolerance", cfg.tolerance},
              {"max_iterations", cfg.max_iterations}};
}

json scan_to_json(const superlab::SuitabilityScan& scan) {
  json points = json::array();
  for (const auto& pt : scan.points) {
    points.push_back({{"q", superlab::rational_to_string(pt.q)},
                      {"q_approx", pt.q.get_d()},
                      {"probability", pt.probability},
                      {"suitable", pt.suitable}});
  }
  json j{{"n", scan.n},
         {"threshold", scan.threshold},
         {"points", std::move(points)},
         {"diameter", scan.diameter.get_d()}};
  if (scan.suitable_hull) {
    j["suitable_hull"] = {
        superlab::rational_to_string(scan.suitable_hull->first),
        superlab::rational_to_string(scan.suitable_hull->second)};
  } else {
    j["suitable_hull"] = nullptr;
  }
  return j;
}

const char* outcome_name(superlab::ExtractionOutcome outcome) {
  switch (outcome) {
    case superlab::ExtractionOutcome::Converged:
      return "converged";
    case superlab::ExtractionOutcome::NoSuperefficientPoint:
      return "no_superefficient_point";
    case superlab::ExtractionOutcome::AssumptionViolationDetected:
      return "assumption_violation";
    case superlab::ExtractionOutcome::WidthErrorDetected:
      return "width_error";
    case superlab::ExtractionOutcome::MaxIterationsReached:
      return "max_iterations_reached";
  }
  return "?";
}

json slack_report_to_json(const superlab::SlackReport& report, int which,
                          double theta, double epsilon) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"theta1", r.entry.theta1},
                    {"theta2", r.entry.theta2},
                    {"n", r.entry.n},
                    {"lhs", r.lhs},
                    {"rhs", r.rhs},
                    {"slack", r.slack},
                    {"pass", r.pass},
                    {"rejected", r.rejected},
                    {"note", r.note}});
  }
  return json{{"assumption", which},
              {"theta", theta},
              {"epsilon", epsilon},
              {"rows", std::move(rows)},
              {"all_pass", report.all_pass}};
}

}  // namespace

extern "C" {

const char* slab_version(void) { return "0.1.0"; }

const char* slab_last_error(void) { return g_last_error.c_str(); }

void slab_string_free(char* s) { delete[] s; }

int slab_model_create(double sigma, double theta_lo, double theta_hi,
                      slab_model** out) {
  return guarded([&] {
    if (out == nullptr) throw std::invalid_argument("null output pointer");
    *out = new slab_model{
        superlab::GaussianLocationModel(sigma, theta_lo, theta_hi)};
  });
}

void slab_model_free(slab_model* model) { delete model; }

int slab_estimator_mle(slab_estimator** out) {
  return guarded([&] {
    *out = new slab_estimator{superlab::EstimatorSpec::mle()};
  });
}

int slab_estimator_hodges(double pivot, slab_estimator** out) {
  return guarded([&] {
    *out = new slab_estimator{superlab::EstimatorSpec::hodges(pivot)};
  });
}

int slab_estimator_constant(double value, slab_estimator** out) {
  return guarded([&] {
    *out = new slab_estimator{superlab::EstimatorSpec::constant(value)};
  });
}

int slab_estimator_two_pivot_hodges(double pivot1, double pivot2,
                                    slab_estimator** out) {
  return guarded([&] {
    *out = new slab_estimator{
        superlab::EstimatorSpec::two_pivot_hodges(pivot1, pivot2)};
  });
}

void slab_estimator_free(slab_estimator* estimator) { delete estimator; }

int slab_normal_cdf(double x, double* out) {
  return guarded([&] { *out = superlab::normal_cdf(x); });
}

int slab_log_normal_cdf(double x, double* out) {
  return guarded([&] { *out = superlab::log_normal_cdf(x); });
}

int slab_affinity_gaussian(const slab_model* model, double theta1,
                           double theta2, long n, double* out) {
  return guarded([&] {
    *out = superlab::affinity_exact_gaussian(model->impl, theta1, theta2, n);
  });
}

int slab_tv_gaussian(const slab_model* model, double theta1, double theta2,
                     long n, double* out) {
  return guarded([&] {
    *out = superlab::variation_distance_exact_gaussian(model->impl, theta1,
                                                       theta2, n);
  });
}

int slab_affinity_discrete_np(const double* p, const double* q, int k,
                              double* out) {
  return guarded([&] {
    *out = superlab::affinity_neyman_pearson_discrete(
        make_pair_checked(p, q, k));
  });
}

int slab_affinity_discrete_bruteforce(const double* p, const double* q, int k,
                                      double* out, int* witness) {
  return guarded([&] {
    const auto result =
        superlab::affinity_bruteforce_discrete(make_pair_checked(p, q, k));
    *out = result.value;
    if (witness != nullptr) {
      std::fill(witness, witness + k, 0);
      for (int idx : result.witness_set) witness[idx] = 1;
    }
  });
}

int slab_tv_discrete(const double* p, const double* q, int k, double* out) {
  return guarded([&] {
    *out = superlab::variation_distance_discrete(make_pair_checked(p, q, k));
  });
}

int slab_affinity_lower_bound_from_tv(double tv, double* out) {
  return guarded([&] { *out = superlab::affinity_lower_bound_from_tv(tv); });
}

int slab_check_assumption_json(const slab_model* model, int which, double theta,
                               const double* theta1, const double* theta2,
                               const long* n, int len, double epsilon,
                               char** json_out) {
  return guarded([&] {
    if (len < 1) throw std::invalid_argument("empty grid");
    std::vector<superlab::GridEntry> grid;
    for (int i = 0; i < len; ++i) grid.push_back({theta1[i], theta2[i], n[i]});
    superlab::SlackReport report;
    switch (which) {
      case 1:
        report = superlab::check_assumption_1(model->impl, theta, grid, epsilon);
        break;
      case 2:
        report = superlab::check_assumption_2(model->impl, theta, grid, epsilon);
        break;
      case 4:
        report = superlab::check_assumption_4(model->impl, theta, grid, epsilon);
        break;
      default:
        throw std::invalid_argument("which must be 1, 2 or 4");
    }
    *json_out =
        dup_string(slack_report_to_json(report, which, theta, epsilon).dump());
  });
}

int slab_check_lan_json(const slab_model* model, double theta, double lambda,
                        long n, long samples, unsigned long long seed,
                        char** json_out) {
  return guarded([&] {
    const auto r = superlab::check_lan_decomposition(model->impl, theta, lambda,
                                                     n, samples, seed);
    json j{{"theta", r.theta},
           {"lambda", r.lambda},
           {"n", r.n},
           {"samples", r.samples},
           {"seed", r.seed},
           {"max_abs_residual", r.max_abs_residual},
           {"ks_distance", r.ks_distance},
           {"ks_critical_01", r.ks_critical_01},
           {"ks_pass", r.ks_pass}};
    *json_out = dup_string(j.dump());
  });
}

int slab_estimate(const slab_estimator* estimator, long n, double sample_mean,
                  double* out) {
  return guarded([&] { *out = superlab::estimate(estimator->impl, n, sample_mean); });
}

int slab_concentration_exact(const slab_model* model,
                             const slab_estimator* estimator, double theta,
                             long n, double radius, double center,
                             double* prob) {
  return guarded([&] {
    *prob = superlab::concentration_exact(model->impl, estimator->impl, theta,
                                          n, radius, center)
                .probability;
  });
}

int slab_concentration_exact_log(const slab_model* model,
                                 const slab_estimator* estimator, double theta,
                                 long n, double radius, double center,
                                 double* log_prob) {
  return guarded([&] {
    *log_prob = superlab::concentration_exact_log(model->impl, estimator->impl,
                                                  theta, n, radius, center);
  });
}

int slab_concentration_mc(const slab_model* model,
                          const slab_estimator* estimator, double theta, long n,
                          double radius, double center, long samples,
                          unsigned long long seed, int full_sample,
                          double* prob, double* std_error) {
  return guarded([&] {
    const auto r = superlab::concentration_mc(model->impl, estimator->impl,
                                              theta, n, radius, center, samples,
                                              seed, full_sample != 0);
    *prob = r.probability;
    *std_error = r.std_error;
  });
}

int slab_mle_bound_check_json(const slab_model* model, double c,
                              const long* n_list, int len, double theta,
                              char** json_out) {
  return guarded([&] {
    if (len < 1) throw std::invalid_argument("empty n list");
    const auto report = superlab::mle_bound_check(
        model->impl, c, std::vector<long>(n_list, n_list + len), theta);
    json rows = json::array();
    for (const auto& r : report.rows) {
      rows.push_back(
          {{"n", r.n}, {"probability", r.probability}, {"deviation", r.deviation}});
    }
    json j{{"c", report.c},
           {"theta", report.theta},
           {"expected", report.expected},
           {"lower_bound", report.lower_bound},
           {"rows", std::move(rows)},
           {"max_abs_deviation", report.max_abs_deviation},
           {"pass", report.pass}};
    *json_out = dup_string(j.dump());
  });
}

int slab_ae_estimate_json(const slab_model* model,
                          const slab_estimator* estimator, double theta,
                          const double* c_grid, int nc, const long* n_grid,
                          int nn, char** json_out) {
  return guarded([&] {
    if (nc < 1 || nn < 1) throw std::domain_error("empty grids");
    const auto est = superlab::ae_estimate(
        model->impl, estimator->impl, theta,
        std::vector<double>(c_grid, c_grid + nc),
        std::vector<long>(n_grid, n_grid + nn));
    json inner = json::array();
    for (const auto& row : est.inner_values) {
      json jrow = json::array();
      for (double v : row) jrow.push_back(json_num(v));
      inner.push_back(std::move(jrow));
    }
    json j{{"theta", est.theta},
           {"estimator", estimator->impl.describe()},
           {"c_grid", est.c_grid},
           {"n_grid", est.n_grid},
           {"inner_values", std::move(inner)},
           {"ae_approx", json_num(est.ae_approx)}};
    *json_out = dup_string(j.dump());
  });
}

int slab_corollary3_json(const slab_model* model, const double* theta_list,
                         int nt, const double* c_grid, int nc,
                         const long* n_grid, int nn, char** json_out) {
  return guarded([&] {
    if (nt < 1 || nc < 1 || nn < 1) throw std::domain_error("empty grids");
    const auto report = superlab::corollary3_demo(
        model->impl, std::vector<double>(theta_list, theta_list + nt),
        std::vector<double>(c_grid, c_grid + nc),
        std::vector<long>(n_grid, n_grid + nn));
    json rows = json::array();
    for (const auto& r : report.rows) {
      rows.push_back({{"theta", r.theta},
                      {"estimator", r.estimator},
                      {"ae_approx", json_num(r.ae_approx)}});
    }
    *json_out = dup_string(json{{"rows", std::move(rows)}}.dump());
  });
}

int slab_extract_json(const slab_model* model, const slab_estimator* estimator,
                      const slab_extraction_config* config, char** json_out,
                      char** text) {
  return guarded([&] {
    const auto cfg = make_config(config);
    const auto trace =
        superlab::extract_parameter(model->impl, estimator->impl, cfg);
    json iterations = json::array();
    for (const auto& it : trace.iterations) {
      json it_j;
      it_j["before"] = json::array({superlab::rational_to_string(it.before_lo),
                                    superlab::rational_to_string(it.before_hi)});
      it_j["before_width"] = superlab::Rational(it.before_hi - it.before_lo).get_d();
      it_j["n"] = it.n;
      it_j["scan"] = scan_to_json(it.scan);
      it_j["after"] = json::array({superlab::rational_to_string(it.after_lo),
                                   superlab::rational_to_string(it.after_hi)});
      it_j["after_width"] = superlab::Rational(it.after_hi - it.after_lo).get_d();
      it_j["width_certified"] = it.width_certified;
      it_j["diameter_certified"] = it.diameter_certified;
      iterations.push_back(std::move(it_j));
    }
    json j{{"estimator", estimator->impl.describe()},
           {"config", config_to_json(cfg)},
           {"outcome", outcome_name(trace.outcome)},
           {"theta_hat", trace.theta_hat},
           {"failed_iteration", trace.failed_iteration},
           {"detail", trace.detail},
           {"threshold", trace.threshold},
           {"lemma1_premise_holds", trace.lemma1_premise_holds},
           {"iterations", std::move(iterations)}};
    *json_out = dup_string(j.dump());
    if (text != nullptr) *text = dup_string(superlab::render_trace(trace));
  });
}

int slab_lemma1_check_json(const slab_model* model,
                           const slab_estimator* estimator, const char* q1,
                           const char* q2, long n,
                           const slab_extraction_config* config,
                           char** json_out) {
  return guarded([&] {
    const auto cfg = make_config(config);
    const auto r = superlab::lemma1_exclusion_check(
        model->impl, estimator->impl, superlab::rational_from_string(q1),
        superlab::rational_from_string(q2), n, cfg);
    json j{{"accepted", r.accepted},
           {"reject_reason", r.reject_reason},
           {"prob1", r.prob1},
           {"prob2", r.prob2},
           {"separation", r.separation},
           {"exclusion_bound", r.exclusion_bound},
           {"separation_ok", r.separation_ok},
           {"affinity", r.affinity},
           {"affinity_lower_bound", r.affinity_lower_bound},
           {"affinity_ok", r.affinity_ok}};
    *json_out = dup_string(j.dump());
  });
}

int slab_countability_json(const slab_model* model,
                           const slab_estimator* estimator,
                           const slab_extraction_config* config, long n_max,
                           char** json_out) {
  return guarded([&] {
    const auto cfg = make_config(config);
    const auto r = superlab::countability_gap_check(model->impl,
                                                    estimator->impl, cfg, n_max);
    json points = json::array();
    for (const auto& q : r.persistent_points) {
      points.push_back(superlab::rational_to_string(q));
    }
    json j{{"estimator", estimator->impl.describe()},
           {"config", config_to_json(cfg)},
           {"n_chosen", r.n_chosen},
           {"n_lo", r.n_lo},
           {"n_hi", r.n_hi},
           {"persistent_points", std::move(points)},
           {"diameter", r.diameter},
           {"diameter_bound", r.diameter_bound},
           {"pass", r.pass}};
    *json_out = dup_string(j.dump());
  });
}

int slab_suggest_epsilon(const char* c, const char* a, const char* i_bar,
                         char** epsilon) {
  return guarded([&] {
    const auto e = superlab::suggest_epsilon(
        superlab::rational_from_string(c), superlab::rational_from_string(a),
        superlab::rational_from_string(i_bar));
    *epsilon = dup_string(superlab::rational_to_string(e));
  });
}

}  // extern "C"

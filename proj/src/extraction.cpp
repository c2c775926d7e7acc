#include "superlab/extraction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "superlab/normal.hpp"

namespace superlab {

namespace {

Rational pow_rational(const Rational& base, unsigned exp) {
  Rational r = 1;
  for (unsigned i = 0; i < exp; ++i) r *= base;
  return r;
}

// Eq.-(13)-style admissible range for n given an interval width:
// [4(1+eps)^4 c^2 / w^2, 4(1+eps)^6 c^2 / w^2].
std::pair<Rational, Rational> n_range(const Rational& width,
                                      const ExtractionConfig& config) {
  const Rational one_plus_e = 1 + config.epsilon;
  const Rational w2 = width * width;
  const Rational base = 4 * config.c * config.c / w2;
  return {base * pow_rational(one_plus_e, 4), base * pow_rational(one_plus_e, 6)};
}

mpz_class ceil_rational(const Rational& r) {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

mpz_class floor_rational(const Rational& r) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

double lemma1_affinity_floor(const ExtractionConfig& config) {
  const double e = config.epsilon.get_d();
  const double arg = -(1.0 + e) * (1.0 + e) * (1.0 + e) * config.c.get_d() *
                     std::sqrt(config.i_bar.get_d());
  return normal_cdf(arg) - e;
}

}  // namespace

Rational rational_from_string(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  if (s.find('/') != std::string::npos) {
    Rational r;
    if (r.set_str(s, 10) != 0) {
      throw std::invalid_argument("bad rational literal: " + s);
    }
    r.canonicalize();
    return r;
  }
  // Decimal with optional exponent, parsed exactly.
  std::string body = s;
  long exp10 = 0;
  const auto epos = body.find_first_of("eE");
  if (epos != std::string::npos) {
    exp10 = std::stol(body.substr(epos + 1));
    body = body.substr(0, epos);
  }
  bool negative = false;
  std::size_t i = 0;
  if (i < body.size() && (body[i] == '+' || body[i] == '-')) {
    negative = body[i] == '-';
    ++i;
  }
  std::string digits;
  long frac_digits = 0;
  bool seen_dot = false;
  for (; i < body.size(); ++i) {
    if (body[i] == '.') {
      if (seen_dot) throw std::invalid_argument("bad rational literal: " + s);
      seen_dot = true;
    } else if (body[i] >= '0' && body[i] <= '9') {
      digits.push_back(body[i]);
      if (seen_dot) ++frac_digits;
    } else {
      throw std::invalid_argument("bad rational literal: " + s);
    }
  }
  if (digits.empty()) throw std::invalid_argument("bad rational literal: " + s);
  mpz_class num(digits, 10);
  if (negative) num = -num;
  Rational r(num);
  const long net = exp10 - frac_digits;
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10,
                static_cast<unsigned long>(net < 0 ? -net : net));
  if (net < 0) {
    r /= Rational(scale);
  } else {
    r *= Rational(scale);
  }
  r.canonicalize();
  return r;
}

std::string rational_to_string(const Rational& r) {
  return r.get_str();
}

double ExtractionConfig::threshold() const {
  return a.get_d() * normal_cdf(-c.get_d() * std::sqrt(i_bar.get_d()));
}

bool ExtractionConfig::lemma1_premise_holds() const {
  return lemma1_affinity_floor(*this) > threshold();
}

void ExtractionConfig::validate(const GaussianLocationModel& model) const {
  if (!(c > 0)) throw std::invalid_argument("config: c must be positive");
  if (!(a > 0 && a < 1)) throw std::invalid_argument("config: a must be in (0,1)");
  if (!(epsilon > 0)) throw std::invalid_argument("config: epsilon must be positive");
  if (!(i_bar > 0)) throw std::invalid_argument("config: i_bar must be positive");
  if (!(L < R)) throw std::invalid_argument("config: interval must satisfy L < R");
  if (!(L.get_d() >= model.theta_lo() && R.get_d() <= model.theta_hi())) {
    throw std::invalid_argument("config: (L, R) must lie inside the parameter space");
  }
  if (!(i_bar.get_d() > model.fisher_information())) {
    throw std::invalid_argument("config: i_bar must exceed I(q) on (L, R)");
  }
  if (n_min < 1) throw std::invalid_argument("config: n_min must be >= 1");
  if (grid_points < 16) throw std::invalid_argument("config: grid_points must be >= 16");
  if (!(tolerance > 0.0)) throw std::invalid_argument("config: tolerance must be positive");
  if (max_iterations < 1) throw std::invalid_argument("config: max_iterations must be >= 1");
  // Width admissibility for the initial interval (ensures every shrunken
  // interval admits an integer n and all chosen n stay >= n_min).
  const auto [lo, hi] = n_range(R - L, *this);
  if (!(hi - lo > 1)) {
    throw std::invalid_argument(
        "config: (R - L) too long, the admissible-n range is narrower than 1");
  }
  if (lo < n_min) {
    throw std::invalid_argument(
        "config: (R - L) too long for n_min (initial n range starts below it)");
  }
}

Rational suggest_epsilon(const Rational& c, const Rational& a,
                         const Rational& i_bar) {
  ExtractionConfig probe;
  probe.c = c;
  probe.a = a;
  probe.i_bar = i_bar;
  Rational e(1, 2);
  for (int k = 1; k <= 40; ++k) {
    probe.epsilon = e;
    if (probe.lemma1_premise_holds()) return e;
    e /= 2;
  }
  throw std::domain_error("no epsilon in {2^-k} satisfies the exclusion-lemma premise");
}

std::pair<double, bool> is_suitable(const GaussianLocationModel& model,
                                    const EstimatorSpec& spec,
                                    const Rational& q, long n,
                                    const ExtractionConfig& config) {
  if (n < config.n_min) throw std::domain_error("n below the config's n_min");
  const double qd = q.get_d();
  model.require_in_domain(qd);
  const double radius = config.c.get_d() / std::sqrt(static_cast<double>(n));
  const double prob =
      concentration_exact(model, spec, qd, n, radius, qd).probability;
  return {prob, prob <= config.threshold() + 1e-12};
}

long choose_n(const Rational& theta1, const Rational& theta2,
              const ExtractionConfig& config) {
  const Rational width = theta2 - theta1;
  if (!(width > 0)) throw std::invalid_argument("choose_n: width must be positive");
  const auto [lo, hi] = n_range(width, config);
  mpz_class n = ceil_rational(lo);
  if (n < config.n_min) n = config.n_min;
  if (Rational(n) > hi) {
    throw WidthError("no admissible n for width " + rational_to_string(width) +
                     ": start from a shorter interval");
  }
  if (!n.fits_slong_p()) throw std::overflow_error("choose_n: n exceeds long range");
  const long result = n.get_si();
  // Certificate: both sides of the squared double inequality, exact.
  const Rational nw2 = Rational(result) * width * width;
  const Rational one_plus_e = 1 + config.epsilon;
  const Rational c2 = 4 * config.c * config.c;
  if (!(c2 * pow_rational(one_plus_e, 4) <= nw2 &&
        nw2 <= c2 * pow_rational(one_plus_e, 6))) {
    throw std::logic_error("choose_n: certificate failed");
  }
  return result;
}

SuitabilityScan scan_suitable(const GaussianLocationModel& model,
                              const EstimatorSpec& spec, const Rational& theta1,
                              const Rational& theta2, long n,
                              const ExtractionConfig& config) {
  const Rational width = theta2 - theta1;
  if (!(width > 0)) throw std::invalid_argument("scan_suitable: empty interval");
  const Rational step = width / (config.grid_points + 1);
  // Resolution requirement: step <= (c n^{-1/2}) / 4, i.e. 16 n step^2 <= c^2.
  if (!(Rational(16 * n) * step * step <= config.c * config.c)) {
    throw std::invalid_argument(
        "scan_suitable: grid step exceeds (c n^{-1/2})/4; raise grid_points");
  }
  SuitabilityScan scan;
  scan.n = n;
  scan.threshold = config.threshold();
  std::optional<Rational> hull_lo, hull_hi;
  for (long i = 1; i <= config.grid_points; ++i) {
    ScanPoint point;
    point.q = theta1 + step * i;
    auto [prob, suitable] = is_suitable(model, spec, point.q, n, config);
    point.probability = prob;
    point.suitable = suitable;
    if (suitable) {
      if (!hull_lo || point.q < *hull_lo) hull_lo = point.q;
      if (!hull_hi || point.q > *hull_hi) hull_hi = point.q;
    }
    scan.points.push_back(std::move(point));
  }
  if (hull_lo) {
    scan.suitable_hull = std::make_pair(*hull_lo, *hull_hi);
    scan.diameter = *hull_hi - *hull_lo;
  }
  return scan;
}

std::optional<std::pair<Rational, Rational>> shrink_interval(
    const SuitabilityScan& scan, const Rational& theta1, const Rational& theta2,
    const ExtractionConfig& config) {
  if (!scan.suitable_hull) return std::nullopt;
  const Rational width = theta2 - theta1;
  const Rational step = width / (config.grid_points + 1);
  const Rational one_plus_e = 1 + config.epsilon;

  // Exclusion-lemma consequence: the suitable set has diameter at most
  // (1+eps)^{-2} times the interval width.
  if (!(scan.diameter * one_plus_e * one_plus_e <= width)) {
    throw AssumptionViolation(
        "suitable-set diameter exceeds (1+eps)^{-2} of the interval width");
  }
  Rational lo = scan.suitable_hull->first - step;
  Rational hi = scan.suitable_hull->second + step;
  if (lo < theta1) lo = theta1;
  if (hi > theta2) hi = theta2;
  if (!((hi - lo) * one_plus_e <= width)) {
    throw AssumptionViolation(
        "shrunken width exceeds (1+eps)^{-1} of the interval width");
  }
  return std::make_pair(std::move(lo), std::move(hi));
}

ExtractionTrace extract_parameter(const GaussianLocationModel& model,
                                  const EstimatorSpec& spec,
                                  const ExtractionConfig& config) {
  config.validate(model);
  ExtractionTrace trace;
  trace.threshold = config.threshold();
  trace.lemma1_premise_holds = config.lemma1_premise_holds();

  Rational lo = config.L;
  Rational hi = config.R;
  for (long it = 1; it <= config.max_iterations; ++it) {
    if (Rational(hi - lo).get_d() <= config.tolerance) {
      trace.outcome = ExtractionOutcome::Converged;
      trace.theta_hat = Rational((lo + hi) / 2).get_d();
      return trace;
    }
    ExtractionIteration iter;
    iter.before_lo = lo;
    iter.before_hi = hi;
    try {
      iter.n = choose_n(lo, hi, config);
    } catch (const WidthError& e) {
      trace.outcome = ExtractionOutcome::WidthErrorDetected;
      trace.failed_iteration = it;
      trace.detail = e.what();
      return trace;
    }
    iter.scan = scan_suitable(model, spec, lo, hi, iter.n, config);
    std::optional<std::pair<Rational, Rational>> next;
    try {
      next = shrink_interval(iter.scan, lo, hi, config);
    } catch (const AssumptionViolation& e) {
      trace.outcome = ExtractionOutcome::AssumptionViolationDetected;
      trace.failed_iteration = it;
      trace.detail = e.what();
      trace.iterations.push_back(std::move(iter));
      return trace;
    }
    if (!next) {
      trace.outcome = ExtractionOutcome::NoSuperefficientPoint;
      trace.failed_iteration = it;
      trace.detail = "no suitable point in the scanned interval";
      trace.iterations.push_back(std::move(iter));
      return trace;
    }
    lo = next->first;
    hi = next->second;
    iter.after_lo = lo;
    iter.after_hi = hi;
    iter.width_certified = true;
    iter.diameter_certified = true;
    trace.iterations.push_back(std::move(iter));
  }
  if (Rational(hi - lo).get_d() <= config.tolerance) {
    trace.outcome = ExtractionOutcome::Converged;
    trace.theta_hat = Rational((lo + hi) / 2).get_d();
  } else {
    trace.outcome = ExtractionOutcome::MaxIterationsReached;
    trace.detail = "max_iterations reached before the tolerance";
  }
  return trace;
}

std::string render_trace(const ExtractionTrace& trace) {
  std::ostringstream out;
  out.precision(6);
  out << std::scientific;
  for (std::size_t i = 0; i < trace.iterations.size(); ++i) {
    const auto& it = trace.iterations[i];
    out << "iter " << (i + 1)
        << ": width=" << Rational(it.before_hi - it.before_lo).get_d()
        << " n=" << it.n;
    if (it.scan.suitable_hull) {
      out << " hull=[" << it.scan.suitable_hull->first.get_d() << ", "
          << it.scan.suitable_hull->second.get_d() << "]";
    } else {
      out << " hull=absent";
    }
    out << " width_cert=" << (it.width_certified ? "ok" : "-")
        << " diam_cert=" << (it.diameter_certified ? "ok" : "-") << "\n";
  }
  switch (trace.outcome) {
    case ExtractionOutcome::Converged:
      out << "converged: theta_hat=" << trace.theta_hat << "\n";
      break;
    case ExtractionOutcome::NoSuperefficientPoint:
      out << "no superefficient point (iteration " << trace.failed_iteration
          << ")\n";
      break;
    case ExtractionOutcome::AssumptionViolationDetected:
      out << "assumption violation (iteration " << trace.failed_iteration
          << "): " << trace.detail << "\n";
      break;
    case ExtractionOutcome::WidthErrorDetected:
      out << "width error (iteration " << trace.failed_iteration
          << "): " << trace.detail << "\n";
      break;
    case ExtractionOutcome::MaxIterationsReached:
      out << "max iterations reached\n";
      break;
  }
  return out.str();
}

Lemma1Report lemma1_exclusion_check(const GaussianLocationModel& model,
                                    const EstimatorSpec& spec,
                                    const Rational& q1, const Rational& q2,
                                    long n, const ExtractionConfig& config) {
  Lemma1Report report;
  auto [p1, s1] = is_suitable(model, spec, q1, n, config);
  auto [p2, s2] = is_suitable(model, spec, q2, n, config);
  report.prob1 = p1;
  report.prob2 = p2;
  if (!s1 || !s2) {
    report.reject_reason = "both points must be suitable";
    return report;
  }
  const Rational sep = q1 < q2 ? q2 - q1 : q1 - q2;
  // Separation precondition, exact: |q2-q1|^2 n <= 4 (1+eps)^6 c^2.
  const Rational one_plus_e = 1 + config.epsilon;
  if (!(sep * sep * n <= 4 * config.c * config.c * pow_rational(one_plus_e, 6))) {
    report.reject_reason = "points farther apart than 2(1+eps)^3 c n^{-1/2}";
    return report;
  }
  report.accepted = true;
  report.separation = sep.get_d();
  report.exclusion_bound =
      2.0 * config.c.get_d() / std::sqrt(static_cast<double>(n));
  // Consequence, exact: |q2-q1|^2 n <= 4 c^2.
  report.separation_ok = sep * sep * n <= 4 * config.c * config.c;
  report.affinity =
      affinity_exact_gaussian(model, q1.get_d(), q2.get_d(), n);
  report.affinity_lower_bound = lemma1_affinity_floor(config);
  report.affinity_ok = report.affinity >= report.affinity_lower_bound - 1e-12;
  return report;
}

CountabilityReport countability_gap_check(const GaussianLocationModel& model,
                                          const EstimatorSpec& spec,
                                          const ExtractionConfig& config,
                                          long n_max) {
  config.validate(model);
  if (n_max < 1) throw std::domain_error("n_max must be >= 1");
  const auto [lo_r, hi_r] = n_range(config.R - config.L, config);
  mpz_class lo_z = ceil_rational(lo_r);
  if (lo_z < config.n_min) lo_z = config.n_min;
  mpz_class hi_z = floor_rational(hi_r);
  if (hi_z > n_max) hi_z = n_max;
  if (lo_z > hi_z || !lo_z.fits_slong_p() || !hi_z.fits_slong_p()) {
    throw WidthError("countability_gap_check: no admissible n below n_max");
  }
  CountabilityReport report;
  report.n_lo = lo_z.get_si();
  report.n_hi = hi_z.get_si();
  report.n_chosen = report.n_lo;

  const Rational step = (config.R - config.L) / (config.grid_points + 1);
  std::vector<Rational> points;
  std::vector<bool> persistent(static_cast<std::size_t>(config.grid_points), true);
  for (long i = 1; i <= config.grid_points; ++i) {
    points.push_back(config.L + step * i);
  }
  for (long n = report.n_lo; n <= report.n_hi; ++n) {
    bool any = false;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (!persistent[i]) continue;
      persistent[i] = is_suitable(model, spec, points[i], n, config).second;
      any = any || persistent[i];
    }
    if (!any) break;
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (persistent[i]) report.persistent_points.push_back(points[i]);
  }
  report.diameter_bound =
      2.0 * config.c.get_d() / std::sqrt(static_cast<double>(report.n_chosen));
  if (report.persistent_points.empty()) {
    report.pass = true;  // vacuous
    return report;
  }
  report.diameter = Rational(report.persistent_points.back() -
                             report.persistent_points.front())
                        .get_d();
  report.pass = report.diameter <= report.diameter_bound + 1e-12;
  if (!report.pass) {
    throw AssumptionViolation(
        "countability_gap_check: persistent suitable set has diameter " +
        std::to_string(report.diameter) + " > " +
        std::to_string(report.diameter_bound));
  }
  return report;
}

}  // namespace superlab

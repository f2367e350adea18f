#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>

#include <boost/math/special_functions/gamma.hpp>

#include "tailscale/errors.hpp"
#include "tailscale/oracle.hpp"

namespace tailscale {

namespace {

constexpr double kRelTol = 1e-17;

// Stirling remainder of lgamma(z), accurate for z >= 100.
double stirling_tail(double z) {
  const double iz = 1.0 / z, iz2 = iz * iz;
  return iz * (1.0 / 12.0 - iz2 * (1.0 / 360.0 - iz2 / 1260.0));
}

// lgamma(k + x) - lgamma(k)
double log_rising(double k, double x) {
  if (x == 0.0) return 0.0;
  if (k < 100.0) return std::lgamma(k + x) - std::lgamma(k);
  return (k - 0.5) * std::log1p(x / k) + x * std::log(k + x) - x + stirling_tail(k + x) -
         stirling_tail(k);
}

double log_p(const NegativeBinomial& nb) {
  return nb.p < 0.5 ? std::log(nb.p) : std::log1p(-nb.q);
}
double log_q(const NegativeBinomial& nb) {
  return nb.q < 0.5 ? std::log(nb.q) : std::log1p(-nb.p);
}

void validate(const NegativeBinomial& nb) {
  if (!(nb.p > 0.0 && nb.p < 1.0 && nb.q > 0.0 && nb.q < 1.0))
    throw ParamError("NB probability must be in (0,1)");
  if (!(nb.successes > 0.0) || !std::isfinite(nb.successes))
    throw ParamError("NB successes must be positive");
}

struct PartialSum {
  double log_sum;  // log of the summed probability
  double bound;    // absolute truncation bound
};

// sum_{x >= t} pmf(x); requires t above the mean so terms decrease.
PartialSum upper_sum(const NegativeBinomial& nb, double t) {
  const double k = nb.successes, q = nb.q;
  const double lp0 = negbin_log_pmf(nb, t);
  double term = 1.0, sum = 1.0, rel_bound = 0.0;
  for (double x = t;; x += 1.0) {
    const double r = (x + k) / (x + 1.0) * q;
    term *= r;
    sum += term;
    const double rmax = k >= 1.0 ? r : q;
    rel_bound = term * rmax / (1.0 - rmax);
    if (rel_bound <= kRelTol * sum || term == 0.0) break;
  }
  return {lp0 + std::log(sum), std::exp(lp0) * rel_bound};
}

// sum_{x <= c} pmf(x) by summing downward from c.
PartialSum lower_sum(const NegativeBinomial& nb, double c) {
  const double k = nb.successes, q = nb.q;
  const double lp0 = negbin_log_pmf(nb, c);
  double term = 1.0, sum = 1.0, rel_bound = 0.0;
  for (double x = c; x > 0.0; x -= 1.0) {
    const double r = x / ((x - 1.0 + k) * q);
    term *= r;
    sum += term;
    // below the mode with k > 1 the downward ratios decrease
    if (k > 1.0 && r < 1.0) {
      const double remaining = x - 1.0;
      rel_bound = std::min(term * r / (1.0 - r), term * remaining);
      if (rel_bound <= kRelTol * sum) break;
    }
    rel_bound = 0.0;
  }
  return {lp0 + std::log(sum), std::exp(lp0) * rel_bound};
}

double poisson_log_pmf(double mean, double j) {
  return -mean + j * std::log(mean) - std::lgamma(j + 1.0);
}

}  // namespace

std::string to_string(OracleMethod method) {
  switch (method) {
    case OracleMethod::NegBinExact: return "negbin_exact";
    case OracleMethod::CompoundSeries: return "compound_series";
    case OracleMethod::ImportanceSampling: return "importance_sampling";
    default: return "plain_mc";
  }
}

double count_threshold(double x) {
  const double r = std::round(x);
  if (std::abs(x - r) <= 1e-12 * std::max(1.0, std::abs(x))) return r;
  return std::ceil(x);
}

double negbin_log_pmf(const NegativeBinomial& nb, double x) {
  if (x < 0.0) return -std::numeric_limits<double>::infinity();
  return log_rising(nb.successes, x) - std::lgamma(x + 1.0) + nb.successes * log_p(nb) +
         x * log_q(nb);
}

OracleResult negbin_tail(const NegativeBinomial& nb, double threshold) {
  validate(nb);
  if (!std::isfinite(threshold)) throw ParamError("threshold must be finite");
  const double t = count_threshold(threshold);
  if (t <= 0.0) return {1.0, 0.0, RigorousError{0.0}, OracleMethod::NegBinExact};
  if (t > nb.mean()) {
    const auto s = upper_sum(nb, t);
    return {std::exp(s.log_sum), s.log_sum, RigorousError{s.bound}, OracleMethod::NegBinExact};
  }
  const auto s = lower_sum(nb, t - 1.0);
  const double cdf = std::min(1.0, std::exp(s.log_sum));
  return {1.0 - cdf, std::log1p(-cdf), RigorousError{s.bound}, OracleMethod::NegBinExact};
}

OracleResult negbin_tail(double successes, double p, double threshold) {
  return negbin_tail(NegativeBinomial::from_p(successes, p), threshold);
}

double negbin_cdf(const NegativeBinomial& nb, double c) {
  validate(nb);
  const double x = std::floor(c);
  if (x < 0.0) return 0.0;
  if (x + 1.0 > nb.mean()) return 1.0 - std::exp(upper_sum(nb, x + 1.0).log_sum);
  return std::min(1.0, std::exp(lower_sum(nb, x).log_sum));
}

double poisson_upper_tail(double mean, double k) {
  if (!(mean >= 0.0)) throw ParamError("Poisson mean must be non-negative");
  const double t = count_threshold(k);
  if (t <= 0.0) return 1.0;
  if (mean == 0.0) return 0.0;
  return boost::math::gamma_p(t, mean);
}

OracleResult compound_poisson_gamma_tail(double poisson_rate, double jump_shape,
                                         double jump_rate, double threshold) {
  if (!(poisson_rate > 0.0 && jump_shape > 0.0 && jump_rate > 0.0))
    throw ParamError("compound Poisson parameters must be positive");
  if (!std::isfinite(threshold)) throw ParamError("threshold must be finite");
  if (threshold <= 0.0) return {1.0, 0.0, RigorousError{0.0}, OracleMethod::CompoundSeries};

  const double lam = poisson_rate;
  const double x = jump_rate * threshold;
  auto jump_tail = [&](double j) { return boost::math::gamma_q(jump_shape * j, x); };

  const double j_lo = std::max(1.0, std::floor(lam));
  double sum = 0.0;
  double hi_bound = 0.0;
  for (double j = j_lo;; j += 1.0) {
    sum += std::exp(poisson_log_pmf(lam, j)) * jump_tail(j);
    if (j + 2.0 > lam) {
      // P(N > j) <= pmf(j+1) / (1 - lam/(j+2))
      hi_bound = std::exp(poisson_log_pmf(lam, j + 1.0)) / (1.0 - lam / (j + 2.0));
      if (hi_bound <= 1e-14 * sum || hi_bound < DBL_MIN) break;
    }
  }

  double lo_bound = 0.0;
  for (double j = j_lo - 1.0; j >= 1.0; j -= 1.0) {
    // P(1 <= N <= j) Q(shape j, x) bounds the remaining low-order terms
    const double q = jump_tail(j);
    const double cdf_bound = j < lam ? std::exp(poisson_log_pmf(lam, j)) / (1.0 - j / lam) : 1.0;
    lo_bound = std::min(1.0, cdf_bound) * q;
    if (lo_bound <= 1e-14 * sum) break;
    sum += std::exp(poisson_log_pmf(lam, j)) * q;
    lo_bound = 0.0;
  }

  sum = std::min(sum, 1.0);
  return {sum, std::log(sum), RigorousError{hi_bound + lo_bound}, OracleMethod::CompoundSeries};
}

OracleResult compound_poisson_gamma_tail(const CompoundPoissonGamma& law, double threshold) {
  return compound_poisson_gamma_tail(law.poisson_rate, law.jump_shape, law.jump_rate,
                                     threshold);
}

OracleResult exact_tail(const WorkedModel& model, const PowerScaling& scaling, double n,
                        double u) {
  const auto law = exact_law(model, scaling, n);
  if (const auto* nb = std::get_if<NegativeBinomial>(&law)) return negbin_tail(*nb, u * n);
  return compound_poisson_gamma_tail(std::get<CompoundPoissonGamma>(law), u * n);
}

}  // namespace tailscale

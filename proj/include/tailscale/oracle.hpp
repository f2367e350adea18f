#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include "tailscale/levy.hpp"
#include "tailscale/models.hpp"

namespace tailscale {

enum class OracleMethod { NegBinExact, CompoundSeries, ImportanceSampling, PlainMC };

std::string to_string(OracleMethod method);

struct RigorousError {
  double bound;
};

struct StatisticalError {
  double std_error;
  std::uint64_t samples;
  std::uint64_t seed;
  unsigned workers;
};

struct OracleResult {
  double probability;
  double log_probability;
  std::variant<RigorousError, StatisticalError> error;
  OracleMethod method;
};

/// Smallest integer count c with c >= x, treating x within 1e-12 relative of an
/// integer as that integer (ties included).
double count_threshold(double x);

double negbin_log_pmf(const NegativeBinomial& nb, double x);

/// P(X >= ceil(threshold)).
OracleResult negbin_tail(const NegativeBinomial& nb, double threshold);
OracleResult negbin_tail(double successes, double p, double threshold);

/// P(X <= floor(c)).
double negbin_cdf(const NegativeBinomial& nb, double c);

/// P(Pois(mean) >= ceil(k)).
double poisson_upper_tail(double mean, double k);

/// P(S >= threshold) for S a Poisson(poisson_rate) sum of Gamma(jump_shape, jump_rate).
OracleResult compound_poisson_gamma_tail(double poisson_rate, double jump_shape,
                                         double jump_rate, double threshold);
OracleResult compound_poisson_gamma_tail(const CompoundPoissonGamma& law, double threshold);

/// Exact P(C_n >= u n) for a worked model.
OracleResult exact_tail(const WorkedModel& model, const PowerScaling& scaling, double n,
                        double u);

struct McConfig {
  std::uint64_t samples = 100000;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

/// Importance sampling under the exponentially tilted measure at theta_n.
/// Substream w of W draws from mt19937_64 seeded with (seed, w); results are
/// reproducible for a fixed (seed, workers) pair.
OracleResult is_tail(const ModelPair& model, const PowerScaling& scaling, double n, double u,
                     const McConfig& config);
OracleResult is_tail(const ModelPair& model, const PowerScaling& scaling, double n, double u,
                     std::uint64_t samples, std::uint64_t seed);

/// Untilted Monte Carlo; meant for thresholds close to the mean.
OracleResult plain_mc_tail(const ModelPair& model, const PowerScaling& scaling, double n,
                           double u, const McConfig& config);
OracleResult plain_mc_tail(const ModelPair& model, const PowerScaling& scaling, double n,
                           double u, std::uint64_t samples, std::uint64_t seed);

/// Single-threaded reference implementations of the estimators above.
namespace serial {
OracleResult is_tail(const ModelPair& model, const PowerScaling& scaling, double n, double u,
                     const McConfig& config);
OracleResult plain_mc_tail(const ModelPair& model, const PowerScaling& scaling, double n,
                           double u, const McConfig& config);
}  // namespace serial

}  // namespace tailscale

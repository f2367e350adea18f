#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "tailscale/levy.hpp"

namespace tailscale {

/// NB law: pmf(x) = C(x+k-1, x) p^k q^x on x = 0, 1, ... with q = 1 - p. Both
/// p and q are kept so that tiny q stays accurate.
struct NegativeBinomial {
  double successes;
  double p;
  double q;

  static NegativeBinomial from_p(double successes, double p);
  static NegativeBinomial from_q(double successes, double q);
  double mean() const { return successes * q / p; }
};

/// Compound Poisson sum with Gamma(jump_shape, jump_rate) jumps.
struct CompoundPoissonGamma {
  double poisson_rate;
  double jump_shape;
  double jump_rate;

  double mean() const { return poisson_rate * jump_shape / jump_rate; }
};

using ExactLaw = std::variant<NegativeBinomial, CompoundPoissonGamma>;

struct PoissonGammaParams {
  double lambda;
  double r;
  double mu;
};

struct GammaPoissonParams {
  double r;
  double mu;
  double lambda;
};

/// The two closed-form families: Poisson(lambda) o Gamma(r, mu) and
/// Gamma(r, mu) o Poisson(lambda).
class WorkedModel {
 public:
  static WorkedModel poisson_gamma(double lambda, double r, double mu);
  static WorkedModel gamma_poisson(double r, double mu, double lambda);
  /// Recognises built-in pairs (unit-span Poisson only).
  static std::optional<WorkedModel> from_pair(const ModelPair& model);

  bool is_poisson_gamma() const { return std::holds_alternative<PoissonGammaParams>(params_); }
  bool is_gamma_poisson() const { return std::holds_alternative<GammaPoissonParams>(params_); }
  const std::variant<PoissonGammaParams, GammaPoissonParams>& params() const { return params_; }

  double lambda() const;
  double r() const;
  double mu() const;
  /// lambda r / (mu u)
  double rho(double u) const;
  ModelPair pair() const;

 private:
  explicit WorkedModel(std::variant<PoissonGammaParams, GammaPoissonParams> p)
      : params_(p) {}
  std::variant<PoissonGammaParams, GammaPoissonParams> params_;
};

inline constexpr int kDefaultSeriesOrder = 50;

/// v[k] = v_k for k = 0..K (v_0 = theta*), vbar[k] = vbar_k for k = 2..K
/// (vbar[0], vbar[1] are zero).
struct FastSeries {
  double theta_star;
  std::vector<double> v;
  std::vector<double> vbar;
  int order() const { return static_cast<int>(v.size()) - 1; }
};

/// w[k] = w_k for k = 1..K+1 (w[0] is zero, w_1 = tau*), wbar[k] for k = 1..K.
struct SlowSeries {
  double tau_star;
  std::vector<double> w;
  std::vector<double> wbar;
  int order() const { return static_cast<int>(wbar.size()) - 1; }
};

FastSeries fast_series_coeffs(const WorkedModel& model, double u,
                              int K_max = kDefaultSeriesOrder);
SlowSeries slow_series_coeffs(const WorkedModel& model, double u,
                              int K_max = kDefaultSeriesOrder);

/// Law of C_n.
ExactLaw exact_law(const WorkedModel& model, const PowerScaling& scaling, double n);

/// k log(p / (1 - q e^theta)).
double negbin_lmgf(const NegativeBinomial& nb, double theta);

/// Coefficients of exp(sum_{j>=1} g[j] x^j), index 0..K.
std::vector<double> exp_series(const std::vector<double>& g, int K);

}  // namespace tailscale

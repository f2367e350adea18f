#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tailscale/levy.hpp"

namespace tailscale {

enum class Regime { Fast, Slow, SingleTimescale };

std::string to_string(Regime regime);

struct RegimeInfo {
  Regime regime;
  std::optional<int> m_plus;
  std::optional<int> m_minus;
  std::optional<int> k_plus;
  std::optional<int> k_minus;
};

RegimeInfo classify(const PowerScaling& scaling);

/// Direct evaluates the exponent from the solved tilt; Series sums the closed-form
/// coefficients of a worked model. For Series, order 0 selects m_+/m_-, order -1
/// selects adaptive truncation (stop once a term is below 1e-15 of the sum, cap
/// kDefaultSeriesOrder), and a positive order is used as given.
struct EvalMode {
  enum class Kind { Direct, Series };
  Kind kind = Kind::Direct;
  int order = 0;

  static EvalMode direct() { return {Kind::Direct, 0}; }
  static EvalMode series(int order = 0) { return {Kind::Series, order}; }
  static constexpr int kAdaptive = -1;
  std::string describe() const;
};

struct ExponentTerm {
  std::string label;
  double value;
};

struct AsymptoticEstimate {
  Regime regime;
  double prefactor;
  std::vector<ExponentTerm> exponent_terms;
  double log_value;
  double value;
  EvalMode mode;
  bool lattice_adjusted;
  double leading_tilt;  // theta* (fast, single timescale) or tau* (slow)
  double sigma;         // sigma_+^Q, sigma_-^Q or sigma_0
};

/// Factor d/(1 - e^{-t d}); the d -> 0 limit 1/t is used for d = 0.
double lattice_factor(double t, double d);

/// delta_n = gamma_n(theta_n) - theta_n u n.
double direct_exponent(const ModelPair& model, const PowerScaling& scaling, double n,
                       double u);

AsymptoticEstimate approx_fast(const ModelPair& model, const PowerScaling& scaling,
                               double n, double u, EvalMode mode = EvalMode::direct(),
                               bool lattice = false);

AsymptoticEstimate approx_slow(const ModelPair& model, const PowerScaling& scaling,
                               double n, double u, EvalMode mode = EvalMode::direct(),
                               bool lattice = false);

AsymptoticEstimate approx_single_timescale(const ModelPair& model, double n, double u,
                                           bool lattice = false);

/// Dispatches on the regime of scaling.
AsymptoticEstimate approx(const ModelPair& model, const PowerScaling& scaling, double n,
                          double u, EvalMode mode = EvalMode::direct(), bool lattice = false);

/// Whether the process that carries the lattice correction in this regime is lattice.
bool lattice_applicable(const ModelPair& model, const PowerScaling& scaling);

struct LogRates {
  std::optional<double> rate_fast;
  std::optional<double> rate_slow;
};

/// (1/n) log xi_n -> rate_fast (f > 1), (1/phi_n) log xi_n -> rate_slow (f < 1).
/// At f = 1 rate_fast holds the single-timescale rate.
LogRates log_asymptote(const ModelPair& model, const PowerScaling& scaling, double u);

}  // namespace tailscale

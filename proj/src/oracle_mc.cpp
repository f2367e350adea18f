#include <cmath>
#include <random>

#include "mc_kernel.hpp"
#include "tailscale/errors.hpp"
#include "tailscale/oracle.hpp"
#include "tailscale/twist.hpp"

namespace tailscale {

namespace {

using detail::Draw;
using detail::Rng;

WorkedModel require_worked(const ModelPair& model) {
  auto wm = WorkedModel::from_pair(model);
  if (!wm) throw ParamError("Monte Carlo sampling needs a Poisson/Gamma worked model");
  return *wm;
}

void validate(double n, const McConfig& config) {
  if (!(n >= 1.0) || !std::isfinite(n)) throw ParamError("n must be >= 1");
  if (config.samples < 2) throw ParamError("need at least two samples");
  if (config.workers < 1) throw ParamError("worker count must be positive");
}

std::int64_t draw_poisson(Rng& rng, double mean) {
  if (mean <= 0.0) return 0;
  return std::poisson_distribution<std::int64_t>(mean)(rng);
}

double draw_gamma(Rng& rng, double shape, double rate) {
  if (shape <= 0.0) return 0.0;
  return std::gamma_distribution<double>(shape, 1.0 / rate)(rng);
}

Draw tilted_draw(const ModelPair& model, const PowerScaling& scaling, double n, double u) {
  const auto wm = require_worked(model);
  const double theta = solve_twist(model, scaling, n, u).theta_n;
  const double phi = scaling.phi(n), psi = scaling.psi(n);
  const double gamma_n = lmgf_Cn(model, scaling, n, theta);
  const double lam = wm.lambda(), r = wm.r(), mu = wm.mu();

  if (wm.is_poisson_gamma()) {
    const double rate = mu - model.A().eval(theta, 0) * psi;
    if (!(rate > 0.0)) throw DomainError("tilted Gamma rate is not positive");
    const double shape = r * phi;
    const double scale = lam * std::exp(theta) * psi;
    const double thr = count_threshold(u * n);
    return [=](Rng& rng) {
      const double b = draw_gamma(rng, shape, rate);
      const double c = static_cast<double>(draw_poisson(rng, scale * b));
      return c >= thr ? std::exp(gamma_n - theta * c) : 0.0;
    };
  }
  const double rate = mu - theta;
  if (!(rate > 0.0)) throw DomainError("tilted jump rate is not positive");
  const double count_mean = lam * phi * std::exp(model.A().eval(theta, 0) * psi);
  const double jump_shape = r * psi;
  const double thr = u * n;
  return [=](Rng& rng) {
    const auto k = draw_poisson(rng, count_mean);
    const double c = draw_gamma(rng, jump_shape * static_cast<double>(k), rate);
    return c >= thr ? std::exp(gamma_n - theta * c) : 0.0;
  };
}

Draw plain_draw(const ModelPair& model, const PowerScaling& scaling, double n, double u) {
  const auto wm = require_worked(model);
  const double phi = scaling.phi(n), psi = scaling.psi(n);
  const double lam = wm.lambda(), r = wm.r(), mu = wm.mu();
  if (wm.is_poisson_gamma()) {
    const double thr = count_threshold(u * n);
    return [=](Rng& rng) {
      const double b = draw_gamma(rng, r * phi, mu);
      return static_cast<double>(draw_poisson(rng, lam * psi * b)) >= thr ? 1.0 : 0.0;
    };
  }
  const double thr = u * n;
  return [=](Rng& rng) {
    const auto k = draw_poisson(rng, lam * phi);
    return draw_gamma(rng, r * psi * static_cast<double>(k), mu) >= thr ? 1.0 : 0.0;
  };
}

OracleResult summarize(const detail::Moments& m, const McConfig& config, OracleMethod method) {
  const double N = static_cast<double>(m.count);
  const double var = m.count > 1 ? m.m2 / (N - 1.0) : 0.0;
  const double p = std::max(0.0, m.mean);
  return {p, std::log(p), StatisticalError{std::sqrt(var / N), config.samples, config.seed,
                                           config.workers},
          method};
}

}  // namespace

OracleResult is_tail(const ModelPair& model, const PowerScaling& scaling, double n, double u,
                     const McConfig& config) {
  validate(n, config);
  const auto draw = tilted_draw(model, scaling, n, u);
  return summarize(
      detail::run_substreams_parallel(draw, config.samples, config.seed, config.workers),
      config, OracleMethod::ImportanceSampling);
}

OracleResult is_tail(const ModelPair& model, const PowerScaling& scaling, double n, double u,
                     std::uint64_t samples, std::uint64_t seed) {
  return is_tail(model, scaling, n, u, McConfig{samples, seed, 1});
}

OracleResult plain_mc_tail(const ModelPair& model, const PowerScaling& scaling, double n,
                           double u, const McConfig& config) {
  validate(n, config);
  const auto draw = plain_draw(model, scaling, n, u);
  return summarize(
      detail::run_substreams_parallel(draw, config.samples, config.seed, config.workers),
      config, OracleMethod::PlainMC);
}

OracleResult plain_mc_tail(const ModelPair& model, const PowerScaling& scaling, double n,
                           double u, std::uint64_t samples, std::uint64_t seed) {
  return plain_mc_tail(model, scaling, n, u, McConfig{samples, seed, 1});
}

namespace serial {

OracleResult is_tail(const ModelPair& model, const PowerScaling& scaling, double n, double u,
                     const McConfig& config) {
  validate(n, config);
  const auto draw = tilted_draw(model, scaling, n, u);
  return summarize(
      detail::run_substreams_serial(draw, config.samples, config.seed, config.workers), config,
      OracleMethod::ImportanceSampling);
}

OracleResult plain_mc_tail(const ModelPair& model, const PowerScaling& scaling, double n,
                           double u, const McConfig& config) {
  validate(n, config);
  const auto draw = plain_draw(model, scaling, n, u);
  return summarize(
      detail::run_substreams_serial(draw, config.samples, config.seed, config.workers), config,
      OracleMethod::PlainMC);
}

}  // namespace serial

}  // namespace tailscale

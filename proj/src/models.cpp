#include "tailscale/models.hpp"

#include <cmath>

#include "tailscale/errors.hpp"

namespace tailscale {

NegativeBinomial NegativeBinomial::from_p(double successes, double p) {
  if (!(p > 0.0 && p < 1.0)) throw ParamError("NB success probability must be in (0,1)");
  if (!(successes > 0.0)) throw ParamError("NB successes must be positive");
  return {successes, p, 1.0 - p};
}

NegativeBinomial NegativeBinomial::from_q(double successes, double q) {
  if (!(q > 0.0 && q < 1.0)) throw ParamError("NB failure probability must be in (0,1)");
  if (!(successes > 0.0)) throw ParamError("NB successes must be positive");
  return {successes, 1.0 - q, q};
}

WorkedModel WorkedModel::poisson_gamma(double lambda, double r, double mu) {
  if (!(lambda > 0 && r > 0 && mu > 0)) throw ParamError("worked model parameters must be positive");
  return WorkedModel(PoissonGammaParams{lambda, r, mu});
}

WorkedModel WorkedModel::gamma_poisson(double r, double mu, double lambda) {
  if (!(lambda > 0 && r > 0 && mu > 0)) throw ParamError("worked model parameters must be positive");
  return WorkedModel(GammaPoissonParams{r, mu, lambda});
}

std::optional<WorkedModel> WorkedModel::from_pair(const ModelPair& model) {
  const auto* pa = std::get_if<PoissonKind>(&model.A().kind());
  const auto* gb = std::get_if<GammaKind>(&model.B().kind());
  if (pa && gb && model.A().lattice_span() == 1.0)
    return poisson_gamma(pa->rate, gb->shape, gb->rate);
  const auto* ga = std::get_if<GammaKind>(&model.A().kind());
  const auto* pb = std::get_if<PoissonKind>(&model.B().kind());
  if (ga && pb && model.B().lattice_span() == 1.0)
    return gamma_poisson(ga->shape, ga->rate, pb->rate);
  return std::nullopt;
}

double WorkedModel::lambda() const {
  return std::visit([](const auto& p) { return p.lambda; }, params_);
}
double WorkedModel::r() const {
  return std::visit([](const auto& p) { return p.r; }, params_);
}
double WorkedModel::mu() const {
  return std::visit([](const auto& p) { return p.mu; }, params_);
}

double WorkedModel::rho(double u) const { return lambda() * r() / (mu() * u); }

ModelPair WorkedModel::pair() const {
  if (is_poisson_gamma())
    return ModelPair(CharExponent::poisson(lambda()), CharExponent::gamma(r(), mu()));
  return ModelPair(CharExponent::gamma(r(), mu()), CharExponent::poisson(lambda()));
}

std::vector<double> exp_series(const std::vector<double>& g, int K) {
  std::vector<double> h(K + 1, 0.0);
  h[0] = 1.0;
  for (int k = 1; k <= K; ++k) {
    double s = 0.0;
    for (int j = 1; j <= k && j < static_cast<int>(g.size()); ++j) s += j * g[j] * h[k - j];
    h[k] = s / k;
  }
  return h;
}

namespace {

void check_order(int K) {
  if (K < 1) throw ParamError("series order must be at least 1");
}

double signed_power_diff(double z1, double z2, int k) {
  // ((-1)^{k+1}/k)(z1^k - z2^k)
  const double sign = (k % 2 == 1) ? 1.0 : -1.0;
  return sign * (std::pow(z1, k) - std::pow(z2, k)) / k;
}

}  // namespace

FastSeries fast_series_coeffs(const WorkedModel& model, double u, int K_max) {
  check_order(K_max);
  const double rho = model.rho(u);
  if (!(rho < 1.0)) throw NotRareError("rho must be below 1");
  const double lam = model.lambda(), r = model.r(), mu = model.mu();

  FastSeries s;
  s.theta_star = model.is_poisson_gamma() ? -std::log(rho) : mu * (1.0 - rho);
  s.v.assign(K_max + 1, 0.0);
  s.vbar.assign(K_max + 1, 0.0);
  s.v[0] = s.theta_star;

  if (model.is_poisson_gamma()) {
    const double z1 = lam / mu, z2 = u / r;
    for (int k = 1; k <= K_max; ++k) s.v[k] = signed_power_diff(z1, z2, k);
    for (int k = 2; k <= K_max; ++k) s.vbar[k] = -(r * s.v[k] + u * s.v[k - 1]);
  } else {
    // theta(psi) = mu (1 - rho exp(L sum_{j>=1} (-r psi)^j)), L = log rho
    const double L = std::log(rho);
    std::vector<double> g(K_max + 1, 0.0);
    for (int j = 1; j <= K_max; ++j) g[j] = L * std::pow(-r, j);
    const auto h = exp_series(g, K_max);
    for (int k = 1; k <= K_max; ++k) s.v[k] = -mu * rho * h[k];
    for (int k = 2; k <= K_max; ++k) s.vbar[k] = -u * (s.v[k] / r + s.v[k - 1]);
  }
  return s;
}

SlowSeries slow_series_coeffs(const WorkedModel& model, double u, int K_max) {
  check_order(K_max);
  const double rho = model.rho(u);
  if (!(rho < 1.0)) throw NotRareError("rho must be below 1");
  const double lam = model.lambda(), r = model.r(), mu = model.mu();
  const int K = K_max + 1;

  SlowSeries s;
  s.w.assign(K + 1, 0.0);
  s.wbar.assign(K_max + 1, 0.0);

  if (model.is_poisson_gamma()) {
    const double z1 = mu / lam, z2 = r / u;
    for (int k = 1; k <= K; ++k) s.w[k] = signed_power_diff(z1, z2, k);
    for (int k = 1; k <= K_max; ++k) s.wbar[k] = -(r * s.w[k] + u * s.w[k + 1]);
  } else {
    // theta(x)/x with x = 1/psi: -mu/x (exp(L sum_{j>=1} (-1)^{j+1} (x/r)^j) - 1)
    const double L = std::log(rho);
    std::vector<double> g(K + 1, 0.0);
    for (int j = 1; j <= K; ++j) g[j] = L * ((j % 2 == 1) ? 1.0 : -1.0) / std::pow(r, j);
    const auto h = exp_series(g, K);
    for (int k = 1; k <= K; ++k) s.w[k] = -mu * h[k];
    for (int k = 1; k <= K_max; ++k) s.wbar[k] = -u * (s.w[k] / r + s.w[k + 1]);
  }
  s.tau_star = s.w[1];
  return s;
}

ExactLaw exact_law(const WorkedModel& model, const PowerScaling& scaling, double n) {
  if (!(n > 0.0)) throw ParamError("n must be positive");
  const double phi = scaling.phi(n), psi = scaling.psi(n);
  if (model.is_poisson_gamma()) {
    const double lp = model.lambda() * psi;
    const double denom = model.mu() + lp;
    return NegativeBinomial{model.r() * phi, model.mu() / denom, lp / denom};
  }
  return CompoundPoissonGamma{phi * model.lambda(), model.r() * psi, model.mu()};
}

double negbin_lmgf(const NegativeBinomial& nb, double theta) {
  const double qe = nb.q * std::exp(theta);
  if (!(qe < 1.0)) throw DomainError("NB mgf diverges for q e^theta >= 1");
  return nb.successes * (std::log1p(-nb.q) - std::log1p(-qe));
}

}  // namespace tailscale

#include "tailscale/edgeworth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tailscale/errors.hpp"
#include "tailscale/oracle.hpp"
#include "tailscale/twist.hpp"

namespace tailscale {

std::string to_string(EdgeworthBranch branch) {
  switch (branch) {
    case EdgeworthBranch::SmallPsiSqrtN: return "small_psi_sqrt_n";
    case EdgeworthBranch::LargePsiSqrtN: return "large_psi_sqrt_n";
    case EdgeworthBranch::SmallPhi32OverN: return "small_phi32_over_n";
    default: return "large_phi32_over_n";
  }
}

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double hermite(int k, double x) {
  switch (k) {
    case 0: return 1.0;
    case 1: return x;
    case 2: return x * x - 1.0;
    case 3: return x * x * x - 3.0 * x;
    default: throw OrderError("hermite order must be 0..3");
  }
}

double EdgeworthExpansion::cdf(double x) const {
  const double pdf = normal_pdf(x);
  double out = normal_cdf(x) - pdf * hermite(2, x) * kappa / root_scale;
  if (c1) out -= pdf * hermite(1, x) * (*c1) * correction_scale;
  return out;
}

EdgeworthExpansion edgeworth_expansion(const ModelPair& model, const PowerScaling& scaling,
                                       double n, double u) {
  const auto info = classify(scaling);
  if (info.regime == Regime::SingleTimescale)
    throw RegimeError("no Edgeworth expansion at f = 1");
  if (!(n >= 1.0)) throw ParamError("n must be >= 1");
  const auto& A = model.A();
  const auto& B = model.B();
  const double psi = scaling.psi(n);
  EdgeworthExpansion e{};
  e.regime = info.regime;
  e.center = u * n;

  if (info.regime == Regime::Fast) {
    const auto fe = fast_expansion(model, u, 1);
    const double ts = fe.theta_star, v1 = fe.v[1];
    const double b = B.eval(0.0, 1), b2 = B.eval(0.0, 2);
    const double al = A.eval(ts, 0), a1 = A.eval(ts, 1), a2 = A.eval(ts, 2), a3 = A.eval(ts, 3);
    const double s2 = b * a2;
    e.sigma = std::sqrt(s2);
    e.kappa = b * a3 / (6.0 * s2 * e.sigma);
    e.root_scale = std::sqrt(n);
    e.correction_scale = psi;
    e.sd = e.root_scale * e.sigma;
    if (*info.k_plus == 0) {
      e.branch = EdgeworthBranch::SmallPsiSqrtN;
    } else {
      e.branch = EdgeworthBranch::LargePsiSqrtN;
      const double g = b2 * a1 * a1 + b2 * al * a2 + b * a3 * v1;
      e.c1 = g / (2.0 * s2);
    }
    return e;
  }

  const double a = model.a();
  const double tau = slow_tau_star(model, u);
  const double y = a * tau;
  const double b1 = B.eval(y, 1), b2 = B.eval(y, 2), b3 = B.eval(y, 3);
  const double s2 = a * a * b2;
  e.sigma = std::sqrt(s2);
  e.kappa = b3 * a * a * a / (6.0 * s2 * e.sigma);
  e.root_scale = std::sqrt(scaling.phi(n));
  e.correction_scale = 1.0 / psi;
  e.sd = psi * e.root_scale * e.sigma;
  if (*info.k_minus == 0) {
    e.branch = EdgeworthBranch::SmallPhi32OverN;
  } else {
    e.branch = EdgeworthBranch::LargePhi32OverN;
    double w2;
    if (auto wm = WorkedModel::from_pair(model))
      w2 = slow_series_coeffs(*wm, u, 2).w[2];
    else
      w2 = slow_expansion(model, u, 2).w[1];
    const double ap = A.eval(0.0, 2);
    const double g = b1 * ap + 2.0 * a * ap * b2 * tau + 0.5 * a * a * ap * b3 * tau * tau +
                     a * a * a * b3 * w2;
    e.c1 = g / (2.0 * s2);
  }
  return e;
}

double tilted_cdf_approx(const ModelPair& model, const PowerScaling& scaling, double n,
                         double u, double x) {
  return edgeworth_expansion(model, scaling, n, u).cdf(x);
}

ExactLaw tilted_law(const WorkedModel& model, const PowerScaling& scaling, double n,
                    double theta) {
  const double phi = scaling.phi(n), psi = scaling.psi(n);
  const double lam = model.lambda(), r = model.r(), mu = model.mu();
  if (model.is_poisson_gamma()) {
    const double lp = lam * psi;
    const double denom = mu + lp;
    const double p = (mu - lp * std::expm1(theta)) / denom;
    const double q = lp * std::exp(theta) / denom;
    if (!(p > 0.0)) throw DomainError("tilt outside the NB mgf domain");
    return NegativeBinomial{r * phi, p, q};
  }
  if (!(theta < mu)) throw DomainError("tilt outside the Gamma mgf domain");
  const double al = -r * std::log1p(-theta / mu);
  return CompoundPoissonGamma{lam * phi * std::exp(al * psi), r * psi, mu - theta};
}

EdgeworthDiagnostic edgeworth_diagnostic(const WorkedModel& model, const PowerScaling& scaling,
                                         double n, double u, double x_min, double x_max,
                                         int grid_points) {
  if (!(x_max > x_min) || grid_points < 2) throw ParamError("invalid diagnostic grid");
  const auto pair = model.pair();
  const auto e = edgeworth_expansion(pair, scaling, n, u);
  const double theta = solve_twist(pair, scaling, n, u).theta_n;
  const auto law = tilted_law(model, scaling, n, theta);

  EdgeworthDiagnostic out{e, {}, 0.0, 0.0};
  if (const auto* nb = std::get_if<NegativeBinomial>(&law)) {
    // running CDF over every jump point in range
    const double c_lo = std::max(0.0, std::ceil(e.center + x_min * e.sd));
    const double c_hi = std::floor(e.center + x_max * e.sd);
    double F = negbin_cdf(*nb, c_lo);
    for (double c = c_lo; c <= c_hi; c += 1.0) {
      if (c > c_lo) F += std::exp(negbin_log_pmf(*nb, c));
      const double x = (c + 0.5 - e.center) / e.sd;
      out.sup_gap = std::max(out.sup_gap, std::abs(e.cdf(x) - F));
    }
    for (int i = 0; i < grid_points; ++i) {
      const double xg = x_min + (x_max - x_min) * i / (grid_points - 1);
      const double c = std::floor(e.center + xg * e.sd);
      const double x = (c + 0.5 - e.center) / e.sd;
      out.grid.push_back({x, e.cdf(x), negbin_cdf(*nb, c)});
    }
  } else {
    const auto& cp = std::get<CompoundPoissonGamma>(law);
    auto exact = [&](double x) {
      const double c = e.center + x * e.sd;
      if (c <= 0.0) return 0.0;
      return 1.0 - compound_poisson_gamma_tail(cp, c).probability;
    };
    const int dense = 201;
    for (int i = 0; i < dense; ++i) {
      const double x = x_min + (x_max - x_min) * i / (dense - 1);
      out.sup_gap = std::max(out.sup_gap, std::abs(e.cdf(x) - exact(x)));
    }
    for (int i = 0; i < grid_points; ++i) {
      const double x = x_min + (x_max - x_min) * i / (grid_points - 1);
      out.grid.push_back({x, e.cdf(x), exact(x)});
    }
  }
  out.scaled_sup_gap = out.sup_gap * e.root_scale;
  return out;
}

}  // namespace tailscale

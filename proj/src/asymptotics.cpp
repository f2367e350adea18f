#include "tailscale/asymptotics.hpp"

#include <cfloat>
#include <cmath>
#include <numbers>

#include "tailscale/errors.hpp"
#include "tailscale/models.hpp"
#include "tailscale/twist.hpp"

namespace tailscale {

namespace {

const double kLogSqrt2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

double safe_exp(double x) { return x < std::log(DBL_MIN) ? 0.0 : std::exp(x); }

int floor_tol(double x) { return static_cast<int>(std::floor(x + 1e-12)); }

// log(d / (1 - e^{-t d})), or -log t for d = 0
double log_lattice_factor(double t, double d) {
  if (d == 0.0) return -std::log(t);
  return std::log(d) - std::log(-std::expm1(-t * d));
}

WorkedModel require_worked(const ModelPair& model) {
  auto wm = WorkedModel::from_pair(model);
  if (!wm) throw SeriesUnavailable("series mode needs a Poisson/Gamma worked model");
  return *wm;
}

int series_order(const EvalMode& mode, std::optional<int> theory_default) {
  if (mode.order == 0) return theory_default.value_or(0);
  if (mode.order == EvalMode::kAdaptive) return kDefaultSeriesOrder;
  if (mode.order < 0) throw ParamError("series order must be positive, 0 or adaptive");
  return mode.order;
}

void finish(AsymptoticEstimate& est, double log_prefactor) {
  est.prefactor = std::exp(log_prefactor);
  double s = log_prefactor;
  for (const auto& t : est.exponent_terms) s += t.value;
  est.log_value = s;
  est.value = safe_exp(s);
}

}  // namespace

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::Fast: return "fast";
    case Regime::Slow: return "slow";
    default: return "single";
  }
}

std::string EvalMode::describe() const {
  if (kind == Kind::Direct) return "direct";
  if (order == kAdaptive) return "series(adaptive)";
  if (order == 0) return "series(default)";
  return "series(" + std::to_string(order) + ")";
}

RegimeInfo classify(const PowerScaling& scaling) {
  const double f = scaling.f();
  RegimeInfo info{};
  if (f > 1.0) {
    info.regime = Regime::Fast;
    info.m_plus = floor_tol(f / (f - 1.0));
    info.k_plus = floor_tol(0.5 / (f - 1.0));
  } else if (f < 1.0) {
    info.regime = Regime::Slow;
    info.m_minus = floor_tol(f / (1.0 - f));
    info.k_minus = floor_tol(f / (2.0 * (1.0 - f)));
  } else {
    info.regime = Regime::SingleTimescale;
  }
  return info;
}

double lattice_factor(double t, double d) { return std::exp(log_lattice_factor(t, d)); }

double direct_exponent(const ModelPair& model, const PowerScaling& scaling, double n,
                       double u) {
  const auto sol = solve_twist(model, scaling, n, u);
  return lmgf_Cn(model, scaling, n, sol.theta_n) - sol.theta_n * u * n;
}

bool lattice_applicable(const ModelPair& model, const PowerScaling& scaling) {
  return scaling.f() < 1.0 ? model.B().lattice_span() > 0.0
                           : model.A().lattice_span() > 0.0;
}

AsymptoticEstimate approx_fast(const ModelPair& model, const PowerScaling& scaling,
                               double n, double u, EvalMode mode, bool lattice) {
  const auto info = classify(scaling);
  if (info.regime != Regime::Fast) throw RegimeError("fast regime requires f > 1");
  if (!(n >= 1.0)) throw ParamError("n must be >= 1");
  const double d = model.A().lattice_span();
  if (lattice && d == 0.0) throw LatticeError("A is not lattice");

  AsymptoticEstimate est{};
  est.regime = Regime::Fast;
  est.mode = mode;
  est.lattice_adjusted = lattice;

  const double b = model.b();
  std::optional<FastSeries> fs;
  double ts;
  if (mode.kind == EvalMode::Kind::Series) {
    const int M = series_order(mode, info.m_plus);
    fs = fast_series_coeffs(require_worked(model), u, std::max(M, 1));
    ts = fs->theta_star;
  } else {
    ts = fast_theta_star(model, u);
  }
  const double sigma = std::sqrt(b * model.A().eval(ts, 2));
  est.leading_tilt = ts;
  est.sigma = sigma;

  const double linear = (b * model.A().eval(ts, 0) - ts * u) * n;
  est.exponent_terms.push_back({"linear", linear});

  if (mode.kind == EvalMode::Kind::Direct) {
    est.exponent_terms.push_back({"sublinear", direct_exponent(model, scaling, n, u) - linear});
  } else {
    const double lphi = scaling.log_phi(n), lpsi = scaling.log_psi(n);
    double total = linear;
    for (int k = 2; k <= fs->order(); ++k) {
      const double term = fs->vbar[k] * std::exp(lphi + k * lpsi);
      est.exponent_terms.push_back({"k=" + std::to_string(k), term});
      total += term;
      if (mode.order == EvalMode::kAdaptive && std::abs(term) < 1e-15 * std::abs(total)) break;
    }
  }

  const double log_pref = (lattice ? log_lattice_factor(ts, d) : -std::log(ts)) -
                          std::log(sigma) - kLogSqrt2Pi - 0.5 * std::log(n);
  finish(est, log_pref);
  return est;
}

AsymptoticEstimate approx_slow(const ModelPair& model, const PowerScaling& scaling,
                               double n, double u, EvalMode mode, bool lattice) {
  const auto info = classify(scaling);
  if (info.regime != Regime::Slow) throw RegimeError("slow regime requires f < 1");
  if (!(n >= 1.0)) throw ParamError("n must be >= 1");
  const double a = model.a();
  if (!(a > 0.0)) throw UnsupportedSignError("slow regime requires a > 0");
  const double d = model.B().lattice_span();
  if (lattice && d == 0.0) throw LatticeError("B is not lattice");

  AsymptoticEstimate est{};
  est.regime = Regime::Slow;
  est.mode = mode;
  est.lattice_adjusted = lattice;

  std::optional<SlowSeries> ss;
  double tau;
  if (mode.kind == EvalMode::Kind::Series) {
    const int M = series_order(mode, info.m_minus);
    ss = slow_series_coeffs(require_worked(model), u, std::max(M, 1));
    ss->wbar.resize(M + 1);
    tau = ss->tau_star;
  } else {
    tau = slow_tau_star(model, u);
  }
  const double sigma = a * std::sqrt(model.B().eval(a * tau, 2));
  est.leading_tilt = tau;
  est.sigma = sigma;

  const double lphi = scaling.log_phi(n), lpsi = scaling.log_psi(n);
  const double linear = (model.B().eval(a * tau, 0) - tau * u) * std::exp(lphi);
  est.exponent_terms.push_back({"linear", linear});

  if (mode.kind == EvalMode::Kind::Direct) {
    est.exponent_terms.push_back({"sublinear", direct_exponent(model, scaling, n, u) - linear});
  } else {
    double total = linear;
    for (int k = 1; k <= ss->order(); ++k) {
      const double term = ss->wbar[k] * std::exp(lphi - k * lpsi);
      est.exponent_terms.push_back({"k=" + std::to_string(k), term});
      total += term;
      if (mode.order == EvalMode::kAdaptive && std::abs(term) < 1e-15 * std::abs(total)) break;
    }
  }

  const double log_tail = lattice ? log_lattice_factor(a * tau, d) + std::log(a)
                                  : -std::log(tau);
  finish(est, log_tail - std::log(sigma) - kLogSqrt2Pi - 0.5 * lphi);
  return est;
}

AsymptoticEstimate approx_single_timescale(const ModelPair& model, double n, double u,
                                           bool lattice) {
  if (!(n >= 1.0)) throw ParamError("n must be >= 1");
  const double d = model.A().lattice_span();
  if (lattice && d == 0.0) throw LatticeError("A is not lattice");
  const double ts = solve_tilt(model, 1.0, u).theta_n;
  const auto& A = model.A();
  const auto& B = model.B();
  const double al = A.eval(ts, 0), a1 = A.eval(ts, 1), a2 = A.eval(ts, 2);
  const double sigma = std::sqrt(B.eval(al, 2) * a1 * a1 + B.eval(al, 1) * a2);

  AsymptoticEstimate est{};
  est.regime = Regime::SingleTimescale;
  est.mode = EvalMode::direct();
  est.lattice_adjusted = lattice;
  est.leading_tilt = ts;
  est.sigma = sigma;
  est.exponent_terms.push_back({"linear", (B.eval(al, 0) - ts * u) * n});
  const double log_pref = (lattice ? log_lattice_factor(ts, d) : -std::log(ts)) -
                          std::log(sigma) - kLogSqrt2Pi - 0.5 * std::log(n);
  finish(est, log_pref);
  return est;
}

AsymptoticEstimate approx(const ModelPair& model, const PowerScaling& scaling, double n,
                          double u, EvalMode mode, bool lattice) {
  switch (classify(scaling).regime) {
    case Regime::Fast: return approx_fast(model, scaling, n, u, mode, lattice);
    case Regime::Slow: return approx_slow(model, scaling, n, u, mode, lattice);
    default: return approx_single_timescale(model, n, u, lattice);
  }
}

LogRates log_asymptote(const ModelPair& model, const PowerScaling& scaling, double u) {
  const auto regime = classify(scaling).regime;
  if (regime == Regime::Slow) {
    const double tau = slow_tau_star(model, u);
    return {std::nullopt, model.B().eval(model.a() * tau, 0) - tau * u};
  }
  if (regime == Regime::Fast) {
    const double ts = fast_theta_star(model, u);
    return {model.b() * model.A().eval(ts, 0) - ts * u, std::nullopt};
  }
  const double ts = solve_tilt(model, 1.0, u).theta_n;
  return {model.B().eval(model.A().eval(ts, 0), 0) - ts * u, std::nullopt};
}

}  // namespace tailscale

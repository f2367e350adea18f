#include "tailscale/twist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "root.hpp"
#include "tailscale/errors.hpp"

namespace tailscale {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_rare(const ModelPair& model, double u) {
  if (!std::isfinite(u)) throw ParamError("u must be finite");
  if (!(u > model.a() * model.b()))
    throw NotRareError("threshold u must exceed a*b (the mean rate)");
}

// Solves alpha(theta) = target for theta in (0, sup_A).
double alpha_inverse(const CharExponent& A, double target) {
  if (const auto* p = std::get_if<PoissonKind>(&A.kind()))
    return std::log1p(target / p->rate) / A.lattice_span();
  if (const auto* g = std::get_if<GammaKind>(&A.kind()))
    return -g->rate * std::expm1(-target / g->shape);
  try {
    auto gd = [&](double t) { return std::pair{A.eval(t, 0) - target, A.eval(t, 1)}; };
    return detail::increasing_root(gd, 0.0, 1.0, A.domain_sup(), std::abs(target)).x;
  } catch (const NoSolutionError&) {
    return A.domain_sup();
  }
}

}  // namespace

double admissible_sup(const ModelPair& model, double psi) {
  const double supA = model.A().domain_sup();
  const double supB = model.B().domain_sup();
  if (!std::isfinite(supB)) return supA;
  return std::min(supA, alpha_inverse(model.A(), supB / psi));
}

double fast_theta_star(const ModelPair& model, double u) {
  require_rare(model, u);
  const double b = model.b();
  const auto& A = model.A();
  auto gd = [&](double t) { return std::pair{b * A.eval(t, 1) - u, b * A.eval(t, 2)}; };
  return detail::increasing_root(gd, 0.0, 1.0, A.domain_sup(), u).x;
}

double slow_tau_star(const ModelPair& model, double u) {
  const double a = model.a();
  if (!(a > 0.0)) throw UnsupportedSignError("slow regime requires a > 0");
  require_rare(model, u);
  const auto& B = model.B();
  auto gd = [&](double t) {
    return std::pair{a * B.eval(a * t, 1) - u, a * a * B.eval(a * t, 2)};
  };
  return detail::increasing_root(gd, 0.0, 1.0, B.domain_sup() / a, u).x;
}

TwistSolution solve_tilt(const ModelPair& model, double psi, double u) {
  require_rare(model, u);
  if (!(psi > 0.0) || !std::isfinite(psi)) throw ParamError("psi must be positive");
  const auto& A = model.A();
  const auto& B = model.B();
  const double theta_max = admissible_sup(model, psi);

  double guess = 1.0;
  try {
    guess = fast_theta_star(model, u) + 1.0;
  } catch (const NoSolutionError&) {
  }

  auto gd = [&](double t) {
    const double y = A.eval(t, 0) * psi;
    const double a1 = A.eval(t, 1);
    const double b1 = B.eval(y, 1);
    return std::pair{b1 * a1 - u, psi * B.eval(y, 2) * a1 * a1 + b1 * A.eval(t, 2)};
  };
  auto r = detail::increasing_root(gd, 0.0, guess, theta_max, u);
  const double residual = std::abs(gd(r.x).first) / u;
  if (!(residual <= 1e-10))
    throw NoSolutionError("tilting equation did not converge");
  return {r.x, residual, r.iterations, {r.lo, r.hi}};
}

TwistSolution solve_twist(const ModelPair& model, const PowerScaling& scaling, double n,
                          double u) {
  if (!(n >= 1.0) || !std::isfinite(n)) throw ParamError("n must be >= 1");
  return solve_tilt(model, scaling.psi(n), u);
}

FastExpansion fast_expansion(const ModelPair& model, double u, int order) {
  if (order < 0 || order > 2) throw OrderError("fast expansion order must be 0..2");
  const double ts = fast_theta_star(model, u);
  FastExpansion out{ts, {ts}, order};
  if (order == 0) return out;

  const auto& A = model.A();
  const auto& B = model.B();
  const double b = B.eval(0.0, 1);
  const double b2 = B.eval(0.0, 2);
  const double al = A.eval(ts, 0);
  const double a1 = A.eval(ts, 1);
  const double a2 = A.eval(ts, 2);
  const double v1 = -(al * a1 / a2) * (b2 / b);
  out.v.push_back(v1);
  if (order == 1) return out;

  const double a3 = A.eval(ts, 3);
  const double b3 = B.eval(0.0, 3);
  const double v2 = -(0.5 * b * a3 * v1 * v1 + b2 * (al * a2 + a1 * a1) * v1 +
                      0.5 * b3 * al * al * a1) /
                    (b * a2);
  out.v.push_back(v2);
  return out;
}

SlowExpansion slow_expansion(const ModelPair& model, double u, int order) {
  if (order < 0 || order > 2) throw OrderError("slow expansion order must be 0..2");
  const double tau = slow_tau_star(model, u);
  SlowExpansion out{tau, {tau}, std::max(order, 1)};
  if (order < 2) return out;

  // D(x) = (theta(x)/x - tau*)/x -> w_2 as x -> 0, with theta(x) the tilt at psi = 1/x.
  auto theta_over_x = [&](double x) { return solve_tilt(model, 1.0 / x, u).theta_n / x; };
  double h = 1.0;
  for (int i = 0; i < 40; ++i) {
    if (std::abs(theta_over_x(h) / tau - 1.0) <= 1e-3) break;
    h /= 10.0;
  }
  auto D = [&](double x) { return (theta_over_x(x) - tau) / x; };
  const double d1 = D(h), d2 = D(h / 2.0), d4 = D(h / 4.0);
  out.w.push_back((8.0 * d4 - 6.0 * d2 + d1) / 3.0);
  return out;
}

}  // namespace tailscale

#include "tailscale/levy.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "tailscale/errors.hpp"

namespace tailscale {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw ParamError(std::string(what) + " must be positive and finite");
}

}  // namespace

CharExponent::CharExponent(ExponentKind kind, double sup, double span)
    : kind_(std::move(kind)), sup_(sup), span_(span) {}

CharExponent CharExponent::poisson(double rate, double span) {
  require_positive(rate, "Poisson rate");
  require_positive(span, "Poisson lattice span");
  return CharExponent(PoissonKind{rate}, std::numeric_limits<double>::infinity(), span);
}

CharExponent CharExponent::gamma(double shape, double rate) {
  require_positive(shape, "Gamma shape");
  require_positive(rate, "Gamma rate");
  return CharExponent(GammaKind{shape, rate}, rate, 0.0);
}

CharExponent CharExponent::custom(std::function<double(double, int)> evaluator,
                                  double domain_sup, double lattice_span) {
  if (!evaluator) throw ParamError("custom exponent needs an evaluator");
  if (!(domain_sup > 0.0)) throw ParamError("custom exponent domain must contain 0");
  if (!(lattice_span >= 0.0) || !std::isfinite(lattice_span))
    throw ParamError("lattice span must be non-negative");
  double at0 = evaluator(0.0, 0);
  if (at0 != 0.0) throw ParamError("custom exponent must vanish at 0");
  return CharExponent(CustomKind{std::move(evaluator)}, domain_sup, lattice_span);
}

double CharExponent::eval(double theta, int order) const {
  if (order < 0 || order > 3) throw OrderError("derivative order must be in 0..3");
  if (!(theta < sup_)) throw DomainError("theta outside the exponent's domain");

  if (const auto* p = std::get_if<PoissonKind>(&kind_)) {
    // jumps of size span: alpha = rate (e^{d theta} - 1)
    const double d = span_;
    if (order == 0) return p->rate * std::expm1(d * theta);
    return p->rate * std::pow(d, order) * std::exp(d * theta);
  }
  if (const auto* g = std::get_if<GammaKind>(&kind_)) {
    const double gap = g->rate - theta;
    switch (order) {
      case 0: return -g->shape * std::log1p(-theta / g->rate);
      case 1: return g->shape / gap;
      case 2: return g->shape / (gap * gap);
      default: return 2.0 * g->shape / (gap * gap * gap);
    }
  }
  return std::get<CustomKind>(kind_).evaluator(theta, order);
}

std::string CharExponent::describe() const {
  std::ostringstream os;
  if (const auto* p = std::get_if<PoissonKind>(&kind_)) {
    os << "Poisson(rate=" << p->rate;
    if (span_ != 1.0) os << ", d=" << span_;
    os << ")";
  } else if (const auto* g = std::get_if<GammaKind>(&kind_)) {
    os << "Gamma(shape=" << g->shape << ", rate=" << g->rate << ")";
  } else {
    os << "Custom";
  }
  return os.str();
}

double eval(const CharExponent& exponent, double theta, int order) {
  return exponent.eval(theta, order);
}

ModelPair::ModelPair(CharExponent A, CharExponent B) : A_(std::move(A)), B_(std::move(B)) {
  if (!(b() > 0.0)) throw ParamError("B must be a subordinator with positive mean");
  if (!std::isfinite(a())) throw ParamError("A must have a finite mean");
}

PowerScaling::PowerScaling(double f) : f_(f) {
  if (!(f > 0.0) || !std::isfinite(f)) throw ParamError("scaling exponent f must be positive");
}

double PowerScaling::log_phi(double n) const { return f_ * std::log(n); }
double PowerScaling::log_psi(double n) const { return (1.0 - f_) * std::log(n); }
double PowerScaling::phi(double n) const { return std::exp(log_phi(n)); }
double PowerScaling::psi(double n) const { return std::exp(log_psi(n)); }

double lmgf_Cn(const ModelPair& model, const PowerScaling& scaling, double n,
               double theta, int order) {
  if (!(n > 0.0)) throw ParamError("n must be positive");
  if (order < 0 || order > 2) throw OrderError("lmgf_Cn supports orders 0..2");
  const double phi = scaling.phi(n);
  const double psi = scaling.psi(n);
  const double al = model.A().eval(theta, 0);
  const double arg = al * psi;
  if (!(arg < model.B().domain_sup()))
    throw DomainError("alpha(theta) psi_n leaves the domain of B's exponent");
  if (order == 0) return phi * model.B().eval(arg, 0);
  const double a1 = model.A().eval(theta, 1);
  const double b1 = model.B().eval(arg, 1);
  if (order == 1) return n * b1 * a1;
  const double a2 = model.A().eval(theta, 2);
  const double b2 = model.B().eval(arg, 2);
  return n * psi * b2 * a1 * a1 + n * b1 * a2;
}

MeanVariance mean_variance_Cn(const ModelPair& model, const PowerScaling& scaling,
                              double n) {
  const double a = model.a();
  const double b = model.b();
  const double psi = scaling.psi(n);
  const double s2_minus = a * a * model.B().eval(0.0, 2);
  const double s2_plus = model.A().eval(0.0, 2) * b;
  return {n * a * b, n * psi * s2_minus + n * s2_plus};
}

}  // namespace tailscale

#pragma once

#include <functional>
#include <limits>
#include <string>
#include <variant>

namespace tailscale {

struct PoissonKind {
  double rate;
};

struct GammaKind {
  double shape;
  double rate;
};

// User-supplied exponent: evaluator(theta, order) must return the order-th
// derivative for order 0..3.
struct CustomKind {
  std::function<double(double, int)> evaluator;
};

using ExponentKind = std::variant<PoissonKind, GammaKind, CustomKind>;

/// Characteristic exponent log E exp(theta X(1)) of a Levy process.
class CharExponent {
 public:
  static CharExponent poisson(double rate, double span = 1.0);
  static CharExponent gamma(double shape, double rate);
  static CharExponent custom(std::function<double(double, int)> evaluator,
                             double domain_sup =
                                 std::numeric_limits<double>::infinity(),
                             double lattice_span = 0.0);

  /// order-th derivative at theta. Throws DomainError for theta >= domain_sup
  /// and OrderError for order outside 0..3.
  double eval(double theta, int order = 0) const;
  double operator()(double theta, int order = 0) const { return eval(theta, order); }

  /// Exclusive upper end of the domain (+inf if unbounded).
  double domain_sup() const { return sup_; }
  double lattice_span() const { return span_; }
  double mean() const { return eval(0.0, 1); }

  const ExponentKind& kind() const { return kind_; }
  bool is_poisson() const { return std::holds_alternative<PoissonKind>(kind_); }
  bool is_gamma() const { return std::holds_alternative<GammaKind>(kind_); }
  bool is_custom() const { return std::holds_alternative<CustomKind>(kind_); }

  std::string describe() const;

 private:
  CharExponent(ExponentKind kind, double sup, double span);

  ExponentKind kind_;
  double sup_;
  double span_;
};

double eval(const CharExponent& exponent, double theta, int order = 0);

/// Pair (A, B) with C_n = A(psi_n B(phi_n)).
class ModelPair {
 public:
  ModelPair(CharExponent A, CharExponent B);

  const CharExponent& A() const { return A_; }
  const CharExponent& B() const { return B_; }
  double a() const { return A_.eval(0.0, 1); }
  double b() const { return B_.eval(0.0, 1); }

 private:
  CharExponent A_;
  CharExponent B_;
};

/// phi_n = n^f, psi_n = n^(1-f).
class PowerScaling {
 public:
  explicit PowerScaling(double f);

  double f() const { return f_; }
  double log_phi(double n) const;
  double log_psi(double n) const;
  double phi(double n) const;
  double psi(double n) const;

 private:
  double f_;
};

/// gamma_n(theta) = phi_n beta(alpha(theta) psi_n) and its first two derivatives.
double lmgf_Cn(const ModelPair& model, const PowerScaling& scaling, double n,
               double theta, int order = 0);

struct MeanVariance {
  double mean;
  double variance;
};

MeanVariance mean_variance_Cn(const ModelPair& model, const PowerScaling& scaling,
                              double n);

}  // namespace tailscale

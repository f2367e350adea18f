#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tailscale/levy.hpp"
#include "tailscale/models.hpp"
#include "tailscale/oracle.hpp"

namespace tailscale {

/// P(C(K) >= u_bar) where C(K) is Poisson with mean Lambda_1 + ... + Lambda_K and
/// the Lambda_i are i.i.d. exponential with rate mu_bar.
struct ArrivalQuery {
  std::int64_t K;
  double u_bar;
  double mu_bar;

  ArrivalQuery(std::int64_t K, double u_bar, double mu_bar);
  /// K / (mu_bar u_bar)
  double rho() const { return static_cast<double>(K) / (mu_bar * u_bar); }
  bool is_rare() const { return rho() < 1.0; }
};

inline constexpr int kAdaptiveOrder = -1;

OracleResult pi_exact(const ArrivalQuery& q);

/// Poisson approximation without overdispersion: P(Pois(K / mu_bar) >= ceil(u_bar)).
double pi_pois(const ArrivalQuery& q);

enum class GammaThreshold {
  /// P(Erl(K, mu_bar) > u_bar - 1), the count event {C >= u_bar} = {C > u_bar - 1}.
  CountShifted,
  /// Q(K, mu_bar u_bar).
  Continuous,
};

double pi_gamma(const ArrivalQuery& q, GammaThreshold convention = GammaThreshold::CountShifted);

/// Fast-regime approximation with the exponent sum over k = 2..M (M = 1: empty sum).
/// kAdaptiveOrder adds terms until the increment drops below 1e-12 (at most 50); for a
/// divergent series it stops at the smallest increment.
double pi_fast(const ArrivalQuery& q, int M = kAdaptiveOrder);
/// Slow-regime approximation with the exponent sum over k = 1..M (M = 0: empty sum).
double pi_slow(const ArrivalQuery& q, int M = kAdaptiveOrder);

/// Order selected by the adaptive rule.
int adaptive_fast_order(const ArrivalQuery& q);
int adaptive_slow_order(const ArrivalQuery& q);

double pi_hat_fast(const ArrivalQuery& q);
double pi_hat_slow(const ArrivalQuery& q);

/// Poisson o Gamma model with lambda = r = 1 whose time-n tail equals the query:
/// f = log K / log n, u = u_bar / n, mu = mu_bar n^{1-f}.
struct ScaledModel {
  WorkedModel model;
  PowerScaling scaling;
  double n;
  double u;
};

ScaledModel scaled_model(const ArrivalQuery& q, double n);

struct TableRow {
  ArrivalQuery query;
  std::vector<double> values;
  std::vector<double> extra;
};

struct ApproxTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::string> extra_columns;
  std::vector<TableRow> rows;
};

ApproxTable reproduce_table1();
ApproxTable reproduce_table2();
std::array<ApproxTable, 2> reproduce_tables();

/// Scientific notation with the given number of significant digits, e.g. 1.90e-06.
std::string format_sci(double value, int digits = 3);

void write_csv(const ApproxTable& table, std::ostream& os, int digits = 3);
/// Full-precision JSON sidecar.
std::string table_json(const ApproxTable& table);

}  // namespace tailscale

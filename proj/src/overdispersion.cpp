#include "tailscale/overdispersion.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include <boost/math/special_functions/gamma.hpp>
#include <nlohmann/json.hpp>

#include "tailscale/errors.hpp"

namespace tailscale {

namespace {

constexpr int kMaxOrder = 50;
const double kLog2Pi = std::log(2.0 * std::numbers::pi);

void require_rare(const ArrivalQuery& q) {
  if (!q.is_rare()) throw NotRareError("rho = K/(mu_bar u_bar) must be below 1");
}

double fast_base(const ArrivalQuery& q) {
  const double rho = q.rho();
  return (1.0 - rho + std::log(rho)) * q.u_bar - std::log1p(-rho) -
         0.5 * (kLog2Pi + std::log(q.u_bar));
}

double slow_base(const ArrivalQuery& q) {
  const double rho = q.rho(), K = static_cast<double>(q.K);
  return (1.0 - 1.0 / rho - std::log(rho)) * K - std::log(1.0 / rho - 1.0) -
         0.5 * (kLog2Pi + std::log(K));
}

// (-1)^k (K t_k / k - u t_{k-1} / (k-1)), t_k = mu_bar^{-k} - (u/K)^k
double fast_increment(const ArrivalQuery& q, int k) {
  const double K = static_cast<double>(q.K), u = q.u_bar;
  auto t = [&](int j) { return std::pow(q.mu_bar, -j) - std::pow(u / K, j); };
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  return sign * (K * t(k) / k - u * t(k - 1) / (k - 1));
}

// (-1)^k (K t_k / k - u t_{k+1} / (k+1)), t_k = mu_bar^k - (K/u)^k
double slow_increment(const ArrivalQuery& q, int k) {
  const double K = static_cast<double>(q.K), u = q.u_bar;
  auto t = [&](int j) { return std::pow(q.mu_bar, j) - std::pow(K / u, j); };
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  return sign * (K * t(k) / k - u * t(k + 1) / (k + 1));
}

// Stops once an increment drops below 1e-12. When the series diverges (geometric
// ratio >= 1) it is only asymptotic, so stop before the first growing increment.
template <class Inc>
int adaptive_order(const ArrivalQuery& q, Inc inc, int first, bool divergent) {
  int M = first - 1;
  double prev = INFINITY;
  for (int k = first; k <= kMaxOrder; ++k) {
    const double d = std::abs(inc(q, k));
    if (divergent && d > prev) break;
    M = k;
    if (d < 1e-12) break;
    prev = d;
  }
  return M;
}

}  // namespace

ArrivalQuery::ArrivalQuery(std::int64_t K_, double u_bar_, double mu_bar_)
    : K(K_), u_bar(u_bar_), mu_bar(mu_bar_) {
  if (K < 1) throw ParamError("K must be a positive integer");
  if (!(u_bar > 0.0) || !std::isfinite(u_bar)) throw ParamError("u_bar must be positive");
  if (!(mu_bar > 0.0) || !std::isfinite(mu_bar)) throw ParamError("mu_bar must be positive");
}

OracleResult pi_exact(const ArrivalQuery& q) {
  const double denom = 1.0 + q.mu_bar;
  return negbin_tail(NegativeBinomial{static_cast<double>(q.K), q.mu_bar / denom, 1.0 / denom},
                     q.u_bar);
}

double pi_pois(const ArrivalQuery& q) {
  return poisson_upper_tail(static_cast<double>(q.K) / q.mu_bar, q.u_bar);
}

double pi_gamma(const ArrivalQuery& q, GammaThreshold convention) {
  const double K = static_cast<double>(q.K);
  const double x = convention == GammaThreshold::CountShifted ? q.u_bar - 1.0 : q.u_bar;
  if (x <= 0.0) return 1.0;
  return boost::math::gamma_q(K, q.mu_bar * x);
}

int adaptive_fast_order(const ArrivalQuery& q) {
  require_rare(q);
  return adaptive_order(q, fast_increment, 2, q.u_bar >= static_cast<double>(q.K));
}

int adaptive_slow_order(const ArrivalQuery& q) {
  require_rare(q);
  return adaptive_order(q, slow_increment, 1, q.mu_bar >= 1.0);
}

double pi_fast(const ArrivalQuery& q, int M) {
  require_rare(q);
  if (M == kAdaptiveOrder) M = adaptive_fast_order(q);
  if (M < 1) throw ParamError("fast truncation order must be >= 1");
  double s = fast_base(q);
  for (int k = 2; k <= M; ++k) s += fast_increment(q, k);
  return std::exp(s);
}

double pi_slow(const ArrivalQuery& q, int M) {
  require_rare(q);
  if (M == kAdaptiveOrder) M = adaptive_slow_order(q);
  if (M < 0) throw ParamError("slow truncation order must be >= 0");
  double s = slow_base(q);
  for (int k = 1; k <= M; ++k) s += slow_increment(q, k);
  return std::exp(s);
}

double pi_hat_fast(const ArrivalQuery& q) {
  require_rare(q);
  const double rho = q.rho();
  return std::exp((1.0 - rho + std::log(rho)) * q.u_bar);
}

double pi_hat_slow(const ArrivalQuery& q) {
  require_rare(q);
  const double rho = q.rho();
  return std::exp((1.0 - 1.0 / rho - std::log(rho)) * static_cast<double>(q.K));
}

ScaledModel scaled_model(const ArrivalQuery& q, double n) {
  if (!(n > 1.0)) throw ParamError("n must exceed 1");
  const double f = std::log(static_cast<double>(q.K)) / std::log(n);
  const double mu = q.mu_bar * std::pow(n, 1.0 - f);
  return {WorkedModel::poisson_gamma(1.0, 1.0, mu), PowerScaling(f), n, q.u_bar / n};
}

ApproxTable reproduce_table1() {
  ApproxTable t{"table1",
                {"pi", "pi_pois", "pi_hat_fast", "pi_fast_0", "pi_fast_1"},
                {},
                {}};
  const std::vector<ArrivalQuery> queries{{100000, 150, 1000}, {50000, 150, 500},
                                          {10000, 150, 100},   {5000, 150, 50},
                                          {1000, 150, 10}};
  t.rows.resize(queries.size(), TableRow{queries[0], {}, {}});
  const int rows = static_cast<int>(queries.size());
#pragma omp parallel for schedule(static)
  for (int i = 0; i < rows; ++i) {
    const auto& q = queries[i];
    t.rows[i] = TableRow{q,
                         {pi_exact(q).probability, pi_pois(q), pi_hat_fast(q), pi_fast(q, 1),
                          pi_fast(q, 2)},
                         {}};
  }
  return t;
}

ApproxTable reproduce_table2() {
  ApproxTable t{"table2",
                {"pi", "pi_gamma", "pi_hat_slow", "pi_slow_0", "pi_slow_1"},
                {"pi_gamma_continuous"},
                {}};
  const std::vector<ArrivalQuery> queries{{100, 150000, 0.001}, {100, 30000, 0.005},
                                          {100, 15000, 0.01},   {100, 3000, 0.05},
                                          {100, 1500, 0.1}};
  t.rows.resize(queries.size(), TableRow{queries[0], {}, {}});
  const int rows = static_cast<int>(queries.size());
#pragma omp parallel for schedule(static)
  for (int i = 0; i < rows; ++i) {
    const auto& q = queries[i];
    t.rows[i] = TableRow{q,
                         {pi_exact(q).probability, pi_gamma(q), pi_hat_slow(q), pi_slow(q, 0),
                          pi_slow(q, 1)},
                         {pi_gamma(q, GammaThreshold::Continuous)}};
  }
  return t;
}

std::array<ApproxTable, 2> reproduce_tables() { return {reproduce_table1(), reproduce_table2()}; }

std::string format_sci(double value, int digits) {
  if (digits < 1) throw ParamError("need at least one significant digit");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*e", digits - 1, value);
  return buf;
}

void write_csv(const ApproxTable& table, std::ostream& os, int digits) {
  os << "K,u_bar,mu_bar";
  for (const auto& c : table.columns) os << ',' << c;
  os << '\n';
  for (const auto& row : table.rows) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%lld,%.15g,%.15g", static_cast<long long>(row.query.K),
                  row.query.u_bar, row.query.mu_bar);
    os << buf;
    for (double v : row.values) os << ',' << format_sci(v, digits);
    os << '\n';
  }
}

std::string table_json(const ApproxTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json r{{"K", row.query.K}, {"u_bar", row.query.u_bar},
                     {"mu_bar", row.query.mu_bar}, {"rho", row.query.rho()}};
    for (std::size_t i = 0; i < table.columns.size(); ++i) r[table.columns[i]] = row.values[i];
    for (std::size_t i = 0; i < table.extra_columns.size(); ++i)
      r[table.extra_columns[i]] = row.extra[i];
    rows.push_back(r);
  }
  nlohmann::json doc{{"table", table.name}, {"columns", table.columns}, {"rows", rows}};
  return doc.dump(2);
}

}  // namespace tailscale

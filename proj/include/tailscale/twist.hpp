#pragma once

#include <utility>
#include <vector>

#include "tailscale/levy.hpp"

namespace tailscale {

struct TwistSolution {
  double theta_n;
  double residual;  // |gamma_n'(theta_n) - u n| / (u n)
  int iterations;
  std::pair<double, double> bracket;
};

/// Leading term theta* (b alpha'(theta*) = u) and corrections v_1, v_2 of the
/// fast-regime expansion theta_n = theta* + sum_k v_k psi_n^k.
struct FastExpansion {
  double theta_star;
  std::vector<double> v;  // v[0] = theta*, v[k] = v_k
  int truncation_order;
};

/// Slow-regime expansion theta_n psi_n = sum_k w_k psi_n^{1-k}, w_1 = tau*.
struct SlowExpansion {
  double tau_star;
  std::vector<double> w;  // w[0] = w_1 = tau*, w[1] = w_2
  int truncation_order;
};

/// Largest theta with alpha(theta) psi inside B's domain (and theta inside A's).
double admissible_sup(const ModelPair& model, double psi);

/// Solves beta'(alpha(theta) psi) alpha'(theta) = u for theta > 0. Depends on
/// (n, f) only through psi.
TwistSolution solve_tilt(const ModelPair& model, double psi, double u);

TwistSolution solve_twist(const ModelPair& model, const PowerScaling& scaling,
                          double n, double u);

/// Root of b alpha'(theta) = u.
double fast_theta_star(const ModelPair& model, double u);

/// Root of a beta'(a tau) = u. Requires a > 0.
double slow_tau_star(const ModelPair& model, double u);

FastExpansion fast_expansion(const ModelPair& model, double u, int order = 2);
SlowExpansion slow_expansion(const ModelPair& model, double u, int order = 2);

}  // namespace tailscale

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tailscale/asymptotics.hpp"
#include "tailscale/levy.hpp"
#include "tailscale/models.hpp"

namespace tailscale {

enum class EdgeworthBranch { SmallPsiSqrtN, LargePsiSqrtN, SmallPhi32OverN, LargePhi32OverN };

std::string to_string(EdgeworthBranch branch);

double normal_pdf(double x);
double normal_cdf(double x);
/// Probabilists' Hermite polynomial He_k, k = 0..3.
double hermite(int k, double x);

/// Leading-order Edgeworth expansion of the standardized tilted variable
/// (C_n - u n) / sd under the measure tilted at theta_n.
struct EdgeworthExpansion {
  Regime regime;
  double kappa;
  std::optional<double> c1;
  EdgeworthBranch branch;
  double root_scale;        // sqrt(n) (fast) or sqrt(phi_n) (slow)
  double correction_scale;  // psi_n (fast) or 1/psi_n (slow)
  double sigma;             // sigma_+^Q or sigma_-^Q
  double center;            // u n
  double sd;                // sqrt(n) sigma_+^Q or psi_n sqrt(phi_n) sigma_-^Q

  double cdf(double x) const;
};

EdgeworthExpansion edgeworth_expansion(const ModelPair& model, const PowerScaling& scaling,
                                       double n, double u);

double tilted_cdf_approx(const ModelPair& model, const PowerScaling& scaling, double n,
                         double u, double x);

/// Law of C_n under the measure tilted at theta: NB for Poisson o Gamma,
/// compound Poisson-Gamma for Gamma o Poisson.
ExactLaw tilted_law(const WorkedModel& model, const PowerScaling& scaling, double n,
                    double theta);

struct EdgeworthPoint {
  double x;
  double approx;
  double exact;
};

struct EdgeworthDiagnostic {
  EdgeworthExpansion expansion;
  std::vector<EdgeworthPoint> grid;  // reporting grid
  double sup_gap;                    // over every jump point (lattice) or a dense grid
  double scaled_sup_gap;             // sup_gap * root_scale
};

/// Compares the expansion with the exact tilted CDF on x in [x_min, x_max]. For
/// lattice laws the exact CDF is taken at integer c and the expansion at the
/// continuity-corrected x = (c + 1/2 - u n) / sd.
EdgeworthDiagnostic edgeworth_diagnostic(const WorkedModel& model, const PowerScaling& scaling,
                                         double n, double u, double x_min = -6.0,
                                         double x_max = 6.0, int grid_points = 25);

}  // namespace tailscale

#pragma once

#include <functional>
#include <vector>

#include "tbl/fredholm.hpp"

namespace tbl {

/// Image of (x, t, epsilon) under the scaling map, with the rounding needed to
/// land s on the lattice recorded.
struct ScalingPoint {
  double x = 0.0;
  double t = 1.0;
  double epsilon = 0.1;
  double L = 0.0;          // 1 / (eps^3 t^2)
  HalfInt s{1};            // nearest lattice point to 2/(eps^3 t^2) - x/(eps t)
  double rounding_shift = 0.0;  // s - s_real, in lattice units, |shift| <= 1/2
};

ScalingPoint scale_point(double x, double t, double epsilon, double L_cap = 300.0);

/// One-parameter profile family sigma_eps; the fermi family pins
/// u = exp(-eps t^{-2/3}) so that sigma_eps(l) = 1/(1+exp(-eps t^{-2/3} l)).
using SigmaFamily = std::function<SigmaProfile(double eps)>;

SigmaFamily fermi_family(double t);
SigmaFamily zero_family();

struct KdvPoint {
  double epsilon = 0.0;
  double L = 0.0;
  HalfInt s0{1};
  double x_star = 0.0;     // x adjusted so the base node is exactly on the lattice
  double residual = 0.0;   // the bilinear combination at (x_star, t)
  double d2 = 0.0, d4 = 0.0, dtx = 0.0;
  double noise_floor = 0.0;       // determinant-noise estimate for the combination
  bool noise_dominated = false;   // |residual| within 3x of the floor
};

/// Evaluates d_t d_x log F + (x/t) d_x^2 log F + (d_x^2 log F)^2 + (1/6) d_x^4 log F
/// on a 5x5 stencil per epsilon. Stencil nodes are chosen exactly on the
/// lattice: x steps are m_x lattice units at fixed t, and the five t-nodes
/// solve the scaling relation for s-targets k_s lattice units apart, so no
/// node needs rounding beyond the single base shift absorbed into x_star.
/// The caller asserts the trend (decreasing toward 0 as epsilon shrinks).
std::vector<KdvPoint> kdv_residual_diagnostic(double x, double t,
                                              const std::vector<double>& eps_list,
                                              const SigmaFamily& family, int m_x = 1,
                                              int k_s = 2, double det_eps = 1e-12,
                                              double L_cap = 300.0);

}  // namespace tbl

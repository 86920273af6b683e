#include "tbl/continuum.hpp"

#include <cmath>

#include "tbl/finitediff.hpp"

namespace tbl {

ScalingPoint scale_point(double x, double t, double epsilon, double L_cap) {
  if (!(t > 0.0) || !(epsilon > 0.0)) throw config_error("scale_point: need t, epsilon > 0");
  ScalingPoint p;
  p.x = x;
  p.t = t;
  p.epsilon = epsilon;
  p.L = 1.0 / (epsilon * epsilon * epsilon * t * t);
  if (p.L > L_cap)
    throw resource_limit_error("scale_point: L = " + std::to_string(p.L) + " exceeds cap " +
                               std::to_string(L_cap));
  const double s_real = 2.0 * p.L - x / (epsilon * t);
  p.s = HalfInt::nearest(s_real);
  p.rounding_shift = p.s.value() - s_real;
  return p;
}

SigmaFamily fermi_family(double t) {
  const double rate = std::pow(t, -2.0 / 3.0);
  return [rate](double eps) { return SigmaProfile::fermi(std::exp(-eps * rate)); };
}

SigmaFamily zero_family() {
  return [](double) { return SigmaProfile::table({}); };
}

std::vector<KdvPoint> kdv_residual_diagnostic(double x, double t,
                                              const std::vector<double>& eps_list,
                                              const SigmaFamily& family, int m_x, int k_s,
                                              double det_eps, double L_cap) {
  if (m_x < 1 || k_s < 1) throw config_error("kdv diagnostic: steps must be positive");
  std::vector<KdvPoint> out;
  out.reserve(eps_list.size());

  for (const double eps : eps_list) {
    const SigmaProfile sigma = family(eps);
    const ScalingPoint base = scale_point(x, t, eps, L_cap);

    KdvPoint pt;
    pt.epsilon = eps;
    pt.L = base.L;
    pt.s0 = base.s;
    // absorb the base rounding into x: s(x_star, t) = s0 exactly
    pt.x_star = (2.0 * base.L - base.s.value()) * eps * t;

    // five t-rows hitting s-targets s0 + j k_s exactly; w = 1/T solves
    // (2/eps^3) w^2 - (x_star/eps) w - s_j = 0
    std::vector<double> t_nodes(5);
    std::vector<double> dx_row(5);
    Eigen::MatrixXd f(5, 5);  // (row j, column i)
    std::vector<double> d1_rows(5);
    double d2 = 0.0, d4 = 0.0;
    for (int j = -2; j <= 2; ++j) {
      const double sj = base.s.value() + static_cast<double>(j * k_s);
      const double A = 2.0 / (eps * eps * eps);
      const double B = -pt.x_star / eps;
      const double C = -sj;
      const double disc = B * B - 4.0 * A * C;
      if (!(disc > 0.0)) throw resource_limit_error("kdv diagnostic: stencil leaves t > 0");
      const double w = (-B + std::sqrt(disc)) / (2.0 * A);
      const double tj = 1.0 / w;
      t_nodes[static_cast<std::size_t>(j + 2)] = tj;
      const double Lj = 1.0 / (eps * eps * eps * tj * tj);
      if (Lj > L_cap) throw resource_limit_error("kdv diagnostic: stencil exceeds the L cap");
      const HalfInt s_row = base.s + static_cast<std::int64_t>(j) * k_s;
      for (int i = -2; i <= 2; ++i) {
        const HalfInt sij = s_row - static_cast<std::int64_t>(i) * m_x;
        const GapResult g = gap_probability(Lj, sij, sigma, det_eps);
        if (g.at_floor)
          throw degenerate_determinant_error("kdv diagnostic: Q at floor inside the stencil");
        f(j + 2, i + 2) = g.log_q;
      }
      const double dxj = static_cast<double>(m_x) * eps * tj;
      dx_row[static_cast<std::size_t>(j + 2)] = dxj;
      const std::vector<double> xn = {-2.0 * dxj, -dxj, 0.0, dxj, 2.0 * dxj};
      const Eigen::VectorXd w1 = fd_weights(0.0, xn, 1);
      d1_rows[static_cast<std::size_t>(j + 2)] = w1.dot(f.row(j + 2));
      if (j == 0) {
        d2 = fd_weights(0.0, xn, 2).dot(f.row(2));
        d4 = fd_weights(0.0, xn, 4).dot(f.row(2));
      }
    }
    const Eigen::VectorXd wt = fd_weights(t_nodes[2], t_nodes, 1);
    double dtx = 0.0;
    for (int j = 0; j < 5; ++j) dtx += wt[j] * d1_rows[static_cast<std::size_t>(j)];

    pt.d2 = d2;
    pt.d4 = d4;
    pt.dtx = dtx;
    pt.residual = dtx + (pt.x_star / t_nodes[2]) * d2 + d2 * d2 + d4 / 6.0;

    const double dx0 = dx_row[2];
    const double dt_min = std::min(std::fabs(t_nodes[3] - t_nodes[2]),
                                   std::fabs(t_nodes[2] - t_nodes[1]));
    pt.noise_floor = det_eps * (16.0 / std::pow(dx0, 4) + 30.0 / (dx0 * dx0) +
                                1.0 / (dx0 * dt_min));
    pt.noise_dominated = std::fabs(pt.residual) < 3.0 * pt.noise_floor;
    out.push_back(pt);
  }
  return out;
}

}  // namespace tbl

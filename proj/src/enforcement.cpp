#include "circmech/enforcement.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "circmech/minimize.hpp"

namespace circmech {

void validate(const EnforcementParams& p) {
  if (!(p.cost_coeff > 0.0))
    throw std::invalid_argument("enforcement: cost_coeff must be > 0");
  if (!(p.cost_exponent >= 1.0))
    throw std::invalid_argument("enforcement: cost_exponent must be >= 1");
  if (!(p.risk_scale > 0.0))
    throw std::invalid_argument("enforcement: risk_scale must be > 0");
  if (!(p.trust_decay > 0.0))
    throw std::invalid_argument("enforcement: trust_decay must be > 0");
  if (!(p.security_scale > 0.0))
    throw std::invalid_argument("enforcement: security_scale must be > 0");
}

double cost(const EnforcementParams& p, double security) {
  validate(p);
  if (security < 0.0) throw std::domain_error("cost: security < 0");
  return p.cost_coeff * std::pow(security, p.cost_exponent);
}

double cost_derivative(const EnforcementParams& p, double security) {
  validate(p);
  if (security < 0.0) throw std::domain_error("cost_derivative: security < 0");
  if (p.cost_exponent == 1.0) return p.cost_coeff;
  return p.cost_coeff * p.cost_exponent *
         std::pow(security, p.cost_exponent - 1.0);
}

double residual_risk(const EnforcementParams& p, double security, double tau) {
  validate(p);
  if (security < 0.0) throw std::domain_error("residual_risk: security < 0");
  if (tau < 0.0) throw std::domain_error("residual_risk: tau < 0");
  return p.risk_scale * std::exp(-p.trust_decay * tau) *
         std::exp(-security / p.security_scale);
}

double risk_gradient_security(const EnforcementParams& p, double security,
                              double tau) {
  return -residual_risk(p, security, tau) / p.security_scale;
}

double foc_residual(const EnforcementParams& p, double security, double tau) {
  return cost_derivative(p, security) + risk_gradient_security(p, security, tau);
}

EnforcementPoint evaluate(const EnforcementParams& p, double security,
                          double tau) {
  EnforcementPoint pt;
  pt.security = security;
  pt.cost = cost(p, security);
  pt.residual_risk = residual_risk(p, security, tau);
  pt.total = pt.cost + pt.residual_risk;
  return pt;
}

double optimal_security(const EnforcementParams& p, double tau) {
  validate(p);
  if (tau < 0.0) throw std::domain_error("optimal_security: tau < 0");

  // The total derivative K'(S) + dR/dS is strictly increasing in S (K' is
  // nondecreasing, dR/dS strictly increasing), so the objective is convex
  // with at most one interior stationary point.
  if (foc_residual(p, 0.0, tau) >= 0.0) return 0.0;

  // Bracket past any interior optimum, extending defensively if the
  // derivative is still negative there.
  const double log_ratio =
      std::log(p.risk_scale / (p.cost_coeff * p.security_scale));
  double hi = p.security_scale * (std::max(log_ratio, 0.0) + 10.0);
  for (int i = 0; i < 64 && foc_residual(p, hi, tau) < 0.0; ++i) hi *= 2.0;

  const auto objective = [&](double s) {
    return cost(p, s) + residual_risk(p, s, tau);
  };
  const double x = brent_minimize(objective, 0.0, hi, 1e-10);

  // Polish: bisect the strictly increasing first-order condition inside a
  // bracket around the Brent result. Function-value search alone cannot
  // localize the minimum past double rounding of the flat valley.
  double step = std::max(1e-9, 1e-9 * x);
  double lo_b = std::max(0.0, x - step);
  double hi_b = std::min(hi, x + step);
  while (foc_residual(p, lo_b, tau) > 0.0 && lo_b > 0.0) {
    step *= 4.0;
    lo_b = std::max(0.0, x - step);
  }
  while (foc_residual(p, hi_b, tau) < 0.0 && hi_b < hi) {
    step *= 4.0;
    hi_b = std::min(hi, x + step);
  }
  if (foc_residual(p, lo_b, tau) >= 0.0) return lo_b;  // corner pressure at 0
  // Bisect until the bracket closes at double resolution. A fixed absolute
  // width floor is not enough: for cost exponents barely above 1 the
  // stationary point can sit dozens of orders of magnitude below 1, and
  // stopping early returns a point with an O(1) derivative.
  for (int i = 0; i < 1200; ++i) {
    const double mid = 0.5 * (lo_b + hi_b);
    if (mid <= lo_b || mid >= hi_b) break;
    if (foc_residual(p, mid, tau) < 0.0) lo_b = mid; else hi_b = mid;
  }
  return std::fabs(foc_residual(p, lo_b, tau)) <=
                 std::fabs(foc_residual(p, hi_b, tau))
             ? lo_b
             : hi_b;
}

std::vector<std::pair<double, double>> comparative_statics(
    const EnforcementParams& p, const std::vector<double>& tau_grid) {
  if (tau_grid.empty())
    throw std::invalid_argument("comparative_statics: empty tau grid");
  for (std::size_t i = 1; i < tau_grid.size(); ++i)
    if (!(tau_grid[i] > tau_grid[i - 1]))
      throw std::invalid_argument(
          "comparative_statics: tau grid must be strictly ascending");
  std::vector<std::pair<double, double>> out;
  out.reserve(tau_grid.size());
  for (double tau : tau_grid) out.emplace_back(tau, optimal_security(p, tau));
  return out;
}

}  // namespace circmech

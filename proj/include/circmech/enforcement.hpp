#pragma once

#include <utility>
#include <vector>

namespace circmech {

// Enforcement economics: convex security spending against an exponential
// residual-risk curve that trust discounts. Security S >= 0 costs
// K(S) = c * S^gamma; the loss left unprotected is
// R(S, tau) = l0 * exp(-lambda * tau) * exp(-S / s0).
// The interesting object is the spending level that minimizes K + R at a
// given trust level: it falls as trust rises, one-for-one in log space for
// gamma = 1.
struct EnforcementParams {
  double cost_coeff = 1.0;        // c > 0
  double cost_exponent = 1.0;     // gamma >= 1 (kept convex)
  double risk_scale = 100.0;      // l0 > 0, loss exposure at zero security / zero trust
  double trust_decay = 1.0;       // lambda > 0, how fast trust discounts risk
  double security_scale = 1.0;    // s0 > 0, e-folding scale of protection
};

// One evaluated point on the cost/risk frontier.
struct EnforcementPoint {
  double security = 0.0;
  double cost = 0.0;
  double residual_risk = 0.0;
  double total = 0.0;  // cost + residual_risk
};

// Throws std::invalid_argument when a parameter is out of range.
void validate(const EnforcementParams& p);

// K(S). Throws std::domain_error for S < 0.
double cost(const EnforcementParams& p, double security);

// dK/dS.
double cost_derivative(const EnforcementParams& p, double security);

// R(S, tau). Throws std::domain_error for negative security or tau.
double residual_risk(const EnforcementParams& p, double security, double tau);

// dR/dS, strictly negative and shrinking in magnitude as tau grows.
double risk_gradient_security(const EnforcementParams& p, double security,
                              double tau);

// K'(S) + dR/dS: zero at an interior optimum, negative where more security
// still pays, positive where it no longer does.
double foc_residual(const EnforcementParams& p, double security, double tau);

EnforcementPoint evaluate(const EnforcementParams& p, double security,
                          double tau);

// argmin_{S >= 0} K(S) + R(S, tau). Derivative-free Brent bracket followed by
// a bisection polish of the first-order condition (which is strictly
// increasing in S), so interior optima satisfy |foc_residual| at close to
// machine precision. Returns 0 exactly when the corner is optimal.
double optimal_security(const EnforcementParams& p, double tau);

// optimal_security over an ascending trust grid. Throws std::invalid_argument
// for an empty or non-strictly-ascending grid.
std::vector<std::pair<double, double>> comparative_statics(
    const EnforcementParams& p, const std::vector<double>& tau_grid);

}  // namespace circmech

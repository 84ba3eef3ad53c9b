#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "circmech/enforcement.hpp"

namespace circmech {

// Two desk-scale experiments about eliciting trust directly.
//
// The first asks agents to report their own trust disposition and sets the
// security level from the report. Each agent bears its own compliance cost
// in full but only a 1/n share of the systemic residual risk, so once n is
// large the cheapest report wins regardless of the truth; with n = 1 the
// agent internalizes the whole objective and reports honestly.
//
// The second replaces reports with an emitted credibility signal and lets
// the receiving side learn how much the signal is worth. Exploiters mimic
// the high-credibility signal and betray every accepted deal; the market
// re-weights the signal by realized regret until the signal carries no
// exploitable correlation, and acceptance of high-signal deals dies off.

// Report -> security level the mechanism would set for that report.
using PenaltySchedule = std::map<double, double>;

// Schedule mapping each grid report to optimal_security(params, report).
// Grid must be nonempty, strictly ascending, nonnegative.
PenaltySchedule make_penalty_schedule(const EnforcementParams& params,
                                      const std::vector<double>& report_grid);

// Payoff of reporting reported_tau while actually being true_tau:
//   deal_value - cost(params, S) - residual_risk(params, S, true_tau) / n
// with S = schedule.at(reported_tau). The report enters only through S;
// the true disposition only through the residual term. Throws
// std::invalid_argument if the report is not in the schedule or n is zero.
double direct_report_payoffs(double true_tau, double reported_tau,
                             const EnforcementParams& params,
                             const PenaltySchedule& schedule, std::size_t n_agents,
                             double deal_value = 1.0);

struct DominanceResult {
    std::vector<double> report_grid;
    // payoffs[i][j]: payoff of reporting grid[j] when the truth is grid[i].
    std::vector<std::vector<double>> payoffs;
    std::vector<double> best_report;  // argmax report per true value, first on ties
    bool truthful = false;            // best_report[i] == grid[i] for every i
};

// Evaluates every (true, reported) pair on the grid against the schedule
// built from params. Grid validation as in make_penalty_schedule.
DominanceResult misreport_dominance(const EnforcementParams& params, std::size_t n_agents,
                                    const std::vector<double>& report_grid,
                                    double deal_value = 1.0);

struct CollapseConfig {
    double exploit_fraction = 0.3;  // probability a signaler is an exploiter
    double signal_noise = 0.05;     // sd of the noise added to every signal
    double learning_rate = 0.3;     // step on the signal weight; 0 freezes learning
    int rounds = 10000;
    std::uint64_t seed = 0;

    // Documented defaults below; exposed for tests and config overrides.
    int n_signalers = 50;
    int window_deals = 3000;      // sliding window of accepted deals
    double deal_gain = 1.0;       // receiver payoff when a deal is honored
    double betrayal_loss = 2.0;   // receiver payoff is -loss when betrayed
    double mimic_signal = 0.9;    // signal an exploiter imitates
    double honesty_min = 0.5;     // honest dispositions drawn uniformly from
    double honesty_max = 0.9;     //   [honesty_min, honesty_max]
    double signal_ref = 0.7;     // reference point of the acceptance rule
    double initial_weight = 8.0;
    double initial_intercept = 0.0;
};

struct CollapseRound {
    int round = 0;
    double marginal_correlation = 0.0;  // Pearson(signal, honored) over the window
    double exploiter_profit = 0.0;      // exploiter takings this round
    double mean_signal_weight = 0.0;    // the market's current signal weight
};

// Repeated signaling market. Honest signalers emit their disposition plus
// noise and honor accepted deals with that probability; exploiters emit
// mimic_signal plus noise and betray every accepted deal, pocketing the
// receiver's at-risk value. The market accepts a deal with probability
// sigmoid(a + w * (signal - signal_ref)) and, on each settled deal, moves a
// by the raw payoff and w by the payoff's covariance with the signal,
// centered on the sliding window means, so w is stationary exactly when
// the windowed signal-outcome correlation is zero. The correlation column
// is 0 by convention while the window is degenerate. Deterministic per
// seed (substream "correlation_collapse").
std::vector<CollapseRound> correlation_collapse(const CollapseConfig& config);

}  // namespace circmech

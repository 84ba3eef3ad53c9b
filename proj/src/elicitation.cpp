#include "circmech/elicitation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "circmech/rng.hpp"

namespace circmech {

namespace {

void validate_grid(const std::vector<double>& grid) {
    if (grid.empty()) {
        throw std::invalid_argument("report grid must be nonempty");
    }
    if (!(grid.front() >= 0.0)) {
        throw std::invalid_argument("report grid values must be nonnegative");
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw std::invalid_argument("report grid must be strictly ascending");
        }
    }
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

PenaltySchedule make_penalty_schedule(const EnforcementParams& params,
                                      const std::vector<double>& report_grid) {
    validate_grid(report_grid);
    PenaltySchedule schedule;
    for (double report : report_grid) {
        schedule.emplace(report, optimal_security(params, report));
    }
    return schedule;
}

double direct_report_payoffs(double true_tau, double reported_tau,
                             const EnforcementParams& params,
                             const PenaltySchedule& schedule, std::size_t n_agents,
                             double deal_value) {
    if (n_agents == 0) {
        throw std::invalid_argument("direct_report_payoffs: n_agents must be positive");
    }
    const auto it = schedule.find(reported_tau);
    if (it == schedule.end()) {
        throw std::invalid_argument("direct_report_payoffs: report not in penalty schedule");
    }
    const double s = it->second;
    return deal_value - cost(params, s) -
           residual_risk(params, s, true_tau) / static_cast<double>(n_agents);
}

DominanceResult misreport_dominance(const EnforcementParams& params, std::size_t n_agents,
                                    const std::vector<double>& report_grid,
                                    double deal_value) {
    const PenaltySchedule schedule = make_penalty_schedule(params, report_grid);

    DominanceResult result;
    result.report_grid = report_grid;
    result.payoffs.resize(report_grid.size());
    result.best_report.resize(report_grid.size());
    result.truthful = true;
    for (std::size_t i = 0; i < report_grid.size(); ++i) {
        auto& row = result.payoffs[i];
        row.resize(report_grid.size());
        std::size_t best = 0;
        for (std::size_t j = 0; j < report_grid.size(); ++j) {
            row[j] = direct_report_payoffs(report_grid[i], report_grid[j], params,
                                           schedule, n_agents, deal_value);
            if (row[j] > row[best]) {
                best = j;
            }
        }
        result.best_report[i] = report_grid[best];
        if (best != i) {
            result.truthful = false;
        }
    }
    return result;
}

namespace {

void validate(const CollapseConfig& c) {
    if (!(c.exploit_fraction >= 0.0 && c.exploit_fraction <= 1.0)) {
        throw std::invalid_argument("collapse: exploit_fraction must lie in [0, 1]");
    }
    if (!(c.signal_noise >= 0.0)) {
        throw std::invalid_argument("collapse: signal_noise must be nonnegative");
    }
    if (!(c.learning_rate >= 0.0)) {
        throw std::invalid_argument("collapse: learning_rate must be nonnegative");
    }
    if (c.rounds < 1) {
        throw std::invalid_argument("collapse: rounds must be positive");
    }
    if (c.n_signalers < 1) {
        throw std::invalid_argument("collapse: n_signalers must be positive");
    }
    if (c.window_deals < 2) {
        throw std::invalid_argument("collapse: window_deals must be at least 2");
    }
    if (!(c.deal_gain > 0.0) || !(c.betrayal_loss > 0.0)) {
        throw std::invalid_argument("collapse: deal_gain and betrayal_loss must be positive");
    }
    if (!(c.honesty_min >= 0.0 && c.honesty_min <= c.honesty_max && c.honesty_max <= 1.0)) {
        throw std::invalid_argument("collapse: honesty range must satisfy 0 <= min <= max <= 1");
    }
}

// Sliding window over accepted deals with O(1) mean/covariance updates.
struct DealWindow {
    explicit DealWindow(std::size_t cap) : signal(cap), honored(cap) {}

    std::vector<double> signal;
    std::vector<double> honored;
    std::size_t head = 0;
    std::size_t count = 0;
    double sum_s = 0, sum_y = 0, sum_ss = 0, sum_yy = 0, sum_sy = 0;

    void push(double s, double y) {
        if (count == signal.size()) {
            const double os = signal[head];
            const double oy = honored[head];
            sum_s -= os;
            sum_y -= oy;
            sum_ss -= os * os;
            sum_yy -= oy * oy;
            sum_sy -= os * oy;
        } else {
            ++count;
        }
        signal[head] = s;
        honored[head] = y;
        sum_s += s;
        sum_y += y;
        sum_ss += s * s;
        sum_yy += y * y;
        sum_sy += s * y;
        head = (head + 1) % signal.size();
    }

    double mean_s() const { return count ? sum_s / static_cast<double>(count) : 0.0; }
    double mean_y() const { return count ? sum_y / static_cast<double>(count) : 0.0; }

    double pearson() const {
        if (count < 2) {
            return 0.0;
        }
        const double n = static_cast<double>(count);
        const double cov = sum_sy / n - (sum_s / n) * (sum_y / n);
        const double var_s = sum_ss / n - (sum_s / n) * (sum_s / n);
        const double var_y = sum_yy / n - (sum_y / n) * (sum_y / n);
        if (var_s < 1e-12 || var_y < 1e-12) {
            return 0.0;  // degenerate window
        }
        return cov / std::sqrt(var_s * var_y);
    }
};

}  // namespace

std::vector<CollapseRound> correlation_collapse(const CollapseConfig& config) {
    validate(config);

    // The intercept adapts much more slowly than the signal weight so the
    // market re-prices the signal before it stops dealing altogether.
    constexpr double kInterceptRatio = 0.015;
    constexpr double kInterceptMin = -8.0, kInterceptMax = 4.0;
    constexpr double kWeightMin = -20.0, kWeightMax = 20.0;

    SimRng rng = make_substream_rng(config.seed, "correlation_collapse");

    struct Signaler {
        bool exploiter = false;
        double honesty = 0.0;
        double base_signal = 0.0;
    };
    std::vector<Signaler> signalers(static_cast<std::size_t>(config.n_signalers));
    for (Signaler& sg : signalers) {
        sg.exploiter = rng.bernoulli(config.exploit_fraction);
        const double h = rng.uniform(config.honesty_min, config.honesty_max);
        sg.honesty = sg.exploiter ? 0.0 : h;
        sg.base_signal = sg.exploiter ? config.mimic_signal : h;
    }

    DealWindow window(static_cast<std::size_t>(config.window_deals));
    double a = std::clamp(config.initial_intercept, kInterceptMin, kInterceptMax);
    double w = std::clamp(config.initial_weight, kWeightMin, kWeightMax);
    const double lr_w = config.learning_rate;
    const double lr_a = config.learning_rate * kInterceptRatio;
    const double span = config.deal_gain + config.betrayal_loss;

    std::vector<CollapseRound> trace;
    trace.reserve(static_cast<std::size_t>(config.rounds));
    for (int round = 1; round <= config.rounds; ++round) {
        double profit = 0.0;
        for (const Signaler& sg : signalers) {
            const double s = sg.base_signal + rng.gaussian(0.0, config.signal_noise);
            const double pi = sigmoid(a + w * (s - config.signal_ref));
            const bool accepted = rng.uniform01() < pi;
            const bool honored = rng.bernoulli(sg.honesty);
            if (!accepted) {
                continue;
            }
            const double y = honored ? 1.0 : 0.0;
            const double u = honored ? config.deal_gain : -config.betrayal_loss;
            if (sg.exploiter) {
                profit += config.betrayal_loss;
            }
            if (lr_w > 0.0) {
                // Center on the window so the weight is stationary exactly
                // when signal and outcome are uncorrelated among deals done.
                const double s_center = window.count ? window.mean_s() : s;
                const double u_center =
                    window.count ? span * window.mean_y() - config.betrayal_loss : u;
                w = std::clamp(w + lr_w * (u - u_center) * (s - s_center),
                               kWeightMin, kWeightMax);
                a = std::clamp(a + lr_a * u * (1.0 - pi), kInterceptMin, kInterceptMax);
            }
            window.push(s, y);
        }
        trace.push_back(CollapseRound{round, window.pearson(), profit, w});
    }
    return trace;
}

}  // namespace circmech

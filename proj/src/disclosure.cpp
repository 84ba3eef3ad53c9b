#include "circmech/disclosure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace circmech {

double trust_weight(double tau) {
    if (!(tau >= 0.0)) {
        throw std::domain_error("trust_weight: tau must be nonnegative");
    }
    return 1.0 - std::exp(-tau);
}

void validate(const FeedbackController& controller) {
    if (!(controller.gain > 0.0)) {
        throw std::invalid_argument("controller: gain must be positive");
    }
    if (!(controller.target_retreat > 0.0 && controller.target_retreat < 1.0)) {
        throw std::invalid_argument("controller: target_retreat must lie in (0, 1)");
    }
    if (!(controller.s_min >= 0.0) || !(controller.s_min < controller.s_max)) {
        throw std::invalid_argument("controller: bounds must satisfy 0 <= s_min < s_max");
    }
}

Settlement evaluate_proposal(const Agent& receiver, const DisclosureProposal& proposal,
                             double security, const EnforcementParams& params,
                             const GameParams& game, std::size_t n_agents) {
    if (n_agents == 0) {
        throw std::invalid_argument("evaluate_proposal: n_agents must be positive");
    }
    const double p = trust_weight(receiver.tau);
    const double u_mechanism =
        game.deal_value - cost(params, security) / static_cast<double>(n_agents);
    const double u_private = game.deal_value + proposal.surplus_offer * p -
                             game.betrayal_loss * (1.0 - p);
    return u_private > u_mechanism ? Settlement::PrivateChannel : Settlement::Mechanism;
}

RoundMetrics step_round(std::vector<Agent>& agents, const FeedbackController& controller,
                        const EnforcementParams& params, const GameParams& game,
                        SimRng& rng, int round) {
    if (agents.size() < 2) {
        throw std::invalid_argument("step_round: need at least two agents");
    }
    std::vector<std::size_t> order(agents.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order);

    const std::size_t pairings = agents.size() / 2;
    const double s = controller.security;
    const double u_mechanism =
        game.deal_value - cost(params, s) / static_cast<double>(agents.size());

    int private_count = 0;
    int betrayals = 0;
    double payoff_sum = 0.0;
    for (std::size_t p = 0; p < pairings; ++p) {
        Agent& proposer = agents[order[2 * p]];
        Agent& receiver = agents[order[2 * p + 1]];
        // Sincerity is drawn before the receiver decides so the stream
        // consumption per pairing is fixed regardless of the outcome.
        DisclosureProposal prop{proposer.id, receiver.id, game.surplus_offer,
                                rng.bernoulli(proposer.honesty)};
        const Settlement choice =
            evaluate_proposal(receiver, prop, s, params, game, agents.size());

        double proposer_pay = u_mechanism;
        double receiver_pay = u_mechanism;
        if (choice == Settlement::PrivateChannel) {
            ++private_count;
            if (prop.sincere) {
                proposer_pay = game.deal_value + prop.surplus_offer;
                receiver_pay = game.deal_value + prop.surplus_offer;
            } else {
                ++betrayals;
                proposer_pay = game.deal_value + prop.surplus_offer + game.betrayal_loss;
                receiver_pay = game.deal_value - game.betrayal_loss;
            }
        }
        proposer.wealth += proposer_pay;
        receiver.wealth += receiver_pay;
        payoff_sum += proposer_pay + receiver_pay;
    }

    RoundMetrics m;
    m.round = round;
    m.security = s;
    m.retreat_rate =
        static_cast<double>(private_count) / static_cast<double>(pairings);
    m.betrayals = betrayals;
    m.mean_payoff = payoff_sum / static_cast<double>(2 * pairings);
    return m;
}

FeedbackController update_enforcement(const FeedbackController& controller,
                                      double observed_retreat) {
    validate(controller);
    if (!(observed_retreat >= 0.0 && observed_retreat <= 1.0)) {
        throw std::invalid_argument("update_enforcement: retreat rate must lie in [0, 1]");
    }
    FeedbackController next = controller;
    next.security = std::clamp(
        controller.security -
            controller.gain * (observed_retreat - controller.target_retreat),
        controller.s_min, controller.s_max);
    return next;
}

std::vector<double> replay_controller(FeedbackController controller,
                                      const std::vector<double>& retreats) {
    std::vector<double> trajectory;
    trajectory.reserve(retreats.size());
    for (double r : retreats) {
        controller = update_enforcement(controller, r);
        trajectory.push_back(controller.security);
    }
    return trajectory;
}

std::vector<Agent> make_population(std::size_t n, double tau, double honesty) {
    std::vector<Agent> agents(n);
    for (std::size_t i = 0; i < n; ++i) {
        agents[i] = Agent{static_cast<int>(i), tau, honesty, 0.0};
    }
    return agents;
}

SimTrace run_to_equilibrium(const EquilibriumConfig& config) {
    validate(config.params);
    validate(config.controller);
    if (config.agents.size() < 2) {
        throw std::invalid_argument("run_to_equilibrium: need at least two agents");
    }
    if (config.max_rounds < 1) {
        throw std::invalid_argument("run_to_equilibrium: max_rounds must be positive");
    }
    if (!(config.game.deal_value > 0.0) || !(config.game.surplus_offer > 0.0) ||
        !(config.game.betrayal_loss >= 0.0)) {
        throw std::invalid_argument("run_to_equilibrium: bad game parameters");
    }
    for (const Agent& a : config.agents) {
        if (!(a.tau >= 0.0)) {
            throw std::invalid_argument("run_to_equilibrium: agent tau must be nonnegative");
        }
        if (!(a.honesty >= 0.0 && a.honesty <= 1.0)) {
            throw std::invalid_argument("run_to_equilibrium: agent honesty must lie in [0, 1]");
        }
    }

    std::vector<Agent> agents = config.agents;
    FeedbackController controller = config.controller;
    controller.security = std::clamp(controller.security, controller.s_min, controller.s_max);
    SimRng rng = make_substream_rng(config.seed, "disclosure_game");

    constexpr double kQuietDelta = 1e-4;
    constexpr int kQuietRounds = 50;

    SimTrace trace;
    trace.rounds.reserve(static_cast<std::size_t>(config.max_rounds));
    int quiet = 0;
    for (int r = 1; r <= config.max_rounds; ++r) {
        const RoundMetrics m =
            step_round(agents, controller, config.params, config.game, rng, r);
        const FeedbackController next = update_enforcement(controller, m.retreat_rate);
        const double delta = std::abs(next.security - controller.security);
        controller = next;
        trace.rounds.push_back(m);
        quiet = delta < kQuietDelta ? quiet + 1 : 0;
        if (quiet >= kQuietRounds) {
            trace.converged = true;
            break;
        }
    }
    trace.final_security = controller.security;
    return trace;
}

}  // namespace circmech

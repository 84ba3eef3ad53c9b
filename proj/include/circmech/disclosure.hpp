#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "circmech/enforcement.hpp"
#include "circmech/rng.hpp"

namespace circmech {

// Meta-game played on top of the enforcement layer. Each round agents are
// paired at random; one side of each pair proposes settling the deal over a
// private trust channel for a shared surplus (skipping the enforcement cost
// share), and the receiver weighs that offer against its own trust
// disposition. The mechanism never sees tau or honesty: it observes the
// aggregate retreat rate alone and steers its security level with a
// proportional controller.

struct Agent {
    int id = 0;
    double tau = 0.0;      // trust disposition, private to the agent
    double honesty = 1.0;  // probability of honoring a private-channel deal
    double wealth = 0.0;
};

struct DisclosureProposal {
    int proposer_id = 0;
    int receiver_id = 0;
    double surplus_offer = 0.0;  // joint saving from bypassing enforcement
    bool sincere = true;         // latent intent, never visible to the receiver
};

enum class Settlement { Mechanism, PrivateChannel };

struct GameParams {
    double deal_value = 1.0;
    double betrayal_loss = 0.5;    // receiver's at-risk share of a private deal
    double surplus_offer = 0.235;  // offer attached to every proposal
};

struct FeedbackController {
    double security = 1.0;
    double target_retreat = 0.1;
    double gain = 0.05;
    double s_min = 0.0;
    double s_max = 6.0;
};

struct RoundMetrics {
    int round = 0;
    double security = 0.0;      // level the round was played at
    double retreat_rate = 0.0;  // private settlements / pairings, exact
    int betrayals = 0;
    double mean_payoff = 0.0;   // mean per-participant payoff this round
};

struct SimTrace {
    std::vector<RoundMetrics> rounds;
    double final_security = 0.0;  // controller level after the last update
    bool converged = false;
};

// Weight an agent puts on a counterparty honoring a private deal:
// 1 - exp(-tau). Zero trust maps to zero weight. Throws std::domain_error
// on negative tau.
double trust_weight(double tau);

// Throws std::invalid_argument unless gain > 0, target_retreat is in (0,1)
// and 0 <= s_min < s_max.
void validate(const FeedbackController& controller);

// Receiver-side choice. Mechanism settlement nets the deal value minus the
// receiver's share of the enforcement budget, cost(params, security) / n.
// The private channel is judged in expectation under trust_weight: the
// surplus arrives only if the proposer honors the deal, the at-risk value
// is lost otherwise. Residual exposure to the mechanism's security level is
// systemic and hits both settlement paths alike, so it cancels out of the
// comparison. Deterministic; the proposal's latent sincerity is not read.
Settlement evaluate_proposal(const Agent& receiver, const DisclosureProposal& proposal,
                             double security, const EnforcementParams& params,
                             const GameParams& game, std::size_t n_agents);

// Plays one round at the controller's current level: shuffle, pair off,
// propose, settle, update wealth. The first agent of each pair proposes and
// is sincere with probability equal to its honesty. A betraying proposer
// pockets the receiver's at-risk value on top of the surplus. With an odd
// population one agent sits the round out. Throws std::invalid_argument on
// fewer than two agents.
RoundMetrics step_round(std::vector<Agent>& agents, const FeedbackController& controller,
                        const EnforcementParams& params, const GameParams& game,
                        SimRng& rng, int round);

// One proportional step on the retreat-rate error, clamped to the bounds:
// S' = clamp(S - gain * (observed - target)). Throws std::invalid_argument
// unless observed_retreat is in [0, 1].
FeedbackController update_enforcement(const FeedbackController& controller,
                                      double observed_retreat);

// Replays a recorded retreat sequence through the controller alone and
// returns the security level after each update. The transition reads
// nothing but the rate, so any two populations that realize the same
// sequence drive the controller through the same trajectory.
std::vector<double> replay_controller(FeedbackController controller,
                                      const std::vector<double>& retreats);

// Uniform population: ids 0..n-1, shared tau and honesty, zero wealth.
std::vector<Agent> make_population(std::size_t n, double tau, double honesty);

struct EquilibriumConfig {
    std::vector<Agent> agents;
    FeedbackController controller;
    EnforcementParams params;
    GameParams game;
    int max_rounds = 5000;
    std::uint64_t seed = 0;
};

// Alternates step_round and update_enforcement until the security level
// moves by less than 1e-4 for 50 consecutive rounds or max_rounds is
// exhausted; non-convergence is reported through the flag, not thrown. The
// starting level is clamped into the controller's bounds. Draws come from
// the "disclosure_game" substream of config.seed, so equal configs replay
// bit-identically.
SimTrace run_to_equilibrium(const EquilibriumConfig& config);

}  // namespace circmech

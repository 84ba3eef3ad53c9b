#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "circmech/rng.hpp"

namespace circmech {

// Three-layer consensus state machine: users inject fee-bearing
// transactions along routing paths, routers bundle them into blocks behind
// an irreversible burn gate, and a time-uncertain fixed-difficulty lottery
// splits each block's fees between the producer and one sampled router.
// Burned value leaves the system for good; that sink is what makes chain
// revision costly at depth.

struct Transaction {
    int id = 0;
    double fee = 0.0;
    std::vector<std::string> routing_path;  // first entry = entry node
};

// Throws std::invalid_argument unless fee > 0 and the path is nonempty
// with no repeated nodes.
void validate(const Transaction& tx);

struct Block {
    int id = 0;
    std::string producer;
    std::vector<Transaction> transactions;
    double burn_paid = 0.0;
    std::optional<int> parent;  // empty for a chain root
    int depth = 0;              // root 0, child = parent + 1
};

struct LotteryOutcome {
    int block_id = 0;
    std::uint64_t attempts = 0;  // lottery trials until success, >= 1
    std::string winning_router;
    std::string miner;
};

struct PayoutSplit {
    double miner_amount = 0.0;
    double router_amount = 0.0;
    double total = 0.0;  // miner_amount + router_amount, exactly
};

// Node balances plus an aggregate user account. Users are debited when
// their transactions enter a block; burns reduce the producer's balance
// and accumulate in total_burned. total() tracks every remaining unit.
struct WealthLedger {
    std::map<std::string, double> balances;
    double user_funds = 0.0;
    double total_burned = 0.0;

    double total() const;
};

// Work a node's position on the path earns it: fee / 2^(hop-1) with the
// entry node at hop 1; zero when the node is not on the path. Repeated
// nodes are impossible by the transaction invariant.
double routing_work(const Transaction& tx, const std::string& node);

// Total routing work `node` holds across a set of transactions.
double total_routing_work(const std::vector<Transaction>& txs, const std::string& node);

// Bundles the whole mempool into a block iff the producer's total routing
// work across it reaches the threshold; returns nullopt otherwise with no
// state change. On success the producer's balance is debited by the
// threshold (burned, irreversibly) and the users' account by the included
// fees. Throws std::invalid_argument on malformed transactions or a
// negative threshold.
std::optional<Block> produce_block(const std::string& producer,
                                   const std::vector<Transaction>& mempool,
                                   double threshold, const Block* parent,
                                   WealthLedger& ledger, int block_id);

// Draws the number of trials until the fixed-difficulty lottery succeeds
// (geometric, mean 1/difficulty) and samples one winning router with
// probability proportional to per-node routing work inside the block.
// Throws std::invalid_argument on an empty block or difficulty outside
// (0, 1].
LotteryOutcome run_lottery(const Block& block, double difficulty, SimRng& rng);

// Splits the block's fee pool: miner_fraction to the producer, remainder
// to the winning router, exactly. Burned value is not part of the pool.
// Throws std::invalid_argument if the outcome does not belong to the block
// or miner_fraction is outside [0, 1].
PayoutSplit distribute_payout(const LotteryOutcome& outcome, const Block& block,
                              double miner_fraction = 0.5);

// Sum of burn over the most recent `depth` blocks of the chain. Throws
// std::invalid_argument when depth is negative or exceeds the chain length.
double revision_cost(const std::vector<Block>& chain, int depth);

struct EpochConfig {
    int n_nodes = 5;
    int txs_per_round = 8;
    double mean_fee = 1.0;      // fees drawn uniform in [0.5, 1.5] * mean_fee
    int max_path_length = 3;    // hops drawn uniform in [1, max_path_length]
    double threshold = 2.0;     // burn gate
    double difficulty = 0.25;
    int rounds = 100;           // number of blocks to produce
    double payout_miner_fraction = 0.5;
    std::uint64_t seed = 0;
};

struct BlockMetrics {
    int block = 0;
    std::string producer;
    double fees = 0.0;
    double burn = 0.0;
    std::uint64_t attempts = 0;
    std::string winning_router;
    double miner_payout = 0.0;
    double router_payout = 0.0;
    double cum_revision_cost = 0.0;  // revision cost of the full chain so far
};

struct ConservationReport {
    double fees_injected = 0.0;   // all fees ever created
    double fees_in_blocks = 0.0;  // fees that reached a block
    double payouts = 0.0;         // miner + router credits
    double burned = 0.0;
    double wealth_delta = 0.0;    // ledger total at the end (starts at zero)
};

struct EpochResult {
    std::vector<BlockMetrics> blocks;
    ConservationReport conservation;
    WealthLedger ledger;
};

// Drives inject -> produce -> lottery -> payout until `rounds` blocks
// exist. Rounds whose best producer cannot clear the burn gate leave the
// mempool to accumulate. The producer each round is the node with the most
// routing work in the mempool (lexicographic tie-break). Deterministic per
// seed (substream "saito_epoch").
EpochResult simulate_epoch(const EpochConfig& config);

}  // namespace circmech

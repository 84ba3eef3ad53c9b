#include "circmech/saito.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "circmech/hash.hpp"

namespace circmech {

void validate(const Transaction& tx) {
    if (!(tx.fee > 0.0)) {
        throw std::invalid_argument("transaction: fee must be positive");
    }
    if (tx.routing_path.empty()) {
        throw std::invalid_argument("transaction: routing path must be nonempty");
    }
    std::set<std::string> seen;
    for (const std::string& node : tx.routing_path) {
        if (!seen.insert(node).second) {
            throw std::invalid_argument("transaction: routing path repeats node " + node);
        }
    }
}

double WealthLedger::total() const {
    double sum = user_funds;
    for (const auto& [node, balance] : balances) {
        sum += balance;
    }
    return sum;
}

double routing_work(const Transaction& tx, const std::string& node) {
    for (std::size_t hop = 0; hop < tx.routing_path.size(); ++hop) {
        if (tx.routing_path[hop] == node) {
            return tx.fee / std::exp2(static_cast<double>(hop));
        }
    }
    return 0.0;
}

double total_routing_work(const std::vector<Transaction>& txs, const std::string& node) {
    double sum = 0.0;
    for (const Transaction& tx : txs) {
        sum += routing_work(tx, node);
    }
    return sum;
}

std::optional<Block> produce_block(const std::string& producer,
                                   const std::vector<Transaction>& mempool,
                                   double threshold, const Block* parent,
                                   WealthLedger& ledger, int block_id) {
    if (!(threshold >= 0.0)) {
        throw std::invalid_argument("produce_block: threshold must be nonnegative");
    }
    for (const Transaction& tx : mempool) {
        validate(tx);
    }
    if (total_routing_work(mempool, producer) < threshold) {
        return std::nullopt;
    }

    Block block;
    block.id = block_id;
    block.producer = producer;
    block.transactions = mempool;
    block.burn_paid = threshold;
    if (parent != nullptr) {
        block.parent = parent->id;
        block.depth = parent->depth + 1;
    }

    double fees = 0.0;
    for (const Transaction& tx : mempool) {
        fees += tx.fee;
    }
    ledger.balances[producer] -= threshold;  // burned, never redistributed
    ledger.total_burned += threshold;
    ledger.user_funds -= fees;
    return block;
}

LotteryOutcome run_lottery(const Block& block, double difficulty, SimRng& rng) {
    if (block.transactions.empty()) {
        throw std::invalid_argument("run_lottery: block has no transactions");
    }
    if (!(difficulty > 0.0 && difficulty <= 1.0)) {
        throw std::invalid_argument("run_lottery: difficulty must lie in (0, 1]");
    }

    // std::map keeps node order deterministic for the weighted draw.
    std::map<std::string, double> work;
    for (const Transaction& tx : block.transactions) {
        for (std::size_t hop = 0; hop < tx.routing_path.size(); ++hop) {
            work[tx.routing_path[hop]] += tx.fee / std::exp2(static_cast<double>(hop));
        }
    }
    std::vector<std::string> nodes;
    std::vector<double> weights;
    nodes.reserve(work.size());
    weights.reserve(work.size());
    for (const auto& [node, amount] : work) {
        nodes.push_back(node);
        weights.push_back(amount);
    }

    LotteryOutcome outcome;
    outcome.block_id = block.id;
    outcome.attempts = rng.geometric_trials(difficulty);
    outcome.winning_router = nodes[rng.weighted_index(weights)];
    outcome.miner = block.producer;
    return outcome;
}

PayoutSplit distribute_payout(const LotteryOutcome& outcome, const Block& block,
                              double miner_fraction) {
    if (outcome.block_id != block.id) {
        throw std::invalid_argument("distribute_payout: outcome does not belong to block");
    }
    if (!(miner_fraction >= 0.0 && miner_fraction <= 1.0)) {
        throw std::invalid_argument("distribute_payout: miner_fraction must lie in [0, 1]");
    }
    double pool = 0.0;
    for (const Transaction& tx : block.transactions) {
        pool += tx.fee;
    }
    PayoutSplit split;
    split.miner_amount = miner_fraction * pool;
    split.router_amount = pool - split.miner_amount;
    split.total = split.miner_amount + split.router_amount;  // what actually leaves
    return split;
}

double revision_cost(const std::vector<Block>& chain, int depth) {
    if (depth < 0 || static_cast<std::size_t>(depth) > chain.size()) {
        throw std::invalid_argument("revision_cost: depth must lie in [0, chain length]");
    }
    double sum = 0.0;
    for (std::size_t i = chain.size() - static_cast<std::size_t>(depth); i < chain.size(); ++i) {
        sum += chain[i].burn_paid;
    }
    return sum;
}

namespace {

void validate(const EpochConfig& c) {
    if (c.n_nodes < 1) {
        throw std::invalid_argument("epoch: n_nodes must be positive");
    }
    if (c.txs_per_round < 1) {
        throw std::invalid_argument("epoch: txs_per_round must be positive");
    }
    if (!(c.mean_fee > 0.0)) {
        throw std::invalid_argument("epoch: mean_fee must be positive");
    }
    if (c.max_path_length < 1 || c.max_path_length > c.n_nodes) {
        throw std::invalid_argument("epoch: max_path_length must lie in [1, n_nodes]");
    }
    if (!(c.threshold >= 0.0)) {
        throw std::invalid_argument("epoch: threshold must be nonnegative");
    }
    if (!(c.difficulty > 0.0 && c.difficulty <= 1.0)) {
        throw std::invalid_argument("epoch: difficulty must lie in (0, 1]");
    }
    if (c.rounds < 1) {
        throw std::invalid_argument("epoch: rounds must be positive");
    }
    if (!(c.payout_miner_fraction >= 0.0 && c.payout_miner_fraction <= 1.0)) {
        throw std::invalid_argument("epoch: payout_miner_fraction must lie in [0, 1]");
    }
}

}  // namespace

EpochResult simulate_epoch(const EpochConfig& config) {
    validate(config);
    SimRng rng = make_substream_rng(config.seed, "saito_epoch");

    std::vector<std::string> nodes;
    nodes.reserve(static_cast<std::size_t>(config.n_nodes));
    for (int i = 0; i < config.n_nodes; ++i) {
        nodes.push_back("n" + std::to_string(i));
    }

    EpochResult result;
    result.ledger.user_funds = 0.0;
    for (const std::string& node : nodes) {
        result.ledger.balances[node] = 0.0;
    }

    std::vector<Transaction> mempool;
    std::vector<Block> chain;
    int next_tx_id = 0;
    double fees_injected = 0.0;
    double fees_in_blocks = 0.0;
    double payouts = 0.0;

    // Work accumulates across rounds, so a reachable threshold is cleared
    // eventually; the cap turns a misconfigured run into a hard error
    // instead of a hang.
    const long max_iterations = static_cast<long>(config.rounds) * 1000 + 1000;
    long iterations = 0;
    while (static_cast<int>(chain.size()) < config.rounds) {
        if (++iterations > max_iterations) {
            throw std::runtime_error("simulate_epoch: burn threshold never cleared");
        }

        for (int t = 0; t < config.txs_per_round; ++t) {
            Transaction tx;
            tx.id = next_tx_id++;
            tx.fee = config.mean_fee * rng.uniform(0.5, 1.5);
            const std::size_t hops = 1 + rng.uniform_index(
                static_cast<std::size_t>(config.max_path_length));
            std::vector<std::string> pool = nodes;
            rng.shuffle(pool);
            tx.routing_path.assign(pool.begin(),
                                   pool.begin() + static_cast<std::ptrdiff_t>(hops));
            fees_injected += tx.fee;
            mempool.push_back(std::move(tx));
        }

        std::string best = nodes.front();
        double best_work = total_routing_work(mempool, best);
        for (const std::string& node : nodes) {
            const double work = total_routing_work(mempool, node);
            if (work > best_work) {
                best = node;
                best_work = work;
            }
        }

        const Block* parent = chain.empty() ? nullptr : &chain.back();
        std::optional<Block> block =
            produce_block(best, mempool, config.threshold, parent, result.ledger,
                          static_cast<int>(chain.size()));
        if (!block.has_value()) {
            continue;  // mempool keeps accumulating work
        }
        mempool.clear();

        const LotteryOutcome outcome = run_lottery(*block, config.difficulty, rng);
        const PayoutSplit split =
            distribute_payout(outcome, *block, config.payout_miner_fraction);
        result.ledger.balances[outcome.miner] += split.miner_amount;
        result.ledger.balances[outcome.winning_router] += split.router_amount;
        payouts += split.total;

        double fees = 0.0;
        for (const Transaction& tx : block->transactions) {
            fees += tx.fee;
        }
        fees_in_blocks += fees;

        chain.push_back(std::move(*block));
        BlockMetrics m;
        m.block = chain.back().id;
        m.producer = chain.back().producer;
        m.fees = fees;
        m.burn = chain.back().burn_paid;
        m.attempts = outcome.attempts;
        m.winning_router = outcome.winning_router;
        m.miner_payout = split.miner_amount;
        m.router_payout = split.router_amount;
        m.cum_revision_cost = revision_cost(chain, static_cast<int>(chain.size()));
        result.blocks.push_back(std::move(m));
    }

    result.conservation.fees_injected = fees_injected;
    result.conservation.fees_in_blocks = fees_in_blocks;
    result.conservation.payouts = payouts;
    result.conservation.burned = result.ledger.total_burned;
    result.conservation.wealth_delta = result.ledger.total();
    return result;
}

}  // namespace circmech

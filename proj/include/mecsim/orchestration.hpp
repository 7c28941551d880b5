#ifndef MECSIM_ORCHESTRATION_HPP
#define MECSIM_ORCHESTRATION_HPP

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mecsim/rng.hpp"

namespace mecsim {

struct TaskBatch {
    int n_tasks = 0;
    double input_bits_per_task = 0.0;
    double work_per_task = 0.0;  // abstract work units

    void validate() const {
        if (n_tasks < 1) throw std::invalid_argument("batch: n_tasks must be >= 1");
        if (input_bits_per_task <= 0.0)
            throw std::invalid_argument("batch: input_bits_per_task must be positive");
        if (work_per_task <= 0.0) throw std::invalid_argument("batch: work_per_task must be positive");
    }
};

enum class NodeKind { LocalDevice, PeerDevice, EdgeServer };

struct Availability {
    double mu_s = 0.0;
    double sigma_s = 0.0;
};

struct ResourceNode {
    NodeKind kind = NodeKind::LocalDevice;
    double speed = 1.0;             // work units per second
    double link_rate_mbps = 0.0;    // 0 for the local device
    std::optional<Availability> availability;  // peers only
    double offload_overhead_s = 0.0;  // per task
};

enum class ExecStrategy { Local, Mdc, SingleMec, CollabMec };

inline const char* exec_strategy_token(ExecStrategy s) {
    switch (s) {
        case ExecStrategy::Local: return "local";
        case ExecStrategy::Mdc: return "mdc";
        case ExecStrategy::SingleMec: return "single-mec";
        case ExecStrategy::CollabMec: return "collab-mec";
    }
    return "?";
}

struct ExecutionReport {
    ExecStrategy strategy = ExecStrategy::Local;
    int collab_k = 1;
    double makespan_s = 0.0;
    double reassignments = 0.0;  // fractional when averaged over seeds
};

class IncompleteExecution : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Per-task cost on a node: input transfer, compute, per-task overhead.
/// Store-and-forward, no pipelining.
inline double task_cost_s(const TaskBatch& batch, const ResourceNode& node) {
    double cost = batch.work_per_task / node.speed + node.offload_overhead_s;
    if (node.link_rate_mbps > 0.0) cost += batch.input_bits_per_task / (node.link_rate_mbps * 1e6);
    return cost;
}

inline ExecutionReport estimate_local(const TaskBatch& batch, const ResourceNode& device) {
    batch.validate();
    if (device.kind != NodeKind::LocalDevice)
        throw std::invalid_argument("estimate_local: node must be the local device");
    return {ExecStrategy::Local, 1, batch.n_tasks * batch.work_per_task / device.speed, 0.0};
}

struct MdcSchedule {
    double makespan_s = 0.0;
    int reassignments = 0;
    double completed_work = 0.0;
    int transfers = 0;  // initial deals plus every re-transfer
};

/// Round-robin dealing over peers; each peer draws an availability duration
/// ~ Normal(mu, sigma) clamped at 0. A task whose completion would exceed its
/// peer's availability makes that peer depart; the task and the peer's queue
/// are re-dealt round-robin to the surviving peers, re-transferring inputs.
/// No partial credit. Deterministic per seed.
inline MdcSchedule mdc_schedule(const TaskBatch& batch, std::span<const ResourceNode> peers,
                                std::uint64_t seed) {
    batch.validate();
    if (peers.empty()) throw std::invalid_argument("mdc_schedule: need at least one peer");

    const std::size_t n = peers.size();
    std::vector<double> leave_at(n);
    for (std::size_t p = 0; p < n; ++p) {
        if (peers[p].kind != NodeKind::PeerDevice)
            throw std::invalid_argument("mdc_schedule: nodes must be peer devices");
        const Availability avail = peers[p].availability.value_or(
            Availability{std::numeric_limits<double>::infinity(), 0.0});
        if (std::isfinite(avail.mu_s)) {
            auto engine = rng::make_engine(seed, rng::Stream::MdcAvailability,
                                           static_cast<std::uint64_t>(p));
            leave_at[p] = std::max(0.0, rng::normal(engine, avail.mu_s, avail.sigma_s));
        } else {
            leave_at[p] = std::numeric_limits<double>::infinity();
        }
    }

    std::vector<std::deque<int>> queue(n);
    std::vector<double> free_at(n, 0.0);
    std::vector<bool> alive(n, true);
    std::size_t deal_cursor = 0;

    MdcSchedule result;
    const auto deal = [&](int task) -> bool {
        for (std::size_t tried = 0; tried < n; ++tried) {
            const std::size_t p = deal_cursor;
            deal_cursor = (deal_cursor + 1) % n;
            if (alive[p]) {
                queue[p].push_back(task);
                result.transfers += 1;  // re-deals pay the input transfer again
                return true;
            }
        }
        return false;
    };
    for (int t = 0; t < batch.n_tasks; ++t) {
        if (!deal(t)) throw IncompleteExecution("mdc: no peers available");
    }

    int remaining = batch.n_tasks;
    while (remaining > 0) {
        // Earliest next completion among alive peers with queued work.
        std::size_t next = n;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t p = 0; p < n; ++p) {
            if (!alive[p] || queue[p].empty()) continue;
            if (free_at[p] < best) {
                best = free_at[p];
                next = p;
            }
        }
        if (next == n) throw IncompleteExecution("mdc: all peers departed before completion");

        const double completion = free_at[next] + task_cost_s(batch, peers[next]);
        if (completion <= leave_at[next]) {
            queue[next].pop_front();
            free_at[next] = completion;
            result.makespan_s = std::max(result.makespan_s, completion);
            result.completed_work += batch.work_per_task;
            --remaining;
        } else {
            alive[next] = false;  // departs at leave_at[next]
            std::vector<int> orphans(queue[next].begin(), queue[next].end());
            queue[next].clear();
            for (int orphan : orphans) {
                if (!deal(orphan)) throw IncompleteExecution("mdc: all peers departed before completion");
                result.reassignments += 1;
            }
        }
    }
    return result;
}

inline ExecutionReport estimate_mdc(const TaskBatch& batch, std::span<const ResourceNode> peers,
                                    std::uint64_t seed) {
    const MdcSchedule s = mdc_schedule(batch, peers, seed);
    return {ExecStrategy::Mdc, 1, s.makespan_s, static_cast<double>(s.reassignments)};
}

/// Even split across k servers (remainder to the lowest ids); per server the
/// makespan is transfer of its inputs plus compute plus per-task overhead;
/// the batch finishes when the slowest server does.
inline ExecutionReport estimate_mec(const TaskBatch& batch, std::span<const ResourceNode> servers,
                                    int k) {
    batch.validate();
    if (k < 1) throw std::invalid_argument("estimate_mec: k must be >= 1");
    if (k > static_cast<int>(servers.size()))
        throw std::invalid_argument("estimate_mec: k exceeds server count");
    double makespan = 0.0;
    for (int s = 0; s < k; ++s) {
        const ResourceNode& node = servers[static_cast<std::size_t>(s)];
        if (node.kind != NodeKind::EdgeServer)
            throw std::invalid_argument("estimate_mec: nodes must be edge servers");
        const int tasks = batch.n_tasks / k + (s < batch.n_tasks % k ? 1 : 0);
        if (tasks == 0) continue;
        const double transfer = tasks * batch.input_bits_per_task / (node.link_rate_mbps * 1e6);
        const double compute = tasks * (batch.work_per_task / node.speed + node.offload_overhead_s);
        makespan = std::max(makespan, transfer + compute);
    }
    return {k == 1 ? ExecStrategy::SingleMec : ExecStrategy::CollabMec, k, makespan, 0.0};
}

struct Inventory {
    ResourceNode local;
    std::vector<ResourceNode> peers;
    std::vector<ResourceNode> servers;
    int collab_k = 2;
};

struct StrategyComparison {
    std::vector<ExecutionReport> reports;        // Local, MDC (seed-averaged), SingleMEC, CollabMEC
    std::vector<ExecStrategy> slowest_first;     // strategies ordered by descending makespan
};

inline StrategyComparison compare_strategies(const TaskBatch& batch, const Inventory& inventory,
                                             std::span<const std::uint64_t> seeds) {
    if (inventory.peers.empty() || inventory.servers.empty())
        throw std::invalid_argument("compare_strategies: inventory must contain all node kinds");
    if (seeds.empty()) throw std::invalid_argument("compare_strategies: need at least one seed");

    StrategyComparison out;
    out.reports.push_back(estimate_local(batch, inventory.local));

    double mdc_span = 0.0, mdc_reassign = 0.0;
    for (std::uint64_t seed : seeds) {
        const ExecutionReport r = estimate_mdc(batch, inventory.peers, seed);
        mdc_span += r.makespan_s;
        mdc_reassign += r.reassignments;
    }
    const double n_seeds = static_cast<double>(seeds.size());
    out.reports.push_back({ExecStrategy::Mdc, 1, mdc_span / n_seeds, mdc_reassign / n_seeds});

    out.reports.push_back(estimate_mec(batch, inventory.servers, 1));
    out.reports.push_back(estimate_mec(batch, inventory.servers, inventory.collab_k));

    std::vector<std::size_t> order{0, 1, 2, 3};
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return out.reports[a].makespan_s > out.reports[b].makespan_s;
    });
    for (std::size_t i : order) out.slowest_first.push_back(out.reports[i].strategy);
    return out;
}

/// Shipped calibration: phone-class devices at speed 1, edge servers at
/// speed 8, 1 Mbps offload links, 8-bit grayscale frame inputs. The second
/// (collaborating) server carries extra per-task overhead for the relay hop,
/// tuned so CollabMEC(2) lands ~40% below SingleMEC.
inline TaskBatch default_batch() { return TaskBatch{20, 481.0 * 321.0 * 8.0, 10.0}; }

inline Inventory default_inventory(double mu_s = 100.0, double sigma_s = 5.0, int n_peers = 4) {
    Inventory inv;
    inv.local = ResourceNode{NodeKind::LocalDevice, 1.0, 0.0, std::nullopt, 0.0};
    for (int p = 0; p < n_peers; ++p) {
        inv.peers.push_back(
            ResourceNode{NodeKind::PeerDevice, 1.0, 1.0, Availability{mu_s, sigma_s}, 0.0});
    }
    inv.servers.push_back(ResourceNode{NodeKind::EdgeServer, 8.0, 1.0, std::nullopt, 0.1});
    inv.servers.push_back(ResourceNode{NodeKind::EdgeServer, 8.0, 1.0, std::nullopt, 0.6});
    inv.collab_k = 2;
    return inv;
}

}  // namespace mecsim

#endif

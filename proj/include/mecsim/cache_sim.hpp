#ifndef MECSIM_CACHE_SIM_HPP
#define MECSIM_CACHE_SIM_HPP

#include <array>
#include <cstdint>
#include <queue>
#include <span>
#include <stdexcept>
#include <vector>

#include "mecsim/strategy.hpp"

namespace mecsim {

/// Simulation event. Ordering: time, then releases before arrivals, then
/// insertion sequence.
struct Event {
    enum class Kind { TranscodeRelease = 0, RequestArrival = 1 };
    double time_s = 0.0;
    Kind kind = Kind::RequestArrival;
    std::uint64_t seq = 0;
    std::size_t payload = 0;  // index into the trace or the job list

    friend bool operator>(const Event& a, const Event& b) {
        if (a.time_s != b.time_s) return a.time_s > b.time_s;
        if (a.kind != b.kind) return a.kind > b.kind;
        return a.seq > b.seq;
    }
};

struct Metrics {
    double demand_bits = 0.0;
    double backhaul_bits = 0.0;  // origin fetches
    double inter_bs_bits = 0.0;  // lateral transfers
    std::array<std::uint64_t, kServiceSourceCount> source_counts{};
    std::uint64_t n_requests = 0;
    std::vector<double> busy_integral_per_server;  // Mbps*s over the window
    double window_s = 0.0;
    double processing_capacity_mbps = 0.0;

    std::uint64_t count(ServiceSource s) const {
        return source_counts[static_cast<std::size_t>(s)];
    }

    double local_hit_rate() const {
        return n_requests == 0 ? 0.0
                               : static_cast<double>(count(ServiceSource::LocalHit)) /
                                     static_cast<double>(n_requests);
    }

    /// Mean transcoder utilization across servers, in [0, 1].
    double mean_utilization() const {
        if (busy_integral_per_server.empty() || processing_capacity_mbps <= 0.0 || window_s <= 0.0)
            return 0.0;
        double total = 0.0;
        for (double b : busy_integral_per_server) total += b;
        return total / (processing_capacity_mbps * window_s *
                        static_cast<double>(busy_integral_per_server.size()));
    }
};

inline void account(const ServiceDecision& decision, Metrics& metrics) {
    metrics.n_requests += 1;
    metrics.demand_bits += decision.requested_bits;
    metrics.backhaul_bits += decision.origin_bits;
    metrics.inter_bs_bits += decision.inter_bs_bits;
    metrics.source_counts[static_cast<std::size_t>(decision.source)] += 1;
}

/// Backhaul traffic normalized to total demanded bits.
inline double backhaul_load(const Metrics& metrics) {
    if (metrics.demand_bits <= 0.0)
        throw std::domain_error("backhaul_load: undefined for zero demand");
    return metrics.backhaul_bits / metrics.demand_bits;
}

/// Exact expected LocalExact probability per BS under static placement:
/// sum over cached (v, q) of p_bs(v) * variant_dist(q).
inline std::vector<double> analytic_local_hit_rate(std::span<const CacheState> placement,
                                                   const PopularityProfile& profile,
                                                   std::span<const double> variant_dist) {
    const std::vector<double> pmf = zipf_pmf(profile.n_videos(), profile.alpha);
    std::vector<double> rates;
    rates.reserve(placement.size());
    for (int b = 0; b < static_cast<int>(placement.size()); ++b) {
        const auto& ranks = profile.rank_of_video[static_cast<std::size_t>(b)];
        double rate = 0.0;
        for (const CacheEntry& e : placement[static_cast<std::size_t>(b)].entries()) {
            rate += pmf[static_cast<std::size_t>(ranks[static_cast<std::size_t>(e.video_id)])] *
                    variant_dist[static_cast<std::size_t>(e.variant_idx)];
        }
        rates.push_back(rate);
    }
    return rates;
}

struct SimOptions {
    double cache_fraction = 0.3;          // of library_size_bits, per BS
    double processing_capacity_mbps = 40.0;
    double warmup_s = 0.0;                // excluded from metrics
    std::vector<double> variant_dist;     // empty -> uniform
    TranscodeCosting costing = TranscodeCosting::InputBitrate;
    bool reactive_lru = false;            // off for all placement-comparison runs
    bool cache_transcode_output = false;  // requires reactive_lru
};

/// Replays a trace against proactively placed caches under one strategy.
/// Deterministic for fixed inputs. Metrics cover [warmup_s, horizon_s].
inline Metrics run(const VideoCatalog& catalog, const PopularityProfile& profile,
                   const RequestTrace& trace, StrategyKind strategy, const SimOptions& options) {
    catalog.validate();
    if (options.warmup_s < 0.0 || (options.warmup_s > 0.0 && options.warmup_s >= trace.horizon_s))
        throw std::invalid_argument("run: warmup must lie in [0, horizon)");
    std::vector<double> vd = options.variant_dist;
    if (vd.empty()) vd.assign(static_cast<std::size_t>(catalog.n_variants()),
                              1.0 / catalog.n_variants());

    const double capacity_bits = options.cache_fraction * library_size_bits(catalog);
    std::vector<CacheState> caches =
        plan_placement(profile, catalog, capacity_bits, strategy_has_processing(strategy), vd);

    std::vector<Processor> processors(static_cast<std::size_t>(profile.n_bs()));
    for (auto& p : processors) p.capacity_mbps = options.processing_capacity_mbps;

    std::priority_queue<Event, std::vector<Event>, std::greater<>> queue;
    std::uint64_t seq = 0;
    for (std::size_t i = 0; i < trace.requests.size(); ++i) {
        queue.push(Event{trace.requests[i].arrival_time_s, Event::Kind::RequestArrival, seq++, i});
    }

    std::vector<TranscodeJob> jobs;
    Metrics metrics;
    metrics.processing_capacity_mbps = options.processing_capacity_mbps;
    const double horizon = trace.horizon_s;
    const double warmup = options.warmup_s;
    bool measuring = warmup <= 0.0;
    std::uint64_t tick = 0;

    while (!queue.empty()) {
        const Event ev = queue.top();
        queue.pop();
        if (ev.time_s > horizon) break;  // releases past the horizon fall outside the window

        if (!measuring && ev.time_s > warmup) {
            for (auto& p : processors) p.reset_integral(warmup);
            metrics = Metrics{};
            metrics.processing_capacity_mbps = options.processing_capacity_mbps;
            measuring = true;
        }

        if (ev.kind == Event::Kind::TranscodeRelease) {
            const TranscodeJob& job = jobs[ev.payload];
            processors[static_cast<std::size_t>(job.host_bs)].release(job.load_mbps, ev.time_s);
            continue;
        }

        const Request& request = trace.requests[ev.payload];
        ServiceDecision decision =
            serve_request(strategy, request, caches, processors, catalog, ev.time_s, options.costing);
        account(decision, metrics);

        if (decision.transcode) {
            jobs.push_back(*decision.transcode);
            queue.push(Event{decision.transcode->end_s, Event::Kind::TranscodeRelease, seq++,
                             jobs.size() - 1});
        }

        if (options.reactive_lru) {
            auto& local = caches[static_cast<std::size_t>(request.bs_id)];
            ++tick;
            switch (decision.source) {
                case ServiceSource::LocalHit:
                    local.touch(request.video_id, request.variant_idx, tick);
                    break;
                case ServiceSource::LocalTranscode:
                    local.touch(request.video_id, decision.transcode->from_variant, tick);
                    if (options.cache_transcode_output) {
                        local.reactive_insert(
                            CacheEntry{request.video_id, request.variant_idx,
                                       catalog.variant_size_bits(request.variant_idx)},
                            tick);
                    }
                    break;
                default:
                    local.reactive_insert(CacheEntry{request.video_id, request.variant_idx,
                                                     catalog.variant_size_bits(request.variant_idx)},
                                          tick);
                    break;
            }
        }
    }

    if (!measuring) {  // nothing arrived after the warm-up
        for (auto& p : processors) p.reset_integral(warmup);
        metrics = Metrics{};
        metrics.processing_capacity_mbps = options.processing_capacity_mbps;
    }
    const double window_start = warmup > 0.0 ? warmup : 0.0;
    metrics.window_s = horizon - window_start;
    metrics.busy_integral_per_server.reserve(processors.size());
    for (auto& p : processors) {
        p.advance(horizon);
        metrics.busy_integral_per_server.push_back(p.busy_integral);
    }
    return metrics;
}

}  // namespace mecsim

#endif

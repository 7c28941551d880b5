#ifndef MECSIM_STRATEGY_HPP
#define MECSIM_STRATEGY_HPP

#include <optional>
#include <span>
#include <string_view>

#include "mecsim/cache.hpp"
#include "mecsim/transcode.hpp"
#include "mecsim/workload.hpp"

namespace mecsim {

enum class StrategyKind { ProCache, CoCache, ProCoCache, CoProCoCache };

inline constexpr int kStrategyCount = 4;

inline bool strategy_has_processing(StrategyKind s) { return s != StrategyKind::CoCache; }

inline const char* strategy_token(StrategyKind s) {
    switch (s) {
        case StrategyKind::ProCache: return "pro-cache";
        case StrategyKind::CoCache: return "co-cache";
        case StrategyKind::ProCoCache: return "pro-cocache";
        case StrategyKind::CoProCoCache: return "copro-cocache";
    }
    return "?";
}

inline std::optional<StrategyKind> parse_strategy(std::string_view token) {
    if (token == "pro-cache") return StrategyKind::ProCache;
    if (token == "co-cache") return StrategyKind::CoCache;
    if (token == "pro-cocache") return StrategyKind::ProCoCache;
    if (token == "copro-cocache") return StrategyKind::CoProCoCache;
    return std::nullopt;
}

enum class ServiceSource {
    LocalHit = 0,
    LocalTranscode,
    NeighborHit,
    NeighborTranscodeAtProvider,
    NeighborFetchTranscodeAtDelivery,
    OriginFetch,
};

inline constexpr int kServiceSourceCount = 6;

/// How one request was served, with per-link bit accounting. origin_bits is
/// nonzero only for OriginFetch; inter_bs_bits only when a neighbor is
/// involved; transcode only for the *Transcode* sources.
struct ServiceDecision {
    ServiceSource source = ServiceSource::OriginFetch;
    int neighbor_bs = -1;
    double requested_bits = 0.0;
    double origin_bits = 0.0;
    double inter_bs_bits = 0.0;
    std::optional<TranscodeJob> transcode;
};

enum class TranscodeCosting { InputBitrate, OutputBitrate };

/// Serves one request under the given strategy. The rule lists are ordered;
/// the first matching rule fires:
///   ProCache:      local exact | local transcode | origin
///   CoCache:       local exact | neighbor exact | origin
///   ProCoCache:    local exact | local transcode | neighbor exact |
///                  neighbor higher (transcode at delivery) | origin
///   CoProCoCache:  as ProCoCache, but the neighbor-higher transcode goes to
///                  the lower-loaded of {provider, delivery}; if that node
///                  rejects, the other is tried; if both reject, origin.
/// Neighbors are scanned in ascending BS id. Admissions mutate `processors`;
/// the caller owns release scheduling for any returned job.
inline ServiceDecision serve_request(StrategyKind strategy, const Request& request,
                                     std::span<const CacheState> caches,
                                     std::span<Processor> processors,
                                     const VideoCatalog& catalog, double now_s,
                                     TranscodeCosting costing = TranscodeCosting::InputBitrate) {
    const int bs = request.bs_id;
    const int video = request.video_id;
    const int wanted = request.variant_idx;
    const double requested_bits = catalog.variant_size_bits(wanted);

    ServiceDecision decision;
    decision.requested_bits = requested_bits;

    const auto job_load = [&](int from_variant) {
        return costing == TranscodeCosting::InputBitrate ? catalog.variant_bitrate_mbps(from_variant)
                                                         : catalog.variant_bitrate_mbps(wanted);
    };
    const auto make_job = [&](int from_variant, int host) {
        return TranscodeJob{video, from_variant, wanted, job_load(from_variant),
                            now_s, now_s + catalog.duration_s, host};
    };

    // Tier 1: local cache.
    const LookupOutcome local = lookup(caches[static_cast<std::size_t>(bs)], video, wanted);
    if (local.kind == LookupKind::LocalExact) {
        decision.source = ServiceSource::LocalHit;
        return decision;
    }
    if (local.kind == LookupKind::LocalHigher && strategy_has_processing(strategy)) {
        if (processors[static_cast<std::size_t>(bs)].admit(job_load(local.best_variant_idx), now_s)) {
            decision.source = ServiceSource::LocalTranscode;
            decision.transcode = make_job(local.best_variant_idx, bs);
            return decision;
        }
    }

    // Tier 2: neighbors (full mesh, ascending id).
    if (strategy != StrategyKind::ProCache) {
        for (int n = 0; n < static_cast<int>(caches.size()); ++n) {
            if (n == bs) continue;
            if (caches[static_cast<std::size_t>(n)].contains(video, wanted)) {
                decision.source = ServiceSource::NeighborHit;
                decision.neighbor_bs = n;
                decision.inter_bs_bits = requested_bits;
                return decision;
            }
        }
        if (strategy == StrategyKind::ProCoCache || strategy == StrategyKind::CoProCoCache) {
            for (int n = 0; n < static_cast<int>(caches.size()); ++n) {
                if (n == bs) continue;
                const LookupOutcome remote = lookup(caches[static_cast<std::size_t>(n)], video, wanted);
                if (remote.kind != LookupKind::LocalHigher) continue;
                const int source_variant = remote.best_variant_idx;
                const double load = job_load(source_variant);

                if (strategy == StrategyKind::ProCoCache) {
                    // Transcoding only at the delivery node.
                    if (processors[static_cast<std::size_t>(bs)].admit(load, now_s)) {
                        decision.source = ServiceSource::NeighborFetchTranscodeAtDelivery;
                        decision.neighbor_bs = n;
                        decision.inter_bs_bits = catalog.variant_size_bits(source_variant);
                        decision.transcode = make_job(source_variant, bs);
                        return decision;
                    }
                } else {
                    const TranscodeNode first =
                        pick_transcoder(processors[static_cast<std::size_t>(n)].in_use_mbps,
                                        processors[static_cast<std::size_t>(bs)].in_use_mbps);
                    for (int attempt = 0; attempt < 2; ++attempt) {
                        const TranscodeNode node =
                            attempt == 0 ? first
                                         : (first == TranscodeNode::Provider ? TranscodeNode::Delivery
                                                                             : TranscodeNode::Provider);
                        const int host = node == TranscodeNode::Provider ? n : bs;
                        if (!processors[static_cast<std::size_t>(host)].admit(load, now_s)) continue;
                        decision.neighbor_bs = n;
                        decision.transcode = make_job(source_variant, host);
                        if (node == TranscodeNode::Provider) {
                            decision.source = ServiceSource::NeighborTranscodeAtProvider;
                            decision.inter_bs_bits = requested_bits;  // the transcoded output moves
                        } else {
                            decision.source = ServiceSource::NeighborFetchTranscodeAtDelivery;
                            decision.inter_bs_bits = catalog.variant_size_bits(source_variant);
                        }
                        return decision;
                    }
                }
                break;  // only the lowest-id neighbor holding a higher variant is tried
            }
        }
    }

    decision.source = ServiceSource::OriginFetch;
    decision.origin_bits = requested_bits;
    return decision;
}

}  // namespace mecsim

#endif

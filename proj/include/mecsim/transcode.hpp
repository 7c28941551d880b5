#ifndef MECSIM_TRANSCODE_HPP
#define MECSIM_TRANSCODE_HPP

#include <cassert>
#include <stdexcept>

#include "mecsim/catalog.hpp"

namespace mecsim {

/// Fluid-capacity transcoding processor. in_use is the sum of active job
/// loads in Mbps; busy_integral accumulates in_use over time, so utilization
/// over a window is busy_integral / (capacity * window).
struct Processor {
    double capacity_mbps = 0.0;
    double in_use_mbps = 0.0;
    double busy_integral = 0.0;  // Mbps * seconds
    double last_update_s = 0.0;

    void advance(double now_s) {
        if (now_s > last_update_s) {
            busy_integral += in_use_mbps * (now_s - last_update_s);
            last_update_s = now_s;
        }
    }

    /// All-or-nothing admission; the caller schedules the matching release.
    bool admit(double load_mbps, double now_s) {
        if (load_mbps <= 0.0) throw std::invalid_argument("admit: load must be positive");
        advance(now_s);
        if (in_use_mbps + load_mbps > capacity_mbps) return false;
        in_use_mbps += load_mbps;
        assert(in_use_mbps <= capacity_mbps);
        return true;
    }

    void release(double load_mbps, double now_s) {
        advance(now_s);
        in_use_mbps -= load_mbps;
        if (in_use_mbps < 0.0 && in_use_mbps > -1e-9) in_use_mbps = 0.0;  // FP dust
        assert(in_use_mbps >= 0.0);
    }

    /// Drop the accumulated integral; measurement restarts at now.
    void reset_integral(double now_s) {
        advance(now_s);
        busy_integral = 0.0;
    }
};

struct TranscodeJob {
    int video_id = 0;
    int from_variant = 0;
    int to_variant = 0;
    double load_mbps = 0.0;
    double start_s = 0.0;
    double end_s = 0.0;
    int host_bs = 0;
};

/// A variant can only be produced from a strictly higher-bitrate one.
inline bool can_transcode(const VideoCatalog& catalog, int from_variant, int to_variant) {
    return catalog.variant_bitrate_mbps(from_variant) > catalog.variant_bitrate_mbps(to_variant);
}

enum class TranscodeNode { Provider, Delivery };

/// Lower instantaneous load wins; ties go to the delivery node.
inline TranscodeNode pick_transcoder(double provider_in_use_mbps, double delivery_in_use_mbps) {
    if (provider_in_use_mbps < 0.0 || delivery_in_use_mbps < 0.0)
        throw std::invalid_argument("pick_transcoder: loads must be >= 0");
    return provider_in_use_mbps < delivery_in_use_mbps ? TranscodeNode::Provider
                                                       : TranscodeNode::Delivery;
}

/// Utilization over [window_start, horizon]; integral must start at window_start.
inline double utilization(Processor processor, double horizon_s, double window_start_s = 0.0) {
    if (horizon_s <= window_start_s) throw std::invalid_argument("utilization: empty window");
    if (processor.capacity_mbps <= 0.0) return 0.0;
    processor.advance(horizon_s);
    return processor.busy_integral / (processor.capacity_mbps * (horizon_s - window_start_s));
}

}  // namespace mecsim

#endif

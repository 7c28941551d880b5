#ifndef MECSIM_INTERFERENCE_HPP
#define MECSIM_INTERFERENCE_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "mecsim/rng.hpp"

namespace mecsim {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline double distance_m(const Point& a, const Point& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

struct CellLayout {
    std::vector<Point> bs_positions;
    double cell_radius_m = 0.0;
    double interference_radius_m = 0.0;

    int nearest_bs(const Point& p) const {
        int best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (int b = 0; b < static_cast<int>(bs_positions.size()); ++b) {
            const double d = distance_m(p, bs_positions[static_cast<std::size_t>(b)]);
            if (d < best_d) {
                best_d = d;
                best = b;
            }
        }
        return best;
    }

    void validate() const {
        if (bs_positions.empty()) throw std::invalid_argument("layout: need at least one BS");
        if (interference_radius_m < 0.0)
            throw std::invalid_argument("layout: interference radius must be >= 0");
    }
};

struct MobileStation {
    Point position;
    int serving_bs = 0;
    double tx_power_w = 0.0;
};

struct ChannelModel {
    double pathloss_exponent = 3.5;  // > 2
    double noise_power_w = 0.0;
    double cqi_threshold_db = 3.0;

    void validate() const {
        if (pathloss_exponent <= 2.0)
            throw std::invalid_argument("channel: pathloss exponent must exceed 2");
        if (noise_power_w <= 0.0) throw std::invalid_argument("channel: noise power must be positive");
    }
};

enum class Layer { Layer1, Layer2 };
enum class ClassifyMode { Geometric, Cqi };

struct LayerAssignment {
    std::vector<Layer> layer;
    std::vector<double> pre_sinr_db;
    std::vector<double> post_sinr_db;

    std::size_t layer2_count() const {
        std::size_t n = 0;
        for (Layer l : layer) n += l == Layer::Layer2;
        return n;
    }
    double layer2_fraction() const {
        return layer.empty() ? 0.0 : static_cast<double>(layer2_count()) / layer.size();
    }
};

namespace detail {

// Distance-law received power at a BS; distance clamped to 1 m.
inline double received_power_w(const MobileStation& ms, const Point& bs, double exponent) {
    const double d = std::max(distance_m(ms.position, bs), 1.0);
    return ms.tx_power_w * std::pow(d, -exponent);
}

}  // namespace detail

/// Uplink SINR of one MS at its serving BS, in dB. Interference comes from
/// the co-channel MSs of other cells; `cancelled` flags interferers removed
/// by joint processing.
inline double uplink_sinr_db(std::size_t ms_index, std::span<const MobileStation> stations,
                             const CellLayout& layout, const ChannelModel& channel,
                             std::span<const std::uint8_t> cancelled = {}) {
    const MobileStation& victim = stations[ms_index];
    const Point& serving = layout.bs_positions[static_cast<std::size_t>(victim.serving_bs)];
    const double signal = detail::received_power_w(victim, serving, channel.pathloss_exponent);
    double interference = 0.0;
    for (std::size_t j = 0; j < stations.size(); ++j) {
        if (j == ms_index) continue;
        if (stations[j].serving_bs == victim.serving_bs) continue;
        if (!cancelled.empty() && cancelled[j]) continue;
        interference += detail::received_power_w(stations[j], serving, channel.pathloss_exponent);
    }
    return linear_to_db(signal / (interference + channel.noise_power_w));
}

/// Geometric: Layer2 iff the MS sits within the interference radius of at
/// least one non-serving BS. CQI: Layer2 iff uplink SINR < threshold.
inline Layer classify(std::size_t ms_index, std::span<const MobileStation> stations,
                      const CellLayout& layout, const ChannelModel& channel, ClassifyMode mode) {
    const MobileStation& ms = stations[ms_index];
    if (mode == ClassifyMode::Geometric) {
        for (int b = 0; b < static_cast<int>(layout.bs_positions.size()); ++b) {
            if (b == ms.serving_bs) continue;
            if (distance_m(ms.position, layout.bs_positions[static_cast<std::size_t>(b)]) <=
                layout.interference_radius_m) {
                return Layer::Layer2;
            }
        }
        return Layer::Layer1;
    }
    return uplink_sinr_db(ms_index, stations, layout, channel) < channel.cqi_threshold_db
               ? Layer::Layer2
               : Layer::Layer1;
}

inline LayerAssignment classify_all(std::span<const MobileStation> stations,
                                    const CellLayout& layout, const ChannelModel& channel,
                                    ClassifyMode mode) {
    layout.validate();
    channel.validate();
    LayerAssignment assignment;
    assignment.layer.reserve(stations.size());
    for (std::size_t i = 0; i < stations.size(); ++i) {
        assignment.layer.push_back(classify(i, stations, layout, channel, mode));
        assignment.pre_sinr_db.push_back(uplink_sinr_db(i, stations, layout, channel));
    }
    assignment.post_sinr_db = assignment.pre_sinr_db;
    return assignment;
}

/// Joint processing at the BPU removes, for every Layer2 MS, the interference
/// of the other Layer2 MSs (perfect cancellation). Layer1 interferers remain;
/// Layer1 MSs keep their pre-SINR.
inline void cancel_intra_cluster(LayerAssignment& assignment,
                                 std::span<const MobileStation> stations, const CellLayout& layout,
                                 const ChannelModel& channel) {
    std::vector<std::uint8_t> is_layer2(stations.size());
    for (std::size_t i = 0; i < stations.size(); ++i)
        is_layer2[i] = assignment.layer[i] == Layer::Layer2 ? 1 : 0;
    for (std::size_t i = 0; i < stations.size(); ++i) {
        if (!is_layer2[i]) {
            assignment.post_sinr_db[i] = assignment.pre_sinr_db[i];
            continue;
        }
        assignment.post_sinr_db[i] = uplink_sinr_db(i, stations, layout, channel, is_layer2);
    }
}

struct FronthaulReport {
    double bpu_load_mbps = 0.0;
    double savings_vs_cran = 0.0;  // 1 - layer2 fraction
};

/// Layer2 MSs stream raw samples to the BPU; the C-RAN baseline streams all.
inline FronthaulReport fronthaul_report(const LayerAssignment& assignment,
                                        double raw_rate_per_ms_mbps) {
    if (raw_rate_per_ms_mbps <= 0.0)
        throw std::invalid_argument("fronthaul_report: raw rate must be positive");
    FronthaulReport report;
    report.bpu_load_mbps = raw_rate_per_ms_mbps * static_cast<double>(assignment.layer2_count());
    report.savings_vs_cran = 1.0 - assignment.layer2_fraction();
    return report;
}

/// One uniform MS inside the cell disc, rejection-sampled into the cell's
/// nearest-BS region so exactly one co-channel MS lives in each cell.
inline MobileStation draw_ms_in_cell(const CellLayout& layout, int cell, double tx_power_w,
                                     rng::Engine& engine) {
    const Point& center = layout.bs_positions[static_cast<std::size_t>(cell)];
    for (;;) {
        const double r = layout.cell_radius_m * std::sqrt(rng::uniform01(engine));
        const double theta = 2.0 * 3.14159265358979323846 * rng::uniform01(engine);
        const Point p{center.x + r * std::cos(theta), center.y + r * std::sin(theta)};
        if (layout.nearest_bs(p) == cell) {
            return MobileStation{p, cell, tx_power_w};
        }
    }
}

inline std::vector<MobileStation> draw_snapshot(const CellLayout& layout, double tx_power_w,
                                                std::uint64_t seed, std::uint64_t snapshot_index) {
    std::vector<MobileStation> stations;
    stations.reserve(layout.bs_positions.size());
    for (int cell = 0; cell < static_cast<int>(layout.bs_positions.size()); ++cell) {
        auto engine = rng::make_engine(seed, rng::Stream::MsPlacement,
                                       snapshot_index * layout.bs_positions.size() +
                                           static_cast<std::uint64_t>(cell));
        stations.push_back(draw_ms_in_cell(layout, cell, tx_power_w, engine));
    }
    return stations;
}

/// Three-cell demo scene: one cell-center station and two cell-edge stations
/// that fall inside their neighbors' interference regions.
inline CellLayout default_layout() {
    CellLayout layout;
    layout.bs_positions = {{0.0, 0.0}, {600.0, 0.0}, {300.0, 300.0 * std::sqrt(3.0)}};
    layout.cell_radius_m = 500.0;
    layout.interference_radius_m = 0.8 * 500.0;
    return layout;
}

inline std::vector<MobileStation> default_snapshot(double tx_power_w = dbm_to_watts(23.0)) {
    return {
        MobileStation{{30.0, 20.0}, 0, tx_power_w},
        MobileStation{{310.0, 160.0}, 1, tx_power_w},
        MobileStation{{448.0, 263.3}, 2, tx_power_w},
    };
}

inline ChannelModel default_channel() {
    return ChannelModel{3.5, dbm_to_watts(-100.0), 3.0};
}

}  // namespace mecsim

#endif

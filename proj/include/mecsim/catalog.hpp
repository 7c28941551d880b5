#ifndef MECSIM_CATALOG_HPP
#define MECSIM_CATALOG_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace mecsim {

/// Size in bits of one video encoded at a constant bitrate.
inline double video_size_bits(double bitrate_mbps, double duration_s) {
    if (bitrate_mbps <= 0.0) throw std::invalid_argument("video_size_bits: bitrate must be positive");
    if (duration_s <= 0.0) throw std::invalid_argument("video_size_bits: duration must be positive");
    return bitrate_mbps * 1e6 * duration_s;
}

/// The video library: every video shares one duration and one ladder of
/// bitrate variants expressed as fractions of the original bitrate. Only the
/// variants are requestable; the original lives on the origin server.
struct VideoCatalog {
    int n_videos = 0;
    double original_bitrate_mbps = 0.0;
    double duration_s = 0.0;
    std::vector<double> variant_ratios;  // strictly decreasing, each in (0, 1]

    int n_variants() const { return static_cast<int>(variant_ratios.size()); }

    double variant_bitrate_mbps(int variant_idx) const {
        return original_bitrate_mbps * variant_ratios.at(static_cast<std::size_t>(variant_idx));
    }

    double variant_size_bits(int variant_idx) const {
        return video_size_bits(variant_bitrate_mbps(variant_idx), duration_s);
    }

    void validate() const {
        if (n_videos < 1) throw std::invalid_argument("catalog: n_videos must be >= 1");
        if (original_bitrate_mbps <= 0.0)
            throw std::invalid_argument("catalog: original_bitrate_mbps must be positive");
        if (duration_s <= 0.0) throw std::invalid_argument("catalog: duration_s must be positive");
        double prev = 1.0 + 1e-12;
        for (double r : variant_ratios) {
            if (r <= 0.0 || r > 1.0)
                throw std::invalid_argument("catalog: variant ratios must lie in (0, 1]");
            if (r >= prev)
                throw std::invalid_argument("catalog: variant ratios must be strictly decreasing");
            prev = r;
        }
    }
};

/// Total bits of all requestable variants of all videos.
inline double library_size_bits(const VideoCatalog& catalog) {
    double total = 0.0;
    for (int q = 0; q < catalog.n_variants(); ++q) {
        total += catalog.variant_size_bits(q);
    }
    return total * catalog.n_videos;
}

inline VideoCatalog default_catalog() {
    return VideoCatalog{1000, 2.0, 600.0, {0.82, 0.67, 0.55, 0.45}};
}

}  // namespace mecsim

#endif

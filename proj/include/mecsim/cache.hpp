#ifndef MECSIM_CACHE_HPP
#define MECSIM_CACHE_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "mecsim/catalog.hpp"
#include "mecsim/workload.hpp"

namespace mecsim {

struct CacheEntry {
    int video_id = 0;
    int variant_idx = 0;
    double size_bits = 0.0;
};

enum class LookupKind { LocalExact, LocalHigher, Miss };

struct LookupOutcome {
    LookupKind kind = LookupKind::Miss;
    int best_variant_idx = -1;  // set for LocalHigher
};

/// One MEC server's cache. Entries are (video, variant) pairs; membership is
/// indexed per video for O(1) lookups. Recency ticks support the optional
/// reactive LRU mode; static placement never consults them.
class CacheState {
public:
    CacheState() = default;
    CacheState(double capacity_bits, int n_videos, int n_variants)
        : capacity_bits_(capacity_bits),
          n_variants_(n_variants),
          cached_(static_cast<std::size_t>(n_videos) * static_cast<std::size_t>(n_variants), 0),
          last_touch_(cached_.size(), 0) {
        if (capacity_bits < 0.0) throw std::invalid_argument("cache: capacity must be >= 0");
    }

    double capacity_bits() const { return capacity_bits_; }
    double used_bits() const { return used_bits_; }
    const std::vector<CacheEntry>& entries() const { return entries_; }

    bool contains(int video_id, int variant_idx) const {
        return cached_[slot(video_id, variant_idx)] != 0;
    }

    /// Insert if it fits and is not already present.
    bool insert(const CacheEntry& entry) {
        if (contains(entry.video_id, entry.variant_idx)) return false;
        if (used_bits_ + entry.size_bits > capacity_bits_) return false;
        cached_[slot(entry.video_id, entry.variant_idx)] = 1;
        used_bits_ += entry.size_bits;
        entries_.push_back(entry);
        return true;
    }

    void touch(int video_id, int variant_idx, std::uint64_t tick) {
        last_touch_[slot(video_id, variant_idx)] = tick;
    }

    /// Reactive insertion: evict least-recently-used entries until the new
    /// entry fits. Returns false if it cannot fit even into an empty cache.
    bool reactive_insert(const CacheEntry& entry, std::uint64_t tick) {
        if (entry.size_bits > capacity_bits_) return false;
        if (contains(entry.video_id, entry.variant_idx)) {
            touch(entry.video_id, entry.variant_idx, tick);
            return true;
        }
        while (used_bits_ + entry.size_bits > capacity_bits_) {
            evict_lru();
        }
        insert(entry);
        touch(entry.video_id, entry.variant_idx, tick);
        return true;
    }

private:
    std::size_t slot(int video_id, int variant_idx) const {
        return static_cast<std::size_t>(video_id) * static_cast<std::size_t>(n_variants_) +
               static_cast<std::size_t>(variant_idx);
    }

    void evict_lru() {
        std::size_t victim = 0;
        std::uint64_t oldest = std::numeric_limits<std::uint64_t>::max();
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            const std::uint64_t t = last_touch_[slot(entries_[i].video_id, entries_[i].variant_idx)];
            if (t < oldest) {
                oldest = t;
                victim = i;
            }
        }
        const CacheEntry& e = entries_[victim];
        cached_[slot(e.video_id, e.variant_idx)] = 0;
        used_bits_ -= e.size_bits;
        entries_.erase(entries_.begin() + static_cast<std::ptrdiff_t>(victim));
    }

    double capacity_bits_ = 0.0;
    double used_bits_ = 0.0;
    int n_variants_ = 0;
    std::vector<CacheEntry> entries_;
    std::vector<std::uint8_t> cached_;
    std::vector<std::uint64_t> last_touch_;
};

/// LocalExact if the pair is cached; otherwise the lowest-bitrate cached
/// variant still strictly above the request (minimizes transcode load);
/// otherwise Miss.
inline LookupOutcome lookup(const CacheState& state, int video_id, int variant_idx) {
    if (state.contains(video_id, variant_idx)) {
        return {LookupKind::LocalExact, variant_idx};
    }
    for (int q = variant_idx - 1; q >= 0; --q) {  // ratios decrease with index
        if (state.contains(video_id, q)) {
            return {LookupKind::LocalHigher, q};
        }
    }
    return {LookupKind::Miss, -1};
}

/// Proactive per-BS placement: greedy fill in descending local popularity,
/// stopping at the first item that does not fit (no skip-fill). Ties break by
/// ascending video id, then descending variant bitrate.
///
/// With processing, the highest requestable variant of each video goes first
/// (it serves every lower variant via transcode); any remaining capacity then
/// fills with lower variants in joint-probability order, so large caches hold
/// the popular videos and their variants. Without processing, all (video,
/// variant) pairs rank by p(video) x p(variant).
inline std::vector<CacheState> plan_placement(const PopularityProfile& profile,
                                              const VideoCatalog& catalog, double capacity_bits,
                                              bool with_processing,
                                              std::span<const double> variant_dist = {}) {
    if (capacity_bits < 0.0) throw std::invalid_argument("plan_placement: capacity must be >= 0");
    const int n_videos = catalog.n_videos;
    const int n_variants = catalog.n_variants();

    std::vector<double> vd(variant_dist.begin(), variant_dist.end());
    if (vd.empty() && n_variants > 0) {
        vd.assign(static_cast<std::size_t>(n_variants), 1.0 / n_variants);
    }

    std::vector<double> sizes(static_cast<std::size_t>(n_variants));
    for (int q = 0; q < n_variants; ++q) sizes[static_cast<std::size_t>(q)] = catalog.variant_size_bits(q);

    const std::vector<double> pmf = zipf_pmf(n_videos, profile.alpha);

    std::vector<CacheState> states;
    states.reserve(static_cast<std::size_t>(profile.n_bs()));
    for (int b = 0; b < profile.n_bs(); ++b) {
        const auto& ranks = profile.rank_of_video[static_cast<std::size_t>(b)];

        struct Item {
            double weight;
            int video_id;
            int variant_idx;
        };
        std::vector<Item> order;
        order.reserve(static_cast<std::size_t>(n_videos) * static_cast<std::size_t>(n_variants));

        auto joint_sorted = [&](int first_variant) {
            std::vector<Item> items;
            for (int v = 0; v < n_videos; ++v) {
                const double pv = pmf[static_cast<std::size_t>(ranks[static_cast<std::size_t>(v)])];
                for (int q = first_variant; q < n_variants; ++q) {
                    items.push_back({pv * vd[static_cast<std::size_t>(q)], v, q});
                }
            }
            std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
                if (a.weight != b.weight) return a.weight > b.weight;
                if (a.video_id != b.video_id) return a.video_id < b.video_id;
                return a.variant_idx < b.variant_idx;
            });
            return items;
        };

        if (with_processing && n_variants > 0) {
            const std::vector<int> by_rank = profile.videos_by_rank(b);
            for (int v : by_rank) order.push_back({0.0, v, 0});
            const auto rest = joint_sorted(1);
            order.insert(order.end(), rest.begin(), rest.end());
        } else {
            order = joint_sorted(0);
        }

        CacheState state(capacity_bits, n_videos, n_variants);
        for (const Item& item : order) {
            const double size = sizes[static_cast<std::size_t>(item.variant_idx)];
            if (state.used_bits() + size > capacity_bits) break;
            state.insert(CacheEntry{item.video_id, item.variant_idx, size});
        }
        states.push_back(std::move(state));
    }
    return states;
}

}  // namespace mecsim

#endif

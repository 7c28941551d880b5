#ifndef MECSIM_WORKLOAD_HPP
#define MECSIM_WORKLOAD_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "mecsim/catalog.hpp"
#include "mecsim/rng.hpp"

namespace mecsim {

/// Rank-indexed Zipf probabilities: p[i] = (i+1)^-alpha / sum_j (j+1)^-alpha.
/// The normalizer is computed by direct summation.
inline std::vector<double> zipf_pmf(int n, double alpha) {
    if (n < 1) throw std::invalid_argument("zipf_pmf: n must be >= 1");
    if (alpha < 0.0) throw std::invalid_argument("zipf_pmf: alpha must be >= 0");
    std::vector<double> p(static_cast<std::size_t>(n));
    double norm = 0.0;
    for (int i = 0; i < n; ++i) {
        p[static_cast<std::size_t>(i)] = std::pow(static_cast<double>(i + 1), -alpha);
        norm += p[static_cast<std::size_t>(i)];
    }
    for (double& x : p) x /= norm;
    return p;
}

/// Per-BS popularity: one shared Zipf exponent plus, for every BS, a
/// permutation mapping video id -> popularity rank (0 = most popular there).
struct PopularityProfile {
    double alpha = 0.0;
    std::vector<std::vector<int>> rank_of_video;  // [bs][video] -> rank

    int n_bs() const { return static_cast<int>(rank_of_video.size()); }
    int n_videos() const { return rank_of_video.empty() ? 0 : static_cast<int>(rank_of_video[0].size()); }

    /// Inverse permutation for one BS: rank -> video id.
    std::vector<int> videos_by_rank(int bs) const {
        const auto& ranks = rank_of_video.at(static_cast<std::size_t>(bs));
        std::vector<int> order(ranks.size());
        for (std::size_t v = 0; v < ranks.size(); ++v) {
            order[static_cast<std::size_t>(ranks[v])] = static_cast<int>(v);
        }
        return order;
    }
};

/// Independent uniform rank permutation per BS, deterministic in the seed.
inline PopularityProfile shuffle_popularity(int n_videos, int n_bs, std::uint64_t seed,
                                            double alpha = 0.8) {
    if (n_videos < 1 || n_bs < 1)
        throw std::invalid_argument("shuffle_popularity: counts must be >= 1");
    PopularityProfile profile;
    profile.alpha = alpha;
    profile.rank_of_video.resize(static_cast<std::size_t>(n_bs));
    for (int b = 0; b < n_bs; ++b) {
        std::vector<int> ranks(static_cast<std::size_t>(n_videos));
        std::iota(ranks.begin(), ranks.end(), 0);
        auto engine = rng::make_engine(seed, rng::Stream::PopularityShuffle,
                                       static_cast<std::uint64_t>(b));
        rng::shuffle(ranks, engine);
        profile.rank_of_video[static_cast<std::size_t>(b)] = std::move(ranks);
    }
    return profile;
}

struct Request {
    double arrival_time_s = 0.0;
    int bs_id = 0;
    int video_id = 0;
    int variant_idx = 0;
};

struct RequestTrace {
    std::vector<Request> requests;  // sorted by arrival time
    double horizon_s = 0.0;
    std::uint64_t seed = 0;
};

/// Seeded Poisson request trace: per-BS arrivals with exponential gaps of
/// mean 60/rate seconds, video ids from the BS's Zipf pmf, variants from
/// variant_dist. Streams are merged by (time, bs, per-BS sequence).
inline RequestTrace generate_trace(const PopularityProfile& profile, const VideoCatalog& catalog,
                                   double rate_per_bs_per_min, double horizon_s,
                                   std::span<const double> variant_dist, std::uint64_t seed) {
    if (rate_per_bs_per_min < 0.0)
        throw std::invalid_argument("generate_trace: rate must be non-negative");
    if (static_cast<int>(variant_dist.size()) != catalog.n_variants())
        throw std::invalid_argument("generate_trace: variant_dist size must match catalog variants");
    double mass = 0.0;
    for (double p : variant_dist) mass += p;
    if (std::abs(mass - 1.0) > 1e-9)
        throw std::invalid_argument("generate_trace: variant_dist must sum to 1");

    RequestTrace trace;
    trace.horizon_s = horizon_s;
    trace.seed = seed;
    if (rate_per_bs_per_min == 0.0 || horizon_s <= 0.0) return trace;

    const double mean_gap_s = 60.0 / rate_per_bs_per_min;
    const std::vector<double> pmf = zipf_pmf(profile.n_videos(), profile.alpha);
    const std::vector<double> video_cdf = rng::to_cdf(pmf);
    const std::vector<double> variant_cdf = rng::to_cdf(variant_dist);

    struct Keyed {
        Request req;
        int seq;
    };
    std::vector<Keyed> merged;
    for (int b = 0; b < profile.n_bs(); ++b) {
        auto engine = rng::make_engine(seed, rng::Stream::Arrivals, static_cast<std::uint64_t>(b));
        const std::vector<int> by_rank = profile.videos_by_rank(b);
        double t = 0.0;
        int seq = 0;
        for (;;) {
            t += rng::exponential(engine, mean_gap_s);
            if (t > horizon_s) break;
            const int rank = static_cast<int>(rng::sample_cdf(video_cdf, engine));
            const int variant = static_cast<int>(rng::sample_cdf(variant_cdf, engine));
            merged.push_back({Request{t, b, by_rank[static_cast<std::size_t>(rank)], variant}, seq++});
        }
    }
    std::sort(merged.begin(), merged.end(), [](const Keyed& a, const Keyed& b) {
        if (a.req.arrival_time_s != b.req.arrival_time_s)
            return a.req.arrival_time_s < b.req.arrival_time_s;
        if (a.req.bs_id != b.req.bs_id) return a.req.bs_id < b.req.bs_id;
        return a.seq < b.seq;
    });
    trace.requests.reserve(merged.size());
    for (const auto& k : merged) trace.requests.push_back(k.req);
    return trace;
}

}  // namespace mecsim

#endif

#ifndef MECSIM_EXPERIMENT_HPP
#define MECSIM_EXPERIMENT_HPP

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <string>
#include <vector>

#include "mecsim/cache_sim.hpp"
#include "mecsim/config.hpp"
#include "mecsim/interference.hpp"
#include "mecsim/orchestration.hpp"
#include "mecsim/version.hpp"

namespace mecsim {

/// Fixed decimal formatting shared by every CSV cell, so identical runs are
/// byte-identical.
inline std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

namespace detail {

inline constexpr const char* kCacheHeader =
    "strategy,cache_fraction,processing_capacity_mbps,arrival_rate,backhaul_load,"
    "backhaul_bits,inter_bs_bits,local_hit_rate,processing_utilization,seed";
inline constexpr const char* kOrchestrateHeader = "strategy,makespan_s,reassignments,seed";
inline constexpr const char* kInterferenceHeader =
    "snapshot,layer2_fraction,mean_pre_sinr_db,mean_post_sinr_db,bpu_load_mbps,savings";

inline VideoCatalog catalog_from(const CacheCaseConfig& c) {
    return VideoCatalog{c.n_videos, c.original_bitrate_mbps, c.duration_s, c.variant_ratios};
}

inline std::vector<std::string> run_cache_point(const ExperimentConfig& cfg) {
    const auto& c = cfg.cache;
    const VideoCatalog catalog = catalog_from(c);
    const PopularityProfile profile =
        shuffle_popularity(c.n_videos, c.n_bs, cfg.seed, c.zipf_alpha);
    const RequestTrace trace = generate_trace(profile, catalog, c.arrival_rate_per_bs_per_min,
                                              c.horizon_s, c.variant_dist, cfg.seed);
    SimOptions opt;
    opt.cache_fraction = c.cache_fraction;
    opt.processing_capacity_mbps = c.processing_capacity_mbps;
    opt.warmup_s = c.warmup_s;
    opt.variant_dist = c.variant_dist;
    opt.costing = c.transcode_cost_basis == "output" ? TranscodeCosting::OutputBitrate
                                                     : TranscodeCosting::InputBitrate;
    opt.reactive_lru = c.reactive_lru;
    opt.cache_transcode_output = c.cache_transcode_output;

    // Rows follow the canonical strategy order regardless of config order.
    std::vector<StrategyKind> ordered;
    for (StrategyKind s : {StrategyKind::ProCache, StrategyKind::CoCache, StrategyKind::ProCoCache,
                           StrategyKind::CoProCoCache}) {
        if (std::find(c.strategies.begin(), c.strategies.end(), s) != c.strategies.end())
            ordered.push_back(s);
    }

    std::vector<std::string> rows;
    for (StrategyKind strategy : ordered) {
        const Metrics m = run(catalog, profile, trace, strategy, opt);
        const double load = m.n_requests == 0 ? 0.0 : backhaul_load(m);
        std::string row;
        row += strategy_token(strategy);
        row += ',' + format_value(c.cache_fraction);
        row += ',' + format_value(c.processing_capacity_mbps);
        row += ',' + format_value(c.arrival_rate_per_bs_per_min);
        row += ',' + format_value(load);
        row += ',' + format_value(m.backhaul_bits);
        row += ',' + format_value(m.inter_bs_bits);
        row += ',' + format_value(m.local_hit_rate());
        row += ',' + format_value(m.mean_utilization());
        row += ',' + std::to_string(cfg.seed);
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::vector<std::string> run_orchestrate_point(const ExperimentConfig& cfg) {
    const auto& c = cfg.orchestrate;
    const TaskBatch batch{c.n_tasks, c.input_bits_per_task, c.work_per_task};
    Inventory inv;
    inv.local = ResourceNode{NodeKind::LocalDevice, c.local_speed, 0.0, std::nullopt, 0.0};
    for (int p = 0; p < c.n_peers; ++p) {
        inv.peers.push_back(ResourceNode{NodeKind::PeerDevice, c.peer_speed, c.peer_link_mbps,
                                         Availability{c.mu_s, c.sigma_s}, c.peer_overhead_s});
    }
    for (const auto& s : c.servers) {
        inv.servers.push_back(
            ResourceNode{NodeKind::EdgeServer, s.speed, s.link_mbps, std::nullopt, s.overhead_s});
    }
    inv.collab_k = c.k;

    std::vector<std::string> rows;
    const ExecutionReport local = estimate_local(batch, inv.local);
    const ExecutionReport single = estimate_mec(batch, inv.servers, 1);
    const ExecutionReport collab = estimate_mec(batch, inv.servers, c.k);
    for (int i = 0; i < c.n_seeds; ++i) {
        const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(i);
        const ExecutionReport mdc = estimate_mdc(batch, inv.peers, seed);
        for (const ExecutionReport* r : {&local, &mdc, &single, &collab}) {
            std::string row;
            row += exec_strategy_token(r->strategy);
            row += ',' + format_value(r->makespan_s);
            row += ',' + format_value(r->reassignments);
            row += ',' + std::to_string(seed);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

inline std::vector<std::string> run_interference_point(const ExperimentConfig& cfg) {
    const auto& c = cfg.interference;
    CellLayout layout;
    layout.bs_positions = c.bs_positions;
    layout.cell_radius_m = c.cell_radius_m;
    layout.interference_radius_m = c.radius_fraction * c.cell_radius_m;
    ChannelModel channel{c.pathloss_exponent, dbm_to_watts(c.noise_dbm), c.cqi_threshold_db};
    const double tx_power_w = dbm_to_watts(c.tx_power_dbm);
    const ClassifyMode mode = c.mode == "cqi" ? ClassifyMode::Cqi : ClassifyMode::Geometric;

    std::vector<std::string> rows;
    for (int snap = 0; snap < c.n_snapshots; ++snap) {
        const auto stations =
            draw_snapshot(layout, tx_power_w, cfg.seed, static_cast<std::uint64_t>(snap));
        auto assignment = classify_all(stations, layout, channel, mode);
        cancel_intra_cluster(assignment, stations, layout, channel);
        const FronthaulReport fh = fronthaul_report(assignment, c.raw_rate_mbps);

        double pre = 0.0, post = 0.0;
        for (std::size_t i = 0; i < stations.size(); ++i) {
            pre += assignment.pre_sinr_db[i];
            post += assignment.post_sinr_db[i];
        }
        pre /= static_cast<double>(stations.size());
        post /= static_cast<double>(stations.size());

        std::string row = std::to_string(snap);
        row += ',' + format_value(assignment.layer2_fraction());
        row += ',' + format_value(pre);
        row += ',' + format_value(post);
        row += ',' + format_value(fh.bpu_load_mbps);
        row += ',' + format_value(fh.savings_vs_cran);
        rows.push_back(std::move(row));
    }
    return rows;
}

inline const char* case_header(CaseKind kind) {
    switch (kind) {
        case CaseKind::Cache: return kCacheHeader;
        case CaseKind::Orchestrate: return kOrchestrateHeader;
        case CaseKind::Interference: return kInterferenceHeader;
    }
    return kCacheHeader;
}

inline std::vector<std::string> run_point(const ExperimentConfig& cfg) {
    switch (cfg.kind) {
        case CaseKind::Cache: return run_cache_point(cfg);
        case CaseKind::Orchestrate: return run_orchestrate_point(cfg);
        case CaseKind::Interference: return run_interference_point(cfg);
    }
    return {};
}

inline void write_atomically(const std::filesystem::path& path, const std::string& body) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << body;
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace detail

struct ExperimentOutcome {
    std::vector<std::filesystem::path> outputs;  // CSVs, then the manifest
    std::vector<std::string> failures;           // one line per failed sweep point
    int exit_code = 0;
};

/// Runs a validated config: a single point, or a sweep with every point
/// evaluated in parallel. Writes one CSV for the cache case (sweep points are
/// extra rows), one CSV per sweep value otherwise, plus a manifest.
inline ExperimentOutcome run_experiment(const ExperimentConfig& cfg,
                                        const std::filesystem::path& out_dir) {
    const auto t0 = std::chrono::steady_clock::now();
    std::filesystem::create_directories(out_dir);

    ExperimentOutcome outcome;
    struct Point {
        ExperimentConfig cfg;
        double sweep_value = 0.0;
        bool swept = false;
    };
    std::vector<Point> points;
    if (cfg.sweep) {
        std::vector<double> values = cfg.sweep->values;
        std::sort(values.begin(), values.end());  // row order follows the sweep value
        for (double v : values) {
            Point p{cfg, v, true};
            p.cfg.sweep.reset();
            detail::apply_sweep_value(p.cfg, cfg.sweep->parameter, v);
            points.push_back(std::move(p));
        }
    } else {
        points.push_back(Point{cfg, 0.0, false});
    }

    struct PointResult {
        std::vector<std::string> rows;
        std::string error;
    };
    std::vector<std::future<PointResult>> futures;
    futures.reserve(points.size());
    for (const Point& p : points) {
        futures.push_back(std::async(std::launch::async, [&p]() -> PointResult {
            try {
                return {detail::run_point(p.cfg), {}};
            } catch (const std::exception& e) {
                return {{}, e.what()};
            }
        }));
    }
    std::vector<PointResult> results;
    results.reserve(futures.size());
    for (auto& f : futures) results.push_back(f.get());

    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!results[i].error.empty()) {
            std::string label = cfg.sweep
                                    ? cfg.sweep->parameter + "=" + format_value(points[i].sweep_value)
                                    : std::string("single point");
            outcome.failures.push_back(label + ": " + results[i].error);
        }
    }

    const char* header = detail::case_header(cfg.kind);
    if (cfg.kind == CaseKind::Cache || !cfg.sweep) {
        // One file; sweep points contribute sorted row blocks.
        std::string body(header);
        body += '\n';
        for (std::size_t i = 0; i < points.size(); ++i) {
            for (const auto& row : results[i].rows) {
                body += row;
                body += '\n';
            }
        }
        const auto path = out_dir / "results.csv";
        detail::write_atomically(path, body);
        outcome.outputs.push_back(path);
    } else {
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (!results[i].error.empty()) continue;
            std::string body(header);
            body += '\n';
            for (const auto& row : results[i].rows) {
                body += row;
                body += '\n';
            }
            const auto path = out_dir / ("results_" + cfg.sweep->parameter + "_" +
                                         format_value(points[i].sweep_value) + ".csv");
            detail::write_atomically(path, body);
            outcome.outputs.push_back(path);
        }
    }

    const auto elapsed =
        std::chrono::duration_cast<std::chrono::duration<double>>(std::chrono::steady_clock::now() - t0);

    nlohmann::json manifest;
    manifest["toolkit_version"] = kVersion;
    manifest["seed"] = cfg.seed;
    manifest["config"] = config_to_json(cfg);
    manifest["wall_clock_s"] = elapsed.count();
    nlohmann::json files = nlohmann::json::array();
    for (const auto& p : outcome.outputs) files.push_back(p.string());
    manifest["outputs"] = files;
    if (!outcome.failures.empty()) manifest["failed_points"] = outcome.failures;
    const auto manifest_path = out_dir / "manifest.json";
    detail::write_atomically(manifest_path, manifest.dump(2) + "\n");
    outcome.outputs.push_back(manifest_path);

    outcome.exit_code = outcome.failures.empty() ? 0 : 1;
    return outcome;
}

}  // namespace mecsim

#endif

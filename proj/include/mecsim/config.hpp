#ifndef MECSIM_CONFIG_HPP
#define MECSIM_CONFIG_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mecsim/interference.hpp"
#include "mecsim/orchestration.hpp"
#include "mecsim/strategy.hpp"

namespace mecsim {

enum class CaseKind { Cache, Orchestrate, Interference };

inline const char* case_token(CaseKind c) {
    switch (c) {
        case CaseKind::Cache: return "cache";
        case CaseKind::Orchestrate: return "orchestrate";
        case CaseKind::Interference: return "interference";
    }
    return "?";
}

struct SweepSpec {
    std::string parameter;
    std::vector<double> values;
};

struct CacheCaseConfig {
    int n_bs = 5;
    int n_videos = 1000;
    double zipf_alpha = 0.8;
    double original_bitrate_mbps = 2.0;
    double duration_s = 600.0;
    std::vector<double> variant_ratios{0.82, 0.67, 0.55, 0.45};
    std::vector<double> variant_dist{0.25, 0.25, 0.25, 0.25};
    double cache_fraction = 0.3;
    double processing_capacity_mbps = 40.0;
    double arrival_rate_per_bs_per_min = 2.0;
    double horizon_s = 86400.0;
    double warmup_s = 3600.0;
    std::vector<StrategyKind> strategies{StrategyKind::ProCache, StrategyKind::CoCache,
                                         StrategyKind::ProCoCache, StrategyKind::CoProCoCache};
    std::string transcode_cost_basis = "input";
    bool reactive_lru = false;
    bool cache_transcode_output = false;
};

struct MecServerSpec {
    double speed = 8.0;
    double link_mbps = 1.0;
    double overhead_s = 0.0;
};

struct OrchestrateCaseConfig {
    int n_tasks = 20;
    double input_bits_per_task = 481.0 * 321.0 * 8.0;
    double work_per_task = 10.0;
    double local_speed = 1.0;
    int n_peers = 4;
    double peer_speed = 1.0;
    double peer_link_mbps = 1.0;
    double peer_overhead_s = 0.0;
    double mu_s = 100.0;
    double sigma_s = 5.0;
    std::vector<MecServerSpec> servers{{8.0, 1.0, 0.1}, {8.0, 1.0, 0.6}};
    int k = 2;
    int n_seeds = 100;
};

struct InterferenceCaseConfig {
    std::vector<Point> bs_positions{{0.0, 0.0}, {600.0, 0.0}, {300.0, 300.0 * 1.7320508075688772}};
    double cell_radius_m = 500.0;
    double radius_fraction = 0.8;
    double cqi_threshold_db = 3.0;
    double pathloss_exponent = 3.5;
    double noise_dbm = -100.0;
    double tx_power_dbm = 23.0;
    double raw_rate_mbps = 30.0;
    int n_snapshots = 100;
    std::string mode = "geometric";
};

struct ExperimentConfig {
    CaseKind kind = CaseKind::Cache;
    std::uint64_t seed = 0;
    std::optional<SweepSpec> sweep;
    CacheCaseConfig cache;
    OrchestrateCaseConfig orchestrate;
    InterferenceCaseConfig interference;
};

struct ValidationResult {
    std::optional<ExperimentConfig> config;
    std::vector<std::string> errors;

    bool ok() const { return errors.empty() && config.has_value(); }
};

namespace detail {

using nlohmann::json;

class Extractor {
public:
    Extractor(const json& obj, std::string prefix, std::vector<std::string>& errors)
        : obj_(obj), prefix_(std::move(prefix)), errors_(errors) {}

    ~Extractor() {
        for (const auto& [key, value] : obj_.items()) {
            (void)value;
            if (!seen(key)) errors_.push_back("unknown key: " + qualified(key));
        }
    }

    Extractor(const Extractor&) = delete;
    Extractor& operator=(const Extractor&) = delete;

    bool has(const std::string& key) {
        mark(key);
        return obj_.contains(key);
    }

    template <typename T>
    void get(const std::string& key, T& out) {
        mark(key);
        if (!obj_.contains(key)) return;
        try {
            out = obj_.at(key).get<T>();
        } catch (const json::exception&) {
            errors_.push_back("invalid value for key: " + qualified(key));
        }
    }

    const json* child(const std::string& key) {
        mark(key);
        if (!obj_.contains(key)) return nullptr;
        if (!obj_.at(key).is_object()) {
            errors_.push_back("expected an object for key: " + qualified(key));
            return nullptr;
        }
        return &obj_.at(key);
    }

    std::string qualified(const std::string& key) const {
        return prefix_.empty() ? key : prefix_ + "." + key;
    }

private:
    void mark(const std::string& key) { seen_.push_back(key); }
    bool seen(const std::string& key) const {
        for (const auto& s : seen_)
            if (s == key) return true;
        return false;
    }

    const json& obj_;
    std::string prefix_;
    std::vector<std::string>& errors_;
    std::vector<std::string> seen_;
};

inline void parse_cache_block(const json& block, CacheCaseConfig& cfg,
                              std::vector<std::string>& errors) {
    Extractor ex(block, "cache", errors);
    ex.get("n_bs", cfg.n_bs);
    ex.get("n_videos", cfg.n_videos);
    ex.get("zipf_alpha", cfg.zipf_alpha);
    ex.get("original_bitrate_mbps", cfg.original_bitrate_mbps);
    ex.get("duration_s", cfg.duration_s);
    ex.get("variant_ratios", cfg.variant_ratios);
    ex.get("variant_dist", cfg.variant_dist);
    ex.get("cache_fraction", cfg.cache_fraction);
    ex.get("processing_capacity_mbps", cfg.processing_capacity_mbps);
    ex.get("arrival_rate_per_bs_per_min", cfg.arrival_rate_per_bs_per_min);
    ex.get("horizon_s", cfg.horizon_s);
    ex.get("warmup_s", cfg.warmup_s);
    ex.get("transcode_cost_basis", cfg.transcode_cost_basis);
    ex.get("reactive_lru", cfg.reactive_lru);
    ex.get("cache_transcode_output", cfg.cache_transcode_output);
    if (ex.has("strategies")) {
        std::vector<std::string> tokens;
        ex.get("strategies", tokens);
        cfg.strategies.clear();
        for (const auto& t : tokens) {
            if (const auto s = parse_strategy(t)) {
                cfg.strategies.push_back(*s);
            } else {
                errors.push_back("invalid value for key: cache.strategies (unknown strategy \"" + t +
                                 "\")");
            }
        }
    }
}

inline void parse_orchestrate_block(const json& block, OrchestrateCaseConfig& cfg,
                                    std::vector<std::string>& errors) {
    Extractor ex(block, "orchestrate", errors);
    ex.get("n_tasks", cfg.n_tasks);
    ex.get("input_bits_per_task", cfg.input_bits_per_task);
    ex.get("work_per_task", cfg.work_per_task);
    ex.get("local_speed", cfg.local_speed);
    ex.get("n_peers", cfg.n_peers);
    ex.get("peer_speed", cfg.peer_speed);
    ex.get("peer_link_mbps", cfg.peer_link_mbps);
    ex.get("peer_overhead_s", cfg.peer_overhead_s);
    ex.get("mu_s", cfg.mu_s);
    ex.get("sigma_s", cfg.sigma_s);
    ex.get("k", cfg.k);
    ex.get("n_seeds", cfg.n_seeds);
    if (ex.has("servers")) {
        const json& servers = block.at("servers");
        if (!servers.is_array()) {
            errors.push_back("invalid value for key: orchestrate.servers");
        } else {
            cfg.servers.clear();
            int idx = 0;
            for (const auto& s : servers) {
                MecServerSpec spec;
                Extractor sx(s, "orchestrate.servers[" + std::to_string(idx) + "]", errors);
                sx.get("speed", spec.speed);
                sx.get("link_mbps", spec.link_mbps);
                sx.get("overhead_s", spec.overhead_s);
                cfg.servers.push_back(spec);
                ++idx;
            }
        }
    }
}

inline void parse_interference_block(const json& block, InterferenceCaseConfig& cfg,
                                     std::vector<std::string>& errors) {
    Extractor ex(block, "interference", errors);
    if (ex.has("bs_positions")) {
        const json& pos = block.at("bs_positions");
        if (!pos.is_array()) {
            errors.push_back("invalid value for key: interference.bs_positions");
        } else {
            cfg.bs_positions.clear();
            for (const auto& p : pos) {
                if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
                    errors.push_back("invalid value for key: interference.bs_positions");
                    break;
                }
                cfg.bs_positions.push_back(Point{p[0].get<double>(), p[1].get<double>()});
            }
        }
    }
    ex.get("cell_radius_m", cfg.cell_radius_m);
    ex.get("radius_fraction", cfg.radius_fraction);
    ex.get("cqi_threshold_db", cfg.cqi_threshold_db);
    ex.get("pathloss_exponent", cfg.pathloss_exponent);
    ex.get("noise_dbm", cfg.noise_dbm);
    ex.get("tx_power_dbm", cfg.tx_power_dbm);
    ex.get("raw_rate_mbps", cfg.raw_rate_mbps);
    ex.get("n_snapshots", cfg.n_snapshots);
    ex.get("mode", cfg.mode);
}

// Numeric scalar keys a sweep may vary, per case.
inline const std::vector<std::string>& sweepable_keys(CaseKind kind) {
    static const std::vector<std::string> cache{
        "n_bs",          "n_videos",      "zipf_alpha",  "original_bitrate_mbps",
        "duration_s",    "cache_fraction", "processing_capacity_mbps",
        "arrival_rate_per_bs_per_min",    "horizon_s",   "warmup_s"};
    static const std::vector<std::string> orchestrate{
        "n_tasks", "input_bits_per_task", "work_per_task", "local_speed", "n_peers",
        "peer_speed", "peer_link_mbps", "peer_overhead_s", "mu_s", "sigma_s", "k", "n_seeds"};
    static const std::vector<std::string> interference{
        "cell_radius_m", "radius_fraction", "cqi_threshold_db", "pathloss_exponent",
        "noise_dbm", "tx_power_dbm", "raw_rate_mbps", "n_snapshots"};
    switch (kind) {
        case CaseKind::Cache: return cache;
        case CaseKind::Orchestrate: return orchestrate;
        case CaseKind::Interference: return interference;
    }
    return cache;
}

/// Overwrites one numeric scalar in the case block. Integer-valued keys round.
inline void apply_sweep_value(ExperimentConfig& cfg, const std::string& key, double value) {
    const auto as_int = [&] { return static_cast<int>(value + 0.5); };
    if (cfg.kind == CaseKind::Cache) {
        auto& c = cfg.cache;
        if (key == "n_bs") c.n_bs = as_int();
        else if (key == "n_videos") c.n_videos = as_int();
        else if (key == "zipf_alpha") c.zipf_alpha = value;
        else if (key == "original_bitrate_mbps") c.original_bitrate_mbps = value;
        else if (key == "duration_s") c.duration_s = value;
        else if (key == "cache_fraction") c.cache_fraction = value;
        else if (key == "processing_capacity_mbps") c.processing_capacity_mbps = value;
        else if (key == "arrival_rate_per_bs_per_min") c.arrival_rate_per_bs_per_min = value;
        else if (key == "horizon_s") c.horizon_s = value;
        else if (key == "warmup_s") c.warmup_s = value;
    } else if (cfg.kind == CaseKind::Orchestrate) {
        auto& c = cfg.orchestrate;
        if (key == "n_tasks") c.n_tasks = as_int();
        else if (key == "input_bits_per_task") c.input_bits_per_task = value;
        else if (key == "work_per_task") c.work_per_task = value;
        else if (key == "local_speed") c.local_speed = value;
        else if (key == "n_peers") c.n_peers = as_int();
        else if (key == "peer_speed") c.peer_speed = value;
        else if (key == "peer_link_mbps") c.peer_link_mbps = value;
        else if (key == "peer_overhead_s") c.peer_overhead_s = value;
        else if (key == "mu_s") c.mu_s = value;
        else if (key == "sigma_s") c.sigma_s = value;
        else if (key == "k") c.k = as_int();
        else if (key == "n_seeds") c.n_seeds = as_int();
    } else {
        auto& c = cfg.interference;
        if (key == "cell_radius_m") c.cell_radius_m = value;
        else if (key == "radius_fraction") c.radius_fraction = value;
        else if (key == "cqi_threshold_db") c.cqi_threshold_db = value;
        else if (key == "pathloss_exponent") c.pathloss_exponent = value;
        else if (key == "noise_dbm") c.noise_dbm = value;
        else if (key == "tx_power_dbm") c.tx_power_dbm = value;
        else if (key == "raw_rate_mbps") c.raw_rate_mbps = value;
        else if (key == "n_snapshots") c.n_snapshots = as_int();
    }
}

inline void check_semantics(const ExperimentConfig& cfg, std::vector<std::string>& errors) {
    if (cfg.kind == CaseKind::Cache) {
        const auto& c = cfg.cache;
        if (c.n_bs < 1) errors.push_back("cache.n_bs must be >= 1");
        if (c.n_videos < 1) errors.push_back("cache.n_videos must be >= 1");
        if (c.zipf_alpha < 0.0) errors.push_back("cache.zipf_alpha must be >= 0");
        if (c.original_bitrate_mbps <= 0.0) errors.push_back("cache.original_bitrate_mbps must be positive");
        if (c.duration_s <= 0.0) errors.push_back("cache.duration_s must be positive");
        if (c.cache_fraction < 0.0) errors.push_back("cache.cache_fraction must be >= 0");
        if (c.processing_capacity_mbps < 0.0)
            errors.push_back("cache.processing_capacity_mbps must be >= 0");
        if (c.arrival_rate_per_bs_per_min < 0.0)
            errors.push_back("cache.arrival_rate_per_bs_per_min must be >= 0");
        if (c.horizon_s <= 0.0) errors.push_back("cache.horizon_s must be positive");
        if (c.warmup_s < 0.0 || c.warmup_s >= c.horizon_s)
            errors.push_back("cache.warmup_s must lie in [0, horizon_s)");
        if (c.variant_ratios.empty()) errors.push_back("cache.variant_ratios must not be empty");
        double prev = 1.0 + 1e-12;
        for (double r : c.variant_ratios) {
            if (r <= 0.0 || r > 1.0 || r >= prev) {
                errors.push_back("cache.variant_ratios must be strictly decreasing within (0, 1]");
                break;
            }
            prev = r;
        }
        if (c.variant_dist.size() != c.variant_ratios.size()) {
            errors.push_back("cache.variant_dist must have one weight per variant ratio");
        } else {
            double mass = 0.0;
            for (double p : c.variant_dist) {
                mass += p;
                if (p < 0.0) errors.push_back("cache.variant_dist weights must be >= 0");
            }
            if (std::abs(mass - 1.0) > 1e-9) errors.push_back("cache.variant_dist must sum to 1");
        }
        if (c.strategies.empty()) errors.push_back("cache.strategies must not be empty");
        if (c.transcode_cost_basis != "input" && c.transcode_cost_basis != "output")
            errors.push_back("cache.transcode_cost_basis must be \"input\" or \"output\"");
        if (c.cache_transcode_output && !c.reactive_lru)
            errors.push_back("cache.cache_transcode_output requires cache.reactive_lru");
    } else if (cfg.kind == CaseKind::Orchestrate) {
        const auto& c = cfg.orchestrate;
        if (c.n_tasks < 1) errors.push_back("orchestrate.n_tasks must be >= 1");
        if (c.input_bits_per_task <= 0.0) errors.push_back("orchestrate.input_bits_per_task must be positive");
        if (c.work_per_task <= 0.0) errors.push_back("orchestrate.work_per_task must be positive");
        if (c.local_speed <= 0.0) errors.push_back("orchestrate.local_speed must be positive");
        if (c.n_peers < 1) errors.push_back("orchestrate.n_peers must be >= 1");
        if (c.peer_speed <= 0.0) errors.push_back("orchestrate.peer_speed must be positive");
        if (c.peer_link_mbps <= 0.0) errors.push_back("orchestrate.peer_link_mbps must be positive");
        if (c.mu_s <= 0.0) errors.push_back("orchestrate.mu_s must be positive");
        if (c.sigma_s < 0.0) errors.push_back("orchestrate.sigma_s must be >= 0");
        if (c.servers.empty()) errors.push_back("orchestrate.servers must not be empty");
        for (const auto& s : c.servers) {
            if (s.speed <= 0.0 || s.link_mbps <= 0.0 || s.overhead_s < 0.0) {
                errors.push_back("orchestrate.servers entries must have positive speed and link");
                break;
            }
        }
        if (c.k < 1 || c.k > static_cast<int>(c.servers.size()))
            errors.push_back("orchestrate.k must lie in [1, number of servers]");
        if (c.n_seeds < 1) errors.push_back("orchestrate.n_seeds must be >= 1");
    } else {
        const auto& c = cfg.interference;
        if (c.bs_positions.empty()) errors.push_back("interference.bs_positions must not be empty");
        if (c.cell_radius_m <= 0.0) errors.push_back("interference.cell_radius_m must be positive");
        if (c.radius_fraction < 0.0) errors.push_back("interference.radius_fraction must be >= 0");
        if (c.pathloss_exponent <= 2.0) errors.push_back("interference.pathloss_exponent must exceed 2");
        if (c.raw_rate_mbps <= 0.0) errors.push_back("interference.raw_rate_mbps must be positive");
        if (c.n_snapshots < 1) errors.push_back("interference.n_snapshots must be >= 1");
        if (c.mode != "geometric" && c.mode != "cqi")
            errors.push_back("interference.mode must be \"geometric\" or \"cqi\"");
    }

    if (cfg.sweep) {
        const auto& keys = sweepable_keys(cfg.kind);
        const bool known = std::find(keys.begin(), keys.end(), cfg.sweep->parameter) != keys.end();
        if (!known)
            errors.push_back("sweep.parameter \"" + cfg.sweep->parameter +
                             "\" is not a numeric key of the \"" + case_token(cfg.kind) + "\" block");
        if (cfg.sweep->values.empty()) errors.push_back("sweep.values must not be empty");
    }
}

}  // namespace detail

inline ValidationResult validate_config_json(const nlohmann::json& root) {
    ValidationResult result;
    std::vector<std::string>& errors = result.errors;
    if (!root.is_object()) {
        errors.push_back("config root must be an object");
        return result;
    }

    ExperimentConfig cfg;
    {
        detail::Extractor ex(root, "", errors);
        std::string case_name;
        if (!ex.has("case")) {
            errors.push_back("missing required key: case");
        } else {
            ex.get("case", case_name);
            if (case_name == "cache") cfg.kind = CaseKind::Cache;
            else if (case_name == "orchestrate") cfg.kind = CaseKind::Orchestrate;
            else if (case_name == "interference") cfg.kind = CaseKind::Interference;
            else errors.push_back("invalid value for key: case (got \"" + case_name + "\")");
        }

        if (!ex.has("seed")) {
            errors.push_back("missing required key: seed");
        } else {
            ex.get("seed", cfg.seed);
        }

        if (ex.has("sweep")) {
            const nlohmann::json& sweep = root.at("sweep");
            if (!sweep.is_object()) {
                errors.push_back("expected an object for key: sweep");
            } else {
                SweepSpec spec;
                detail::Extractor sx(sweep, "sweep", errors);
                if (!sx.has("parameter")) errors.push_back("missing required key: sweep.parameter");
                else sx.get("parameter", spec.parameter);
                if (!sx.has("values")) errors.push_back("missing required key: sweep.values");
                else sx.get("values", spec.values);
                cfg.sweep = std::move(spec);
            }
        }

        if (const auto* block = ex.child("cache")) detail::parse_cache_block(*block, cfg.cache, errors);
        if (const auto* block = ex.child("orchestrate"))
            detail::parse_orchestrate_block(*block, cfg.orchestrate, errors);
        if (const auto* block = ex.child("interference"))
            detail::parse_interference_block(*block, cfg.interference, errors);
    }

    if (errors.empty()) detail::check_semantics(cfg, errors);
    if (errors.empty()) result.config = std::move(cfg);
    return result;
}

inline ValidationResult validate_config(const std::string& raw_text) {
    nlohmann::json root = nlohmann::json::parse(raw_text, nullptr, /*allow_exceptions=*/false);
    if (root.is_discarded()) {
        ValidationResult result;
        result.errors.push_back("config is not valid JSON");
        return result;
    }
    return validate_config_json(root);
}

/// Fully-resolved echo of a validated config (defaults filled in).
inline nlohmann::json config_to_json(const ExperimentConfig& cfg) {
    nlohmann::json root;
    root["case"] = case_token(cfg.kind);
    root["seed"] = cfg.seed;
    if (cfg.sweep) {
        root["sweep"] = {{"parameter", cfg.sweep->parameter}, {"values", cfg.sweep->values}};
    }
    {
        const auto& c = cfg.cache;
        nlohmann::json block;
        block["n_bs"] = c.n_bs;
        block["n_videos"] = c.n_videos;
        block["zipf_alpha"] = c.zipf_alpha;
        block["original_bitrate_mbps"] = c.original_bitrate_mbps;
        block["duration_s"] = c.duration_s;
        block["variant_ratios"] = c.variant_ratios;
        block["variant_dist"] = c.variant_dist;
        block["cache_fraction"] = c.cache_fraction;
        block["processing_capacity_mbps"] = c.processing_capacity_mbps;
        block["arrival_rate_per_bs_per_min"] = c.arrival_rate_per_bs_per_min;
        block["horizon_s"] = c.horizon_s;
        block["warmup_s"] = c.warmup_s;
        std::vector<std::string> tokens;
        for (auto s : c.strategies) tokens.emplace_back(strategy_token(s));
        block["strategies"] = tokens;
        block["transcode_cost_basis"] = c.transcode_cost_basis;
        block["reactive_lru"] = c.reactive_lru;
        block["cache_transcode_output"] = c.cache_transcode_output;
        root["cache"] = block;
    }
    {
        const auto& c = cfg.orchestrate;
        nlohmann::json block;
        block["n_tasks"] = c.n_tasks;
        block["input_bits_per_task"] = c.input_bits_per_task;
        block["work_per_task"] = c.work_per_task;
        block["local_speed"] = c.local_speed;
        block["n_peers"] = c.n_peers;
        block["peer_speed"] = c.peer_speed;
        block["peer_link_mbps"] = c.peer_link_mbps;
        block["peer_overhead_s"] = c.peer_overhead_s;
        block["mu_s"] = c.mu_s;
        block["sigma_s"] = c.sigma_s;
        nlohmann::json servers = nlohmann::json::array();
        for (const auto& s : c.servers) {
            servers.push_back(
                {{"speed", s.speed}, {"link_mbps", s.link_mbps}, {"overhead_s", s.overhead_s}});
        }
        block["servers"] = servers;
        block["k"] = c.k;
        block["n_seeds"] = c.n_seeds;
        root["orchestrate"] = block;
    }
    {
        const auto& c = cfg.interference;
        nlohmann::json block;
        nlohmann::json positions = nlohmann::json::array();
        for (const auto& p : c.bs_positions) positions.push_back({p.x, p.y});
        block["bs_positions"] = positions;
        block["cell_radius_m"] = c.cell_radius_m;
        block["radius_fraction"] = c.radius_fraction;
        block["cqi_threshold_db"] = c.cqi_threshold_db;
        block["pathloss_exponent"] = c.pathloss_exponent;
        block["noise_dbm"] = c.noise_dbm;
        block["tx_power_dbm"] = c.tx_power_dbm;
        block["raw_rate_mbps"] = c.raw_rate_mbps;
        block["n_snapshots"] = c.n_snapshots;
        block["mode"] = c.mode;
        root["interference"] = block;
    }
    return root;
}

}  // namespace mecsim

#endif

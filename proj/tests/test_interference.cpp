#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "mecsim/interference.hpp"

using namespace mecsim;

namespace {

// Hand-evaluated SINR oracle: explicit scalar arithmetic, shares nothing with
// uplink_sinr_db.
double sinr_oracle_db(std::size_t i, const std::vector<MobileStation>& ms, const CellLayout& layout,
                      const ChannelModel& ch, const std::vector<bool>& removed) {
    const Point bs = layout.bs_positions[static_cast<std::size_t>(ms[i].serving_bs)];
    const auto rx = [&](const MobileStation& m) {
        const double dx = m.position.x - bs.x;
        const double dy = m.position.y - bs.y;
        const double d = std::max(std::sqrt(dx * dx + dy * dy), 1.0);
        return m.tx_power_w * std::pow(d, -ch.pathloss_exponent);
    };
    double interference = 0.0;
    for (std::size_t j = 0; j < ms.size(); ++j) {
        if (j == i || ms[j].serving_bs == ms[i].serving_bs || removed[j]) continue;
        interference += rx(ms[j]);
    }
    return 10.0 * std::log10(rx(ms[i]) / (interference + ch.noise_power_w));
}

}  // namespace

TEST_CASE("uplink_sinr: no interferers reduces to signal over noise") {
    CellLayout layout;
    layout.bs_positions = {{0.0, 0.0}};
    layout.cell_radius_m = 500.0;
    layout.interference_radius_m = 400.0;
    const ChannelModel ch = default_channel();
    const std::vector<MobileStation> ms{{{100.0, 0.0}, 0, dbm_to_watts(23.0)}};
    const double expected =
        10.0 * std::log10(dbm_to_watts(23.0) * std::pow(100.0, -3.5) / ch.noise_power_w);
    CHECK(uplink_sinr_db(0, ms, layout, ch) == Catch::Approx(expected).epsilon(1e-12));
}

TEST_CASE("uplink_sinr: symmetric stations see equal SINR") {
    CellLayout layout;
    layout.bs_positions = {{0.0, 0.0}, {1000.0, 0.0}};
    layout.cell_radius_m = 500.0;
    layout.interference_radius_m = 400.0;
    const ChannelModel ch = default_channel();
    const double p = dbm_to_watts(23.0);
    const std::vector<MobileStation> ms{{{400.0, 50.0}, 0, p}, {{600.0, 50.0}, 1, p}};
    CHECK(uplink_sinr_db(0, ms, layout, ch) ==
          Catch::Approx(uplink_sinr_db(1, ms, layout, ch)).epsilon(1e-12));
}

TEST_CASE("uplink_sinr clamps co-located stations to one metre") {
    CellLayout layout;
    layout.bs_positions = {{0.0, 0.0}};
    layout.cell_radius_m = 500.0;
    layout.interference_radius_m = 400.0;
    const ChannelModel ch = default_channel();
    const std::vector<MobileStation> ms{{{0.0, 0.0}, 0, dbm_to_watts(23.0)}};
    const double expected = 10.0 * std::log10(dbm_to_watts(23.0) / ch.noise_power_w);
    CHECK(uplink_sinr_db(0, ms, layout, ch) == Catch::Approx(expected).epsilon(1e-12));
}

TEST_CASE("three-cell snapshot matches the hand-computed SINRs") {
    const CellLayout layout = default_layout();
    const ChannelModel ch = default_channel();
    const auto ms = default_snapshot();
    const std::vector<bool> nothing(ms.size(), false);

    for (std::size_t i = 0; i < ms.size(); ++i) {
        CHECK(uplink_sinr_db(i, ms, layout, ch) ==
              Catch::Approx(sinr_oracle_db(i, ms, layout, ch, nothing)).epsilon(1e-9));
    }
    // Frozen scalar evaluations of the formula on this geometry.
    CHECK(uplink_sinr_db(0, ms, layout, ch) == Catch::Approx(33.53537891269377).epsilon(1e-9));
    CHECK(uplink_sinr_db(1, ms, layout, ch) == Catch::Approx(-1.7582810768744375).epsilon(1e-9));
    CHECK(uplink_sinr_db(2, ms, layout, ch) == Catch::Approx(2.1644248734369316).epsilon(1e-9));
}

TEST_CASE("classification matches the scene description in both modes") {
    const CellLayout layout = default_layout();
    const ChannelModel ch = default_channel();
    const auto ms = default_snapshot();
    for (auto mode : {ClassifyMode::Geometric, ClassifyMode::Cqi}) {
        const auto a = classify_all(ms, layout, ch, mode);
        CHECK(a.layer[0] == Layer::Layer1);  // cell centre
        CHECK(a.layer[1] == Layer::Layer2);  // cell edge
        CHECK(a.layer[2] == Layer::Layer2);
    }
}

TEST_CASE("classify trivial geometry") {
    const CellLayout layout = default_layout();
    const ChannelModel ch = default_channel();
    // At the serving BS, far from the others.
    const std::vector<MobileStation> ms{{{0.0, 0.0}, 0, dbm_to_watts(23.0)}};
    CHECK(classify(0, ms, layout, ch, ClassifyMode::Geometric) == Layer::Layer1);

    CellLayout collapsed = layout;
    collapsed.interference_radius_m = 0.0;
    const auto snapshot = default_snapshot();
    for (std::size_t i = 0; i < snapshot.size(); ++i) {
        CHECK(classify(i, snapshot, collapsed, ch, ClassifyMode::Geometric) == Layer::Layer1);
    }
}

TEST_CASE("cancel_intra_cluster removes layer-2 interference only") {
    const CellLayout layout = default_layout();
    const ChannelModel ch = default_channel();
    const auto ms = default_snapshot();

    auto assignment = classify_all(ms, layout, ch, ClassifyMode::Geometric);
    cancel_intra_cluster(assignment, ms, layout, ch);

    std::vector<bool> removed{false, true, true};  // the layer-2 set
    CHECK(assignment.post_sinr_db[0] == assignment.pre_sinr_db[0]);  // layer 1 untouched
    CHECK(assignment.post_sinr_db[1] ==
          Catch::Approx(sinr_oracle_db(1, ms, layout, ch, removed)).epsilon(1e-9));
    CHECK(assignment.post_sinr_db[2] ==
          Catch::Approx(sinr_oracle_db(2, ms, layout, ch, removed)).epsilon(1e-9));
    CHECK(assignment.post_sinr_db[1] == Catch::Approx(8.251721280182384).epsilon(1e-9));
    CHECK(assignment.post_sinr_db[2] == Catch::Approx(9.896190325651094).epsilon(1e-9));
    // Strict improvement: each had at least one layer-2 interferer.
    CHECK(assignment.post_sinr_db[1] > assignment.pre_sinr_db[1]);
    CHECK(assignment.post_sinr_db[2] > assignment.pre_sinr_db[2]);
}

TEST_CASE("cancel_intra_cluster: everyone in layer 2 leaves only noise") {
    const CellLayout layout = default_layout();
    const ChannelModel ch = default_channel();
    const auto ms = default_snapshot();
    auto assignment = classify_all(ms, layout, ch, ClassifyMode::Geometric);
    for (auto& l : assignment.layer) l = Layer::Layer2;
    cancel_intra_cluster(assignment, ms, layout, ch);
    for (std::size_t i = 0; i < ms.size(); ++i) {
        const std::vector<bool> all_removed(ms.size(), true);
        CHECK(assignment.post_sinr_db[i] ==
              Catch::Approx(sinr_oracle_db(i, ms, layout, ch, all_removed)).epsilon(1e-9));
        CHECK(assignment.post_sinr_db[i] >= assignment.pre_sinr_db[i]);
    }
}

TEST_CASE("cancel_intra_cluster: no layer-2 stations changes nothing") {
    const CellLayout layout = default_layout();
    const ChannelModel ch = default_channel();
    const auto ms = default_snapshot();
    auto assignment = classify_all(ms, layout, ch, ClassifyMode::Geometric);
    for (auto& l : assignment.layer) l = Layer::Layer1;
    cancel_intra_cluster(assignment, ms, layout, ch);
    CHECK(assignment.post_sinr_db == assignment.pre_sinr_db);
}

TEST_CASE("fronthaul accounting") {
    LayerAssignment a;
    a.layer = {Layer::Layer1, Layer::Layer1, Layer::Layer1};
    CHECK(fronthaul_report(a, 30.0).savings_vs_cran == Catch::Approx(1.0));
    CHECK(fronthaul_report(a, 30.0).bpu_load_mbps == 0.0);

    a.layer = {Layer::Layer2, Layer::Layer2, Layer::Layer2};
    CHECK(fronthaul_report(a, 30.0).savings_vs_cran == Catch::Approx(0.0));
    CHECK(fronthaul_report(a, 30.0).bpu_load_mbps == Catch::Approx(90.0));

    a.layer.assign(10, Layer::Layer1);
    for (int i = 0; i < 3; ++i) a.layer[static_cast<std::size_t>(i)] = Layer::Layer2;
    const auto r = fronthaul_report(a, 30.0);
    CHECK(r.savings_vs_cran == Catch::Approx(0.7));
    // Conservation: BPU load plus layer-1 share equals the C-RAN total.
    CHECK(r.bpu_load_mbps + 7.0 * 30.0 == Catch::Approx(10.0 * 30.0));

    CHECK_THROWS_AS(fronthaul_report(a, 0.0), std::invalid_argument);
}

TEST_CASE("classification is monotone in the radius and the CQI threshold") {
    const CellLayout base = default_layout();
    const ChannelModel ch = default_channel();
    for (std::uint64_t snap = 0; snap < 50; ++snap) {
        const auto ms = draw_snapshot(base, dbm_to_watts(23.0), 4242, snap);

        CellLayout small = base, big = base;
        small.interference_radius_m = 200.0;
        big.interference_radius_m = 350.0;
        for (std::size_t i = 0; i < ms.size(); ++i) {
            if (classify(i, ms, small, ch, ClassifyMode::Geometric) == Layer::Layer2) {
                CHECK(classify(i, ms, big, ch, ClassifyMode::Geometric) == Layer::Layer2);
            }
        }

        ChannelModel lo = ch, hi = ch;
        lo.cqi_threshold_db = 0.0;
        hi.cqi_threshold_db = 9.0;
        for (std::size_t i = 0; i < ms.size(); ++i) {
            if (classify(i, ms, base, lo, ClassifyMode::Cqi) == Layer::Layer2) {
                CHECK(classify(i, ms, base, hi, ClassifyMode::Cqi) == Layer::Layer2);
            }
        }
    }
}

TEST_CASE("snapshot draws stay in their cells and are deterministic") {
    const CellLayout layout = default_layout();
    const auto a = draw_snapshot(layout, dbm_to_watts(23.0), 7, 3);
    const auto b = draw_snapshot(layout, dbm_to_watts(23.0), 7, 3);
    REQUIRE(a.size() == 3);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].position.x == b[i].position.x);
        CHECK(a[i].position.y == b[i].position.y);
        CHECK(a[i].serving_bs == static_cast<int>(i));
        CHECK(layout.nearest_bs(a[i].position) == static_cast<int>(i));
        CHECK(distance_m(a[i].position, layout.bs_positions[i]) <= layout.cell_radius_m);
    }
}

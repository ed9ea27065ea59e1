#include "doctest.h"
#include "oracles.hpp"
#include "radnet/dataset.hpp"
#include "radnet/detect.hpp"

using namespace radnet;

namespace {

constexpr int K = 64, M = 64;

struct Maps {
    std::vector<float> p = std::vector<float>(K * M, 0.0f);
    std::vector<float> x = std::vector<float>(K * M, 0.0f);
    std::vector<float> y = std::vector<float>(K * M, 0.0f);

    void block(int k0, int m0, int hk, int hm, float pv, float xv = 0, float yv = 0) {
        for (int k = k0; k < k0 + hk; ++k)
            for (int m = m0; m < m0 + hm; ++m) {
                p[k * M + m] = pv;
                x[k * M + m] = xv;
                y[k * M + m] = yv;
            }
    }
    std::vector<Detection> run(DetectParams params = {}) const {
        return extract_detections(p, x, y, K, M, params, RadarConfig{});
    }
};

FrameTruth truth_at(int k, int m, double x = 0.4, double y = 0.5) {
    FrameTruth t;
    t.present = true;
    t.range_bin = k;
    t.doppler_bin = m;
    t.x_im = x;
    t.y_im = y;
    t.object.range = cell_to_range_velocity(RadarConfig{}, k, m).first;
    t.object.radial_velocity = cell_to_range_velocity(RadarConfig{}, k, m).second;
    return t;
}

Detection block_detection(int k0, int m0, double x = 0.4, double y = 0.5) {
    Maps mp;
    mp.block(k0, m0, 3, 3, 1.0f, float(x), float(y));
    return mp.run().front();
}

}  // namespace

TEST_CASE("nothing above threshold") {
    Maps m;
    m.block(10, 10, 4, 4, 0.5f);
    CHECK(m.run().empty());
}

TEST_CASE("single 3x3 block") {
    Maps m;
    m.block(20, 30, 3, 3, 1.0f, 0.25f, 0.6f);
    const auto d = m.run();
    REQUIRE(d.size() == 1);
    CHECK(d[0].region.size() == 9);
    CHECK(d[0].x_est == doctest::Approx(0.25));
    CHECK(d[0].y_est == doctest::Approx(0.6));
    CHECK(d[0].k_min == 20);
    CHECK(d[0].k_max == 22);
    CHECK(d[0].m_min == 30);
    CHECK(d[0].m_max == 32);
    CHECK(d[0].k_centroid == doctest::Approx(21));
    CHECK(d[0].m_centroid == doctest::Approx(31));
    CHECK(d[0].confidence == doctest::Approx(1.0));
}

TEST_CASE("largest component wins, ties go to the smaller box corner") {
    Maps m;
    m.block(5, 5, 1, 5, 0.9f);
    m.block(40, 40, 1, 2, 0.9f);
    auto d = m.run();
    REQUIRE(d.size() == 1);
    CHECK(d[0].region.size() == 5);
    CHECK(d[0].k_min == 5);

    Maps t;
    t.block(30, 10, 2, 2, 0.9f);
    t.block(10, 50, 2, 2, 0.9f);
    t.block(10, 20, 2, 2, 0.9f);
    d = t.run();
    REQUIRE(d.size() == 1);
    CHECK(d[0].k_min == 10);
    CHECK(d[0].m_min == 20);
}

TEST_CASE("diagonal neighbours are separate components") {
    Maps m;
    m.p[10 * M + 10] = 0.9f;
    m.p[11 * M + 11] = 0.9f;
    m.p[12 * M + 12] = 0.9f;
    const auto d = m.run();
    REQUIRE(d.size() == 1);
    CHECK(d[0].region.size() == 1);
    CHECK(d[0].k_min == 10);
}

TEST_CASE("min_cells suppresses small components") {
    Maps m;
    m.block(3, 3, 1, 2, 0.8f);
    CHECK(m.run({0.5, 3}).empty());
    CHECK(m.run({0.5, 2}).size() == 1);
}

TEST_CASE("weighted centroid and pooled coordinates") {
    Maps m;
    m.p[10 * M + 10] = 0.6f;
    m.x[10 * M + 10] = 0.2f;
    m.p[10 * M + 11] = 1.0f;
    m.x[10 * M + 11] = 0.6f;
    const auto d = m.run().front();
    CHECK(d.x_est == doctest::Approx((0.6 * 0.2 + 1.0 * 0.6) / 1.6).epsilon(1e-6));
    CHECK(d.m_centroid == doctest::Approx((0.6 * 10 + 11.0) / 1.6).epsilon(1e-6));
    CHECK(d.confidence == doctest::Approx(0.8).epsilon(1e-6));
}

TEST_CASE("monotone rescaling that keeps the binarization keeps the components") {
    Maps a;
    a.block(12, 12, 3, 4, 0.7f);
    a.block(40, 2, 2, 2, 0.95f);
    a.block(30, 30, 5, 5, 0.3f);
    Maps b = a;
    for (auto& v : b.p) v = v > 0.5f ? 0.5f + (v - 0.5f) * 0.1f : v * v;
    const auto da = a.run(), db = b.run();
    REQUIRE(da.size() == 1);
    REQUIRE(db.size() == 1);
    CHECK(da[0].region == db[0].region);
}

TEST_CASE("map size mismatch") {
    std::vector<float> p(10), x(10), y(9);
    CHECK_THROWS_AS(extract_detections(p, x, y, 2, 5, {}, RadarConfig{}), std::invalid_argument);
}

TEST_CASE("cell_to_range_velocity") {
    RadarConfig c;
    auto [r0, v0] = cell_to_range_velocity(c, 0, M / 2);
    CHECK(r0 == 0.0);
    CHECK(v0 == 0.0);
    CHECK(cell_to_range_velocity(c, 16, M / 2).first == doctest::Approx(15.99).epsilon(1e-3));
    CHECK(cell_to_range_velocity(c, 0, M / 2 + 1).second == doctest::Approx(c.velocity_resolution()));
}

TEST_CASE("closed loop: synthesized peak maps back within half a bin") {
    auto cfg = oracle::clean_config();
    for (double R = 4.0; R <= 28.0; R += 2.4)
        for (double v = -0.4 * cfg.max_velocity(); v <= 0.4 * cfg.max_velocity(); v += 0.2 * cfg.max_velocity()) {
            ObjectState o;
            o.range = R;
            o.radial_velocity = v;
            o.azimuth = -0.2;
            const auto cube = range_doppler(synthesize_frame(cfg, o, {}, 1));
            const auto c = peak_cell({cube.spectra.data(), cube.cells()}, K, M);
            const auto [re, ve] = cell_to_range_velocity(cfg, c.k, c.m);
            CHECK(std::abs(re - R) <= cfg.range_resolution() / 2);
            CHECK(std::abs(ve - v) <= cfg.velocity_resolution() / 2);
        }
}

TEST_CASE("evaluate: empty frames") {
    const std::vector<std::vector<Detection>> none(5);
    const std::vector<FrameTruth> empty(5);
    const auto r = evaluate(none, empty, K, M, CameraModel{});
    CHECK(r.frames == 5);
    CHECK(r.true_negatives == 5);
    CHECK(r.precision == 1.0);
    CHECK(r.recall == 1.0);
    CHECK(r.mse_x == 0.0);
    CHECK(r.mean_range_error == 0.0);
}

TEST_CASE("evaluate: perfect predictor") {
    std::vector<std::vector<Detection>> dets;
    std::vector<FrameTruth> gts;
    for (int i = 0; i < 6; ++i) {
        gts.push_back(truth_at(8 + 4 * i, 20 + i, 0.1 * i + 0.2, 0.5));
        dets.push_back({block_detection(7 + 4 * i, 19 + i, 0.1 * i + 0.2, 0.5)});
    }
    const auto r = evaluate(dets, gts, K, M, CameraModel{});
    CHECK(r.true_positives == 6);
    CHECK(r.recall == 1.0);
    CHECK(r.precision == 1.0);
    CHECK(r.mean_iou == doctest::Approx(1.0));
    CHECK(r.mse_x < 1e-12);
    CHECK(r.mean_range_error < 1e-6);
    CHECK(r.mean_azimuth_error < 1e-6);
}

TEST_CASE("evaluate: shifted detections") {
    const auto gt = truth_at(20, 20);
    SUBCASE("two-cell shift overlaps 3 of 15 cells and still counts") {
        const auto r = evaluate({{block_detection(19, 21)}}, {gt}, K, M, CameraModel{});
        CHECK(r.per_frame[0].iou == doctest::Approx(3.0 / 15.0));
        CHECK(r.true_positives == 1);
    }
    SUBCASE("three-cell shift has no overlap: false positive and false negative") {
        const auto r = evaluate({{block_detection(19, 22)}}, {gt}, K, M, CameraModel{});
        CHECK(r.per_frame[0].iou == 0.0);
        CHECK(r.true_positives == 0);
        CHECK(r.false_positives == 1);
        CHECK(r.false_negatives == 1);
        CHECK(r.mislocated == 1);
        CHECK(r.precision == 0.0);
        CHECK(r.recall == 0.0);
    }
}

TEST_CASE("evaluate: mixed outcomes and count bookkeeping") {
    std::vector<std::vector<Detection>> dets{{block_detection(9, 9)}, {}, {block_detection(30, 30)}, {},
                                             {block_detection(40, 5)}};
    std::vector<FrameTruth> gts{truth_at(10, 10), truth_at(20, 20), FrameTruth{}, FrameTruth{},
                                truth_at(10, 50)};
    const auto r = evaluate(dets, gts, K, M, CameraModel{});
    CHECK(r.true_positives == 1);
    CHECK(r.false_negatives == 2);
    CHECK(r.false_positives == 2);
    CHECK(r.true_negatives == 1);
    CHECK(r.mislocated == 1);
    CHECK(r.true_positives + r.false_positives + r.false_negatives + r.true_negatives - r.mislocated ==
          r.frames);
    CHECK(r.precision == doctest::Approx(1.0 / 3));
    CHECK(r.recall == doctest::Approx(1.0 / 3));
    CHECK_THROWS_AS(evaluate(dets, {}, K, M, CameraModel{}), std::invalid_argument);

    const auto j = report_json(r);
    CHECK(j["true_positives"] == 1);
    CHECK(j.contains("mean_range_error_m"));
    CHECK(detection_json(dets[0][0])["box"]["k_min"] == 9);
}

TEST_CASE("oracle-perfect maps on noiseless frames") {
    auto cfg = oracle::clean_config();
    CameraModel cam;
    ScenarioSpec s;
    s.background_frames = 2;
    s.foreground_frames = 40;
    const auto rec = generate_recording(cfg, cam, ClutterModel{}, s, 3);
    std::vector<std::vector<Detection>> dets;
    for (const auto& gt : rec.truth) {
        const auto t = make_targets(gt, K, M);
        dets.push_back(extract_detections(t.presence, t.coord_x, t.coord_y, K, M, {}, cfg));
    }
    const auto r = evaluate(dets, rec.truth, K, M, cam);
    CHECK(r.recall == 1.0);
    CHECK(r.mse_x < 1e-12);
    CHECK(r.mse_y < 1e-12);
    CHECK(r.mean_range_error < cfg.range_resolution() / 2);
}

#include <doctest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "vidmetrics/actev.hpp"

using namespace vidmetrics;
using namespace vidmetrics::actev;

namespace {

ActivityInstance ref(int64_t b, int64_t e, const std::string& video = "v1") {
    return {"act", video, b, e, std::nullopt};
}

ActivityInstance sys(int64_t b, int64_t e, double conf, const std::string& video = "v1") {
    return {"act", video, b, e, conf};
}

VideoIndex videos_of(std::vector<VideoMeta> metas) { return index_videos(metas); }

DetCurve envelope(std::vector<std::pair<double, double>> pts) {
    DetCurve c;
    c.axis = FaAxis::tfa;
    c.points.push_back({kSentinelThreshold, 0.0, 0.0, 1.0});
    double t = 1.0;
    for (auto [fa, pm] : pts) {
        c.points.push_back({t, fa, 0.0, pm});
        t -= 0.1;
    }
    return c;
}

}  // namespace

TEST_CASE("temporal IoU on inclusive frames") {
    CHECK(temporal_iou(ref(10, 20), ref(15, 25)) == doctest::Approx(0.375));
    CHECK(temporal_iou(ref(10, 20), ref(10, 20)) == 1.0);
    CHECK(temporal_iou(ref(0, 5), ref(6, 9)) == 0.0);
    CHECK(temporal_iou(ref(3, 3), ref(3, 3)) == 1.0);
    CHECK_THROWS_AS(temporal_iou(ref(0, 5), ref(0, 5, "v2")), Error);
}

TEST_CASE("temporal IoU agrees with frame-set counting") {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 500; ++i) {
        const auto a = oracle::random_instance(rng, "v", 60, 30, false);
        const auto b = oracle::random_instance(rng, "v", 60, 30, false);
        CHECK(temporal_iou(a, b) == doctest::Approx(oracle::iou_by_frames(a, b)).epsilon(1e-12));
        CHECK(temporal_iou(a, b) == temporal_iou(b, a));
    }
}

TEST_CASE("alignment examples") {
    std::vector<ActivityInstance> r{ref(10, 20)};
    std::vector<ActivityInstance> s{sys(10, 20, 0.9)};
    auto a = align(r, s, 0.2);
    CHECK(a.pairs.size() == 1);
    CHECK(a.missed.empty());
    CHECK(a.false_alarms.empty());

    // IoU 10/11 ~ 0.91 and 6/11 ~ 0.55 against the reference
    std::vector<ActivityInstance> two{sys(10, 15, 0.8), sys(10, 19, 0.3)};
    a = align(r, two, 0.2);
    REQUIRE(a.pairs.size() == 1);
    CHECK(a.pairs[0].second == 1);
    CHECK(a.false_alarms == std::vector<size_t>{0});

    a = align(r, std::vector<ActivityInstance>{}, 0.2);
    CHECK(a.pairs.empty());
    CHECK(a.missed == std::vector<size_t>{0});
}

TEST_CASE("alignment gate excludes low overlap and other videos") {
    std::vector<ActivityInstance> r{ref(0, 99)};
    std::vector<ActivityInstance> s{sys(0, 9, 0.5), sys(0, 99, 0.5, "v2")};
    auto a = align(r, s, 0.2);
    CHECK(a.pairs.empty());
    CHECK(a.false_alarms.size() == 2);
    a = align(r, s, 0.0);
    CHECK(a.pairs.size() == 1);
}

TEST_CASE("alignment prefers more pairs over a single better overlap") {
    // ref0 overlaps both sys; ref1 overlaps only sys0
    std::vector<ActivityInstance> r{ref(0, 9), ref(10, 19)};
    std::vector<ActivityInstance> s{sys(5, 14, 0.9), sys(0, 9, 0.9)};
    const auto a = align(r, s, 0.1);
    CHECK(a.pairs.size() == 2);
}

TEST_CASE("alignment matches exhaustive search on random instances") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<ActivityInstance> r, s;
        const int nr = static_cast<int>(rng() % 7), ns = static_cast<int>(rng() % 7);
        for (int i = 0; i < nr; ++i)
            r.push_back(oracle::random_instance(rng, "v", 60, 20, false));
        for (int i = 0; i < ns; ++i)
            s.push_back(oracle::random_instance(rng, "v", 60, 20, true));
        const auto a = align(r, s, 0.2);
        const auto best = oracle::max_matching_exhaustive(r, s, 0.2);
        REQUIRE(a.pairs.size() == best.pairs);
        double total = 0.0;
        for (auto [i, j] : a.pairs)
            total += temporal_iou(r[i], s[j]);
        CHECK(total == doctest::Approx(best.total_iou).epsilon(1e-9));
        CHECK(a.pairs.size() + a.missed.size() == r.size());
        CHECK(a.pairs.size() + a.false_alarms.size() == s.size());
    }
}

TEST_CASE("alignment pair count ignores input order") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<ActivityInstance> r, s;
        for (int i = 0; i < 5; ++i) {
            r.push_back(oracle::random_instance(rng, "v", 50, 15, false));
            s.push_back(oracle::random_instance(rng, "v", 50, 15, true));
        }
        const auto base = align(r, s, 0.2).pairs.size();
        std::shuffle(r.begin(), r.end(), rng);
        std::shuffle(s.begin(), s.end(), rng);
        CHECK(align(r, s, 0.2).pairs.size() == base);
    }
}

TEST_CASE("confusion counts at a threshold") {
    std::vector<ActivityInstance> r{ref(0, 9), ref(20, 29)};
    std::vector<ActivityInstance> s{sys(0, 9, 0.9), sys(50, 59, 0.4)};
    auto c = confusion_at_threshold(r, s, 2.0);
    CHECK(c.n_md == 2);
    CHECK(c.n_fa == 0);
    c = confusion_at_threshold(r, s, 0.5);
    CHECK(c.n_cd == 1);
    CHECK(c.n_md == 1);
    CHECK(c.n_fa == 0);
    c = confusion_at_threshold(r, s, 0.0);
    const auto full = align(r, s, kDefaultDelta);
    CHECK(c.n_cd == static_cast<int64_t>(full.pairs.size()));
    CHECK(c.n_fa == static_cast<int64_t>(full.false_alarms.size()));
}

TEST_CASE("pmiss and rfa") {
    CHECK(pmiss(1, 2) == 0.5);
    CHECK(pmiss(0, 5) == 0.0);
    CHECK_THROWS_AS(pmiss(0, 0), Error);
    CHECK(rfa(2, 4.0) == 0.5);
}

TEST_CASE("tfa hand cases") {
    const auto videos = videos_of({{"v1", 40, 30.0}});
    std::vector<ActivityInstance> r{ref(10, 20)};
    std::vector<ActivityInstance> s{sys(10, 30, 0.5)};
    CHECK(tfa(r, s, videos) == doctest::Approx(10.0 / 29.0).epsilon(1e-15));

    std::vector<ActivityInstance> inside{sys(12, 18, 0.5)};
    CHECK(tfa(r, inside, videos) == 0.0);

    // two stacked system instances on a single-depth reference frame count once each above R'
    std::vector<ActivityInstance> r1{ref(5, 5)};
    std::vector<ActivityInstance> stacked{sys(5, 5, 0.5), sys(5, 5, 0.4)};
    CHECK(tfa(r1, stacked, videos) == doctest::Approx(1.0 / 39.0));

    const auto full = videos_of({{"v1", 10, 30.0}});
    std::vector<ActivityInstance> all{ref(0, 9)};
    CHECK_THROWS_AS(tfa(all, s, full), Error);
}

TEST_CASE("tfa matches a per-frame recount") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 300; ++trial) {
        const int64_t n1 = 10 + static_cast<int64_t>(rng() % 190);
        const int64_t n2 = 10 + static_cast<int64_t>(rng() % 190);
        const auto videos = videos_of({{"a", n1, 25.0}, {"b", n2, 25.0}});
        std::vector<ActivityInstance> r, s;
        for (int i = 0; i < static_cast<int>(rng() % 4); ++i)
            r.push_back(oracle::random_instance(rng, i % 2 ? "a" : "b", i % 2 ? n1 : n2, 20, false));
        for (int i = 0; i < static_cast<int>(rng() % 7); ++i)
            s.push_back(oracle::random_instance(rng, i % 2 ? "a" : "b", i % 2 ? n1 : n2, 40, true));
        CHECK(tfa(r, s, videos) == oracle::tfa_brute_force(r, s, {{"a", n1}, {"b", n2}}));
    }
}

TEST_CASE("DET curve construction") {
    const auto videos = videos_of({{"v1", 1800, 30.0}});
    std::vector<ActivityInstance> r{ref(10, 20)};

    auto c = det_curve(r, std::vector<ActivityInstance>{}, videos, 0.2, FaAxis::tfa);
    REQUIRE(c.points.size() == 1);
    CHECK(c.points[0].tfa == 0.0);
    CHECK(c.points[0].pmiss == 1.0);

    std::vector<ActivityInstance> perfect{sys(10, 20, 1.0)};
    c = det_curve(r, perfect, videos, 0.2, FaAxis::tfa);
    REQUIRE(c.points.size() == 2);
    CHECK(c.points[0].threshold == kSentinelThreshold);
    CHECK(c.points[1].threshold == 1.0);
    CHECK(c.points[1].tfa == 0.0);
    CHECK(c.points[1].pmiss == 0.0);
    CHECK(naudc(c) == 0.0);
    CHECK(pmiss_at_fa(c, 0.15) == 0.0);

    std::vector<ActivityInstance> r3{ref(10, 20), ref(100, 120), ref(300, 310)};
    std::vector<ActivityInstance> three{sys(10, 20, 0.9), sys(500, 600, 0.6), sys(100, 120, 0.3)};
    c = det_curve(r3, three, videos, 0.2, FaAxis::tfa);
    CHECK(c.points.size() <= 4);
    CHECK_THROWS_AS(det_curve(std::vector<ActivityInstance>{}, three, videos, 0.2, FaAxis::tfa), Error);
}

TEST_CASE("DET envelope is monotone on random systems") {
    std::mt19937_64 rng(8);
    const auto videos = videos_of({{"v", 300, 30.0}});
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<ActivityInstance> r, s;
        for (int i = 0; i < 1 + static_cast<int>(rng() % 5); ++i)
            r.push_back(oracle::random_instance(rng, "v", 300, 30, false));
        for (int i = 0; i < static_cast<int>(rng() % 8); ++i)
            s.push_back(oracle::random_instance(rng, "v", 300, 50, true));
        for (auto axis : {FaAxis::tfa, FaAxis::rfa}) {
            const auto c = det_curve(r, s, videos, 0.2, axis);
            for (size_t i = 1; i < c.points.size(); ++i) {
                CHECK(c.fa(c.points[i]) >= c.fa(c.points[i - 1]));
                CHECK(c.points[i].pmiss < c.points[i - 1].pmiss);
            }
            const double v = naudc(c);
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("nAUDC and pmiss lookup on a hand envelope") {
    const auto c = envelope({{0.0, 0.5}, {0.1, 0.2}});
    CHECK(naudc(c, 0.2) == doctest::Approx(0.35));
    CHECK(pmiss_at_fa(c, 0.15) == doctest::Approx(0.2));
    CHECK(pmiss_at_fa(c, 0.05) == doctest::Approx(0.5));

    const auto empty = envelope({});
    CHECK(naudc(empty, 0.2) == 1.0);
    CHECK(pmiss_at_fa(empty, 0.15) == 1.0);

    const auto late = envelope({{0.05, 0.4}});
    CHECK(naudc(late, 0.2) == doctest::Approx((0.05 + 0.4 * 0.15) / 0.2));
    DetCurve none;
    CHECK_THROWS_AS(naudc(none), Error);
}

TEST_CASE("nAUDC matches a fine Riemann sum") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::pair<double, double>> pts;
        double fa = 0.0, pm = 1.0;
        for (int i = 0; i < 1 + static_cast<int>(rng() % 6); ++i) {
            fa += std::uniform_int_distribution<int>(0, 800)(rng) / 10000.0;
            pm *= std::uniform_int_distribution<int>(1, 9)(rng) / 10.0;
            pts.push_back({fa, pm});
        }
        const auto c = envelope(pts);
        std::vector<oracle::StepPoint> steps;
        for (const auto& p : c.points)
            steps.push_back({p.tfa, p.pmiss});
        CHECK(std::fabs(naudc(c, 0.2) - oracle::naudc_riemann(steps, 0.2)) <= 1e-4);
    }
}

TEST_CASE("evaluate scores each activity and excludes those without references") {
    const auto videos = videos_of({{"v1", 1800, 30.0}});
    std::vector<ActivityInstance> r{{"walk", "v1", 10, 20, std::nullopt},
                                    {"run", "v1", 100, 200, std::nullopt}};
    std::vector<ActivityInstance> s{{"walk", "v1", 10, 20, 0.9}, {"jump", "v1", 5, 9, 0.5}};
    const auto report = evaluate(r, s, videos);
    REQUIRE(report.activities.size() == 2);
    CHECK(report.activities[0].score.activity == "run");
    CHECK(report.activities[0].score.naudc == 1.0);
    CHECK(report.activities[1].score.activity == "walk");
    CHECK(report.activities[1].score.naudc == 0.0);
    CHECK(report.excluded == std::vector<std::string>{"jump"});
    CHECK(report.aggregate.mean_naudc == doctest::Approx(0.5));

    std::vector<ActivityScore> one{{"a", 0.4, 0.1, 0.2}};
    CHECK(aggregate(one).mean_naudc == 0.4);
    std::vector<ActivityScore> two{{"a", 0.4, 0, 0}, {"b", 0.6, 0, 0}};
    CHECK(aggregate(two).mean_naudc == doctest::Approx(0.5));
    CHECK_THROWS_AS(aggregate(std::vector<ActivityScore>{}), Error);
}

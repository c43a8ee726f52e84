#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "vidmetrics/pooling.hpp"

using namespace vidmetrics;

namespace {

RankedRun run_of(const std::string& tag, const std::string& topic,
                 const std::vector<std::string>& items) {
    RankedRun run;
    run.run_tag = tag;
    for (size_t i = 0; i < items.size(); ++i)
        run.topics[topic].push_back({items[i], static_cast<int>(i) + 1, 0.0});
    return run;
}

std::vector<std::string> numbered(const std::string& prefix, int from, int to) {
    std::vector<std::string> out;
    for (int i = from; i <= to; ++i)
        out.push_back(prefix + std::to_string(i));
    return out;
}

void check_disjoint(const JudgmentPool& pool) {
    for (const auto& [topic, tp] : pool.topics)
        for (size_t a = 0; a < tp.strata.size(); ++a)
            for (size_t b = a + 1; b < tp.strata.size(); ++b)
                for (const auto& item : tp.strata[a].members)
                    REQUIRE_FALSE(tp.strata[b].members.contains(item));
}

}  // namespace

TEST_CASE("avs pool: 300 items, top 250 then 11.1% of 50") {
    std::vector<RankedRun> runs{run_of("r1", "t", numbered("s", 1, 300))};
    PoolSpec spec;
    const auto pool = build_avs_pool(runs, spec);
    const auto& tp = pool.topics.at("t");
    REQUIRE(tp.strata.size() == 2);
    CHECK(tp.strata[0].members.size() == 250);
    CHECK(tp.strata[0].rate == 1.0);
    // round(0.111 * 50) = round(5.55) = 6
    CHECK(tp.strata[1].members.size() == 6);
    CHECK(tp.strata[1].rate == doctest::Approx(0.111));
    for (const auto& item : tp.strata[1].members) {
        const int n = std::stoi(item.substr(1));
        CHECK(n > 250);
        CHECK(n <= 300);
    }
    check_disjoint(pool);
    CHECK_NOTHROW(validate_pool(pool));
}

TEST_CASE("avs pool deduplicates identical runs and ignores run order") {
    const auto items = numbered("s", 1, 600);
    std::vector<RankedRun> one{run_of("r1", "t", items)};
    std::vector<RankedRun> two{run_of("r1", "t", items), run_of("r2", "t", items)};
    PoolSpec spec;
    CHECK(build_avs_pool(one, spec) == build_avs_pool(two, spec));

    auto shuffled = items;
    std::mt19937_64 rng(7);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    std::vector<RankedRun> ab{run_of("a", "t", items), run_of("b", "t", shuffled)};
    std::vector<RankedRun> ba{run_of("b", "t", shuffled), run_of("a", "t", items)};
    CHECK(build_avs_pool(ab, spec) == build_avs_pool(ba, spec));
}

TEST_CASE("avs pool is deterministic per seed and varies with it") {
    std::vector<RankedRun> runs{run_of("r1", "t", numbered("s", 1, 1000))};
    PoolSpec spec;
    spec.seed = 11;
    const auto a = build_avs_pool(runs, spec);
    CHECK(a == build_avs_pool(runs, spec));
    spec.seed = 12;
    CHECK_FALSE(a == build_avs_pool(runs, spec));
}

TEST_CASE("avs pool with tail rate 1 takes the full union to depth 1000") {
    std::vector<RankedRun> runs{run_of("r1", "t", numbered("a", 1, 1000)),
                                run_of("r2", "t", numbered("b", 1, 1000))};
    PoolSpec spec;
    spec.tail_rate = 1.0;
    const auto pool = build_avs_pool(runs, spec);
    const auto& tp = pool.topics.at("t");
    CHECK(tp.strata[0].members.size() == 500);
    CHECK(tp.strata[1].members.size() == 1500);
}

TEST_CASE("avs pool: items in the top tier of any run never enter the tail") {
    // s300 is ranked 300 in r1 but 1 in r2
    auto r1 = numbered("s", 1, 400);
    std::vector<std::string> r2{"s300"};
    std::vector<RankedRun> runs{run_of("r1", "t", r1), run_of("r2", "t", r2)};
    PoolSpec spec;
    spec.tail_rate = 1.0;
    const auto pool = build_avs_pool(runs, spec);
    CHECK(pool.topics.at("t").strata[0].members.contains("s300"));
    CHECK_FALSE(pool.topics.at("t").strata[1].members.contains("s300"));
    check_disjoint(pool);
}

TEST_CASE("avs pool requires runs") {
    std::vector<RankedRun> none;
    CHECK_THROWS_AS(build_avs_pool(none, PoolSpec{}), Error);
    CHECK_THROWS_AS(build_rank_strata(none, PoolSpec{}), Error);
}

TEST_CASE("tail sample size and inclusion frequency over many seeds") {
    std::vector<std::string> population = numbered("x", 1, 100);
    const double rate = 0.111;
    const size_t expected = static_cast<size_t>(std::llround(rate * 100));
    std::map<std::string, int> hits;
    const int seeds = 5000;
    for (int s = 0; s < seeds; ++s) {
        const auto picked = sample_fixed_size(population, rate, static_cast<uint64_t>(s) * 7919 + 1);
        REQUIRE(picked.size() == expected);
        for (const auto& p : picked)
            ++hits[p];
    }
    for (const auto& item : population) {
        const double freq = static_cast<double>(hits[item]) / seeds;
        CHECK(std::fabs(freq - rate) <= 0.02);
    }
}

TEST_CASE("rank strata: 40 items give two strata of 20") {
    std::vector<RankedRun> runs{run_of("r1", "t", numbered("s", 1, 40))};
    PoolSpec spec;
    spec.mode = PoolMode::rank_strata;
    const auto pool = build_rank_strata(runs, spec);
    const auto& tp = pool.topics.at("t");
    REQUIRE(tp.strata.size() == 2);
    CHECK(tp.strata[0].members.size() == 20);
    CHECK(tp.strata[1].members.size() == 20);
    CHECK(tp.strata[0].members.contains("s20"));
    CHECK(tp.strata[1].members.contains("s21"));
    CHECK(tp.strata[1].rate == 1.0);
}

TEST_CASE("rank strata: an item appears only in its earliest stratum") {
    auto a = numbered("a", 1, 40);
    a[4] = "shared";  // rank 5 in run A
    auto b = numbered("b", 1, 40);
    b[24] = "shared";  // rank 25 in run B
    std::vector<RankedRun> runs{run_of("A", "t", a), run_of("B", "t", b)};
    PoolSpec spec;
    spec.mode = PoolMode::rank_strata;
    const auto pool = build_rank_strata(runs, spec);
    const auto& tp = pool.topics.at("t");
    CHECK(tp.strata[0].members.contains("shared"));
    CHECK_FALSE(tp.strata[1].members.contains("shared"));
    CHECK(tp.strata[1].members.size() == 39);
    check_disjoint(pool);
}

TEST_CASE("rank strata stop at max depth (26 strata at 520)") {
    std::vector<RankedRun> runs{run_of("r1", "t", numbered("s", 1, 1000))};
    PoolSpec spec;
    spec.mode = PoolMode::rank_strata;
    auto pool = build_rank_strata(runs, spec);
    CHECK(pool.topics.at("t").strata.size() == 26);
    CHECK(pool.topics.at("t").strata.back().members.contains("s520"));

    spec.topic_depths["t"] = 200;
    pool = build_rank_strata(runs, spec);
    CHECK(pool.topics.at("t").strata.size() == 10);
}

TEST_CASE("pool spec validation") {
    PoolSpec spec;
    spec.tail_rate = 0.0;
    CHECK_THROWS_AS(validate_pool_spec(spec), Error);
    spec = {};
    spec.top_depth = 1000;
    CHECK_THROWS_AS(validate_pool_spec(spec), Error);
    spec = {};
    spec.max_depth = 530;
    CHECK_THROWS_AS(validate_pool_spec(spec), Error);
}

TEST_CASE("percentage rounding matches the published pooling table row") {
    CHECK(percentage(64555, 72692) == doctest::Approx(88.81).epsilon(1e-12));
    CHECK(percentage(6115, 64555) == doctest::Approx(9.47).epsilon(1e-12));
    CHECK(percentage(705, 6115) == doctest::Approx(11.53).epsilon(1e-12));
    CHECK(percentage(0, 0) == 0.0);
}

TEST_CASE("pool_stats counts submissions, judgments and relevant items") {
    std::vector<RankedRun> runs{run_of("r1", "t", {"a", "b", "c"}),
                                run_of("r2", "t", {"a", "d"})};
    JudgmentPool pool;
    auto& tp = pool.topics["t"];
    tp.strata = {{1, 1.0, {"a", "b", "c", "d"}}};
    tp.judgments = {{"a", Relevance::relevant}, {"b", Relevance::nonrelevant},
                    {"c", Relevance::nonrelevant}};
    const auto rows = pool_stats(runs, pool);
    REQUIRE(rows.size() == 1);
    const auto& r = rows[0];
    CHECK(r.total_submitted == 5);
    CHECK(r.unique_submitted == 4);
    CHECK(r.pct_unique == doctest::Approx(80.0));
    CHECK(r.number_judged == 3);
    CHECK(r.pct_unique_judged == doctest::Approx(75.0));
    CHECK(r.number_relevant == 1);
    CHECK(r.pct_judged_relevant == doctest::Approx(33.33));

    tp.judgments = {{"a", Relevance::nonrelevant}};
    CHECK(pool_stats(runs, pool)[0].pct_judged_relevant == 0.0);
}

#include <doctest.h>

#include "vidmetrics/model.hpp"

using namespace vidmetrics;

namespace {

RankedRun make_run(const std::vector<int>& ranks) {
    RankedRun run;
    run.run_tag = "runA";
    for (size_t i = 0; i < ranks.size(); ++i)
        run.topics["t1"].push_back({"item" + std::to_string(i), ranks[i], 1.0 - 0.1 * i});
    return run;
}

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an Error");
    return ErrorKind::Internal;
}

VideoIndex forty_frames() {
    std::vector<VideoMeta> metas{{"v1", 40, 30.0}};
    return index_videos(metas);
}

}  // namespace

TEST_CASE("validate_run accepts contiguous distinct ranks") {
    auto run = make_run({1, 2, 3});
    auto v = validate_run(run);
    CHECK(v == run);
}

TEST_CASE("validate_run sorts by rank") {
    auto run = make_run({3, 1, 2});
    auto v = validate_run(run);
    const auto& e = v.topics.at("t1");
    CHECK(e[0].rank == 1);
    CHECK(e[0].item == "item1");
    CHECK(e[2].rank == 3);
}

TEST_CASE("validate_run rejects gaps, duplicates and over-depth lists") {
    CHECK(kind_of([] { validate_run(make_run({1, 3})); }) == ErrorKind::NonContiguousRanks);
    CHECK(kind_of([] { validate_run(make_run({2})); }) == ErrorKind::NonContiguousRanks);

    auto dup = make_run({1, 2});
    dup.topics["t1"][1].item = "item0";
    CHECK(kind_of([&] { validate_run(dup); }) == ErrorKind::DuplicateItem);

    std::vector<int> ranks(1001);
    for (int i = 0; i < 1001; ++i)
        ranks[i] = i + 1;
    CHECK(kind_of([&] { validate_run(make_run(ranks), 1000); }) == ErrorKind::DepthExceeded);
    ranks.pop_back();
    CHECK_NOTHROW(validate_run(make_run(ranks), 1000));
}

TEST_CASE("validate_run rejects tokens with whitespace") {
    auto run = make_run({1});
    run.topics["t1"][0].item = "bad item";
    CHECK(kind_of([&] { validate_run(run); }) == ErrorKind::InvalidToken);
    auto run2 = make_run({1});
    run2.run_tag = "";
    CHECK(kind_of([&] { validate_run(run2); }) == ErrorKind::InvalidToken);
}

TEST_CASE("validation is idempotent") {
    auto once = validate_run(make_run({2, 1, 4, 3}));
    CHECK(validate_run(once) == once);

    const auto videos = forty_frames();
    ActivityInstanceSet set{{"a", "v1", 30, 35, 0.5}, {"a", "v1", 10, 20, 0.9}};
    auto v1 = validate_instances(set, videos, InstanceRole::system);
    CHECK(validate_instances(v1, videos, InstanceRole::system) == v1);
    CHECK(v1.front().begin_frame == 10);
}

TEST_CASE("validate_instances checks spans, videos and confidences") {
    const auto videos = forty_frames();
    ActivityInstanceSet ok{{"a", "v1", 10, 20, std::nullopt}};
    CHECK_NOTHROW(validate_instances(ok, videos, InstanceRole::reference));

    ActivityInstanceSet late{{"a", "v1", 35, 45, std::nullopt}};
    CHECK(kind_of([&] { validate_instances(late, videos, InstanceRole::reference); }) ==
          ErrorKind::FrameOutOfRange);

    ActivityInstanceSet reversed{{"a", "v1", 20, 10, std::nullopt}};
    CHECK(kind_of([&] { validate_instances(reversed, videos, InstanceRole::reference); }) ==
          ErrorKind::FrameOutOfRange);

    ActivityInstanceSet edge{{"a", "v1", 39, 39, std::nullopt}};
    CHECK_NOTHROW(validate_instances(edge, videos, InstanceRole::reference));

    ActivityInstanceSet ref_conf{{"a", "v1", 10, 20, 0.4}};
    CHECK(kind_of([&] { validate_instances(ref_conf, videos, InstanceRole::reference); }) ==
          ErrorKind::BadConfidence);

    ActivityInstanceSet sys_no_conf{{"a", "v1", 10, 20, std::nullopt}};
    CHECK(kind_of([&] { validate_instances(sys_no_conf, videos, InstanceRole::system); }) ==
          ErrorKind::BadConfidence);

    ActivityInstanceSet sys_bad_conf{{"a", "v1", 10, 20, 1.5}};
    CHECK(kind_of([&] { validate_instances(sys_bad_conf, videos, InstanceRole::system); }) ==
          ErrorKind::BadConfidence);

    ActivityInstanceSet unknown{{"a", "v9", 1, 2, std::nullopt}};
    CHECK(kind_of([&] { validate_instances(unknown, videos, InstanceRole::reference); }) ==
          ErrorKind::UnknownVideo);
}

TEST_CASE("span length is inclusive") {
    ActivityInstance x{"a", "v", 10, 20, std::nullopt};
    CHECK(x.length() == 11);
    ActivityInstance y{"a", "v", 5, 5, std::nullopt};
    CHECK(y.length() == 1);
}

TEST_CASE("validate_pool enforces disjoint strata and judged membership") {
    JudgmentPool pool;
    auto& tp = pool.topics["t"];
    tp.strata = {{1, 1.0, {"a", "b"}}, {2, 0.5, {"c"}}};
    tp.judgments = {{"a", Relevance::relevant}, {"c", Relevance::nonrelevant}};
    CHECK_NOTHROW(validate_pool(pool));

    auto overlap = pool;
    overlap.topics["t"].strata[1].members.insert("a");
    CHECK(kind_of([&] { validate_pool(overlap); }) == ErrorKind::ItemInMultipleStrata);

    auto stray = pool;
    stray.topics["t"].judgments["zzz"] = Relevance::relevant;
    CHECK(kind_of([&] { validate_pool(stray); }) == ErrorKind::BadStratum);

    auto bad_rate = pool;
    bad_rate.topics["t"].strata[1].rate = 0.0;
    CHECK(kind_of([&] { validate_pool(bad_rate); }) == ErrorKind::BadStratum);
    bad_rate.topics["t"].strata[1].rate = 1.2;
    CHECK(kind_of([&] { validate_pool(bad_rate); }) == ErrorKind::BadStratum);

    const auto rel = relevant_sets(pool);
    CHECK(rel.at("t") == std::set<ItemId>{"a"});
}

TEST_CASE("video metadata must be positive") {
    std::vector<VideoMeta> zero{{"v", 0, 30.0}};
    CHECK_THROWS_AS(index_videos(zero), Error);
    std::vector<VideoMeta> rate{{"v", 10, 0.0}};
    CHECK_THROWS_AS(index_videos(rate), Error);
    std::vector<VideoMeta> twice{{"v", 10, 30.0}, {"v", 10, 30.0}};
    CHECK_THROWS_AS(index_videos(twice), Error);
    VideoMeta m{"v", 1800, 30.0};
    CHECK(m.minutes() == doctest::Approx(1.0));
}

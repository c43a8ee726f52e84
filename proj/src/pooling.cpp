#include "vidmetrics/pooling.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace vidmetrics {

namespace {

void require_runs(std::span<const RankedRun> runs) {
    if (runs.empty())
        throw Error(ErrorKind::EmptyRunSet, "no runs supplied for pooling");
}

std::set<TopicId> all_topics(std::span<const RankedRun> runs) {
    std::set<TopicId> topics;
    for (const auto& run : runs)
        for (const auto& [topic, entries] : run.topics)
            topics.insert(topic);
    return topics;
}

// Distinct items ranked in [lo, hi] for a topic, across runs.
std::set<ItemId> items_in_rank_range(std::span<const RankedRun> runs, const TopicId& topic,
                                     int lo, int hi) {
    std::set<ItemId> out;
    for (const auto& run : runs) {
        auto it = run.topics.find(topic);
        if (it == run.topics.end())
            continue;
        for (const auto& e : it->second)
            if (e.rank >= lo && e.rank <= hi)
                out.insert(e.item);
    }
    return out;
}

}  // namespace

void validate_pool_spec(const PoolSpec& spec) {
    auto fail = [](const std::string& msg) { throw Error(ErrorKind::InvalidArgument, msg); };
    if (!(spec.top_rate > 0.0 && spec.top_rate <= 1.0))
        fail("top_rate must be in (0,1]");
    if (!(spec.tail_rate > 0.0 && spec.tail_rate <= 1.0))
        fail("tail_rate must be in (0,1]");
    if (spec.top_depth < 1 || spec.top_depth >= spec.tail_depth)
        fail("require 1 <= top_depth < tail_depth");
    if (spec.stratum_size < 1 || spec.max_depth < 1 || spec.max_depth % spec.stratum_size != 0)
        fail("stratum_size must divide max_depth");
    for (const auto& [topic, depth] : spec.topic_depths)
        if (depth < 1 || depth % spec.stratum_size != 0)
            fail("depth for topic " + topic + " must be a positive multiple of stratum_size");
}

std::vector<ItemId> sample_fixed_size(std::vector<ItemId> population, double rate, uint64_t seed) {
    std::sort(population.begin(), population.end());
    const auto n = population.size();
    auto k = static_cast<size_t>(std::llround(rate * static_cast<double>(n)));
    k = std::min(k, n);
    std::mt19937_64 rng(seed);
    // partial Fisher-Yates over the sorted population
    for (size_t i = 0; i < k; ++i) {
        const size_t j = i + static_cast<size_t>(uniform_below(rng, n - i));
        std::swap(population[i], population[j]);
    }
    population.resize(k);
    std::sort(population.begin(), population.end());
    return population;
}

JudgmentPool build_avs_pool(std::span<const RankedRun> runs, const PoolSpec& spec) {
    require_runs(runs);
    validate_pool_spec(spec);
    JudgmentPool pool;
    for (const auto& topic : all_topics(runs)) {
        const uint64_t topic_seed = derive_seed(spec.seed, topic);
        auto top = items_in_rank_range(runs, topic, 1, spec.top_depth);
        auto tail_all = items_in_rank_range(runs, topic, spec.top_depth + 1, spec.tail_depth);

        std::vector<ItemId> tail;
        std::set_difference(tail_all.begin(), tail_all.end(), top.begin(), top.end(),
                            std::back_inserter(tail));

        TopicPool tp;
        Stratum s1{1, spec.top_rate, {}};
        if (spec.top_rate >= 1.0) {
            s1.members = std::move(top);
        } else {
            auto picked = sample_fixed_size({top.begin(), top.end()}, spec.top_rate,
                                            mix64(topic_seed ^ 1));
            s1.members.insert(picked.begin(), picked.end());
        }
        Stratum s2{2, spec.tail_rate, {}};
        auto picked = sample_fixed_size(std::move(tail), spec.tail_rate, mix64(topic_seed ^ 2));
        s2.members.insert(picked.begin(), picked.end());

        if (!s1.members.empty())
            tp.strata.push_back(std::move(s1));
        if (!s2.members.empty())
            tp.strata.push_back(std::move(s2));
        pool.topics.emplace(topic, std::move(tp));
    }
    return pool;
}

JudgmentPool build_rank_strata(std::span<const RankedRun> runs, const PoolSpec& spec) {
    require_runs(runs);
    validate_pool_spec(spec);
    JudgmentPool pool;
    for (const auto& topic : all_topics(runs)) {
        auto dit = spec.topic_depths.find(topic);
        const int depth = dit != spec.topic_depths.end() ? dit->second : spec.max_depth;
        std::set<ItemId> seen;
        TopicPool tp;
        for (int k = 1; (k - 1) * spec.stratum_size < depth; ++k) {
            const int lo = (k - 1) * spec.stratum_size + 1;
            const int hi = k * spec.stratum_size;
            Stratum s{k, 1.0, {}};
            for (auto& item : items_in_rank_range(runs, topic, lo, hi))
                if (seen.insert(item).second)
                    s.members.insert(item);
            if (!s.members.empty())
                tp.strata.push_back(std::move(s));
        }
        pool.topics.emplace(topic, std::move(tp));
    }
    return pool;
}

JudgmentPool build_pool(std::span<const RankedRun> runs, const PoolSpec& spec) {
    return spec.mode == PoolMode::avs_two_tier ? build_avs_pool(runs, spec)
                                               : build_rank_strata(runs, spec);
}

double percentage(int64_t num, int64_t den) {
    if (den == 0)
        return 0.0;
    const double pct = 100.0 * static_cast<double>(num) / static_cast<double>(den);
    return std::round(pct * 100.0) / 100.0;
}

std::vector<PoolStatsRow> pool_stats(std::span<const RankedRun> runs, const JudgmentPool& pool) {
    std::set<TopicId> topics = all_topics(runs);
    for (const auto& [topic, tp] : pool.topics)
        topics.insert(topic);

    std::vector<PoolStatsRow> rows;
    for (const auto& topic : topics) {
        PoolStatsRow row;
        row.topic = topic;
        std::set<std::string_view> unique;
        for (const auto& run : runs) {
            auto it = run.topics.find(topic);
            if (it == run.topics.end())
                continue;
            row.total_submitted += static_cast<int64_t>(it->second.size());
            for (const auto& e : it->second)
                unique.insert(e.item);
        }
        row.unique_submitted = static_cast<int64_t>(unique.size());
        if (auto pit = pool.topics.find(topic); pit != pool.topics.end()) {
            row.number_judged = static_cast<int64_t>(pit->second.judgments.size());
            row.number_relevant = std::count_if(
                pit->second.judgments.begin(), pit->second.judgments.end(),
                [](const auto& kv) { return kv.second == Relevance::relevant; });
        }
        row.pct_unique = percentage(row.unique_submitted, row.total_submitted);
        row.pct_unique_judged = percentage(row.number_judged, row.unique_submitted);
        row.pct_judged_relevant = percentage(row.number_relevant, row.number_judged);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace vidmetrics

#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "vidmetrics/model.hpp"
#include "vidmetrics/random.hpp"

namespace vidmetrics {

enum class PoolMode { avs_two_tier, rank_strata };

struct PoolSpec {
    PoolMode mode = PoolMode::avs_two_tier;
    int top_depth = 250;
    double top_rate = 1.0;
    int tail_depth = 1000;
    double tail_rate = 0.111;
    int stratum_size = 20;
    int max_depth = 520;
    /// rank_strata only: per-topic depth overriding max_depth.
    std::map<TopicId, int> topic_depths;
    uint64_t seed = kDefaultSeed;
};

/// Throws Error(InvalidArgument) when a PoolSpec invariant fails.
void validate_pool_spec(const PoolSpec& spec);

/// Two strata per topic: items ranked <= top_depth in any run, then a seeded
/// fixed-size sample of round(tail_rate * |tail|) of the remaining items ranked
/// up to tail_depth. Judgments are left empty.
JudgmentPool build_avs_pool(std::span<const RankedRun> runs, const PoolSpec& spec);

/// Fixed-width rank strata (1-20, 21-40, ...) up to max_depth; an item lands in
/// the first stratum in which any run ranks it. All rates are 1.
JudgmentPool build_rank_strata(std::span<const RankedRun> runs, const PoolSpec& spec);

JudgmentPool build_pool(std::span<const RankedRun> runs, const PoolSpec& spec);

/// Draws exactly round(rate * population.size()) items without replacement.
/// The result is sorted.
std::vector<ItemId> sample_fixed_size(std::vector<ItemId> population, double rate, uint64_t seed);

struct PoolStatsRow {
    TopicId topic;
    int64_t total_submitted = 0;
    int64_t unique_submitted = 0;
    double pct_unique = 0.0;
    int64_t number_judged = 0;
    double pct_unique_judged = 0.0;
    int64_t number_relevant = 0;
    double pct_judged_relevant = 0.0;
};

/// 100 * num / den rounded to two decimals; 0 when den is 0.
double percentage(int64_t num, int64_t den);

std::vector<PoolStatsRow> pool_stats(std::span<const RankedRun> runs, const JudgmentPool& pool);

}  // namespace vidmetrics

#pragma once

#include <map>
#include <set>
#include <span>
#include <vector>

#include "vidmetrics/model.hpp"

namespace vidmetrics {

/// Lidstone correction for the in-stratum precision estimate.
inline constexpr double kDefaultEpsilon = 1e-7;

struct TopicScore {
    TopicId topic;
    double value = 0.0;
};

/// Non-interpolated AP. Unjudged items count as nonrelevant; relevant items
/// that were not retrieved contribute zero.
double average_precision(std::span<const RankedEntry> ranked, const std::set<ItemId>& relevant);

/// Extended inferred AP over a stratified judgment sample.
///
/// R_hat = sum_s r_s / p_s. For a judged-relevant item at rank k,
///   E[P@k] = 1/k + (1/k) * sum_s d_sk * (r_sk + eps) / (j_sk + 2 eps)
/// where d_sk, j_sk and r_sk count the pooled, judged and relevant items of
/// stratum s above rank k. The estimate is (1/R_hat) * sum (1/p_s(k)) E[P@k],
/// clamped to [0,1].
double extended_inferred_ap(std::span<const RankedEntry> ranked, const TopicPool& pool,
                            double epsilon = kDefaultEpsilon);

/// Inferred count of relevant items in the pool.
double estimated_relevant(const TopicPool& pool);

/// Inferred recall at a cutoff rank.
double estimated_recall(std::span<const RankedEntry> ranked, const TopicPool& pool, int depth);

double mean_over_topics(std::span<const TopicScore> scores);

/// (topic, item) -> 1 - N/M
using NoveltyWeights = std::map<std::pair<TopicId, ItemId>, double>;

/// Weights for every relevant item retrieved by at least one run of the pool.
NoveltyWeights novelty_weights(std::span<const RankedRun> runs,
                               const std::map<TopicId, std::set<ItemId>>& relevant);

/// Mean over the topics of `relevant` of the summed weights of relevant items
/// retrieved by `run` and by no other run (different run tag) in `pool`.
double novelty_score(const RankedRun& run, std::span<const RankedRun> pool,
                     const NoveltyWeights& weights,
                     const std::map<TopicId, std::set<ItemId>>& relevant);

std::map<TopicId, double> novelty_topic_sums(const RankedRun& run, std::span<const RankedRun> pool,
                                             const NoveltyWeights& weights,
                                             const std::map<TopicId, std::set<ItemId>>& relevant);

double mean_inverted_rank(std::span<const int64_t> ranks);

struct FakeSentenceStats {
    int64_t median = 0;
    std::vector<std::pair<int64_t, double>> fraction_at_cutoff;
};

/// Lower median of the ranks and the fraction of ranks <= each cutoff.
FakeSentenceStats fake_sentence_stats(std::span<const int64_t> ranks, int64_t set_size,
                                      std::span<const int64_t> cutoffs);

struct ConfusionCounts {
    int64_t tp = 0;
    int64_t fp = 0;
    int64_t fn = 0;
    int64_t tn = 0;
};

struct FMeasure {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// Zero denominators give zero.
FMeasure f_measure(const ConfusionCounts& c);

}  // namespace vidmetrics

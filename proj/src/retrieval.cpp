#include "vidmetrics/retrieval.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

namespace vidmetrics {

double average_precision(std::span<const RankedEntry> ranked, const std::set<ItemId>& relevant) {
    if (relevant.empty())
        throw Error(ErrorKind::NoRelevant, "no relevant items for topic");
    double sum = 0.0;
    int64_t hits = 0;
    for (size_t i = 0; i < ranked.size(); ++i) {
        if (relevant.contains(ranked[i].item)) {
            ++hits;
            sum += static_cast<double>(hits) / static_cast<double>(i + 1);
        }
    }
    return sum / static_cast<double>(relevant.size());
}

namespace {

struct ItemInfo {
    size_t stratum = 0;
    bool judged = false;
    bool relevant = false;
};

using ItemIndex = std::unordered_map<std::string_view, ItemInfo>;

ItemIndex index_pool(const TopicPool& pool) {
    ItemIndex index;
    for (size_t s = 0; s < pool.strata.size(); ++s) {
        for (const auto& item : pool.strata[s].members) {
            if (!index.emplace(item, ItemInfo{s, false, false}).second)
                throw Error(ErrorKind::ItemInMultipleStrata, "item " + item + " in several strata");
        }
    }
    for (const auto& [item, rel] : pool.judgments) {
        auto it = index.find(item);
        if (it == index.end())
            throw Error(ErrorKind::BadStratum, "judged item " + item + " is in no stratum");
        it->second.judged = true;
        it->second.relevant = rel == Relevance::relevant;
    }
    return index;
}

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

double estimated_relevant(const TopicPool& pool) {
    std::vector<int64_t> rel(pool.strata.size(), 0);
    const auto index = index_pool(pool);
    for (const auto& [item, info] : index)
        if (info.relevant)
            ++rel[info.stratum];
    double r_hat = 0.0;
    for (size_t s = 0; s < pool.strata.size(); ++s)
        r_hat += static_cast<double>(rel[s]) / pool.strata[s].rate;
    return r_hat;
}

double extended_inferred_ap(std::span<const RankedEntry> ranked, const TopicPool& pool,
                            double epsilon) {
    const auto index = index_pool(pool);
    const double r_hat = estimated_relevant(pool);
    if (r_hat <= 0.0)
        throw Error(ErrorKind::NoJudgedRelevant, "pool has no judged relevant items");

    const size_t n_strata = pool.strata.size();
    // running per-stratum counts over ranks above the current one
    std::vector<int64_t> pooled(n_strata, 0), judged(n_strata, 0), rel(n_strata, 0);
    double sum = 0.0;
    for (size_t i = 0; i < ranked.size(); ++i) {
        const double k = static_cast<double>(i + 1);
        auto it = index.find(ranked[i].item);
        const ItemInfo* info = it == index.end() ? nullptr : &it->second;
        if (info && info->relevant) {
            double above = 0.0;
            for (size_t s = 0; s < n_strata; ++s) {
                if (pooled[s] == 0)
                    continue;
                above += static_cast<double>(pooled[s]) *
                         (static_cast<double>(rel[s]) + epsilon) /
                         (static_cast<double>(judged[s]) + 2.0 * epsilon);
            }
            const double prec = 1.0 / k + above / k;
            sum += prec / pool.strata[info->stratum].rate;
        }
        if (info) {
            ++pooled[info->stratum];
            if (info->judged)
                ++judged[info->stratum];
            if (info->relevant)
                ++rel[info->stratum];
        }
    }
    return clamp01(sum / r_hat);
}

double estimated_recall(std::span<const RankedEntry> ranked, const TopicPool& pool, int depth) {
    const auto index = index_pool(pool);
    const double r_hat = estimated_relevant(pool);
    if (r_hat <= 0.0)
        throw Error(ErrorKind::NoJudgedRelevant, "pool has no judged relevant items");
    double found = 0.0;
    for (const auto& e : ranked) {
        if (e.rank > depth)
            break;
        auto it = index.find(e.item);
        if (it != index.end() && it->second.relevant)
            found += 1.0 / pool.strata[it->second.stratum].rate;
    }
    return clamp01(found / r_hat);
}

double mean_over_topics(std::span<const TopicScore> scores) {
    if (scores.empty())
        throw Error(ErrorKind::EmptyScores, "no topic scores to average");
    double sum = 0.0;
    for (const auto& s : scores)
        sum += s.value;
    return sum / static_cast<double>(scores.size());
}

NoveltyWeights novelty_weights(std::span<const RankedRun> runs,
                               const std::map<TopicId, std::set<ItemId>>& relevant) {
    NoveltyWeights weights;
    if (runs.empty())
        return weights;
    const auto m = static_cast<double>(runs.size());
    std::map<std::pair<TopicId, ItemId>, int64_t> retrieved_by;
    for (const auto& run : runs) {
        for (const auto& [topic, entries] : run.topics) {
            auto rit = relevant.find(topic);
            if (rit == relevant.end())
                continue;
            for (const auto& e : entries)
                if (rit->second.contains(e.item))
                    ++retrieved_by[{topic, e.item}];
        }
    }
    for (const auto& [key, n] : retrieved_by)
        weights.emplace(key, 1.0 - static_cast<double>(n) / m);
    return weights;
}

std::map<TopicId, double> novelty_topic_sums(const RankedRun& run, std::span<const RankedRun> pool,
                                             const NoveltyWeights& weights,
                                             const std::map<TopicId, std::set<ItemId>>& relevant) {
    std::map<TopicId, double> sums;
    for (const auto& [topic, rel] : relevant) {
        double sum = 0.0;
        auto it = run.topics.find(topic);
        if (it != run.topics.end()) {
            std::set<std::string_view> others;
            for (const auto& other : pool) {
                if (other.run_tag == run.run_tag)
                    continue;
                auto oit = other.topics.find(topic);
                if (oit == other.topics.end())
                    continue;
                for (const auto& e : oit->second)
                    others.insert(e.item);
            }
            for (const auto& e : it->second) {
                if (!rel.contains(e.item) || others.contains(e.item))
                    continue;
                auto wit = weights.find({topic, e.item});
                if (wit != weights.end())
                    sum += wit->second;
            }
        }
        sums.emplace(topic, sum);
    }
    return sums;
}

double novelty_score(const RankedRun& run, std::span<const RankedRun> pool,
                     const NoveltyWeights& weights,
                     const std::map<TopicId, std::set<ItemId>>& relevant) {
    const auto sums = novelty_topic_sums(run, pool, weights, relevant);
    if (sums.empty())
        return 0.0;
    double total = 0.0;
    for (const auto& [topic, s] : sums)
        total += s;
    return total / static_cast<double>(sums.size());
}

double mean_inverted_rank(std::span<const int64_t> ranks) {
    if (ranks.empty())
        throw Error(ErrorKind::EmptyInput, "no ranks supplied");
    double sum = 0.0;
    for (auto r : ranks) {
        if (r < 1)
            throw Error(ErrorKind::NonPositiveRank, "rank " + std::to_string(r) + " is not positive");
        sum += 1.0 / static_cast<double>(r);
    }
    return sum / static_cast<double>(ranks.size());
}

FakeSentenceStats fake_sentence_stats(std::span<const int64_t> ranks, int64_t set_size,
                                      std::span<const int64_t> cutoffs) {
    if (ranks.empty())
        throw Error(ErrorKind::EmptyInput, "no fake-sentence ranks supplied");
    std::vector<int64_t> sorted(ranks.begin(), ranks.end());
    for (auto r : sorted) {
        if (r < 1)
            throw Error(ErrorKind::NonPositiveRank, "rank " + std::to_string(r) + " is not positive");
        if (r > set_size)
            throw Error(ErrorKind::RankAboveSetSize, "rank " + std::to_string(r) +
                                                         " exceeds set size " +
                                                         std::to_string(set_size));
    }
    std::sort(sorted.begin(), sorted.end());
    FakeSentenceStats out;
    out.median = sorted[(sorted.size() - 1) / 2];
    for (auto c : cutoffs) {
        const auto n = std::upper_bound(sorted.begin(), sorted.end(), c) - sorted.begin();
        out.fraction_at_cutoff.emplace_back(c, static_cast<double>(n) /
                                                   static_cast<double>(sorted.size()));
    }
    return out;
}

FMeasure f_measure(const ConfusionCounts& c) {
    if (c.tp < 0 || c.fp < 0 || c.fn < 0 || c.tn < 0)
        throw Error(ErrorKind::InvalidArgument, "confusion counts must be non-negative");
    FMeasure f;
    if (c.tp + c.fp > 0)
        f.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
    if (c.tp + c.fn > 0)
        f.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    if (f.precision + f.recall > 0.0)
        f.f1 = 2.0 * f.precision * f.recall / (f.precision + f.recall);
    return f;
}

}  // namespace vidmetrics

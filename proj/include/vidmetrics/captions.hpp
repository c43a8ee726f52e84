#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vidmetrics/model.hpp"

namespace vidmetrics::captions {

using Tokens = std::vector<std::string>;

/// Lowercase, split on whitespace, trim the characters .,!?;:" from both ends
/// of each token, drop tokens that become empty.
Tokens tokenize(std::string_view text);

using NGramCounts = std::map<std::string, int>;

/// n-grams joined by a single space.
NGramCounts ngram_counts(const Tokens& tokens, int n);

struct ClippedCounts {
    int64_t matches = 0;
    int64_t total = 0;
};

/// Candidate n-gram count clipped by the maximum count in any single reference.
ClippedCounts clipped_counts(const Tokens& candidate, std::span<const Tokens> references, int n);

/// Length of the reference closest to `candidate_length`; ties take the shorter.
size_t closest_reference_length(size_t candidate_length, std::span<const Tokens> references);

enum class BleuMode { sentence, corpus };

/// Sentence mode adds one to numerator and denominator of the precisions for
/// n >= 2. Corpus mode scores this single segment without smoothing.
double bleu(const Tokens& candidate, std::span<const Tokens> references, int max_n = 4,
            BleuMode mode = BleuMode::sentence);

struct Segment {
    Tokens candidate;
    std::vector<Tokens> references;
};

/// Counts and lengths pooled over all segments before taking precisions.
double corpus_bleu(std::span<const Segment> segments, int max_n = 4);

/// Document frequencies of n-grams (n = 1..4) over per-video reference sets.
class CorpusProfile {
public:
    static constexpr int kMaxN = 4;

    explicit CorpusProfile(const std::map<VideoId, std::vector<Tokens>>& references);

    size_t size() const noexcept { return size_; }
    int df(int n, const std::string& ngram) const;
    double idf(int n, const std::string& ngram) const;

private:
    size_t size_ = 0;
    std::vector<std::map<std::string, int>> df_;  // index n-1
};

enum class CiderVariant { cider, cider_d };

inline constexpr double kCiderSigma = 6.0;

/// 10 * mean over n = 1..4 of the mean over references of the (clipped, for
/// CIDEr-D) tf-idf cosine similarity; CIDEr-D also applies the Gaussian
/// length penalty.
double cider(const Tokens& candidate, std::span<const Tokens> references,
             const CorpusProfile& corpus, CiderVariant variant = CiderVariant::cider);

struct DaRating {
    std::string worker;
    std::string system;
    VideoId video;
    double raw = 0.0;
};

struct DaSystemScore {
    double raw_avg = 0.0;
    double z_avg = 0.0;
    size_t captions = 0;
};

/// Per-worker z standardization (population std, z = 0 for constant workers),
/// then the mean per caption (system, video), then the mean per system.
std::map<std::string, DaSystemScore> da_aggregate(std::span<const DaRating> ratings);

/// Pearson correlation coefficient.
double metric_correlation(std::span<const double> x, std::span<const double> y);

}  // namespace vidmetrics::captions

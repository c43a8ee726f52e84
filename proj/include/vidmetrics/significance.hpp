#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "vidmetrics/model.hpp"
#include "vidmetrics/random.hpp"

namespace vidmetrics::significance {

inline constexpr int kExhaustiveMaxTopics = 20;
inline constexpr int64_t kDefaultIterations = 100000;
inline constexpr double kDefaultAlpha = 0.05;

struct SigResult {
    std::string run_a;
    std::string run_b;
    double observed = 0.0;  // |mean(a - b)|
    double p_value = 1.0;
    int64_t iterations = 0;  // sign patterns counted, identity included
    bool exhaustive = false;
    uint64_t seed = 0;

    bool operator==(const SigResult&) const = default;
};

/// Two-sided paired randomization test over topic score differences. All 2^T
/// sign flips are enumerated when T <= 20; otherwise `iterations` random flips
/// are drawn and the identity is added to both counts.
SigResult paired_randomization(std::span<const double> a, std::span<const double> b,
                               int64_t iterations = kDefaultIterations,
                               uint64_t seed = kDefaultSeed);

/// Always enumerates every sign flip (T <= 62).
SigResult exhaustive_randomization(std::span<const double> a, std::span<const double> b);

/// Always draws `iterations` random flips; p = (1 + hits) / (iterations + 1).
SigResult sampled_randomization(std::span<const double> a, std::span<const double> b,
                                int64_t iterations, uint64_t seed);

/// Run name -> topic -> score.
using RunScores = std::map<std::string, std::map<TopicId, double>>;

struct SigMatrix {
    std::vector<std::string> runs;  // sorted
    /// results[i][j] for i != j; results[i][j] and results[j][i] hold the same test
    std::vector<std::vector<SigResult>> results;
    /// better[i][j]: row run significantly better than column run
    std::vector<std::vector<bool>> better;
};

SigMatrix pairwise_matrix(const RunScores& runs, double alpha = kDefaultAlpha,
                          int64_t iterations = kDefaultIterations, uint64_t seed = kDefaultSeed);

}  // namespace vidmetrics::significance

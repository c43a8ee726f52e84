#include "vidmetrics/significance.hpp"

#include <cmath>
#include <random>

namespace vidmetrics::significance {

namespace {

// Absolute tolerance when comparing permuted statistics to the observed one,
// so flips that reproduce it up to summation order still count.
constexpr double kTieTolerance = 1e-12;

}  // namespace

namespace {

struct Prepared {
    std::vector<double> diff;
    double n = 0.0;
    double observed = 0.0;
};

Prepared prepare(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw Error(ErrorKind::LengthMismatch, "paired score vectors differ in length");
    if (a.size() < 2)
        throw Error(ErrorKind::TooFewTopics, "randomization test needs at least two topics");
    Prepared p;
    p.diff.resize(a.size());
    double sum = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        p.diff[i] = a[i] - b[i];
        sum += p.diff[i];
    }
    p.n = static_cast<double>(a.size());
    p.observed = std::fabs(sum) / p.n;
    return p;
}

}  // namespace

SigResult exhaustive_randomization(std::span<const double> a, std::span<const double> b) {
    const auto p = prepare(a, b);
    const size_t t = p.diff.size();
    if (t > 62)
        throw Error(ErrorKind::InvalidArgument, "too many topics for exhaustive enumeration");
    const double bar = p.observed - kTieTolerance;
    const uint64_t total = uint64_t{1} << t;
    int64_t hits = 0;
    for (uint64_t mask = 0; mask < total; ++mask) {
        double s = 0.0;
        for (size_t i = 0; i < t; ++i)
            s += (mask >> i) & 1 ? -p.diff[i] : p.diff[i];
        if (std::fabs(s) / p.n >= bar)
            ++hits;
    }
    SigResult res;
    res.observed = p.observed;
    res.iterations = static_cast<int64_t>(total);
    res.exhaustive = true;
    res.p_value = static_cast<double>(hits) / static_cast<double>(total);
    return res;
}

SigResult sampled_randomization(std::span<const double> a, std::span<const double> b,
                                int64_t iterations, uint64_t seed) {
    const auto p = prepare(a, b);
    if (iterations < 1)
        throw Error(ErrorKind::InvalidArgument, "iterations must be positive");
    const size_t t = p.diff.size();
    const double bar = p.observed - kTieTolerance;
    std::mt19937_64 rng(seed);
    int64_t hits = 1;  // identity
    for (int64_t it = 0; it < iterations; ++it) {
        double s = 0.0;
        uint64_t bits = 0;
        for (size_t i = 0; i < t; ++i) {
            if (i % 64 == 0)
                bits = rng();
            s += bits & 1 ? -p.diff[i] : p.diff[i];
            bits >>= 1;
        }
        if (std::fabs(s) / p.n >= bar)
            ++hits;
    }
    SigResult res;
    res.observed = p.observed;
    res.seed = seed;
    res.iterations = iterations + 1;
    res.p_value = static_cast<double>(hits) / static_cast<double>(res.iterations);
    return res;
}

SigResult paired_randomization(std::span<const double> a, std::span<const double> b,
                               int64_t iterations, uint64_t seed) {
    SigResult res = a.size() <= static_cast<size_t>(kExhaustiveMaxTopics)
                        ? exhaustive_randomization(a, b)
                        : sampled_randomization(a, b, iterations, seed);
    res.seed = seed;
    return res;
}

SigMatrix pairwise_matrix(const RunScores& runs, double alpha, int64_t iterations, uint64_t seed) {
    SigMatrix m;
    for (const auto& [name, scores] : runs)
        m.runs.push_back(name);
    const size_t k = m.runs.size();
    m.results.assign(k, std::vector<SigResult>(k));
    m.better.assign(k, std::vector<bool>(k, false));

    for (size_t i = 0; i < k; ++i) {
        for (size_t j = i + 1; j < k; ++j) {
            const auto& sa = runs.at(m.runs[i]);
            const auto& sb = runs.at(m.runs[j]);
            std::vector<double> va, vb;
            for (const auto& [topic, x] : sa) {
                auto it = sb.find(topic);
                if (it == sb.end())
                    continue;
                va.push_back(x);
                vb.push_back(it->second);
            }
            if (va.empty())
                throw Error(ErrorKind::NoCommonTopics,
                            "runs " + m.runs[i] + " and " + m.runs[j] + " share no topics");
            const uint64_t pair_seed = derive_seed(seed, m.runs[i] + '\n' + m.runs[j]);
            auto r = paired_randomization(va, vb, iterations, pair_seed);
            r.run_a = m.runs[i];
            r.run_b = m.runs[j];
            double mean_a = 0.0, mean_b = 0.0;
            for (size_t x = 0; x < va.size(); ++x) {
                mean_a += va[x];
                mean_b += vb[x];
            }
            if (r.p_value < alpha) {
                if (mean_a > mean_b)
                    m.better[i][j] = true;
                else if (mean_b > mean_a)
                    m.better[j][i] = true;
            }
            m.results[i][j] = r;
            m.results[j][i] = r;
        }
    }
    return m;
}

}  // namespace vidmetrics::significance

#include "vidmetrics/captions.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

namespace vidmetrics::captions {

Tokens tokenize(std::string_view text) {
    static constexpr std::string_view kTrim = ".,!?;:\"";
    Tokens out;
    size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
            ++i;
        size_t j = i;
        while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])))
            ++j;
        std::string_view word = text.substr(i, j - i);
        const auto first = word.find_first_not_of(kTrim);
        if (first != std::string_view::npos) {
            const auto last = word.find_last_not_of(kTrim);
            std::string tok(word.substr(first, last - first + 1));
            for (auto& c : tok)
                c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            out.push_back(std::move(tok));
        }
        i = j;
    }
    return out;
}

NGramCounts ngram_counts(const Tokens& tokens, int n) {
    NGramCounts counts;
    if (n < 1 || tokens.size() < static_cast<size_t>(n))
        return counts;
    for (size_t i = 0; i + n <= tokens.size(); ++i) {
        std::string g = tokens[i];
        for (int k = 1; k < n; ++k) {
            g += ' ';
            g += tokens[i + k];
        }
        ++counts[g];
    }
    return counts;
}

ClippedCounts clipped_counts(const Tokens& candidate, std::span<const Tokens> references, int n) {
    const auto cand = ngram_counts(candidate, n);
    NGramCounts max_ref;
    for (const auto& ref : references)
        for (const auto& [g, c] : ngram_counts(ref, n))
            max_ref[g] = std::max(max_ref[g], c);
    ClippedCounts out;
    for (const auto& [g, c] : cand) {
        out.total += c;
        auto it = max_ref.find(g);
        if (it != max_ref.end())
            out.matches += std::min(c, it->second);
    }
    return out;
}

size_t closest_reference_length(size_t candidate_length, std::span<const Tokens> references) {
    size_t best = 0;
    auto best_dist = std::numeric_limits<int64_t>::max();
    for (const auto& ref : references) {
        const auto dist = std::llabs(static_cast<int64_t>(ref.size()) -
                                     static_cast<int64_t>(candidate_length));
        if (dist < best_dist || (dist == best_dist && ref.size() < best)) {
            best = ref.size();
            best_dist = dist;
        }
    }
    return best;
}

namespace {

void require_references(std::span<const Tokens> references) {
    if (std::none_of(references.begin(), references.end(),
                     [](const Tokens& r) { return !r.empty(); }))
        throw Error(ErrorKind::NoReferences, "no non-empty reference captions");
}

double brevity_penalty(double c, double r) {
    if (c <= 0.0)
        return 0.0;
    return std::exp(std::min(0.0, 1.0 - r / c));
}

}  // namespace

double bleu(const Tokens& candidate, std::span<const Tokens> references, int max_n, BleuMode mode) {
    require_references(references);
    if (max_n < 1)
        throw Error(ErrorKind::InvalidArgument, "max_n must be >= 1");
    if (mode == BleuMode::corpus) {
        Segment seg{candidate, {references.begin(), references.end()}};
        return corpus_bleu(std::span<const Segment>(&seg, 1), max_n);
    }
    if (candidate.empty())
        return 0.0;
    double log_sum = 0.0;
    for (int n = 1; n <= max_n; ++n) {
        const auto cc = clipped_counts(candidate, references, n);
        double p;
        if (n == 1) {
            if (cc.matches == 0)
                return 0.0;
            p = static_cast<double>(cc.matches) / static_cast<double>(cc.total);
        } else {
            p = static_cast<double>(cc.matches + 1) / static_cast<double>(cc.total + 1);
        }
        log_sum += std::log(p);
    }
    const double r = static_cast<double>(closest_reference_length(candidate.size(), references));
    return brevity_penalty(static_cast<double>(candidate.size()), r) *
           std::exp(log_sum / max_n);
}

double corpus_bleu(std::span<const Segment> segments, int max_n) {
    if (max_n < 1)
        throw Error(ErrorKind::InvalidArgument, "max_n must be >= 1");
    std::vector<ClippedCounts> totals(max_n);
    double c = 0.0, r = 0.0;
    for (const auto& seg : segments) {
        require_references(seg.references);
        for (int n = 1; n <= max_n; ++n) {
            const auto cc = clipped_counts(seg.candidate, seg.references, n);
            totals[n - 1].matches += cc.matches;
            totals[n - 1].total += cc.total;
        }
        c += static_cast<double>(seg.candidate.size());
        r += static_cast<double>(closest_reference_length(seg.candidate.size(), seg.references));
    }
    double log_sum = 0.0;
    for (const auto& t : totals) {
        if (t.matches == 0 || t.total == 0)
            return 0.0;
        log_sum += std::log(static_cast<double>(t.matches) / static_cast<double>(t.total));
    }
    return brevity_penalty(c, r) * std::exp(log_sum / max_n);
}

CorpusProfile::CorpusProfile(const std::map<VideoId, std::vector<Tokens>>& references)
    : size_(references.size()), df_(kMaxN) {
    if (references.empty())
        throw Error(ErrorKind::EmptyCorpus, "reference corpus is empty");
    for (const auto& [video, refs] : references) {
        for (int n = 1; n <= kMaxN; ++n) {
            NGramCounts present;
            for (const auto& ref : refs)
                for (const auto& [g, c] : ngram_counts(ref, n))
                    present[g] = 1;
            for (const auto& [g, one] : present)
                ++df_[n - 1][g];
        }
    }
}

int CorpusProfile::df(int n, const std::string& ngram) const {
    if (n < 1 || n > kMaxN)
        return 0;
    auto it = df_[n - 1].find(ngram);
    return it == df_[n - 1].end() ? 0 : it->second;
}

double CorpusProfile::idf(int n, const std::string& ngram) const {
    const int d = std::max(1, df(n, ngram));
    return std::log(static_cast<double>(size_)) - std::log(static_cast<double>(d));
}

namespace {

using TfIdf = std::map<std::string, double>;

TfIdf tfidf(const Tokens& tokens, int n, const CorpusProfile& corpus) {
    TfIdf v;
    for (const auto& [g, c] : ngram_counts(tokens, n))
        v.emplace(g, static_cast<double>(c) * corpus.idf(n, g));
    return v;
}

double norm(const TfIdf& v) {
    double s = 0.0;
    for (const auto& [g, x] : v)
        s += x * x;
    return std::sqrt(s);
}

}  // namespace

double cider(const Tokens& candidate, std::span<const Tokens> references,
             const CorpusProfile& corpus, CiderVariant variant) {
    if (corpus.size() == 0)
        throw Error(ErrorKind::EmptyCorpus, "reference corpus is empty");
    require_references(references);
    double total = 0.0;
    for (const auto& ref : references) {
        double per_ref = 0.0;
        for (int n = 1; n <= CorpusProfile::kMaxN; ++n) {
            const auto vc = tfidf(candidate, n, corpus);
            const auto vr = tfidf(ref, n, corpus);
            const double nc = norm(vc), nr = norm(vr);
            if (nc == 0.0 || nr == 0.0)
                continue;
            double dot = 0.0;
            for (const auto& [g, x] : vc) {
                auto it = vr.find(g);
                if (it == vr.end())
                    continue;
                dot += variant == CiderVariant::cider_d ? std::min(x, it->second) * it->second
                                                        : x * it->second;
            }
            double sim = dot / (nc * nr);
            if (variant == CiderVariant::cider_d) {
                const double d = static_cast<double>(candidate.size()) -
                                 static_cast<double>(ref.size());
                sim *= std::exp(-(d * d) / (2.0 * kCiderSigma * kCiderSigma));
            }
            per_ref += sim;
        }
        total += per_ref / CorpusProfile::kMaxN;
    }
    const double score = 10.0 * total / static_cast<double>(references.size());
    return std::clamp(score, 0.0, 10.0);
}

std::map<std::string, DaSystemScore> da_aggregate(std::span<const DaRating> ratings) {
    struct Moments {
        double sum = 0.0, sq = 0.0;
        size_t n = 0;
    };
    std::map<std::string, Moments> workers;
    for (const auto& r : ratings) {
        auto& m = workers[r.worker];
        m.sum += r.raw;
        ++m.n;
    }
    std::map<std::string, std::pair<double, double>> stats;  // mean, std
    for (const auto& [w, m] : workers)
        stats[w].first = m.sum / static_cast<double>(m.n);
    for (const auto& r : ratings) {
        const double d = r.raw - stats[r.worker].first;
        workers[r.worker].sq += d * d;
    }
    for (auto& [w, s] : stats)
        s.second = std::sqrt(workers[w].sq / static_cast<double>(workers[w].n));

    struct CaptionAcc {
        double raw = 0.0, z = 0.0;
        size_t n = 0;
    };
    std::map<std::pair<std::string, VideoId>, CaptionAcc> captions;
    for (const auto& r : ratings) {
        const auto& [mean, sd] = stats[r.worker];
        auto& c = captions[{r.system, r.video}];
        c.raw += r.raw;
        c.z += sd > 0.0 ? (r.raw - mean) / sd : 0.0;
        ++c.n;
    }
    std::map<std::string, DaSystemScore> out;
    for (const auto& [key, c] : captions) {
        auto& s = out[key.first];
        s.raw_avg += c.raw / static_cast<double>(c.n);
        s.z_avg += c.z / static_cast<double>(c.n);
        ++s.captions;
    }
    for (auto& [system, s] : out) {
        s.raw_avg /= static_cast<double>(s.captions);
        s.z_avg /= static_cast<double>(s.captions);
    }
    return out;
}

double metric_correlation(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw Error(ErrorKind::LengthMismatch, "score vectors differ in length");
    if (x.size() < 2)
        throw Error(ErrorKind::EmptyInput, "correlation needs at least two points");
    const auto n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0)
        throw Error(ErrorKind::ZeroVariance, "correlation undefined for constant scores");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace vidmetrics::captions

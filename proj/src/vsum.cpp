#include "vidmetrics/vsum.hpp"

#include <algorithm>

#include "vidmetrics/model.hpp"

namespace vidmetrics::vsum {

namespace {

// 79 marks over 5 questions, in tenths of a mark
constexpr int kQuestionTenths = 158;

}  // namespace

int AssessmentRecord::correct() const noexcept {
    return static_cast<int>(std::count(answers.begin(), answers.end(), true));
}

void validate(const AssessmentRecord& rec) {
    auto check = [](int v, const char* name) {
        if (v < 1 || v > 7)
            throw Error(ErrorKind::LikertOutOfRange,
                        std::string(name) + " mark " + std::to_string(v) + " outside 1..7");
    };
    check(rec.tempo, "tempo");
    check(rec.contextuality, "contextuality");
    check(rec.redundancy, "redundancy");
    if (rec.run < 1)
        throw Error(ErrorKind::InvalidArgument, "run number must be positive");
}

int vsum_score(const AssessmentRecord& rec, Rounding rounding) {
    validate(rec);
    const int subjective = rec.tempo + rec.contextuality + (8 - rec.redundancy);
    if (rounding == Rounding::per_question) {
        const int per_q = (kQuestionTenths + 5) / 10;
        return std::min(100, subjective + per_q * rec.correct());
    }
    // exact in tenths; all terms non-negative so +5 then truncation rounds half up
    const int tenths = subjective * 10 + kQuestionTenths * rec.correct();
    return (tenths + 5) / 10;
}

std::map<std::string, double> vsum_aggregate(std::span<const AssessmentRecord> records, GroupBy key,
                                             Rounding rounding) {
    if (records.empty())
        throw Error(ErrorKind::EmptyGroup, "no assessment records to aggregate");
    std::map<std::string, std::pair<double, int>> acc;
    for (const auto& r : records) {
        std::string k;
        switch (key) {
        case GroupBy::query: k = r.query; break;
        case GroupBy::run: k = std::to_string(r.run); break;
        case GroupBy::team: k = r.team; break;
        }
        auto& [sum, n] = acc[k];
        sum += vsum_score(r, rounding);
        ++n;
    }
    std::map<std::string, double> out;
    for (const auto& [k, v] : acc)
        out.emplace(k, v.first / v.second);
    return out;
}

}  // namespace vidmetrics::vsum

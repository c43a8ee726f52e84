#pragma once

#include <array>
#include <map>
#include <span>
#include <string>

namespace vidmetrics::vsum {

struct AssessmentRecord {
    std::string team;
    int run = 1;
    std::string query;
    int tempo = 1;
    int contextuality = 1;
    int redundancy = 1;  // lower is better
    std::array<bool, 5> answers{};

    int correct() const noexcept;
};

enum class Rounding {
    final_sum,     // round(subjective + 15.8 * correct)
    per_question,  // subjective + round(15.8) * correct, capped at 100
};

void validate(const AssessmentRecord& rec);

/// Percentage score: tempo + contextuality + (8 - redundancy) plus 15.8 marks
/// per correct content question, rounded half away from zero.
int vsum_score(const AssessmentRecord& rec, Rounding rounding = Rounding::final_sum);

enum class GroupBy { query, run, team };

/// Mean score per group key.
std::map<std::string, double> vsum_aggregate(std::span<const AssessmentRecord> records, GroupBy key,
                                             Rounding rounding = Rounding::final_sum);

}  // namespace vidmetrics::vsum

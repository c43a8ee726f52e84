#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include "vidmetrics/formats.hpp"
#include "vidmetrics/vsum.hpp"

using namespace vidmetrics;
using namespace vidmetrics::vsum;

namespace {

AssessmentRecord rec(int tempo, int ctx, int red, int correct) {
    AssessmentRecord r;
    r.team = "T";
    r.query = "Q";
    r.tempo = tempo;
    r.contextuality = ctx;
    r.redundancy = red;
    for (int i = 0; i < correct; ++i)
        r.answers[i] = true;
    return r;
}

}  // namespace

TEST_CASE("score examples") {
    CHECK(vsum_score(rec(6, 4, 5, 1)) == 29);
    CHECK(vsum_score(rec(3, 4, 5, 2)) == 42);
    CHECK(vsum_score(rec(1, 1, 7, 0)) == 3);
    CHECK(vsum_score(rec(7, 7, 1, 5)) == 100);
    CHECK(vsum_score(rec(7, 7, 1, 0)) == 21);
}

TEST_CASE("likert marks outside 1..7 are rejected") {
    CHECK_THROWS_AS(vsum_score(rec(0, 4, 5, 1)), Error);
    CHECK_THROWS_AS(vsum_score(rec(4, 8, 5, 1)), Error);
    CHECK_THROWS_AS(vsum_score(rec(4, 4, 0, 1)), Error);
}

TEST_CASE("range and monotonicity over every valid record") {
    int count = 0;
    for (int t = 1; t <= 7; ++t)
        for (int c = 1; c <= 7; ++c)
            for (int r = 1; r <= 7; ++r)
                for (int mask = 0; mask < 32; ++mask) {
                    AssessmentRecord a = rec(t, c, r, 0);
                    for (int q = 0; q < 5; ++q)
                        a.answers[q] = (mask >> q) & 1;
                    for (auto mode : {Rounding::final_sum, Rounding::per_question}) {
                        const int s = vsum_score(a, mode);
                        REQUIRE(s >= 3);
                        REQUIRE(s <= 100);
                        if (t < 7) {
                            auto b = a;
                            ++b.tempo;
                            REQUIRE(vsum_score(b, mode) >= s);
                        }
                        if (c < 7) {
                            auto b = a;
                            ++b.contextuality;
                            REQUIRE(vsum_score(b, mode) >= s);
                        }
                        if (r < 7) {
                            auto b = a;
                            ++b.redundancy;
                            REQUIRE(vsum_score(b, mode) <= s);
                        }
                        for (int q = 0; q < 5; ++q)
                            if (!a.answers[q]) {
                                auto b = a;
                                b.answers[q] = true;
                                REQUIRE(vsum_score(b, mode) >= s);
                            }
                    }
                    ++count;
                }
    CHECK(count == 10976);
}

TEST_CASE("both rounding modes agree for up to two correct answers") {
    for (int q = 0; q <= 2; ++q)
        for (int t = 1; t <= 7; ++t)
            CHECK(vsum_score(rec(t, 4, 4, q), Rounding::final_sum) ==
                  vsum_score(rec(t, 4, 4, q), Rounding::per_question));
    CHECK(vsum_score(rec(4, 4, 4, 3), Rounding::final_sum) == 59);
    CHECK(vsum_score(rec(4, 4, 4, 3), Rounding::per_question) == 60);
}

TEST_CASE("published results table reproduces exactly") {
    const auto rows = io::parse_vsum(io::read_file(FIXTURE_DIR "/vsum_table.csv"));
    std::istringstream expected(io::read_file(FIXTURE_DIR "/vsum_expected.csv"));
    std::string line;
    std::getline(expected, line);
    REQUIRE(rows.size() == 24);
    for (const auto& r : rows) {
        REQUIRE(std::getline(expected, line));
        const auto score = std::stoi(line.substr(line.rfind(',') + 1));
        CHECK(vsum_score(r) == score);
        CHECK(vsum_score(r, Rounding::per_question) == score);
    }
}

TEST_CASE("aggregation by team, query and run") {
    std::vector<AssessmentRecord> janine;
    for (auto [t, c, r] : {std::tuple{5, 3, 7}, {4, 3, 7}, {4, 3, 7}, {2, 3, 7}}) {
        auto a = rec(t, c, r, 0);
        a.team = "NII_UIT";
        a.query = "Janine";
        a.run = static_cast<int>(janine.size()) + 1;
        janine.push_back(a);
    }
    CHECK(vsum_aggregate(janine, GroupBy::query).at("Janine") == doctest::Approx(7.75));
    CHECK(vsum_aggregate(janine, GroupBy::team).at("NII_UIT") == doctest::Approx(7.75));
    const auto by_run = vsum_aggregate(janine, GroupBy::run);
    CHECK(by_run.size() == 4);
    CHECK(by_run.at("1") == 9.0);

    std::vector<AssessmentRecord> same{rec(4, 4, 4, 1), rec(4, 4, 4, 1)};
    CHECK(vsum_aggregate(same, GroupBy::team).at("T") == vsum_score(same[0]));
    CHECK_THROWS_AS(vsum_aggregate(std::vector<AssessmentRecord>{}, GroupBy::team), Error);
}

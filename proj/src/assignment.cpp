#include "vidmetrics/assignment.hpp"

#include <limits>

namespace vidmetrics {

namespace {

// Minimum-cost assignment for n <= m; returns column per row.
std::vector<int> hungarian_min(int n, int m, const std::vector<double>& cost) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
    std::vector<int> p(m + 1, 0), way(m + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(m + 1, inf);
        std::vector<char> used(m + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= m; ++j) {
                if (used[j])
                    continue;
                const double cur = cost[static_cast<size_t>(i0 - 1) * m + (j - 1)] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= m; ++j)
        if (p[j] != 0)
            row_to_col[p[j] - 1] = j - 1;
    return row_to_col;
}

}  // namespace

std::vector<int> max_weight_assignment(const WeightMatrix& m) {
    if (m.rows == 0 || m.cols == 0)
        return std::vector<int>(m.rows, -1);

    if (m.rows <= m.cols) {
        std::vector<double> cost(m.w.size());
        for (size_t k = 0; k < cost.size(); ++k)
            cost[k] = -m.w[k];
        return hungarian_min(m.rows, m.cols, cost);
    }

    // transpose so the smaller side indexes rows
    std::vector<double> cost(m.w.size());
    for (int r = 0; r < m.rows; ++r)
        for (int c = 0; c < m.cols; ++c)
            cost[static_cast<size_t>(c) * m.rows + r] = -m.at(r, c);
    const auto col_to_row = hungarian_min(m.cols, m.rows, cost);
    std::vector<int> row_to_col(m.rows, -1);
    for (int c = 0; c < m.cols; ++c)
        if (col_to_row[c] >= 0)
            row_to_col[col_to_row[c]] = c;
    return row_to_col;
}

}  // namespace vidmetrics

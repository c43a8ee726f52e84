#pragma once

#include <vector>

namespace vidmetrics {

/// Dense weight matrix, rows x cols, row-major.
struct WeightMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> w;

    WeightMatrix(int r, int c) : rows(r), cols(c), w(static_cast<size_t>(r) * c, 0.0) {}
    double& at(int r, int c) { return w[static_cast<size_t>(r) * cols + c]; }
    double at(int r, int c) const { return w[static_cast<size_t>(r) * cols + c]; }
};

/// Maximum-weight assignment (Kuhn-Munkres, O(n^2 m)). Returns for every row
/// the assigned column, or -1. Every row is assigned when rows <= cols and
/// every column otherwise; callers drop zero-weight pairs themselves.
/// Deterministic for a given matrix; callers fix tie-breaking through row and column order.
std::vector<int> max_weight_assignment(const WeightMatrix& m);

}  // namespace vidmetrics

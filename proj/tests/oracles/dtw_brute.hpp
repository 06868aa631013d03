#pragma once

// DTW by enumerating every monotone alignment path. Among the cheapest paths
// the shortest wins; the result is cost / length.

#include <Eigen/Core>

#include <limits>

namespace oracle {

struct PathBest {
    double cost = std::numeric_limits<double>::infinity();
    long length = 0;
};

inline void walk(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, Eigen::Index i, Eigen::Index j, double cost,
                 long length, PathBest& best) {
    cost += (a.col(i) - b.col(j)).norm();
    ++length;
    if (i == a.cols() - 1 && j == b.cols() - 1) {
        if (cost < best.cost || (cost == best.cost && length < best.length)) best = {cost, length};
        return;
    }
    if (i + 1 < a.cols()) walk(a, b, i + 1, j, cost, length, best);
    if (j + 1 < b.cols()) walk(a, b, i, j + 1, cost, length, best);
    if (i + 1 < a.cols() && j + 1 < b.cols()) walk(a, b, i + 1, j + 1, cost, length, best);
}

inline double dtw_brute(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    PathBest best;
    walk(a, b, 0, 0, 0.0, 0, best);
    return best.cost / static_cast<double>(best.length);
}

}  // namespace oracle

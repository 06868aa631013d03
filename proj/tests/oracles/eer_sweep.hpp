#pragma once

// EER as the lowest max(FAR, FRR) reachable by mixing any two thresholds of
// an exhaustive sweep. Accept iff score <= threshold.

#include <algorithm>
#include <vector>

namespace oracle {

inline double eer_sweep(const std::vector<double>& genuine, const std::vector<double>& impostor) {
    std::vector<double> thresholds = genuine;
    thresholds.insert(thresholds.end(), impostor.begin(), impostor.end());
    std::sort(thresholds.begin(), thresholds.end());
    thresholds.insert(thresholds.begin(), thresholds.front() - 1.0);

    struct P {
        double far, frr;
    };
    std::vector<P> pts;
    for (double t : thresholds) {
        double fa = 0, fr = 0;
        for (double s : impostor) fa += s <= t;
        for (double s : genuine) fr += s > t;
        pts.push_back({100.0 * fa / impostor.size(), 100.0 * fr / genuine.size()});
    }
    double best = 100.0;
    for (const auto& a : pts) {
        best = std::min(best, std::max(a.far, a.frr));
        for (const auto& b : pts) {
            const double da = a.far - a.frr, db = b.far - b.frr;
            if (da <= 0 && db >= 0 && db - da > 0) {
                const double lam = db / (db - da);  // weight of a on the diagonal
                best = std::min(best, lam * a.far + (1 - lam) * b.far);
            }
        }
    }
    return best;
}

}  // namespace oracle

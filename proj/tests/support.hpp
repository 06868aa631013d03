#pragma once

#include <Eigen/Core>

#include <filesystem>
#include <random>
#include <string>

#include "oracles/lagrange.hpp"

namespace testing_support {

// Smooth joint motion around `base`: three low-frequency sinusoids per joint.
inline oracle::SineMotion random_motion(std::mt19937_64& rng, const Eigen::VectorXd& base, double amplitude = 0.3) {
    std::uniform_real_distribution<double> amp(-amplitude, amplitude), freq(0.2, 2.0), phase(0.0, 6.283185307179586);
    oracle::SineMotion m;
    m.base = base;
    const auto n = base.size();
    m.amp.resize(n, 3);
    m.omega.resize(n, 3);
    m.phase.resize(n, 3);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index k = 0; k < 3; ++k) {
            m.amp(i, k) = amp(rng) / 3.0;
            m.omega(i, k) = 2.0 * 3.141592653589793 * freq(rng);
            m.phase(i, k) = phase(rng);
        }
    return m;
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("robosig_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace testing_support

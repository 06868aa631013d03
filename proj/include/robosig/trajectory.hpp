#pragma once

#include <Eigen/Core>

#include "robosig/errors.hpp"

namespace robosig {

/// Generalized coordinates of an N-joint arm over time, one column per sample.
template <int N>
struct JointTrajectory {
    using Samples = Eigen::Matrix<double, N, Eigen::Dynamic>;

    Samples q;    // rad
    Samples dq;   // rad/s
    Samples ddq;  // rad/s^2
    double dt = 0.0;

    static constexpr int joints = N;

    Eigen::Index size() const { return q.cols(); }

    void validate() const {
        if (dq.cols() != q.cols() || ddq.cols() != q.cols())
            throw ContractError("joint trajectory: q, dq and ddq lengths differ");
        if (!q.allFinite() || !dq.allFinite() || !ddq.allFinite())
            throw ContractError("joint trajectory: non-finite sample");
    }
};

/// Joint torques (N·m), one column per sample.
template <int N>
struct TorqueTrajectory {
    Eigen::Matrix<double, N, Eigen::Dynamic> tau;
    double dt = 0.0;

    static constexpr int joints = N;

    Eigen::Index size() const { return tau.cols(); }
};

using JointTrajectory2D = JointTrajectory<2>;
using JointTrajectory3D = JointTrajectory<3>;
using TorqueTrajectory2D = TorqueTrajectory<2>;
using TorqueTrajectory3D = TorqueTrajectory<3>;

}  // namespace robosig

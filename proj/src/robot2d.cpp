#include "robosig/robot2d.hpp"

#include "robosig/differentiate.hpp"

namespace robosig {

TrajectorySI place_signature_2d(const TrajectorySI& traj, const Arm2D& params) {
    if (traj.size() == 0) throw EmptySignatureError("cannot place an empty trajectory");
    const Eigen::Vector2d anchor = anchor_2d(params);

    TrajectorySI out = traj;
    out.x = (traj.x.array() - traj.x[0] + anchor.x()).matrix();
    out.y = (traj.y.array() - traj.y[0] + anchor.y()).matrix();

    const double r_min = std::abs(params.l1 - params.l2), r_max = params.l1 + params.l2;
    for (Eigen::Index k = 0; k < out.size(); ++k) {
        const double r = std::hypot(out.x[k], out.y[k]);
        if (r > r_max * (1 + kWorkspaceTolerance) || r < r_min * (1 - kWorkspaceTolerance))
            throw WorkspaceError("placed signature leaves the 2D workspace", static_cast<std::size_t>(k));
    }
    return out;
}

JointTrajectory2D ik_trajectory_2d(const TrajectorySI& traj, const Arm2D& params) {
    const auto n = traj.size();
    JointTrajectory2D jt;
    jt.dt = traj.dt;
    jt.q.resize(2, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        try {
            jt.q.col(k) = ik2d<double>({traj.x[k], traj.y[k]}, params);
        } catch (const WorkspaceError&) {
            throw WorkspaceError("inverse kinematics failed", static_cast<std::size_t>(k));
        }
    }
    jt.dq = differentiate_rows(jt.q, jt.dt, 1);
    jt.ddq = differentiate_rows(jt.q, jt.dt, 2);
    return jt;
}

TorqueTrajectory2D inverse_dynamics_2d(const JointTrajectory2D& jt, const Arm2D& params) {
    jt.validate();
    TorqueTrajectory2D out;
    out.dt = jt.dt;
    out.tau.resize(2, jt.size());
    for (Eigen::Index k = 0; k < jt.size(); ++k) {
        out.tau.col(k) = torque_2d<double>(jt.q.col(k), jt.dq.col(k), jt.ddq.col(k), params);
    }
    return out;
}

}  // namespace robosig

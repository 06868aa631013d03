#include "robosig/robot3d.hpp"

#include "robosig/differentiate.hpp"

namespace robosig {

Eigen::Matrix3Xd place_signature_3d(const TrajectorySI& traj, const Arm3D& params) {
    const auto n = traj.size();
    if (n == 0) throw EmptySignatureError("cannot place an empty trajectory");
    const auto anchor = anchor_3d(params);

    Eigen::Matrix3Xd pts(3, n);
    pts.row(0) = (traj.x.array() - traj.x[0] + anchor.x).matrix().transpose();
    pts.row(1) = (traj.y.array() - traj.y[0]).matrix().transpose();
    pts.row(2).setConstant(anchor.z);

    const double inner = std::abs(params.l2 - params.l3), outer = params.l2 + params.l3;
    for (Eigen::Index k = 0; k < n; ++k) {
        const double rho = std::hypot(pts(0, k), pts(1, k));
        const double r = std::hypot(rho, pts(2, k) - params.l1);
        if (rho == 0.0 || r > outer * (1 + 1e-9) || r < inner * (1 - 1e-9))
            throw WorkspaceError("placed signature leaves the 3D workspace", static_cast<std::size_t>(k));
    }
    return pts;
}

JointTrajectory3D ik_trajectory_3d(const Eigen::Ref<const Eigen::Matrix3Xd>& points, double dt, const Arm3D& params) {
    const auto n = points.cols();
    JointTrajectory3D jt;
    jt.dt = dt;
    jt.q.resize(3, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        try {
            jt.q.col(k) = ik3d<double>(points.col(k), params);
        } catch (const WorkspaceError&) {
            throw WorkspaceError("inverse kinematics failed", static_cast<std::size_t>(k));
        }
    }
    jt.dq = differentiate_rows(jt.q, dt, 1);
    jt.ddq = differentiate_rows(jt.q, dt, 2);
    return jt;
}

TorqueTrajectory3D uicker_dynamics(const JointTrajectory3D& jt, const Arm3D& params) {
    jt.validate();
    const auto chain = params.chain();
    TorqueTrajectory3D out;
    out.dt = jt.dt;
    out.tau.resize(3, jt.size());
    for (Eigen::Index k = 0; k < jt.size(); ++k) {
        out.tau.col(k) = chain.torque(jt.q.col(k), jt.dq.col(k), jt.ddq.col(k));
    }
    return out;
}

}  // namespace robosig

#pragma once

#include <Eigen/Core>

#include <cmath>
#include <numbers>

#include "robosig/errors.hpp"
#include "robosig/ingest.hpp"
#include "robosig/trajectory.hpp"

namespace robosig {

/// horizontal: the writing plane is level and the potential energy is dropped.
/// vertical: U = g (m1 lc1 cos q1 + m2 (l1 cos q1 + lc2 cos(q1 + q2))).
enum class GravityMode { horizontal, vertical };

/// Two-link planar arm. Defaults are average humanoid upper arm / forearm values.
template <typename Scalar>
struct Arm2DParams {
    Scalar l1 = Scalar(0.2820);
    Scalar l2 = Scalar(0.2643);
    Scalar lc1 = Scalar(0.1447);
    Scalar lc2 = Scalar(0.1090);
    Scalar m1 = Scalar(1.8425);
    Scalar m2 = Scalar(1.1132);
    Scalar I1 = Scalar(0.0133);
    Scalar I2 = Scalar(0.0021);
    Scalar g = Scalar(9.81);
    GravityMode gravity = GravityMode::vertical;

    void validate() const {
        if (!(l1 > 0 && l2 > 0 && lc1 > 0 && lc2 > 0 && m1 > 0 && m2 > 0 && I1 > 0 && I2 > 0))
            throw ContractError("arm lengths, masses and inertias must be positive");
        if (lc1 > l1 || lc2 > l2) throw ContractError("centre of mass must lie on its link");
    }
};

using Arm2D = Arm2DParams<double>;

template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar>
using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;

/// |cos q2| up to 1 + tol is clamped onto the workspace boundary.
inline constexpr double kWorkspaceTolerance = 1e-9;

/// Pen-tip position for joint angles q (translation of the base-to-tip transform).
template <typename Scalar>
Vector2<Scalar> fk2d(const Vector2<Scalar>& q, const Arm2DParams<Scalar>& p) {
    using std::cos;
    using std::sin;
    const Scalar q12 = q[0] + q[1];
    return {p.l1 * cos(q[0]) + p.l2 * cos(q12), p.l1 * sin(q[0]) + p.l2 * sin(q12)};
}

/// Joint angles reaching `point`, elbow-up branch (q2 in [0, pi]).
/// Throws WorkspaceError outside the annulus l1 - l2 <= r <= l1 + l2.
template <typename Scalar>
Vector2<Scalar> ik2d(const Vector2<Scalar>& point, const Arm2DParams<Scalar>& p) {
    using std::atan2;
    using std::sqrt;
    const Scalar x = point[0], y = point[1];
    Scalar c2 = (x * x + y * y - p.l1 * p.l1 - p.l2 * p.l2) / (Scalar(2) * p.l1 * p.l2);
    if (!(c2 <= Scalar(1 + kWorkspaceTolerance) && c2 >= Scalar(-1 - kWorkspaceTolerance)))
        throw WorkspaceError("point outside the reachable annulus");
    if (x == Scalar(0) && y == Scalar(0) && p.l1 != p.l2) throw WorkspaceError("origin is not reachable");
    if (c2 > Scalar(1)) c2 = Scalar(1);
    if (c2 < Scalar(-1)) c2 = Scalar(-1);
    const Scalar s2 = sqrt(Scalar(1) - c2 * c2);
    const Scalar q2 = atan2(s2, c2);
    const Scalar q1 = atan2(y, x) - atan2(p.l2 * s2, p.l1 + p.l2 * c2);
    return {q1, q2};
}

/// Inertia matrix D(q).
template <typename Scalar>
Matrix2<Scalar> inertia_matrix_2d(const Vector2<Scalar>& q, const Arm2DParams<Scalar>& p) {
    using std::cos;
    const Scalar c2 = cos(q[1]);
    const Scalar d22 = p.m2 * p.lc2 * p.lc2 + p.I2;
    const Scalar d12 = d22 + p.m2 * p.l1 * p.lc2 * c2;
    const Scalar d11 = p.m1 * p.lc1 * p.lc1 + p.I1 + p.m2 * p.l1 * p.l1 + Scalar(2) * p.m2 * p.l1 * p.lc2 * c2 + d22;
    Matrix2<Scalar> d;
    d << d11, d12, d12, d22;
    return d;
}

/// Coriolis and centripetal vector H(q, dq).
template <typename Scalar>
Vector2<Scalar> coriolis_2d(const Vector2<Scalar>& q, const Vector2<Scalar>& dq, const Arm2DParams<Scalar>& p) {
    using std::sin;
    const Scalar h = p.m2 * p.l1 * p.lc2 * sin(q[1]);
    return {-h * (Scalar(2) * dq[0] * dq[1] + dq[1] * dq[1]), h * dq[0] * dq[0]};
}

/// Gravity vector C(q) = dU/dq; identically zero for a horizontal writing plane.
template <typename Scalar>
Vector2<Scalar> gravity_2d(const Vector2<Scalar>& q, const Arm2DParams<Scalar>& p) {
    using std::sin;
    if (p.gravity == GravityMode::horizontal) return Vector2<Scalar>::Zero();
    const Scalar s12 = sin(q[0] + q[1]);
    const Scalar c2 = -p.m2 * p.lc2 * p.g * s12;
    return {-(p.m1 * p.lc1 + p.m2 * p.l1) * p.g * sin(q[0]) + c2, c2};
}

/// tau = D(q) ddq + H(q, dq) + C(q), positive counterclockwise.
template <typename Scalar>
Vector2<Scalar> torque_2d(const Vector2<Scalar>& q, const Vector2<Scalar>& dq, const Vector2<Scalar>& ddq,
                          const Arm2DParams<Scalar>& p) {
    return inertia_matrix_2d(q, p) * ddq + coriolis_2d(q, dq, p) + gravity_2d(q, p);
}

template <typename Scalar>
Scalar kinetic_energy_2d(const Vector2<Scalar>& q, const Vector2<Scalar>& dq, const Arm2DParams<Scalar>& p) {
    return Scalar(0.5) * dq.dot(inertia_matrix_2d(q, p) * dq);
}

template <typename Scalar>
Scalar potential_energy_2d(const Vector2<Scalar>& q, const Arm2DParams<Scalar>& p) {
    using std::cos;
    if (p.gravity == GravityMode::horizontal) return Scalar(0);
    return p.g * ((p.m1 * p.lc1 + p.m2 * p.l1) * cos(q[0]) + p.m2 * p.lc2 * cos(q[0] + q[1]));
}

/// Where every signature starts: the tip position at q = (pi/4, pi/2).
template <typename Scalar>
Vector2<Scalar> anchor_2d(const Arm2DParams<Scalar>& p) {
    return fk2d<Scalar>({Scalar(std::numbers::pi / 4), Scalar(std::numbers::pi / 2)}, p);
}

/// Translates the trajectory so its first sample sits on anchor_2d.
/// Throws WorkspaceError naming the first unreachable sample.
TrajectorySI place_signature_2d(const TrajectorySI& traj, const Arm2D& params = {});

/// Per-sample ik2d plus time derivatives of the joint angles.
JointTrajectory2D ik_trajectory_2d(const TrajectorySI& traj, const Arm2D& params = {});

TorqueTrajectory2D inverse_dynamics_2d(const JointTrajectory2D& jt, const Arm2D& params = {});

}  // namespace robosig

#pragma once

#include <Eigen/Core>

#include <cmath>
#include <vector>

#include "robosig/errors.hpp"
#include "robosig/ingest.hpp"
#include "robosig/trajectory.hpp"

namespace robosig {

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Vector4 = Eigen::Matrix<Scalar, 4, 1>;
template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar>
using Matrix4 = Eigen::Matrix<Scalar, 4, 4>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Standard Denavit-Hartenberg row of a revolute joint. The joint angle is
/// added to `theta_offset`.
template <typename Scalar>
struct DHRow {
    Scalar theta_offset = Scalar(0);
    Scalar d = Scalar(0);
    Scalar a = Scalar(0);
    Scalar alpha = Scalar(0);
};

/// Rot_z(theta) * Trans_z(d) * Trans_x(a) * Rot_x(alpha).
template <typename Scalar>
Matrix4<Scalar> dh_transform(const DHRow<Scalar>& row, Scalar q) {
    using std::cos;
    using std::sin;
    const Scalar th = row.theta_offset + q;
    const Scalar ct = cos(th), st = sin(th), ca = cos(row.alpha), sa = sin(row.alpha);
    Matrix4<Scalar> t;
    t << ct, -st * ca, st * sa, row.a * ct,
         st, ct * ca, -ct * sa, row.a * st,
         Scalar(0), sa, ca, row.d,
         Scalar(0), Scalar(0), Scalar(0), Scalar(1);
    return t;
}

/// Mass properties of one link, expressed in the link's own DH frame.
template <typename Scalar>
struct LinkInertia {
    Scalar mass = Scalar(0);
    Vector3<Scalar> com = Vector3<Scalar>::Zero();
    Matrix3<Scalar> inertia_com = Matrix3<Scalar>::Zero();  // about the COM

    /// Homogeneous COM position.
    Vector4<Scalar> com_h() const { return {com.x(), com.y(), com.z(), Scalar(1)}; }

    /// Thin cylinder of length `length` along the unit `axis` centred on `com`.
    static LinkInertia thin_rod(Scalar mass, Scalar length, const Vector3<Scalar>& axis, const Vector3<Scalar>& com) {
        LinkInertia link;
        link.mass = mass;
        link.com = com;
        link.inertia_com = mass * length * length / Scalar(12) *
                           (Matrix3<Scalar>::Identity() - axis * axis.transpose());
        return link;
    }
};

/// 4x4 pseudoinertia [sum r r^T dm, m c; m c^T, m] about the link frame
/// origin. The second-moment block is (tr(Ic)/2) I - Ic + m c c^T.
template <typename Scalar>
Matrix4<Scalar> pseudoinertia(const LinkInertia<Scalar>& link) {
    Matrix4<Scalar> j = Matrix4<Scalar>::Zero();
    j.template topLeftCorner<3, 3>() = link.inertia_com.trace() / Scalar(2) * Matrix3<Scalar>::Identity() -
                                       link.inertia_com + link.mass * link.com * link.com.transpose();
    j.template topRightCorner<3, 1>() = link.mass * link.com;
    j.template bottomLeftCorner<1, 3>() = link.mass * link.com.transpose();
    j(3, 3) = link.mass;
    return j;
}

/// Serial chain of revolute joints with Lagrangian dynamics in the
/// homogeneous-transform form: U_ij = d(0T_i)/dq_j, U_ijk = d(U_ij)/dq_k,
/// D_ij = sum_k tr(U_kj J_k U_ki^T), h_ikm = sum_j tr(U_jkm J_j U_ji^T),
/// C_i = -sum_j m_j a U_ji r_j. Partials are exact: for revolute joints
/// d(0T_i)/dq_j = 0T_{j-1} Q (j-1)T_i with Q the z-rotation generator.
template <typename Scalar>
class SerialChain {
public:
    using Vector = VectorX<Scalar>;
    using Matrix = MatrixX<Scalar>;

    SerialChain(std::vector<DHRow<Scalar>> rows, std::vector<LinkInertia<Scalar>> links,
                Vector4<Scalar> gravity = {Scalar(0), Scalar(0), Scalar(-9.81), Scalar(0)})
        : rows_(std::move(rows)), links_(std::move(links)), gravity_(gravity) {
        if (rows_.size() != links_.size()) throw ContractError("one link inertia per DH row expected");
        pseudo_.reserve(links_.size());
        for (const auto& l : links_) pseudo_.push_back(pseudoinertia(l));
        q_gen_.setZero();
        q_gen_(0, 1) = Scalar(-1);
        q_gen_(1, 0) = Scalar(1);
    }

    int dof() const { return static_cast<int>(rows_.size()); }
    const std::vector<DHRow<Scalar>>& rows() const { return rows_; }
    const std::vector<LinkInertia<Scalar>>& links() const { return links_; }
    const Matrix4<Scalar>& pseudo(int link) const { return pseudo_[static_cast<std::size_t>(link)]; }
    const Vector4<Scalar>& gravity() const { return gravity_; }

    /// Per-configuration transforms and their partial derivatives.
    /// Joint and link indices are 0-based: link i is moved by joints 0..i.
    class State {
    public:
        State(const SerialChain& chain, const Vector& q) : chain_(&chain), n_(chain.dof()) {
            if (q.size() != n_) throw ContractError("joint vector size does not match the chain");
            local_.reserve(static_cast<std::size_t>(n_));
            for (int i = 0; i < n_; ++i) local_.push_back(dh_transform(chain.rows_[static_cast<std::size_t>(i)], q[i]));
            // span_[a][b] = aT_b for 0 <= a <= b <= n (frame 0 is the base).
            span_.assign(static_cast<std::size_t>(n_ + 1), std::vector<Matrix4<Scalar>>(static_cast<std::size_t>(n_ + 1)));
            for (int a = 0; a <= n_; ++a) {
                at(a, a).setIdentity();
                for (int b = a + 1; b <= n_; ++b) at(a, b) = at(a, b - 1) * local_[static_cast<std::size_t>(b - 1)];
            }
        }

        /// 0T_{i+1}: pose of link i in the base frame.
        const Matrix4<Scalar>& pose(int link) const { return span(0, link + 1); }
        const Matrix4<Scalar>& span(int a, int b) const {
            return span_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
        }

        /// d(pose(link)) / dq_j.
        Matrix4<Scalar> u(int link, int j) const {
            if (j > link) return Matrix4<Scalar>::Zero();
            return span(0, j) * chain_->q_gen_ * span(j, link + 1);
        }

        /// d^2(pose(link)) / dq_j dq_k.
        Matrix4<Scalar> u(int link, int j, int k) const {
            if (j > link || k > link) return Matrix4<Scalar>::Zero();
            const auto& qg = chain_->q_gen_;
            const int lo = std::min(j, k), hi = std::max(j, k);
            return span(0, lo) * qg * span(lo, hi) * qg * span(hi, link + 1);
        }

    private:
        Matrix4<Scalar>& at(int a, int b) { return span_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]; }

        const SerialChain* chain_;
        int n_;
        std::vector<Matrix4<Scalar>> local_;
        std::vector<std::vector<Matrix4<Scalar>>> span_;
    };

    State state(const Vector& q) const { return State(*this, q); }

    Vector3<Scalar> tip_position(const Vector& q) const {
        return state(q).pose(dof() - 1).template topRightCorner<3, 1>();
    }

    Matrix inertia_matrix(const State& s) const {
        const int n = dof();
        Matrix d = Matrix::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = i; j < n; ++j) {
                Scalar acc(0);
                for (int k = j; k < n; ++k) acc += trace_product(s.u(k, j), pseudo(k), s.u(k, i));
                d(i, j) = acc;
                d(j, i) = acc;
            }
        }
        return d;
    }

    Vector coriolis(const State& s, const Vector& dq) const {
        const int n = dof();
        Vector h = Vector::Zero(n);
        for (int i = 0; i < n; ++i) {
            for (int k = 0; k < n; ++k) {
                for (int m = 0; m < n; ++m) {
                    Scalar hikm(0);
                    for (int j = std::max({i, k, m}); j < n; ++j)
                        hikm += trace_product(s.u(j, k, m), pseudo(j), s.u(j, i));
                    h[i] += hikm * dq[k] * dq[m];
                }
            }
        }
        return h;
    }

    Vector gravity_vector(const State& s) const {
        const int n = dof();
        Vector c = Vector::Zero(n);
        for (int i = 0; i < n; ++i) {
            for (int j = i; j < n; ++j) {
                const auto& link = links_[static_cast<std::size_t>(j)];
                c[i] -= link.mass * gravity_.dot(s.u(j, i) * link.com_h());
            }
        }
        return c;
    }

    Vector torque(const Vector& q, const Vector& dq, const Vector& ddq) const {
        const auto s = state(q);
        return inertia_matrix(s) * ddq + coriolis(s, dq) + gravity_vector(s);
    }

    Scalar kinetic_energy(const Vector& q, const Vector& dq) const {
        return Scalar(0.5) * dq.dot(inertia_matrix(state(q)) * dq);
    }

    Scalar potential_energy(const Vector& q) const {
        const auto s = state(q);
        Scalar u(0);
        for (int j = 0; j < dof(); ++j) {
            const auto& link = links_[static_cast<std::size_t>(j)];
            u -= link.mass * gravity_.dot(s.pose(j) * link.com_h());
        }
        return u;
    }

private:
    // tr(A J B^T)
    static Scalar trace_product(const Matrix4<Scalar>& a, const Matrix4<Scalar>& j, const Matrix4<Scalar>& b) {
        return (a * j).cwiseProduct(b).sum();
    }

    std::vector<DHRow<Scalar>> rows_;
    std::vector<LinkInertia<Scalar>> links_;
    Vector4<Scalar> gravity_;
    std::vector<Matrix4<Scalar>> pseudo_;
    Matrix4<Scalar> q_gen_;
};

/// Three-link spatial arm: a vertical shoulder-rotation link of length l1
/// followed by upper arm l2 and forearm l3 moving in a vertical plane.
/// Links are thin rods (transverse inertia m l^2 / 12, none about the axis)
/// with their COM at the geometric midpoint.
template <typename Scalar>
struct Arm3DParams {
    Scalar l1 = Scalar(0.6644);
    Scalar l2 = Scalar(0.2820);
    Scalar l3 = Scalar(0.2643);
    Scalar m1 = Scalar(33.9458);
    Scalar m2 = Scalar(1.8425);
    Scalar m3 = Scalar(1.1132);
    Scalar g = Scalar(9.81);

    void validate() const {
        if (!(l1 > 0 && l2 > 0 && l3 > 0)) throw ContractError("link lengths must be positive");
        if (!(m1 >= 0 && m2 >= 0 && m3 >= 0)) throw ContractError("link masses must be non-negative");
    }

    /// (q1, l1, 0, pi/2), (q2, 0, l2, 0), (q3, 0, l3, 0).
    std::vector<DHRow<Scalar>> dh_table() const {
        const Scalar half_pi = Scalar(std::acos(-1.0) / 2);
        return {{Scalar(0), l1, Scalar(0), half_pi}, {Scalar(0), Scalar(0), l2, Scalar(0)},
                {Scalar(0), Scalar(0), l3, Scalar(0)}};
    }

    /// Link 1 runs along the base z axis, which is the y axis of its own DH
    /// frame, so its midpoint sits at (0, -l1/2, 0). Links 2 and 3 run along
    /// the x axis of their frames, midpoint at (-a/2, 0, 0).
    std::vector<LinkInertia<Scalar>> link_inertias() const {
        using L = LinkInertia<Scalar>;
        const Vector3<Scalar> ex = Vector3<Scalar>::UnitX(), ey = Vector3<Scalar>::UnitY();
        return {L::thin_rod(m1, l1, ey, Vector3<Scalar>(Scalar(0), -l1 / Scalar(2), Scalar(0))),
                L::thin_rod(m2, l2, ex, Vector3<Scalar>(-l2 / Scalar(2), Scalar(0), Scalar(0))),
                L::thin_rod(m3, l3, ex, Vector3<Scalar>(-l3 / Scalar(2), Scalar(0), Scalar(0)))};
    }

    SerialChain<Scalar> chain() const {
        return SerialChain<Scalar>(dh_table(), link_inertias(), {Scalar(0), Scalar(0), -g, Scalar(0)});
    }
};

using Arm3D = Arm3DParams<double>;

template <typename Scalar>
Vector3<Scalar> fk3d(const Vector3<Scalar>& q, const Arm3DParams<Scalar>& p) {
    using std::cos;
    using std::sin;
    const Scalar reach = p.l2 * cos(q[1]) + p.l3 * cos(q[1] + q[2]);
    return {cos(q[0]) * reach, sin(q[0]) * reach, p.l1 + p.l2 * sin(q[1]) + p.l3 * sin(q[1] + q[2])};
}

/// Elbow-up inverse kinematics (q3 in [0, pi]). Throws WorkspaceError outside
/// the reachable shell and on the shoulder axis x = y = 0.
template <typename Scalar>
Vector3<Scalar> ik3d(const Vector3<Scalar>& point, const Arm3DParams<Scalar>& p) {
    using std::acos;
    using std::atan2;
    using std::cos;
    using std::sin;
    using std::sqrt;
    const Scalar x = point[0], y = point[1], dz = point[2] - p.l1;
    const Scalar r2 = x * x + y * y;
    if (r2 == Scalar(0)) throw WorkspaceError("point on the shoulder axis, q1 undefined");
    Scalar c3 = (r2 + dz * dz - p.l2 * p.l2 - p.l3 * p.l3) / (Scalar(2) * p.l2 * p.l3);
    if (!(c3 <= Scalar(1 + 1e-9) && c3 >= Scalar(-1 - 1e-9)))
        throw WorkspaceError("point outside the reachable shell");
    if (c3 > Scalar(1)) c3 = Scalar(1);
    if (c3 < Scalar(-1)) c3 = Scalar(-1);
    const Scalar q3 = acos(c3);
    const Scalar q2 = atan2(dz, sqrt(r2)) - atan2(p.l3 * sin(q3), p.l2 + p.l3 * cos(q3));
    return {atan2(y, x), q2, q3};
}

/// Starting point of every signature in the base frame.
template <typename Scalar>
struct Anchor3D {
    Scalar z;         // 0.3 l1, constant writing height
    Scalar reach_min; // horizontal reach with link 2 vertical
    Scalar reach_max; // full extension at height z
    Scalar x;         // reach_min + 0.35 (reach_max - reach_min)
};

template <typename Scalar>
Anchor3D<Scalar> anchor_3d(const Arm3DParams<Scalar>& p) {
    using std::acos;
    using std::sin;
    using std::sqrt;
    Anchor3D<Scalar> a;
    a.z = Scalar(0.3) * p.l1;
    a.reach_min = p.l3 * sin(acos((p.l1 - a.z - p.l2) / p.l3));
    const Scalar drop = p.l1 - a.z;
    const Scalar radicand = (p.l2 + p.l3) * (p.l2 + p.l3) - drop * drop;
    if (!(radicand > Scalar(0))) throw WorkspaceError("writing height not reachable by the arm");
    a.reach_max = sqrt(radicand);
    a.x = a.reach_min + Scalar(0.35) * (a.reach_max - a.reach_min);
    return a;
}

/// Signature (x, y) shifted so its first sample lands on (anchor.x, 0) at
/// constant height anchor.z. One column per sample. Throws WorkspaceError
/// with the first unreachable index.
Eigen::Matrix3Xd place_signature_3d(const TrajectorySI& traj, const Arm3D& params = {});

/// Per-sample ik3d plus time derivatives.
JointTrajectory3D ik_trajectory_3d(const Eigen::Ref<const Eigen::Matrix3Xd>& points, double dt,
                                   const Arm3D& params = {});

/// Inverse dynamics of the 3D arm through SerialChain.
TorqueTrajectory3D uicker_dynamics(const JointTrajectory3D& jt, const Arm3D& params = {});

}  // namespace robosig

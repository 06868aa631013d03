#include <doctest.h>

#include <Eigen/LU>

#include <numbers>
#include <random>

#include "oracles/lagrange.hpp"
#include "robosig/errors.hpp"
#include "robosig/robot2d.hpp"
#include "support.hpp"

using namespace robosig;
using Eigen::Vector2d;

namespace {

constexpr double kPi = std::numbers::pi;

TrajectorySI straight_line(int n, double dx, double dy, double dt = 0.01) {
    TrajectorySI tr;
    tr.dt = dt;
    tr.t = Eigen::VectorXd::LinSpaced(n, 0, (n - 1) * dt);
    tr.x = Eigen::VectorXd::LinSpaced(n, 0, dx);
    tr.y = Eigen::VectorXd::LinSpaced(n, 0, dy);
    return tr;
}

}  // namespace

TEST_CASE("forward kinematics") {
    const Arm2D arm;
    CHECK(fk2d<double>({0, 0}, arm).isApprox(Vector2d(0.5463, 0)));
    const Vector2d anchor = fk2d<double>({kPi / 4, kPi / 2}, arm);
    // Hand values: (l1 - l2) / sqrt 2 and (l1 + l2) / sqrt 2.
    CHECK(anchor.x() == doctest::Approx((arm.l1 - arm.l2) * std::numbers::sqrt2 / 2).epsilon(1e-14));
    CHECK(anchor.y() == doctest::Approx((arm.l1 + arm.l2) * std::numbers::sqrt2 / 2).epsilon(1e-14));
    CHECK(std::abs(anchor.x() - 0.012516) < 5e-6);
    CHECK(std::abs(anchor.y() - 0.386294) < 5e-6);
    const Vector2d back = fk2d<double>({kPi, 0}, arm);
    CHECK(back.x() == doctest::Approx(-0.5463));
    CHECK(std::abs(back.y()) < 1e-15);
}

TEST_CASE("inverse kinematics") {
    const Arm2D arm;
    CHECK(ik2d<double>({0.5463, 0}, arm).norm() < 1e-7);
    const Vector2d q = ik2d<double>(anchor_2d(arm), arm);
    CHECK(q[0] == doctest::Approx(kPi / 4).epsilon(1e-12));
    CHECK(q[1] == doctest::Approx(kPi / 2).epsilon(1e-12));
    CHECK_THROWS_AS(ik2d<double>({1.0, 0.0}, arm), WorkspaceError);
    CHECK_THROWS_AS(ik2d<double>({0.0, 0.0}, arm), WorkspaceError);

    SUBCASE("elbow up and round trip on the annulus") {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(0, 1);
        const double rmin = arm.l1 - arm.l2, rmax = arm.l1 + arm.l2;
        for (int i = 0; i < 2000; ++i) {
            const double r = std::sqrt(rmin * rmin + u(rng) * (rmax * rmax - rmin * rmin));
            const double th = 2 * kPi * u(rng);
            const Vector2d p(r * std::cos(th), r * std::sin(th));
            const Vector2d qq = ik2d<double>(p, arm);
            CHECK(qq[1] >= 0.0);
            CHECK(qq[1] <= kPi);
            CHECK((fk2d<double>(qq, arm) - p).norm() < 1e-9);
        }
    }
    SUBCASE("boundary noise is clamped") {
        CHECK_NOTHROW(ik2d<double>({0.5463 * (1 + 1e-12), 0}, arm));
        CHECK_THROWS_AS(ik2d<double>({0.5463 * (1 + 1e-6), 0}, arm), WorkspaceError);
    }
}

TEST_CASE("signature placement") {
    const Arm2D arm;
    const Vector2d anchor = anchor_2d(arm);

    SUBCASE("single point moves to the anchor") {
        TrajectorySI tr;
        tr.x = Eigen::VectorXd::Constant(1, 3.0);
        tr.y = Eigen::VectorXd::Constant(1, -2.0);
        tr.t = Eigen::VectorXd::Zero(1);
        const auto out = place_signature_2d(tr, arm);
        CHECK(out.x[0] == anchor.x());
        CHECK(out.y[0] == anchor.y());
    }
    SUBCASE("already anchored is the identity") {
        auto tr = straight_line(5, 0.01, 0.01);
        tr.x.array() += anchor.x();
        tr.y.array() += anchor.y();
        const auto out = place_signature_2d(tr, arm);
        CHECK((out.x - tr.x).cwiseAbs().maxCoeff() < 1e-15);
        CHECK((out.y - tr.y).cwiseAbs().maxCoeff() < 1e-15);
    }
    SUBCASE("2 cm box stays in the workspace, shape preserved") {
        auto tr = straight_line(50, 0.02, 0.02);
        for (Eigen::Index k = 0; k < tr.size(); ++k) tr.y[k] = 0.02 * std::sin(0.2 * k) * std::sin(0.2 * k);
        const auto out = place_signature_2d(tr, arm);
        for (Eigen::Index k = 0; k < out.size(); ++k) {
            const double r = std::hypot(out.x[k], out.y[k]);
            CHECK(r <= arm.l1 + arm.l2);
            CHECK(r >= arm.l1 - arm.l2);
            CHECK(out.x[k] - out.x[0] == doctest::Approx(tr.x[k] - tr.x[0]).epsilon(1e-12));
        }
    }
    SUBCASE("unreachable sample is reported by index") {
        auto tr = straight_line(10, 0.0, 0.0);
        tr.x[6] = 0.5;
        try {
            place_signature_2d(tr, arm);
            FAIL("no exception");
        } catch (const WorkspaceError& e) {
            CHECK(e.index() == 6);
        }
    }
}

TEST_CASE("joint trajectory") {
    const Arm2D arm;
    SUBCASE("stationary input") {
        auto tr = straight_line(10, 0, 0);
        tr.x.array() += anchor_2d(arm).x();
        tr.y.array() += anchor_2d(arm).y();
        const auto jt = ik_trajectory_2d(tr, arm);
        CHECK(jt.size() == 10);
        CHECK(jt.q.row(0).isConstant(jt.q(0, 0)));
        CHECK(jt.dq.cwiseAbs().maxCoeff() == 0.0);
        CHECK(jt.ddq.cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("circular arc at constant speed") {
        // Arc of radius 1 cm around a point in the workspace, 0.5 rad/s.
        const double rho = 0.01, w = 0.5, dt = 0.01;
        const Vector2d c = anchor_2d(arm) - Vector2d(rho, 0);
        const int n = 200;
        TrajectorySI tr;
        tr.dt = dt;
        tr.t = Eigen::VectorXd::LinSpaced(n, 0, (n - 1) * dt);
        tr.x = (c.x() + rho * (w * tr.t.array()).cos()).matrix();
        tr.y = (c.y() + rho * (w * tr.t.array()).sin()).matrix();
        const auto jt = ik_trajectory_2d(tr, arm);
        // Analytic dq from the Jacobian of the arm: J dq = p'.
        double worst = 0.0;
        for (int k = 0; k < n; ++k) {
            const double t = tr.t[k];
            const Vector2d q = jt.q.col(k);
            Eigen::Matrix2d jac;
            jac << -arm.l1 * std::sin(q[0]) - arm.l2 * std::sin(q[0] + q[1]), -arm.l2 * std::sin(q[0] + q[1]),
                arm.l1 * std::cos(q[0]) + arm.l2 * std::cos(q[0] + q[1]), arm.l2 * std::cos(q[0] + q[1]);
            const Vector2d v(-rho * w * std::sin(w * t), rho * w * std::cos(w * t));
            const Vector2d dq = jac.partialPivLu().solve(v);
            worst = std::max(worst, (jt.dq.col(k) - dq).cwiseAbs().maxCoeff());
        }
        CHECK(worst < 1e-3);
        CHECK(jt.ddq.allFinite());
    }
    SUBCASE("unreachable point") {
        auto tr = straight_line(10, 0, 0);
        tr.x.array() += anchor_2d(arm).x();
        tr.y.array() += anchor_2d(arm).y();
        tr.x[3] = 2.0;
        try {
            ik_trajectory_2d(tr, arm);
            FAIL("no exception");
        } catch (const WorkspaceError& e) {
            CHECK(e.index() == 3);
        }
    }
}

TEST_CASE("static and simple torques") {
    Arm2D vertical, horizontal;
    horizontal.gravity = GravityMode::horizontal;
    const Vector2d zero = Vector2d::Zero();
    CHECK(torque_2d<double>(zero, zero, zero, horizontal).norm() == 0.0);
    CHECK(torque_2d<double>(zero, zero, zero, vertical).norm() == 0.0);

    const auto& p = vertical;
    const Vector2d up = torque_2d<double>({kPi / 2, 0}, zero, zero, vertical);
    CHECK(up[0] == doctest::Approx(-(p.m1 * p.lc1 + p.m2 * p.l1 + p.m2 * p.lc2) * p.g));
    CHECK(up[0] == doctest::Approx(-6.885).epsilon(1e-3));
    CHECK(up[1] == doctest::Approx(-1.190).epsilon(1e-3));
    // Same pose against the oracle's potential.
    const oracle::Planar planar;
    Eigen::VectorXd q(2);
    q << kPi / 2, 0;
    const Eigen::VectorXd grad = oracle::partial(planar.lagrangian(), q, Eigen::VectorXd::Zero(2), false);
    CHECK(up[0] == doctest::Approx(-grad[0]).epsilon(1e-8));
    CHECK(up[1] == doctest::Approx(-grad[1]).epsilon(1e-8));

    const Vector2d accel = torque_2d<double>(zero, zero, {1, 0}, horizontal);
    const double d11 = p.m1 * p.lc1 * p.lc1 + p.I1 + p.m2 * p.l1 * p.l1 + p.m2 * p.lc2 * p.lc2 +
                       2 * p.m2 * p.l1 * p.lc2 + p.I2;
    CHECK(accel[0] == doctest::Approx(d11));
    CHECK(accel[0] == doctest::Approx(0.2242).epsilon(1e-3));
    CHECK(accel[1] == doctest::Approx(inertia_matrix_2d<double>(zero, p)(1, 0)));
}

TEST_CASE("gravity splits off cleanly") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-3, 3);
    Arm2D vertical, horizontal;
    horizontal.gravity = GravityMode::horizontal;
    for (int i = 0; i < 200; ++i) {
        const Vector2d q(u(rng), u(rng));
        Vector2d first;
        for (int rep = 0; rep < 2; ++rep) {
            const Vector2d dq(u(rng), u(rng)), ddq(u(rng), u(rng));
            const Vector2d diff = torque_2d<double>(q, dq, ddq, vertical) - torque_2d<double>(q, dq, ddq, horizontal);
            CHECK((diff - gravity_2d<double>(q, vertical)).cwiseAbs().maxCoeff() < 1e-12);
            if (rep == 0) first = diff;
            else CHECK((diff - first).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("closed form matches the Euler-Lagrange oracle") {
    std::mt19937_64 rng(13);
    for (bool gravity : {false, true}) {
        Arm2D arm;
        arm.gravity = gravity ? GravityMode::vertical : GravityMode::horizontal;
        oracle::Planar planar;
        planar.gravity = gravity;
        for (int trial = 0; trial < 10; ++trial) {
            const auto m = testing_support::random_motion(rng, Eigen::Vector2d(kPi / 4, kPi / 2)).motion();
            for (int k = 0; k < 50; ++k) {
                const double t = 0.02 * k;
                const Vector2d tau = torque_2d<double>(m.q(t), m.dq(t), m.ddq(t), arm);
                const Eigen::VectorXd ref = oracle::euler_lagrange(planar.lagrangian(), m, t);
                CHECK((tau - ref).norm() <= 1e-4 * ref.norm());
            }
        }
    }
}

TEST_CASE("energies agree with the oracle") {
    const Arm2D arm;
    const oracle::Planar planar;
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int i = 0; i < 100; ++i) {
        const Vector2d q(u(rng), u(rng)), dq(u(rng), u(rng));
        CHECK(kinetic_energy_2d<double>(q, dq, arm) == doctest::Approx(planar.kinetic(q, dq)).epsilon(1e-12));
        CHECK(potential_energy_2d<double>(q, arm) == doctest::Approx(planar.potential(q)).epsilon(1e-12));
    }
}

TEST_CASE("trajectory dynamics validate their input") {
    JointTrajectory2D jt;
    jt.q = Eigen::Matrix2Xd::Zero(2, 5);
    jt.dq = Eigen::Matrix2Xd::Zero(2, 5);
    jt.ddq = Eigen::Matrix2Xd::Zero(2, 4);
    jt.dt = 0.01;
    CHECK_THROWS_AS(inverse_dynamics_2d(jt), ContractError);
    jt.ddq = Eigen::Matrix2Xd::Zero(2, 5);
    const auto tt = inverse_dynamics_2d(jt);
    CHECK(tt.size() == 5);
    CHECK(tt.dt == 0.01);
}

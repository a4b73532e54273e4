#include <doctest.h>

#include <random>

#include "vw/pointvortex.hpp"

using namespace vw;

namespace {

VortexEnsemble co_rotating_pair(double d, double a) {
    return VortexEnsemble({{d / 2, 0.0}, {-d / 2, 0.0}}, {a, a});
}

// analytic angular velocity of the equal pair: omega = 2 c_s a / d^{4-2s}
double pair_omega(double d, double a, double s) {
    return 2.0 * c_s_constant(s) * a / std::pow(d, 4.0 - 2.0 * s);
}

} // namespace

TEST_CASE("vortex right-hand side") {
    SUBCASE("a single vortex does not move") {
        VortexEnsemble one({{0.4, -0.2}}, {1.5});
        auto v = vortex_rhs(one, 0.7);
        CHECK(v[0].x == 0.0);
        CHECK(v[0].y == 0.0);
    }

    SUBCASE("equal pair: hand-evaluated single term") {
        double d = 0.8, a = 1.3, s = 0.65;
        VortexEnsemble ens = co_rotating_pair(d, a);
        auto v = vortex_rhs(ens, s);
        double speed = c_s_constant(s) * a / std::pow(d, 3.0 - 2.0 * s);
        // z1 - z2 = (d, 0), perp = (0, d): vortex 1 moves in +y
        CHECK(v[0].x == doctest::Approx(0.0));
        CHECK(v[0].y == doctest::Approx(speed).epsilon(1e-13));
        CHECK(v[1].y == doctest::Approx(-speed).epsilon(1e-13));
        // consistent with rigid co-rotation omega = 2 c_s a / d^{4-2s}
        CHECK(speed / (d / 2) == doctest::Approx(pair_omega(d, a, s)).epsilon(1e-13));
    }

    SUBCASE("opposite-sign pair translates") {
        double d = 0.5, a = 2.0, s = 0.75;
        VortexEnsemble ens({{d / 2, 0.0}, {-d / 2, 0.0}}, {a, -a});
        auto v = vortex_rhs(ens, s);
        double speed = c_s_constant(s) * a / std::pow(d, 3.0 - 2.0 * s);
        CHECK(v[0].y == doctest::Approx(-speed).epsilon(1e-13));
        CHECK(v[1].y == doctest::Approx(-speed).epsilon(1e-13));
        CHECK(v[0].x == doctest::Approx(v[1].x).epsilon(1e-13));
    }

    SUBCASE("relabeling permutes the output identically") {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        std::vector<Vec2> z;
        std::vector<double> a;
        for (int i = 0; i < 5; ++i) {
            z.push_back({u(rng), u(rng)});
            a.push_back(1.0 + 0.3 * i);
        }
        VortexEnsemble ens(z, a);
        auto v = vortex_rhs(ens, 0.6);
        std::vector<size_t> perm{3, 1, 4, 0, 2};
        std::vector<Vec2> zp;
        std::vector<double> ap;
        for (size_t i : perm) {
            zp.push_back(z[i]);
            ap.push_back(a[i]);
        }
        auto vp = vortex_rhs(VortexEnsemble(zp, ap), 0.6);
        for (size_t i = 0; i < perm.size(); ++i) {
            CHECK(vp[i].x == doctest::Approx(v[perm[i]].x).epsilon(1e-14));
            CHECK(vp[i].y == doctest::Approx(v[perm[i]].y).epsilon(1e-14));
        }
    }

    SUBCASE("weighted momentum sum vanishes") {
        std::mt19937_64 rng(9);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<Vec2> z;
            std::vector<double> a;
            for (int i = 0; i < 4; ++i) {
                z.push_back({u(rng), u(rng)});
                a.push_back(u(rng) > 0 ? 1.0 + u(rng) : -1.0 + u(rng));
            }
            VortexEnsemble ens(z, a);
            auto v = vortex_rhs(ens, 0.8);
            Vec2 momentum{0.0, 0.0};
            double scale = 0.0;
            for (size_t i = 0; i < ens.count(); ++i) {
                momentum += a[i] * v[i];
                scale += std::abs(a[i]) * v[i].norm();
            }
            CHECK(momentum.norm() < 1e-12 * (1.0 + scale));
        }
    }

    SUBCASE("rotation equivariance") {
        VortexEnsemble ens({{0.4, 0.1}, {-0.3, 0.2}, {0.0, -0.5}}, {1.0, -0.7, 0.4});
        double s = 0.55, alpha = 0.8;
        auto v = vortex_rhs(ens, s);
        double ca = std::cos(alpha), sa = std::sin(alpha);
        auto rot = [&](Vec2 p) { return Vec2{ca * p.x - sa * p.y, sa * p.x + ca * p.y}; };
        std::vector<Vec2> zr;
        for (Vec2 p : ens.positions) zr.push_back(rot(p));
        auto vr = vortex_rhs(VortexEnsemble(zr, ens.intensities), s);
        for (size_t i = 0; i < ens.count(); ++i) {
            Vec2 expect = rot(v[i]);
            CHECK(vr[i].x == doctest::Approx(expect.x).epsilon(1e-12));
            CHECK(vr[i].y == doctest::Approx(expect.y).epsilon(1e-12));
        }
    }

    SUBCASE("coincident vortices rejected") {
        CHECK_THROWS_AS(VortexEnsemble({{0.1, 0.1}, {0.1, 0.1}}, {1.0, 1.0}),
                        std::invalid_argument);
    }
}

TEST_CASE("conserved quantities") {
    SUBCASE("single vortex: H = 0, I = a |z|^2") {
        VortexEnsemble one({{1.0, 0.0}}, {2.0});
        CHECK(hamiltonian(one, 0.6) == 0.0);
        CHECK(moment_of_inertia(one) == doctest::Approx(2.0).epsilon(1e-15));
    }

    SUBCASE("unit pair at distance one: H = 2 (ordered pairs) for any s") {
        VortexEnsemble pair({{0.5, 0.0}, {-0.5, 0.0}}, {1.0, 1.0});
        for (double s : {0.3, 0.5, 0.9})
            CHECK(hamiltonian(pair, s) == doctest::Approx(2.0).epsilon(1e-14));
    }

    SUBCASE("H symmetric under relabeling") {
        VortexEnsemble ens({{0.2, 0.3}, {-0.4, 0.0}, {0.1, -0.6}}, {1.0, 2.0, -1.5});
        VortexEnsemble rel({{0.1, -0.6}, {0.2, 0.3}, {-0.4, 0.0}}, {-1.5, 1.0, 2.0});
        CHECK(hamiltonian(ens, 0.7) == doctest::Approx(hamiltonian(rel, 0.7)).epsilon(1e-14));
        CHECK(moment_of_inertia(ens) == doctest::Approx(moment_of_inertia(rel)).epsilon(1e-14));
    }
}

TEST_CASE("time stepping") {
    SUBCASE("single vortex stays put") {
        VortexEnsemble one({{0.3, 0.4}}, {1.0});
        VortexEnsemble out = step_rk4(one, 0.7, 0.1);
        CHECK(out.positions[0].x == 0.3);
        CHECK(out.positions[0].y == 0.4);
    }

    SUBCASE("co-rotating pair returns to start after one analytic period") {
        double d = 1.0, a = 1.0, s = 0.75;
        double T = two_pi / pair_omega(d, a, s);
        VortexEnsemble ens = co_rotating_pair(d, a);
        int steps = 2000;
        double dt = T / steps;
        VortexEnsemble state = ens;
        for (int i = 0; i < steps; ++i) state = step_rk4(state, s, dt);
        double err = std::max((state.positions[0] - ens.positions[0]).norm(),
                              (state.positions[1] - ens.positions[1]).norm());
        CHECK(err < 1e-8 * d);
    }

    SUBCASE("rk4 one-step error shrinks ~16x when dt halves") {
        double d = 1.0, a = 1.0, s = 0.6;
        VortexEnsemble ens = co_rotating_pair(d, a);
        // reference: many tiny steps
        double dt = 0.2;
        VortexEnsemble fine = ens;
        for (int i = 0; i < 256; ++i) fine = step_rk4(fine, s, dt / 256);
        double e1 = (step_rk4(ens, s, dt).positions[0] - fine.positions[0]).norm();
        VortexEnsemble half = step_rk4(step_rk4(ens, s, dt / 2), s, dt / 2);
        double e2 = (half.positions[0] - fine.positions[0]).norm();
        double ratio = e1 / e2;
        CHECK(ratio > 8.0);
        CHECK(ratio < 32.0);
    }

    SUBCASE("adaptive stepper matches the analytic rotation") {
        double d = 1.0, a = 1.0, s = 0.75;
        double omega = pair_omega(d, a, s);
        double T = 0.7; // partial revolution
        VortexTrajectory traj =
            integrate_vortices(co_rotating_pair(d, a), s, T, 0.05, VortexMethod::rk45, 1e-10);
        double angle = omega * T;
        Vec2 expect{0.5 * std::cos(angle), 0.5 * std::sin(angle)};
        CHECK((traj.states.back().positions[0] - expect).norm() < 1e-7);
    }

    SUBCASE("near-collapse raises a structured error") {
        // opposite spin, tight pair collapses toward the guard immediately
        VortexEnsemble tight({{1e-5, 0.0}, {-1e-5, 0.0}}, {1.0, 1.0});
        CHECK_THROWS_AS(step_rk45(tight, 0.75, 1.0, 1e-10, 1.0), NearCollapseError);
    }
}

TEST_CASE("conservation audit") {
    SUBCASE("stationary single vortex drifts nowhere") {
        VortexTrajectory traj =
            integrate_vortices(VortexEnsemble({{0.2, 0.2}}, {1.0}), 0.6, 1.0, 0.1);
        DriftReport rep = conservation_audit(traj);
        CHECK(rep.hamiltonian_drift == 0.0);
        CHECK(rep.moment_drift == 0.0);
    }

    SUBCASE("co-rotating pair over one period: drift below 1e-8") {
        double d = 1.0, a = 1.0, s = 0.75;
        double T = two_pi / pair_omega(d, a, s);
        VortexTrajectory traj =
            integrate_vortices(co_rotating_pair(d, a), s, T, T / 2000, VortexMethod::rk4);
        DriftReport rep = conservation_audit(traj);
        CHECK(rep.hamiltonian_drift < 1e-8);
        CHECK(rep.moment_drift < 1e-8);
    }

    SUBCASE("random same-sign five-vortex run: drift below 1e-7") {
        std::mt19937_64 rng(77);
        std::uniform_real_distribution<double> u(-0.6, 0.6);
        std::vector<Vec2> z;
        std::vector<double> a;
        for (int i = 0; i < 5; ++i) {
            z.push_back({u(rng), u(rng)});
            a.push_back(0.5 + 0.2 * i);
        }
        VortexTrajectory traj = integrate_vortices(VortexEnsemble(z, a), 0.75, 1.0, 0.01,
                                                   VortexMethod::rk45, 1e-10);
        DriftReport rep = conservation_audit(traj);
        CHECK(rep.hamiltonian_drift < 1e-7);
        CHECK(rep.moment_drift < 1e-7);
        // same-sign ensemble: distances stay bounded away from zero
        double dmin = 1e9;
        for (const auto& st : traj.states) dmin = std::min(dmin, min_pairwise_distance(st));
        CHECK(dmin > 0.01);
    }
}

TEST_CASE("runtime method dispatch for a single step") {
    VortexEnsemble pair({{0.5, 0.0}, {-0.5, 0.0}}, {1.0, 1.0});
    VortexEnsemble a = step(pair, 0.75, 0.01, VortexMethod::rk4);
    VortexEnsemble b = step(pair, 0.75, 0.01, VortexMethod::rk45, 1e-12);
    CHECK((a.positions[0] - b.positions[0]).norm() < 1e-10);
    CHECK((a.positions[0] - pair.positions[0]).norm() > 0.0);
}

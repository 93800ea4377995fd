#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "musched/projection.hpp"
#include "musched/rng.hpp"

#include "oracles.hpp"

#include <cmath>

using namespace musched;

namespace {

RVec random_vec(int M, Rng& rng, double lo, double hi) {
    RVec q(M);
    for (int i = 0; i < M; ++i) q(i) = rng.uniform(lo, hi);
    return q;
}

SimplexSpec random_spec(int M, Rng& rng) {
    double a = rng.uniform(0.0, static_cast<double>(M));
    double b = rng.uniform(0.0, static_cast<double>(M));
    if (a > b) std::swap(a, b);
    if (rng.uniform01() < 0.2) a = b;  // exercise equality constraints
    if (rng.uniform01() < 0.2) {
        a = std::floor(a);
        b = std::ceil(b);
    }
    return SimplexSpec{M, a, b};
}

}  // namespace

TEST_CASE("project_simplex frozen examples") {
    SUBCASE("already feasible input is returned unchanged") {
        RVec q(2);
        q << 0.2, 0.3;
        auto [p, cert] = project_simplex(q, SimplexSpec{2, 0.0, 2.0});
        CHECK((p - q).norm() == 0.0);
        CHECK(cert.lambda_star == 0.0);
        CHECK(cert.gamma == 0.0);
        CHECK(cert.Gamma == 0.0);
    }
    SUBCASE("lower sum bound active") {
        RVec q(4);
        q << 0.9, 0.8, 0.1, 0.0;
        auto [p, cert] = project_simplex(q, SimplexSpec{4, 2.0, 3.0});
        CHECK(cert.lambda_star == doctest::Approx(0.05).epsilon(1e-10));
        RVec want(4);
        want << 0.95, 0.85, 0.15, 0.05;
        CHECK((p - want).norm() < 1e-10);
        CHECK(p.sum() == doctest::Approx(2.0).epsilon(1e-12));
    }
    SUBCASE("equality constraint with both clips active") {
        RVec q(3);
        q << 1.2, 0.9, -0.3;
        auto [p, cert] = project_simplex(q, SimplexSpec{3, 1.0, 1.0});
        CHECK(cert.lambda_star == doctest::Approx(-0.55).epsilon(1e-10));
        RVec want(3);
        want << 0.65, 0.35, 0.0;
        CHECK((p - want).norm() < 1e-10);
    }
    SUBCASE("l_min = M forces the all-ones vector") {
        Rng rng(1);
        RVec q = random_vec(5, rng, -2.0, 2.0);
        auto [p, cert] = project_simplex(q, SimplexSpec{5, 5.0, 5.0});
        CHECK((p - RVec::Ones(5)).norm() < 1e-12);
    }
    SUBCASE("frozen examples agree with the lambda grid-search oracle") {
        RVec q1(4);
        q1 << 0.9, 0.8, 0.1, 0.0;
        RVec o1 = oracles::grid_lambda_oracle(q1, 2.0, 3.0);
        auto [p1, c1] = project_simplex(q1, SimplexSpec{4, 2.0, 3.0});
        CHECK((p1 - o1).norm() < 1e-6);

        RVec q2(3);
        q2 << 1.2, 0.9, -0.3;
        RVec o2 = oracles::grid_lambda_oracle(q2, 1.0, 1.0);
        auto [p2, c2] = project_simplex(q2, SimplexSpec{3, 1.0, 1.0});
        CHECK((p2 - o2).norm() < 1e-6);
    }
}

TEST_CASE("project_simplex rejects bad input") {
    RVec q(2);
    q << 0.1, std::nan("");
    CHECK_THROWS_AS(project_simplex(q, SimplexSpec{2, 0.0, 1.0}), std::invalid_argument);
    RVec ok = RVec::Zero(2);
    CHECK_THROWS_AS(project_simplex(ok, SimplexSpec{2, 1.5, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(project_simplex(ok, SimplexSpec{2, 0.0, 3.0}), std::invalid_argument);
    CHECK_THROWS_AS(project_simplex(ok, SimplexSpec{3, 0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("project_simplex random instances: feasibility, KKT, optimality, idempotence") {
    Rng rng(2);
    for (int rep = 0; rep < 400; ++rep) {
        const int M = 1 + static_cast<int>(rng.uniform_int(16));
        const SimplexSpec spec = random_spec(M, rng);
        const RVec q = random_vec(M, rng, -1.5, 2.5);
        auto [p, cert] = project_simplex(q, spec);

        CHECK((p.array() >= 0.0).all());
        CHECK((p.array() <= 1.0).all());
        CHECK(p.sum() >= spec.l_min - 1e-9);
        CHECK(p.sum() <= spec.l_max + 1e-9);

        const KktResiduals res = kkt_residuals(q, spec, p, cert);
        CHECK(res.max() <= 1e-9);

        // never farther than the bisection oracle's projection
        const RVec oracle = oracles::bisect_simplex(q, spec.l_min, spec.l_max);
        CHECK((p - q).squaredNorm() <= (oracle - q).squaredNorm() + 1e-10);

        // idempotence
        auto [p2, cert2] = project_simplex(p, spec);
        CHECK((p2 - p).norm() <= 1e-12);
    }
}

TEST_CASE("project_simplex is nonexpansive") {
    Rng rng(3);
    for (int rep = 0; rep < 200; ++rep) {
        const int M = 2 + static_cast<int>(rng.uniform_int(10));
        const SimplexSpec spec = random_spec(M, rng);
        const RVec q1 = random_vec(M, rng, -2.0, 3.0);
        const RVec q2 = random_vec(M, rng, -2.0, 3.0);
        auto [p1, c1] = project_simplex(q1, spec);
        auto [p2, c2] = project_simplex(q2, spec);
        CHECK((p1 - p2).norm() <= (q1 - q2).norm() + 1e-12);
    }
}

TEST_CASE("degenerate duplicate breakpoints are handled") {
    RVec q(4);
    q << 0.5, 0.5, 0.5, 0.5;
    auto [p, cert] = project_simplex(q, SimplexSpec{4, 3.0, 4.0});
    CHECK(p.sum() == doctest::Approx(3.0).epsilon(1e-12));
    for (int i = 0; i < 4; ++i) CHECK(p(i) == doctest::Approx(0.75).epsilon(1e-12));

    RVec r(3);
    r << 1.0, 0.0, 1.0;  // entries exactly at the clips
    auto [p2, cert2] = project_simplex(r, SimplexSpec{3, 0.0, 3.0});
    CHECK((p2 - r).norm() == 0.0);
}

TEST_CASE("project_intersection basics") {
    const ConstraintBox box{1, 2, 1, 1};
    DrsConfig cfg;

    SUBCASE("feasible input is a fixed point") {
        RMat Z(4, 2);
        Z << 1, 0, 0, 1, 1, 0, 0, 1;
        DrsResult r = project_intersection(Z, box, cfg);
        CHECK(r.converged);
        CHECK((r.V - Z).norm() < 1e-6);
    }
    SUBCASE("loose box reduces to a clamp") {
        Rng rng(4);
        RMat Z(3, 2);
        for (int t = 0; t < 2; ++t)
            for (int u = 0; u < 3; ++u) Z(u, t) = rng.uniform(-1.0, 2.0);
        DrsResult r = project_intersection(Z, ConstraintBox{0, 3, 0, 2}, cfg);
        CHECK(r.converged);
        CHECK((r.V - Z.cwiseMax(0.0).cwiseMin(1.0)).norm() < 1e-6);
    }
    SUBCASE("precheck failure throws") {
        RMat Z = RMat::Zero(2, 4);
        CHECK_THROWS_AS(project_intersection(Z, ConstraintBox{2, 2, 1, 1}, cfg), std::invalid_argument);
    }
}

TEST_CASE("project_intersection matches the Dykstra oracle") {
    Rng rng(5);
    DrsConfig cfg;  // beta = 1, K_max = 2000, tol = 1e-8
    for (int rep = 0; rep < 60; ++rep) {
        const int U = 2 + static_cast<int>(rng.uniform_int(3));
        const int T = 1 + static_cast<int>(rng.uniform_int(3));
        ConstraintBox box;
        box.U_min = static_cast<int>(rng.uniform_int(U + 1));
        box.U_max = box.U_min + static_cast<int>(rng.uniform_int(U + 1 - box.U_min));
        box.T_min = static_cast<int>(rng.uniform_int(T + 1));
        box.T_max = box.T_min + static_cast<int>(rng.uniform_int(T + 1 - box.T_min));
        if (!feasibility_precheck(U, T, box)) continue;

        RMat Z(U, T);
        for (int t = 0; t < T; ++t)
            for (int u = 0; u < U; ++u) Z(u, t) = rng.uniform(-0.5, 1.5);

        DrsResult r = project_intersection(Z, box, cfg);
        const RMat oracle = oracles::dykstra(Z, box);
        CHECK((r.V - oracle).norm() < 1e-4);

        // feasibility within 1e-6 per constraint
        for (int t = 0; t < T; ++t) {
            CHECK(r.V.col(t).sum() >= box.U_min - 1e-6);
            CHECK(r.V.col(t).sum() <= box.U_max + 1e-6);
        }
        for (int u = 0; u < U; ++u) {
            CHECK(r.V.row(u).sum() >= box.T_min - 1e-6);
            CHECK(r.V.row(u).sum() <= box.T_max + 1e-6);
        }
        CHECK((r.V.array() >= -1e-9).all());
        CHECK((r.V.array() <= 1.0 + 1e-9).all());
    }
}

TEST_CASE("Dykstra oracle itself is sane on a 2x2 grid search") {
    // cross-check the oracle against a brute-force grid on [0,1]^4
    Rng rng(6);
    const ConstraintBox box{1, 2, 0, 1};
    RMat Z(2, 2);
    Z << 1.3, -0.2, 0.6, 0.4;
    const RMat oracle = oracles::dykstra(Z, box);

    double best = 1e300;
    RMat best_X(2, 2);
    const int n = 50;
    for (int a = 0; a <= n; ++a)
        for (int b = 0; b <= n; ++b)
            for (int c = 0; c <= n; ++c)
                for (int d = 0; d <= n; ++d) {
                    RMat X(2, 2);
                    X << a / double(n), b / double(n), c / double(n), d / double(n);
                    if (X.col(0).sum() < box.U_min || X.col(0).sum() > box.U_max) continue;
                    if (X.col(1).sum() < box.U_min || X.col(1).sum() > box.U_max) continue;
                    if (X.row(0).sum() < box.T_min || X.row(0).sum() > box.T_max) continue;
                    if (X.row(1).sum() < box.T_min || X.row(1).sum() > box.T_max) continue;
                    const double d2 = (X - Z).squaredNorm();
                    if (d2 < best) {
                        best = d2;
                        best_X = X;
                    }
                }
    CHECK((oracle - best_X).norm() < 0.05);
    CHECK((oracle - Z).squaredNorm() <= best + 1e-9);
}

TEST_CASE("DRS reports non-convergence instead of erroring") {
    RMat Z(3, 2);
    Z << 0.2, 0.9, 0.5, 0.1, 0.8, 0.4;
    DrsConfig cfg;
    cfg.K_max = 1;
    cfg.tol = 1e-14;
    DrsResult r = project_intersection(Z, ConstraintBox{1, 2, 1, 2}, cfg);
    CHECK_FALSE(r.converged);
    CHECK(r.iterations == 1);
}

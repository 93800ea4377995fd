#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "musched/objectives.hpp"
#include "musched/rng.hpp"

#include "oracles.hpp"

#include <Eigen/Cholesky>

#include <cmath>

using namespace musched;

namespace {

CMat random_channel(int B, int U, Rng& rng) {
    CMat H(B, U);
    for (int u = 0; u < U; ++u)
        for (int b = 0; b < B; ++b) H(b, u) = rng.cgaussian(1.0);
    return H;
}

RMat random_relaxed(int U, int T, Rng& rng, double lo = 0.1, double hi = 0.9) {
    RMat C(U, T);
    for (int t = 0; t < T; ++t)
        for (int u = 0; u < U; ++u) C(u, t) = rng.uniform(lo, hi);
    return C;
}

RVec random_gamma(int U, Rng& rng) {
    RVec g(U);
    for (int u = 0; u < U; ++u) g(u) = rng.uniform(0.05, 0.5);
    return g;
}

}  // namespace

TEST_CASE("lmmse equalizer basics") {
    Rng rng(1);
    SUBCASE("zero mask gives a zero equalizer") {
        CMat H = random_channel(4, 3, rng);
        auto [W, L1] = lmmse_equalizer(H, RVec::Zero(3), 1.0);
        CHECK(W.norm() == 0.0);
        CHECK((L1 - CMat::Identity(4, 4)).norm() < 1e-12);
    }
    SUBCASE("scalar case (1+1)^-1") {
        CMat H(1, 1);
        H << cxd(1, 0);
        RVec c = RVec::Ones(1);
        auto [W, L1] = lmmse_equalizer(H, c, 1.0);
        CHECK(W(0, 0).real() == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("huge noise power kills the equalizer") {
        CMat H = random_channel(4, 3, rng);
        auto [W, L1] = lmmse_equalizer(H, RVec::Ones(3), 1e12);
        CHECK(W.norm() < 1e-10);
    }
    SUBCASE("non-finite channel throws") {
        CMat H = random_channel(2, 2, rng);
        H(0, 0) = cxd(std::nan(""), 0.0);
        CHECK_THROWS(lmmse_equalizer(H, RVec::Ones(2), 1.0));
    }
}

TEST_CASE("B x B and U x U equalizer forms agree") {
    Rng rng(2);
    for (int rep = 0; rep < 30; ++rep) {
        const int B = 2 + static_cast<int>(rng.uniform_int(6));
        const int U = 1 + static_cast<int>(rng.uniform_int(6));
        CMat H = random_channel(B, U, rng);
        RVec c = random_relaxed(U, 1, rng, 0.0, 1.0).col(0);
        const double n0 = rng.uniform(0.1, 5.0);
        CMat Wb = lmmse_weights_bform(H, c, n0);
        CMat Wu = lmmse_weights_uform(H, c, n0);
        CHECK((Wb - Wu).norm() <= 1e-10 * std::max(1.0, Wb.norm()));
    }
}

TEST_CASE("EqualizerBundle invariants: L1 Hermitian positive definite") {
    Rng rng(3);
    CMat H = random_channel(5, 4, rng);
    RMat C = random_relaxed(4, 3, rng);
    EqualizerBundle bundle = make_equalizer_bundle(H, C, 0.7);
    REQUIRE(bundle.W.size() == 3);
    for (int t = 0; t < 3; ++t) {
        const CMat& L1 = bundle.L1[t];
        CHECK((L1 - L1.adjoint()).norm() < 1e-12 * L1.norm());
        Eigen::LLT<CMat> llt(L1);
        CHECK(llt.info() == Eigen::Success);
        CHECK((bundle.W[t] - L1 * (H * C.col(t).cast<cxd>().asDiagonal())).norm() <
              1e-9 * std::max(1.0, bundle.W[t].norm()));
    }
}

TEST_CASE("cost_mse closed-form examples") {
    SUBCASE("all-zero schedule costs nothing") {
        Rng rng(4);
        CMat H = random_channel(4, 3, rng);
        CHECK(cost_mse(RMat::Zero(3, 2), H, 1.0) == doctest::Approx(0.0).epsilon(1e-15));
    }
    SUBCASE("scalar system: 0.25 + 0.25") {
        CMat H(1, 1);
        H << cxd(1, 0);
        CHECK(cost_mse(RMat::Ones(1, 1), H, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("orthogonal equal-norm columns: per-active-UE MSE identical") {
        CMat H = CMat::Zero(2, 2);
        H(0, 0) = cxd(1.3, 0.4);
        H(1, 1) = cxd(-0.4, 1.3);  // orthogonal, equal norm
        RMat both = RMat::Ones(2, 1);
        RMat split(2, 2);
        split << 1, 0, 0, 1;
        const double per_ue_both = cost_mse(both, H, 1.0) / 2.0;
        const double per_ue_split = cost_mse(split, H, 1.0) / 2.0;
        CHECK(per_ue_both == doctest::Approx(per_ue_split).epsilon(1e-12));
    }
    SUBCASE("cost_mse is nonnegative") {
        Rng rng(5);
        for (int rep = 0; rep < 20; ++rep) {
            CMat H = random_channel(3, 4, rng);
            CHECK(cost_mse(random_relaxed(4, 2, rng, 0.0, 1.0), H, rng.uniform(0.1, 2.0)) >= 0.0);
        }
    }
}

TEST_CASE("grad_mse") {
    Rng rng(6);
    SUBCASE("zero entry has zero gradient entry") {
        CMat H = random_channel(4, 4, rng);
        RMat C = random_relaxed(4, 2, rng);
        C(1, 0) = 0.0;
        CHECK(grad_mse(C, H, 1.0)(1, 0) == 0.0);
    }
    SUBCASE("matches central finite differences") {
        for (int rep = 0; rep < 5; ++rep) {
            CMat H = random_channel(4, 4, rng);
            RMat C = random_relaxed(4, 2, rng);
            const double n0 = rng.uniform(0.3, 2.0);
            RMat fd = oracles::finite_difference_grad(
                [&](const RMat& X) { return cost_mse(X, H, n0); }, C);
            CHECK(oracles::max_rel_err(grad_mse(C, H, n0), fd) < 1e-5);
        }
    }
    SUBCASE("finite on relaxed interiors") {
        CMat H = random_channel(5, 6, rng);
        CHECK(grad_mse(random_relaxed(6, 3, rng), H, 0.5).allFinite());
    }
}

TEST_CASE("cost_capacity") {
    SUBCASE("all-zero schedule: det(I) = 1") {
        Rng rng(7);
        CMat H = random_channel(4, 3, rng);
        CHECK(cost_capacity(RMat::Zero(3, 1), H, 1.0) == doctest::Approx(0.0).epsilon(1e-14));
    }
    SUBCASE("rank-one identity: -1 when ||h||^2 = n0") {
        CMat H(2, 1);
        H << cxd(0.6, 0.0), cxd(0.0, 0.8);  // norm^2 = 1
        CHECK(cost_capacity(RMat::Ones(1, 1), H, 1.0) == doctest::Approx(-1.0).epsilon(1e-12));
    }
    SUBCASE("coordinatewise non-increasing in C") {
        Rng rng(8);
        for (int rep = 0; rep < 10; ++rep) {
            CMat H = random_channel(4, 4, rng);
            RMat C = random_relaxed(4, 2, rng, 0.05, 0.85);
            const double f0 = cost_capacity(C, H, 1.0);
            RMat C2 = C;
            const int u = static_cast<int>(rng.uniform_int(4));
            const int t = static_cast<int>(rng.uniform_int(2));
            C2(u, t) += 0.1;
            CHECK(cost_capacity(C2, H, 1.0) <= f0 + 1e-12);
        }
    }
}

TEST_CASE("grad_capacity") {
    Rng rng(9);
    SUBCASE("entries are nonpositive and vanish with C") {
        CMat H = random_channel(4, 4, rng);
        RMat C = random_relaxed(4, 2, rng);
        C(2, 1) = 0.0;
        RMat g = grad_capacity(C, H, 1.0);
        CHECK((g.array() <= 0.0).all());
        CHECK(g(2, 1) == 0.0);
    }
    SUBCASE("matches central finite differences") {
        for (int rep = 0; rep < 5; ++rep) {
            CMat H = random_channel(4, 4, rng);
            RMat C = random_relaxed(4, 2, rng);
            const double n0 = rng.uniform(0.3, 2.0);
            RMat fd = oracles::finite_difference_grad(
                [&](const RMat& X) { return cost_capacity(X, H, n0); }, C);
            CHECK(oracles::max_rel_err(grad_capacity(C, H, n0), fd) < 1e-5);
        }
    }
}

TEST_CASE("cost_sum_rate") {
    SUBCASE("all-zero schedule contributes nothing") {
        Rng rng(10);
        CMat H = random_channel(4, 3, rng);
        CHECK(cost_sum_rate(RMat::Zero(3, 2), H, RVec::Constant(3, 0.2), 1.0) == 0.0);
    }
    SUBCASE("scalar system: -log2(1.5)") {
        CMat H(1, 1);
        H << cxd(1, 0);
        const double got = cost_sum_rate(RMat::Ones(1, 1), H, RVec::Ones(1), 1.0);
        CHECK(got == doctest::Approx(-std::log2(1.5)).epsilon(1e-12));
        CHECK(got == doctest::Approx(-0.58496).epsilon(1e-4));
    }
    SUBCASE("zero Gamma and a single UE leaves signal over noise") {
        CMat H(3, 1);
        H << cxd(0.3, 0.1), cxd(-0.5, 0.2), cxd(0.0, 0.9);
        RVec c = RVec::Ones(1);
        auto [W, L1] = lmmse_equalizer(H, c, 1.0);
        const CVec w = W.col(0);
        const double expected_sinr = std::norm(w.dot(H.col(0))) / (1.0 * w.squaredNorm());
        const double got = cost_sum_rate(RMat::Ones(1, 1), H, RVec::Zero(1), 1.0);
        CHECK(got == doctest::Approx(-std::log2(1.0 + expected_sinr)).epsilon(1e-12));
    }
}

TEST_CASE("grad_sum_rate matches central finite differences") {
    Rng rng(11);
    for (int rep = 0; rep < 5; ++rep) {
        CMat H = random_channel(4, 3, rng);
        RMat C = random_relaxed(3, 2, rng);
        RVec Gamma = random_gamma(3, rng);
        const double n0 = rng.uniform(0.5, 1.5);
        RMat fd = oracles::finite_difference_grad(
            [&](const RMat& X) { return cost_sum_rate(X, H, Gamma, n0); }, C);
        CHECK(oracles::max_rel_err(grad_sum_rate(C, H, Gamma, n0), fd) < 1e-4);
    }
}

TEST_CASE("sum-rate single-UE system has no interference block") {
    // with one UE the gradient must equal the FD of the interference-free cost
    Rng rng(12);
    CMat H = random_channel(4, 1, rng);
    RMat C = random_relaxed(1, 2, rng);
    RVec Gamma = random_gamma(1, rng);
    RMat fd = oracles::finite_difference_grad(
        [&](const RMat& X) { return cost_sum_rate(X, H, Gamma, 1.0); }, C);
    CHECK(oracles::max_rel_err(grad_sum_rate(C, H, Gamma, 1.0), fd) < 1e-5);
}

TEST_CASE("regularizer and its gradient") {
    RMat C = RMat::Constant(3, 2, 0.5);
    CHECK(regularizer(C, 2.0) == 0.0);
    CHECK(grad_regularizer(C, 2.0).norm() == 0.0);

    RMat ones = RMat::Ones(2, 2);
    CHECK(grad_regularizer(ones, 3.0)(0, 0) == doctest::Approx(-3.0));
    CHECK(regularizer(ones, 3.0) == doctest::Approx(-3.0));

    CHECK(regularizer(ones, 0.0) == 0.0);
    CHECK(grad_regularizer(ones, 0.0).norm() == 0.0);

    Rng rng(13);
    RMat R = random_relaxed(3, 3, rng);
    RMat fd = oracles::finite_difference_grad([&](const RMat& X) { return regularizer(X, 1.7); }, R);
    CHECK(oracles::max_rel_err(grad_regularizer(R, 1.7), fd) < 1e-5);
}

TEST_CASE("costs and gradients are invariant under simultaneous UE permutation") {
    Rng rng(14);
    const int U = 5;
    CMat H = random_channel(4, U, rng);
    RMat C = random_relaxed(U, 2, rng);
    RVec Gamma = random_gamma(U, rng);

    std::vector<int> perm{3, 0, 4, 1, 2};
    CMat Hp(4, U);
    RMat Cp(U, 2);
    RVec Gp(U);
    for (int u = 0; u < U; ++u) {
        Hp.col(u) = H.col(perm[u]);
        Cp.row(u) = C.row(perm[u]);
        Gp(u) = Gamma(perm[u]);
    }

    CHECK(cost_mse(Cp, Hp, 1.0) == doctest::Approx(cost_mse(C, H, 1.0)).epsilon(1e-12));
    CHECK(cost_capacity(Cp, Hp, 1.0) == doctest::Approx(cost_capacity(C, H, 1.0)).epsilon(1e-12));
    CHECK(cost_sum_rate(Cp, Hp, Gp, 1.0) ==
          doctest::Approx(cost_sum_rate(C, H, Gamma, 1.0)).epsilon(1e-12));

    RMat g = grad_mse(C, H, 1.0);
    RMat gp = grad_mse(Cp, Hp, 1.0);
    for (int u = 0; u < U; ++u) CHECK((gp.row(u) - g.row(perm[u])).norm() < 1e-10);
}

TEST_CASE("per-slot costs sum over slots") {
    Rng rng(15);
    CMat H = random_channel(4, 3, rng);
    RMat C = random_relaxed(3, 2, rng);
    const double whole = cost_capacity(C, H, 1.0);
    const double t0 = cost_capacity(C.col(0), H, 1.0);
    const double t1 = cost_capacity(C.col(1), H, 1.0);
    CHECK(whole == doctest::Approx(t0 + t1).epsilon(1e-12));
}

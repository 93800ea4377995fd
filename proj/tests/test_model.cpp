#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "musched/model.hpp"
#include "musched/rng.hpp"

using namespace musched;

TEST_CASE("is_feasible checks column and row sums") {
    // 16x2 with column sums 8 and row sums 1
    RMat C = RMat::Zero(16, 2);
    for (int u = 0; u < 8; ++u) C(u, 0) = 1.0;
    for (int u = 8; u < 16; ++u) C(u, 1) = 1.0;
    CHECK(is_feasible(SchedulingMatrix::binary(C), ConstraintBox{8, 10, 1, 2}));

    CHECK_FALSE(is_feasible(SchedulingMatrix::binary(RMat::Zero(4, 2)), ConstraintBox{1, 2, 1, 2}));

    RMat I2 = RMat::Identity(2, 2);
    CHECK(is_feasible(SchedulingMatrix::binary(I2), ConstraintBox{1, 1, 1, 1}));
}

TEST_CASE("is_feasible requires a binary matrix") {
    SchedulingMatrix relaxed = SchedulingMatrix::relaxed(RMat::Constant(2, 2, 0.5));
    CHECK_THROWS_AS(is_feasible(relaxed, ConstraintBox{1, 2, 1, 2}), std::invalid_argument);
}

TEST_CASE("is_feasible is invariant under column permutation") {
    Rng rng(7);
    for (int rep = 0; rep < 50; ++rep) {
        RMat C(5, 3);
        for (int t = 0; t < 3; ++t)
            for (int u = 0; u < 5; ++u) C(u, t) = rng.uniform01() < 0.5 ? 0.0 : 1.0;
        const ConstraintBox box{static_cast<int>(rng.uniform_int(3)), 5, 0, 3};
        RMat P = C;
        P.col(0).swap(P.col(2));
        CHECK(is_feasible(SchedulingMatrix::binary(C), box) ==
              is_feasible(SchedulingMatrix::binary(P), box));
    }
}

TEST_CASE("feasibility_precheck examples") {
    CHECK(feasibility_precheck(16, 2, ConstraintBox{8, 10, 1, 2}));
    CHECK_FALSE(feasibility_precheck(2, 4, ConstraintBox{2, 2, 1, 1}));
    CHECK(feasibility_precheck(1, 1, ConstraintBox{1, 1, 1, 1}));
}

TEST_CASE("failed precheck implies no feasible binary matrix exists") {
    // U=2, T=4, box (2,2,1,1): enumerate all 2^(2*4) binary matrices
    const ConstraintBox box{2, 2, 1, 1};
    REQUIRE_FALSE(feasibility_precheck(2, 4, box));
    for (int bits = 0; bits < (1 << 8); ++bits) {
        RMat C(2, 4);
        for (int k = 0; k < 8; ++k) C(k % 2, k / 2) = (bits >> k) & 1;
        CHECK_FALSE(is_feasible(SchedulingMatrix::binary(C), box));
    }
}

TEST_CASE("mask_channel scales columns") {
    CMat H(2, 2);
    H << cxd(1, 1), cxd(2, 0), cxd(0, 3), cxd(4, 4);

    SUBCASE("all-ones mask is the identity") {
        RVec c = RVec::Ones(2);
        CHECK((mask_channel(H, c) - H).norm() == 0.0);
    }
    SUBCASE("all-zeros mask gives the zero matrix") {
        RVec c = RVec::Zero(2);
        CHECK(mask_channel(H, c).norm() == 0.0);
    }
    SUBCASE("column zeroing") {
        RVec c(2);
        c << 1.0, 0.0;
        CMat M = mask_channel(H, c);
        CHECK(M.col(0) == H.col(0));
        CHECK(M.col(1).norm() == 0.0);
    }
    SUBCASE("idempotent for binary masks") {
        RVec c(2);
        c << 1.0, 0.0;
        CMat once = mask_channel(H, c);
        CHECK((mask_channel(once, c) - once).norm() == 0.0);
    }
    SUBCASE("dimension mismatch throws") {
        RVec c = RVec::Ones(3);
        CHECK_THROWS_AS(mask_channel(H, c), std::invalid_argument);
    }
}

TEST_CASE("MaskView exposes the slot column as a diagonal") {
    RMat C(2, 2);
    C << 1, 0, 0, 1;
    MaskView mask{C, 1};
    CHECK(mask.diagonal()(0) == 0.0);
    CHECK(mask.diagonal()(1) == 1.0);
}

TEST_CASE("Scenario validation") {
    Scenario s{16, 1, 16, 16, 2, 0.1, 6.0, 3.18e-12, 2, 8};
    CHECK_NOTHROW(s.validate());
    Scenario bad = s;
    bad.B = 15;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = s;
    bad.Q = 3;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = s;
    bad.rho_w = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("SchedulingMatrix state tags validate entries") {
    CHECK_THROWS_AS(SchedulingMatrix::binary(RMat::Constant(2, 2, 0.5)), std::invalid_argument);
    CHECK_THROWS_AS(SchedulingMatrix::relaxed(RMat::Constant(2, 2, 1.5)), std::invalid_argument);
    CHECK_NOTHROW(SchedulingMatrix::relaxed(RMat::Constant(2, 2, 0.5)));
    CHECK_NOTHROW(SchedulingMatrix::binary(RMat::Ones(2, 2)));
}

#pragma once

#include "musched/model.hpp"

#include <utility>

namespace musched {

// Box-and-sum-constrained simplex: { p in [0,1]^M : l_min <= sum p <= l_max }.
struct SimplexSpec {
    int M = 0;
    double l_min = 0.0;
    double l_max = 0.0;

    void validate() const;
};

// Multipliers for the projection problem. Stationarity reads
//   p_i - q_i - mu_i + upsilon_i - gamma + Gamma = 0
// with lambda_star = gamma - Gamma.
struct KktCertificate {
    double lambda_star = 0.0;
    RVec mu;       // lower-box multipliers (p_i = 0 active)
    RVec upsilon;  // upper-box multipliers (p_i = 1 active)
    double gamma = 0.0;      // sum >= l_min multiplier
    double Gamma = 0.0;      // sum <= l_max multiplier
    int M1 = 0;              // entries clipped at 1
    int M0 = 0;              // entries clipped at 0
};

struct KktResiduals {
    double stationarity = 0.0;
    double complementary = 0.0;
    double primal = 0.0;
    double dual = 0.0;

    double max() const;
};

KktResiduals kkt_residuals(const RVec& q, const SimplexSpec& spec, const RVec& p, const KktCertificate& cert);

// Orthogonal projection onto the simplex: p_i = clamp(q_i + lambda*, 0, 1)
// with lambda* chosen from the three KKT candidates (interior, sum at l_min,
// sum at l_max) as the feasible one of minimum distance.
std::pair<RVec, KktCertificate> project_simplex(const RVec& q, const SimplexSpec& spec);

struct DrsConfig {
    double beta = 1.0;
    int K_max = 2000;
    double tol = 1e-8;
};

struct DrsResult {
    RMat V;
    int iterations = 0;
    bool converged = false;
};

// Douglas-Rachford projection of Z onto C_U (column sums) intersected with
// C_T (row sums), both within the [0,1] box. Returns the last V iterate; a
// non-converged run is reported through the flag rather than an error.
DrsResult project_intersection(const RMat& Z, const ConstraintBox& box, const DrsConfig& cfg);

}  // namespace musched

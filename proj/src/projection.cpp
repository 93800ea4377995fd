#include "musched/projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace musched {

namespace {

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

double clipped_sum(const RVec& q, double lambda) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < q.size(); ++i) s += clamp01(q(i) + lambda);
    return s;
}

// Finds lambda with sum_i clamp(q_i + lambda, 0, 1) == target by sweeping the
// 2M breakpoint intervals of the sorted, max-shifted vector (first element 0,
// rest negative). Returns lambda in the original (unshifted) coordinates.
double solve_shift(const RVec& q, double target) {
    const int M = static_cast<int>(q.size());
    std::vector<double> qhat(q.data(), q.data() + M);
    std::sort(qhat.begin(), qhat.end(), std::greater<double>());
    const double shift = qhat[0];
    for (double& v : qhat) v -= shift;

    // events in ascending lambda: entry i leaves 0 at -qhat[i], hits 1 at
    // 1 - qhat[i]; both lists are already ascending because qhat descends
    int ia = 0, ib = 0;
    int free_count = 0, at_one = 0;
    double free_sum = 0.0;
    double prev = -std::numeric_limits<double>::infinity();
    const double flat_eps = 1e-12 * std::max(1, M);

    auto finish = [&](double lambda_hat) { return lambda_hat - shift; };

    for (int step = 0; step < 2 * M; ++step) {
        const double ev_a = ia < M ? -qhat[ia] : std::numeric_limits<double>::infinity();
        const double ev_b = ib < M ? 1.0 - qhat[ib] : std::numeric_limits<double>::infinity();
        const double next = std::min(ev_a, ev_b);

        if (free_count > 0) {
            const double cand = (target - at_one - free_sum) / free_count;
            if (cand >= prev - 1e-12 && cand <= next + 1e-12)
                return finish(std::min(std::max(cand, prev), next));
        } else if (std::abs(at_one - target) <= flat_eps) {
            return finish(std::isinf(prev) ? next : prev);
        }

        if (ev_a <= ev_b) {
            free_count += 1;
            free_sum += qhat[ia++];
        } else {
            free_count -= 1;
            free_sum -= qhat[ib];
            at_one += 1;
            ++ib;
        }
        prev = next;
    }
    if (std::abs(M - target) <= flat_eps) return finish(prev);

    // near-degenerate targets: fall back to bisection on the monotone sum
    double lo = -q.maxCoeff() - 1.0;  // all entries clipped to 0
    double hi = 1.0 - q.minCoeff() + 1.0;  // all entries clipped to 1
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        (clipped_sum(q, mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

RVec apply_shift(const RVec& q, double lambda) {
    RVec p(q.size());
    for (Eigen::Index i = 0; i < q.size(); ++i) p(i) = clamp01(q(i) + lambda);
    return p;
}

// Hot path used by DRS: the feasible candidate of minimum distance is the one
// whose shift is closest to zero, so only one solve is ever needed.
double lambda_star(const RVec& q, double l_min, double l_max) {
    const double natural = clipped_sum(q, 0.0);
    if (natural >= l_min && natural <= l_max) return 0.0;
    return solve_shift(q, natural < l_min ? l_min : l_max);
}

}  // namespace

void SimplexSpec::validate() const {
    if (M < 1) throw std::invalid_argument("SimplexSpec: dimension must be >= 1");
    if (!(0.0 <= l_min && l_min <= l_max && l_max <= static_cast<double>(M)))
        throw std::invalid_argument("SimplexSpec: need 0 <= l_min <= l_max <= M");
}

double KktResiduals::max() const {
    return std::max(std::max(stationarity, complementary), std::max(primal, dual));
}

KktResiduals kkt_residuals(const RVec& q, const SimplexSpec& spec, const RVec& p, const KktCertificate& cert) {
    KktResiduals r;
    const double sum = p.sum();
    for (Eigen::Index i = 0; i < q.size(); ++i) {
        r.stationarity = std::max(
            r.stationarity, std::abs(p(i) - q(i) - cert.mu(i) + cert.upsilon(i) - cert.gamma + cert.Gamma));
        r.complementary = std::max(r.complementary, std::abs(cert.mu(i) * p(i)));
        r.complementary = std::max(r.complementary, std::abs(cert.upsilon(i) * (p(i) - 1.0)));
        r.primal = std::max(r.primal, std::max(-p(i), p(i) - 1.0));
        r.dual = std::max(r.dual, std::max(-cert.mu(i), -cert.upsilon(i)));
    }
    r.complementary = std::max(r.complementary, std::abs(cert.gamma * (spec.l_min - sum)));
    r.complementary = std::max(r.complementary, std::abs(cert.Gamma * (sum - spec.l_max)));
    r.primal = std::max(r.primal, std::max(spec.l_min - sum, sum - spec.l_max));
    r.dual = std::max(r.dual, std::max(-cert.gamma, -cert.Gamma));
    r.primal = std::max(r.primal, 0.0);
    r.dual = std::max(r.dual, 0.0);
    return r;
}

std::pair<RVec, KktCertificate> project_simplex(const RVec& q, const SimplexSpec& spec) {
    spec.validate();
    if (q.size() != spec.M) throw std::invalid_argument("project_simplex: q size must equal spec.M");
    if (!q.allFinite()) throw std::invalid_argument("project_simplex: input has non-finite entries");

    // three KKT candidates: interior (lambda = 0), sum pinned at l_min, sum
    // pinned at l_max; keep the feasible one of minimum distance, preferring
    // the l_min candidate on exact ties
    const double natural = clipped_sum(q, 0.0);
    double best_lambda = 0.0;
    double best_dist = std::numeric_limits<double>::infinity();
    auto consider = [&](double lambda) {
        const RVec p = apply_shift(q, lambda);
        const double s = p.sum();
        if (s < spec.l_min - 1e-9 || s > spec.l_max + 1e-9) return;
        const double dist = (p - q).squaredNorm();
        if (dist < best_dist - 1e-15) {
            best_dist = dist;
            best_lambda = lambda;
        }
    };
    if (natural >= spec.l_min - 1e-12 && natural <= spec.l_max + 1e-12) consider(0.0);
    consider(solve_shift(q, spec.l_min));
    if (spec.l_max != spec.l_min) consider(solve_shift(q, spec.l_max));

    const double lam = best_lambda;
    RVec p = apply_shift(q, lam);
    KktCertificate cert;
    cert.lambda_star = lam;
    cert.gamma = std::max(lam, 0.0);
    cert.Gamma = std::max(-lam, 0.0);
    cert.mu = RVec::Zero(spec.M);
    cert.upsilon = RVec::Zero(spec.M);
    for (int i = 0; i < spec.M; ++i) {
        if (p(i) == 0.0) {
            cert.mu(i) = std::max(-(q(i) + lam), 0.0);
            ++cert.M0;
        } else if (p(i) == 1.0) {
            cert.upsilon(i) = std::max(q(i) + lam - 1.0, 0.0);
            ++cert.M1;
        }
    }
    return {std::move(p), std::move(cert)};
}

DrsResult project_intersection(const RMat& Z, const ConstraintBox& box, const DrsConfig& cfg) {
    const int U = static_cast<int>(Z.rows());
    const int T = static_cast<int>(Z.cols());
    if (!feasibility_precheck(U, T, box))
        throw std::invalid_argument("project_intersection: constraint box fails the feasibility precheck");
    if (cfg.beta < 0 || cfg.K_max < 1 || !(cfg.tol > 0))
        throw std::invalid_argument("project_intersection: invalid DRS configuration");

    const double denom = cfg.beta + 1.0;
    RMat G = RMat::Zero(U, T);
    RMat V = RMat::Zero(U, T);
    DrsResult result;

    for (int k = 1; k <= cfg.K_max; ++k) {
        // column-wise projection onto C_U within the unit box
        RMat Vn = (cfg.beta * Z + G) / denom;
        for (int t = 0; t < T; ++t) {
            RVec col = Vn.col(t);
            const double lam = lambda_star(col, box.U_min, box.U_max);
            Vn.col(t) = apply_shift(col, lam);
        }
        // row-wise projection onto C_T plus the reflection correction
        RMat R = (cfg.beta * Z + 2.0 * Vn - G) / denom;
        for (int u = 0; u < U; ++u) {
            RVec row = R.row(u).transpose();
            const double lam = lambda_star(row, box.T_min, box.T_max);
            R.row(u) = apply_shift(row, lam).transpose();
        }
        G = R + G - Vn;

        if (k >= 2 && (Vn - V).norm() < cfg.tol) {
            result.V = std::move(Vn);
            result.iterations = k;
            result.converged = true;
            return result;
        }
        V = std::move(Vn);
    }
    result.V = std::move(V);
    result.iterations = cfg.K_max;
    result.converged = false;
    return result;
}

}  // namespace musched

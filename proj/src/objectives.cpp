#include "musched/objectives.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <stdexcept>

namespace musched {

namespace {

constexpr double kLog2E = 1.4426950408889634073599246810019;  // log2(e)

// Shared per-slot quantities. With A = L1 Hhat, everything the costs and
// gradients need reduces to entries of the Gram matrices
//   G = Hhat^H L1 Hhat   and   K = Hhat^H L1^2 Hhat = A^H A.
struct SlotCore {
    CMat A;
    CMat G;
    CMat K;
    double logdet = 0.0;  // log det(Hhat D^2 Hhat^H + n0 I_B)
};

Eigen::LLT<CMat> factor_slot(const CMat& Hhat, const RVec& c_t, double n0) {
    const int B = static_cast<int>(Hhat.rows());
    const RVec c2 = c_t.array().square();
    CMat S = Hhat * c2.cast<cxd>().asDiagonal() * Hhat.adjoint();
    S.diagonal().array() += n0;
    Eigen::LLT<CMat> llt(S);
    if (llt.info() != Eigen::Success) {
        const double jitter = 1e-12 * S.trace().real() / B;
        S.diagonal().array() += jitter;
        llt.compute(S);
        if (llt.info() != Eigen::Success)
            throw std::runtime_error("lmmse: Cholesky factorization failed even with jitter");
    }
    return llt;
}

SlotCore make_slot_core(const CMat& Hhat, const RVec& c_t, double n0) {
    if (!Hhat.allFinite()) throw std::invalid_argument("objectives: channel matrix has non-finite entries");
    if (!c_t.allFinite()) throw std::invalid_argument("objectives: scheduling column has non-finite entries");
    Eigen::LLT<CMat> llt = factor_slot(Hhat, c_t, n0);
    SlotCore core;
    core.A = llt.solve(Hhat);
    core.G = Hhat.adjoint() * core.A;
    core.K = core.A.adjoint() * core.A;
    core.logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().real().array().log().sum();
    return core;
}

void check_dims(const RMat& C, const CMat& Hhat) {
    if (C.rows() != Hhat.cols())
        throw std::invalid_argument("objectives: scheduling matrix rows must match channel columns");
}

}  // namespace

std::string to_string(ObjectiveKind kind) {
    switch (kind) {
        case ObjectiveKind::MseLmmse: return "mse-lmmse";
        case ObjectiveKind::Capacity: return "capacity";
        case ObjectiveKind::SumRate: return "sum-rate";
    }
    return "unknown";
}

CMat lmmse_weights_bform(const CMat& Hhat, const RVec& c_t, double n0) {
    if (!Hhat.allFinite()) throw std::invalid_argument("lmmse: channel matrix has non-finite entries");
    Eigen::LLT<CMat> llt = factor_slot(Hhat, c_t, n0);
    return llt.solve(Hhat * c_t.cast<cxd>().asDiagonal());
}

CMat lmmse_weights_uform(const CMat& Hhat, const RVec& c_t, double n0) {
    if (!Hhat.allFinite()) throw std::invalid_argument("lmmse: channel matrix has non-finite entries");
    const int U = static_cast<int>(Hhat.cols());
    const CMat HD = Hhat * c_t.cast<cxd>().asDiagonal();
    CMat S = HD.adjoint() * HD;
    S.diagonal().array() += n0;
    Eigen::LLT<CMat> llt(S);
    if (llt.info() != Eigen::Success) {
        const double jitter = 1e-12 * S.trace().real() / U;
        S.diagonal().array() += jitter;
        llt.compute(S);
        if (llt.info() != Eigen::Success)
            throw std::runtime_error("lmmse: Cholesky factorization failed even with jitter");
    }
    return llt.solve(HD.adjoint()).adjoint();
}

std::pair<CMat, CMat> lmmse_equalizer(const CMat& Hhat, const RVec& c_t, double n0) {
    const Eigen::Index B = Hhat.rows();
    const Eigen::Index U = Hhat.cols();
    CMat W = (U < B) ? lmmse_weights_uform(Hhat, c_t, n0) : lmmse_weights_bform(Hhat, c_t, n0);
    Eigen::LLT<CMat> llt = factor_slot(Hhat, c_t, n0);
    CMat L1 = llt.solve(CMat::Identity(B, B));
    return {std::move(W), std::move(L1)};
}

EqualizerBundle make_equalizer_bundle(const CMat& Hhat, const RMat& C, double n0) {
    check_dims(C, Hhat);
    EqualizerBundle bundle;
    bundle.W.reserve(C.cols());
    bundle.L1.reserve(C.cols());
    for (Eigen::Index t = 0; t < C.cols(); ++t) {
        auto [W, L1] = lmmse_equalizer(Hhat, C.col(t), n0);
        bundle.W.push_back(std::move(W));
        bundle.L1.push_back(std::move(L1));
    }
    return bundle;
}

double cost_mse(const RMat& C, const CMat& Hhat, double n0) {
    check_dims(C, Hhat);
    const int U = static_cast<int>(C.rows());
    double cost = 0.0;
    for (Eigen::Index t = 0; t < C.cols(); ++t) {
        const RVec c = C.col(t);
        const SlotCore core = make_slot_core(Hhat, c, n0);
        // || D - D^2 G D ||_F^2 + n0 * sum_i c_i^4 K_ii
        // (the outer mask D and the D inside W^H both touch the signal term)
        double acc = 0.0;
        for (int i = 0; i < U; ++i) {
            for (int j = 0; j < U; ++j) {
                const cxd entry =
                    (i == j ? cxd(c(i), 0.0) : cxd(0.0, 0.0)) - c(i) * c(i) * core.G(i, j) * c(j);
                acc += std::norm(entry);
            }
            acc += n0 * std::pow(c(i), 4) * core.K(i, i).real();
        }
        cost += acc;
    }
    return cost;
}

RMat grad_mse(const RMat& C, const CMat& Hhat, double n0) {
    check_dims(C, Hhat);
    const int U = static_cast<int>(C.rows());
    RMat grad(U, C.cols());
    for (Eigen::Index t = 0; t < C.cols(); ++t) {
        const RVec c = C.col(t);
        const SlotCore core = make_slot_core(Hhat, c, n0);
        const RVec c4 = c.array().pow(4);
        for (int i = 0; i < U; ++i) {
            double quad = 0.0;  // h_i^H L1 L2 L1 h_i with L2 = Hhat D^4 Hhat^H
            for (int j = 0; j < U; ++j) quad += c4(j) * std::norm(core.G(j, i));
            grad(i, t) = 2.0 * c(i) * (1.0 + quad - 2.0 * c(i) * c(i) * core.G(i, i).real());
        }
    }
    (void)n0;
    return grad;
}

double cost_capacity(const RMat& C, const CMat& Hhat, double n0) {
    check_dims(C, Hhat);
    const double B = static_cast<double>(Hhat.rows());
    double cost = 0.0;
    for (Eigen::Index t = 0; t < C.cols(); ++t) {
        const SlotCore core = make_slot_core(Hhat, C.col(t), n0);
        // log2 det(I + Hhat D^2 Hhat^H / n0) via det(S) = n0^B det(I + ...)
        cost -= (core.logdet - B * std::log(n0)) / std::log(2.0);
    }
    return cost;
}

RMat grad_capacity(const RMat& C, const CMat& Hhat, double n0) {
    check_dims(C, Hhat);
    const int U = static_cast<int>(C.rows());
    RMat grad(U, C.cols());
    for (Eigen::Index t = 0; t < C.cols(); ++t) {
        const SlotCore core = make_slot_core(Hhat, C.col(t), n0);
        // L3^-1 = n0 * L1, so the quadratic form reduces to n0 * G_ii
        for (int i = 0; i < U; ++i) grad(i, t) = -2.0 * C(i, t) * kLog2E * core.G(i, i).real();
    }
    return grad;
}

namespace {

struct UeSlotTerms {
    double phi = 0.0;     // desired signal power
    double interf = 0.0;  // inter-UE interference power
    double wnorm2 = 0.0;  // ||w_u||^2
    double psi = 0.0;     // interference + estimation + noise power
};

UeSlotTerms ue_terms(const SlotCore& core, const RVec& c, const RVec& Gamma, double n0, double s_gamma, int u) {
    UeSlotTerms T;
    const double cu = c(u);
    const double guu = core.G(u, u).real();
    T.phi = std::pow(cu, 4) * guu * guu;
    for (int j = 0; j < c.size(); ++j) {
        if (j == u) continue;
        T.interf += cu * cu * c(j) * c(j) * std::norm(core.G(u, j));
    }
    T.wnorm2 = cu * cu * core.K(u, u).real();
    T.psi = T.interf + T.wnorm2 * s_gamma + n0 * T.wnorm2;
    (void)Gamma;
    return T;
}

}  // namespace

double cost_sum_rate(const RMat& C, const CMat& Hhat, const RVec& Gamma, double n0) {
    check_dims(C, Hhat);
    if (Gamma.size() != C.rows())
        throw std::invalid_argument("cost_sum_rate: Gamma size must match UE count");
    const int U = static_cast<int>(C.rows());
    double cost = 0.0;
    for (Eigen::Index t = 0; t < C.cols(); ++t) {
        const RVec c = C.col(t);
        const SlotCore core = make_slot_core(Hhat, c, n0);
        const double s_gamma = (c.array().square() * Gamma.array()).sum();
        for (int u = 0; u < U; ++u) {
            if (c(u) == 0.0) continue;  // idle UE: SINR contribution is zero
            const UeSlotTerms T = ue_terms(core, c, Gamma, n0, s_gamma, u);
            if (!(T.psi > 0.0)) continue;  // zero equalizer column
            cost -= std::log2(1.0 + T.phi / T.psi);
        }
    }
    return cost;
}

RMat grad_sum_rate(const RMat& C, const CMat& Hhat, const RVec& Gamma, double n0) {
    check_dims(C, Hhat);
    if (Gamma.size() != C.rows())
        throw std::invalid_argument("grad_sum_rate: Gamma size must match UE count");
    const int U = static_cast<int>(C.rows());
    RMat grad = RMat::Zero(U, C.cols());
    for (Eigen::Index t = 0; t < C.cols(); ++t) {
        const RVec c = C.col(t);
        const SlotCore core = make_slot_core(Hhat, c, n0);
        const double s_gamma = (c.array().square() * Gamma.array()).sum();
        for (int u = 0; u < U; ++u) {
            if (c(u) == 0.0) continue;
            const UeSlotTerms T = ue_terms(core, c, Gamma, n0, s_gamma, u);
            if (!(T.psi > 0.0)) continue;
            const double cu = c(u);
            const double guu = core.G(u, u).real();
            const double kuu = core.K(u, u).real();
            const double sinr = T.phi / T.psi;
            const double outer = kLog2E / (1.0 + sinr);
            for (int i = 0; i < U; ++i) {
                double dphi, dwnorm2, dinterf;
                if (i == u) {
                    dphi = 4.0 * std::pow(cu, 3) * guu * guu * (1.0 - cu * cu * guu);
                    dwnorm2 = 2.0 * cu * kuu * (1.0 - 2.0 * cu * cu * guu);
                    dinterf = 0.0;
                    for (int j = 0; j < U; ++j) {
                        if (j == u) continue;
                        dinterf += 2.0 * cu * c(j) * c(j) * std::norm(core.G(u, j)) * (1.0 - 2.0 * cu * cu * guu);
                    }
                } else {
                    const double ci = c(i);
                    const double re_gk = (core.G(u, i) * core.K(i, u)).real();
                    dphi = -4.0 * std::pow(cu, 4) * ci * guu * std::norm(core.G(i, u));
                    dwnorm2 = -4.0 * cu * cu * ci * re_gk;
                    // j = i interferer plus the generic i != u, i != j block
                    dinterf = 2.0 * ci * cu * cu * std::norm(core.G(u, i)) *
                              (1.0 - 2.0 * ci * ci * core.G(i, i).real());
                    for (int j = 0; j < U; ++j) {
                        if (j == u || j == i) continue;
                        const double triple = (core.G(j, u) * core.G(u, i) * core.G(i, j)).real();
                        dinterf += -4.0 * ci * cu * cu * c(j) * c(j) * triple;
                    }
                }
                const double drho = dwnorm2 * s_gamma + T.wnorm2 * 2.0 * c(i) * Gamma(i);
                const double dnoise = n0 * dwnorm2;
                const double dpsi = dinterf + drho + dnoise;
                const double dsinr = (dphi * T.psi - T.phi * dpsi) / (T.psi * T.psi);
                grad(i, t) -= outer * dsinr;
            }
        }
    }
    return grad;
}

double regularizer(const RMat& C, double alpha) {
    return -alpha * (C.array() - 0.5).square().sum();
}

RMat grad_regularizer(const RMat& C, double alpha) {
    return -alpha * (2.0 * C.array() - 1.0);
}

double objective_cost(const ObjectiveSpec& spec, const RMat& C, const CMat& Hhat, const RVec& Gamma) {
    switch (spec.kind) {
        case ObjectiveKind::MseLmmse: return cost_mse(C, Hhat, spec.n0);
        case ObjectiveKind::Capacity: return cost_capacity(C, Hhat, spec.n0);
        case ObjectiveKind::SumRate: return cost_sum_rate(C, Hhat, Gamma, spec.n0);
    }
    throw std::invalid_argument("objective_cost: unknown objective kind");
}

RMat objective_grad(const ObjectiveSpec& spec, const RMat& C, const CMat& Hhat, const RVec& Gamma) {
    switch (spec.kind) {
        case ObjectiveKind::MseLmmse: return grad_mse(C, Hhat, spec.n0);
        case ObjectiveKind::Capacity: return grad_capacity(C, Hhat, spec.n0);
        case ObjectiveKind::SumRate: return grad_sum_rate(C, Hhat, Gamma, spec.n0);
    }
    throw std::invalid_argument("objective_grad: unknown objective kind");
}

}  // namespace musched

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace musched {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using cxd = std::complex<double>;

// System dimensions and radio parameters shared by all modules.
struct Scenario {
    int B = 0;         // receive antennas (B = L * n_A)
    int L = 1;         // access points
    int n_A = 0;       // antennas per AP
    int U = 0;         // user equipments
    int T = 0;         // time slots
    double rho_w = 0;  // per-UE transmit power [W]
    double eta_db = 0; // power-control dynamic range [dB]
    double N0_w = 0;   // noise power [W]
    int Q = 2;         // bits per modulation symbol
    int K_init = 1;    // random solver restarts

    void validate() const;
};

// Per-slot / per-UE activity bounds defining the sets C_U and C_T.
struct ConstraintBox {
    int U_min = 0;
    int U_max = 0;
    int T_min = 0;
    int T_max = 0;
};

enum class MatrixState { Relaxed, Binary };

// U x T scheduling matrix with an explicit relaxed/binary tag. The tag is
// never inferred from the values, so a relaxed matrix cannot silently leak
// into code that requires binary schedules.
struct SchedulingMatrix {
    RMat entries;
    MatrixState state = MatrixState::Relaxed;

    static SchedulingMatrix relaxed(RMat m);
    static SchedulingMatrix binary(RMat m);

    int users() const { return static_cast<int>(entries.rows()); }
    int slots() const { return static_cast<int>(entries.cols()); }
};

// Diagonal mask D_C[t] = diag(c_t) for one slot of a scheduling matrix.
struct MaskView {
    const RMat& matrix;
    int slot;

    RVec diagonal() const { return matrix.col(slot); }
};

// True iff every column sum of the binary matrix lies in [U_min, U_max] and
// every row sum lies in [T_min, T_max]. Requires a binary-tagged matrix.
bool is_feasible(const SchedulingMatrix& c, const ConstraintBox& box);

// Necessary joint-feasibility conditions for a binary U x T matrix to exist:
// ordered bounds plus U_min*T <= T_max*U and T_min*U <= U_max*T. Used as the
// gate before solver entry.
bool feasibility_precheck(int U, int T, const ConstraintBox& box);

// Column u of the result is column u of Hhat scaled by c_t[u].
template <typename DerivedH, typename DerivedC>
CMat mask_channel(const Eigen::MatrixBase<DerivedH>& Hhat, const Eigen::MatrixBase<DerivedC>& c_t) {
    if (Hhat.cols() != c_t.size())
        throw std::invalid_argument("mask_channel: channel has " + std::to_string(Hhat.cols()) +
                                    " columns but mask has " + std::to_string(c_t.size()) + " entries");
    return Hhat * c_t.template cast<cxd>().asDiagonal();
}

}  // namespace musched

#include "musched/model.hpp"

#include <stdexcept>

namespace musched {

void Scenario::validate() const {
    if (B < 1 || L < 1 || n_A < 1 || U < 1 || T < 1)
        throw std::invalid_argument("Scenario: all counts must be >= 1");
    if (B != L * n_A)
        throw std::invalid_argument("Scenario: B must equal L * n_A");
    if (!(rho_w > 0))
        throw std::invalid_argument("Scenario: rho_w must be positive");
    if (!(N0_w > 0))
        throw std::invalid_argument("Scenario: N0_w must be positive");
    if (eta_db < 0)
        throw std::invalid_argument("Scenario: eta_db must be >= 0");
    if (Q != 2 && Q != 4 && Q != 6)
        throw std::invalid_argument("Scenario: Q must be one of {2, 4, 6}");
    if (K_init < 1)
        throw std::invalid_argument("Scenario: K_init must be >= 1");
}

SchedulingMatrix SchedulingMatrix::relaxed(RMat m) {
    if ((m.array() < 0.0).any() || (m.array() > 1.0).any())
        throw std::invalid_argument("SchedulingMatrix: relaxed entries must lie in [0, 1]");
    return SchedulingMatrix{std::move(m), MatrixState::Relaxed};
}

SchedulingMatrix SchedulingMatrix::binary(RMat m) {
    if (((m.array() != 0.0) && (m.array() != 1.0)).any())
        throw std::invalid_argument("SchedulingMatrix: binary entries must be exactly 0 or 1");
    return SchedulingMatrix{std::move(m), MatrixState::Binary};
}

bool is_feasible(const SchedulingMatrix& c, const ConstraintBox& box) {
    if (c.state != MatrixState::Binary)
        throw std::invalid_argument("is_feasible: scheduling matrix must be binary");
    const RVec col_sums = c.entries.colwise().sum();
    const RVec row_sums = c.entries.rowwise().sum();
    if ((col_sums.array() < box.U_min).any() || (col_sums.array() > box.U_max).any()) return false;
    if ((row_sums.array() < box.T_min).any() || (row_sums.array() > box.T_max).any()) return false;
    return true;
}

bool feasibility_precheck(int U, int T, const ConstraintBox& box) {
    if (U < 1 || T < 1) return false;
    if (box.U_min < 0 || box.T_min < 0) return false;
    if (box.U_min > box.U_max || box.T_min > box.T_max) return false;
    if (box.U_max > U || box.T_max > T) return false;
    if (static_cast<long long>(box.U_min) * T > static_cast<long long>(box.T_max) * U) return false;
    if (static_cast<long long>(box.T_min) * U > static_cast<long long>(box.U_max) * T) return false;
    return true;
}

}  // namespace musched

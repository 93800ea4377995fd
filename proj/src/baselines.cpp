#include "musched/baselines.hpp"

#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace musched {

SchedulingMatrix random_schedule(int U, int T, std::uint64_t seed) {
    if (U < 1 || T < 1) throw std::invalid_argument("random_schedule: U and T must be >= 1");
    if (U % T != 0) throw std::invalid_argument("random_schedule: T must divide U");
    const int per_slot = U / T;
    std::vector<int> ues(U);
    std::iota(ues.begin(), ues.end(), 0);
    Rng rng(seed);
    rng.shuffle(ues.begin(), ues.end());
    RMat C = RMat::Zero(U, T);
    for (int k = 0; k < U; ++k) C(ues[k], k / per_slot) = 1.0;
    return SchedulingMatrix::binary(std::move(C));
}

SchedulingMatrix aua_schedule(int U, int T) {
    if (U < 1 || T < 1) throw std::invalid_argument("aua_schedule: U and T must be >= 1");
    return SchedulingMatrix::binary(RMat::Ones(U, T));
}

namespace {

bool lex_less(const RMat& a, const RMat& b) {
    for (Eigen::Index u = 0; u < a.rows(); ++u)
        for (Eigen::Index t = 0; t < a.cols(); ++t) {
            if (a(u, t) != b(u, t)) return a(u, t) < b(u, t);
        }
    return false;
}

struct EsState {
    const ObjectiveSpec* spec;
    const CMat* Hhat;
    const RVec* Gamma;
    ConstraintBox box;
    int U, T;
    std::uint64_t cap;
    std::uint64_t evaluated = 0;
    bool have_best = false;
    double best_cost = 0.0;
    RMat best;
    std::vector<std::vector<int>> column_patterns;  // index lists, popcount in [U_min, U_max]
};

void es_recurse(EsState& st, RMat& C, std::vector<int>& row_sums, int t) {
    if (t == st.T) {
        for (int u = 0; u < st.U; ++u)
            if (row_sums[u] < st.box.T_min) return;
        if (++st.evaluated > st.cap)
            throw std::runtime_error("exhaustive_search: feasible-matrix count exceeds the cap of " +
                                     std::to_string(st.cap) + "; use a smaller instance");
        const double cost = objective_cost(*st.spec, C, *st.Hhat, *st.Gamma);
        if (!st.have_best || cost < st.best_cost ||
            (cost == st.best_cost && lex_less(C, st.best))) {
            st.have_best = true;
            st.best_cost = cost;
            st.best = C;
        }
        return;
    }
    const int remaining = st.T - t - 1;
    for (const auto& pattern : st.column_patterns) {
        bool ok = true;
        for (int u : pattern)
            if (row_sums[u] + 1 > st.box.T_max) {
                ok = false;
                break;
            }
        if (!ok) continue;
        for (int u : pattern) {
            row_sums[u] += 1;
            C(u, t) = 1.0;
        }
        for (int u = 0; u < st.U && ok; ++u)
            if (row_sums[u] + remaining < st.box.T_min) ok = false;  // cannot reach T_min anymore
        if (ok) es_recurse(st, C, row_sums, t + 1);
        for (int u : pattern) {
            row_sums[u] -= 1;
            C(u, t) = 0.0;
        }
    }
}

}  // namespace

SolveResult exhaustive_search(const ObjectiveSpec& objective, const ChannelSet& channel, int T,
                              const ConstraintBox& box, std::uint64_t cap) {
    const int U = static_cast<int>(channel.Hhat.cols());
    if (!feasibility_precheck(U, T, box))
        throw std::invalid_argument("exhaustive_search: constraint box fails the feasibility precheck");

    EsState st;
    st.spec = &objective;
    st.Hhat = &channel.Hhat;
    st.Gamma = &channel.Gamma;
    st.box = box;
    st.U = U;
    st.T = T;
    st.cap = cap;

    // all column index sets with size in [U_min, U_max], ascending bitmask order
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << U); ++mask) {
        const int pop = __builtin_popcountll(mask);
        if (pop < box.U_min || pop > box.U_max) continue;
        std::vector<int> idx;
        idx.reserve(pop);
        for (int u = 0; u < U; ++u)
            if (mask & (std::uint64_t{1} << u)) idx.push_back(u);
        st.column_patterns.push_back(std::move(idx));
    }

    RMat C = RMat::Zero(U, T);
    std::vector<int> row_sums(U, 0);
    es_recurse(st, C, row_sums, 0);
    if (!st.have_best) throw std::runtime_error("exhaustive_search: no feasible scheduling matrix exists");

    SolveResult result;
    result.C_binary = SchedulingMatrix::binary(st.best);
    result.C_relaxed = SchedulingMatrix::relaxed(std::move(st.best));
    result.cost = st.best_cost;
    result.restart_index = 0;
    result.iterations = static_cast<int>(std::min<std::uint64_t>(st.evaluated, INT32_MAX));
    return result;
}

SchedulingMatrix load_schedule(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_schedule: cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::vector<double> row;
        double v;
        while (ls >> v) {
            if (v != 0.0 && v != 1.0) throw std::runtime_error("load_schedule: entries must be 0 or 1");
            row.push_back(v);
        }
        if (row.empty()) continue;
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::runtime_error("load_schedule: inconsistent row lengths");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("load_schedule: empty file " + path);
    RMat C(rows.size(), rows.front().size());
    for (std::size_t u = 0; u < rows.size(); ++u)
        for (std::size_t t = 0; t < rows[u].size(); ++t) C(u, t) = rows[u][t];
    return SchedulingMatrix::binary(std::move(C));
}

void save_schedule(const std::string& path, const SchedulingMatrix& c) {
    if (c.state != MatrixState::Binary)
        throw std::invalid_argument("save_schedule: matrix must be binary");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_schedule: cannot open " + path);
    for (Eigen::Index u = 0; u < c.entries.rows(); ++u) {
        for (Eigen::Index t = 0; t < c.entries.cols(); ++t) {
            if (t) out << ' ';
            out << static_cast<int>(c.entries(u, t));
        }
        out << '\n';
    }
}

}  // namespace musched

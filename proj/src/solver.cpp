#include "musched/solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <stdexcept>

namespace musched {

void FbsConfig::validate() const {
    if (!(tau_init > 0)) throw std::invalid_argument("FbsConfig: tau_init must be positive");
    if (I_max < 0) throw std::invalid_argument("FbsConfig: I_max must be >= 0");
    if (K_init < 1) throw std::invalid_argument("FbsConfig: K_init must be >= 1");
    if (!(tol > 0)) throw std::invalid_argument("FbsConfig: tol must be positive");
    if (!(bt_shrink > 0 && bt_shrink < 1)) throw std::invalid_argument("FbsConfig: bt_shrink must be in (0,1)");
    if (bt_window < 1) throw std::invalid_argument("FbsConfig: bt_window must be >= 1");
}

namespace {

double full_cost(const ObjectiveSpec& spec, const RMat& C, const CMat& Hhat, const RVec& Gamma) {
    return objective_cost(spec, C, Hhat, Gamma) + regularizer(C, spec.alpha);
}

RMat full_grad(const ObjectiveSpec& spec, const RMat& C, const CMat& Hhat, const RVec& Gamma) {
    RMat g = objective_grad(spec, C, Hhat, Gamma) + grad_regularizer(C, spec.alpha);
    if (!g.allFinite()) throw std::runtime_error("fbs: non-finite gradient for objective " + to_string(spec.kind));
    return g;
}

}  // namespace

RMat fbs_solve(const ObjectiveSpec& objective, const CMat& Hhat, const RVec& Gamma, int T,
               const ConstraintBox& box, const FbsConfig& cfg, Rng& rng, FbsTrace* trace) {
    cfg.validate();
    const int U = static_cast<int>(Hhat.cols());
    if (!feasibility_precheck(U, T, box))
        throw std::invalid_argument("fbs_solve: constraint box fails the feasibility precheck");

    bool drs_warning = false;
    auto project = [&](const RMat& X) {
        DrsResult r = project_intersection(X, box, cfg.drs);
        drs_warning = drs_warning || !r.converged;
        return std::move(r.V);
    };

    RMat init(U, T);
    for (int t = 0; t < T; ++t)
        for (int u = 0; u < U; ++u) init(u, t) = rng.uniform01();

    RMat C = project(init);
    if (cfg.I_max == 0) {
        if (trace) trace->drs_warning = drs_warning;
        return C;
    }

    double f = full_cost(objective, C, Hhat, Gamma);
    RMat g = full_grad(objective, C, Hhat, Gamma);
    std::deque<double> history{f};
    double tau = cfg.tau_init;
    int iters = 0;
    if (trace) trace->objective_values.push_back(f);

    for (int i = 0; i < cfg.I_max; ++i) {
        const double f_ref = *std::max_element(history.begin(), history.end());
        RMat cand, dC;
        double f_cand = 0.0;
        for (int bt = 0;; ++bt) {
            cand = project(C - tau * g);
            dC = cand - C;
            f_cand = full_cost(objective, cand, Hhat, Gamma);
            const double model =
                f_ref + (g.array() * dC.array()).sum() + dC.squaredNorm() / (2.0 * tau) + 1e-12;
            if (f_cand <= model || !cfg.spectral_steps || tau <= cfg.tau_min || bt >= 30) break;
            tau = std::max(tau * cfg.bt_shrink, cfg.tau_min);
        }

        const double step_norm = dC.norm();
        RMat g_new = full_grad(objective, cand, Hhat, Gamma);
        if (cfg.spectral_steps) {
            const double denom = (dC.array() * (g_new - g).array()).sum();
            if (denom > 0) tau = std::min(std::max(dC.squaredNorm() / denom, cfg.tau_min), 1e8);
        }
        C = std::move(cand);
        f = f_cand;
        g = std::move(g_new);
        history.push_back(f);
        if (static_cast<int>(history.size()) > cfg.bt_window) history.pop_front();
        ++iters;
        if (trace) trace->objective_values.push_back(f);
        if (step_norm < cfg.tol) break;
    }

    if (trace) {
        trace->iterations = iters;
        trace->drs_warning = drs_warning;
    }
    return C;
}

RMat fbs_solve(const ObjectiveSpec& objective, const ChannelSet& channel, int T, const ConstraintBox& box,
               const FbsConfig& cfg, std::uint64_t seed, FbsTrace* trace) {
    Rng rng(seed);
    return fbs_solve(objective, channel.Hhat, channel.Gamma, T, box, cfg, rng, trace);
}

namespace {

// Balanced-degree completion used as the last-resort repair: build a feasible
// binary matrix whose total activity is as close as possible to the relaxed
// mass, filling the neediest rows first.
RMat balanced_completion(const RMat& Crel, const ConstraintBox& box) {
    const int U = static_cast<int>(Crel.rows());
    const int T = static_cast<int>(Crel.cols());
    const long long lo = std::max<long long>(1LL * box.T_min * U, 1LL * box.U_min * T);
    const long long hi = std::min<long long>(1LL * box.T_max * U, 1LL * box.U_max * T);
    long long total = std::llround(Crel.sum());
    total = std::min(std::max(total, lo), hi);

    auto balanced = [&](int n, int lo_b, int hi_b, const std::vector<double>& weight) {
        std::vector<int> target(n, static_cast<int>(total / n));
        int extras = static_cast<int>(total - 1LL * n * (total / n));
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return weight[a] > weight[b]; });
        for (int k = 0; k < extras; ++k) target[order[k]] += 1;
        for (int& v : target) v = std::min(std::max(v, lo_b), hi_b);
        long long s = std::accumulate(target.begin(), target.end(), 0LL);
        for (std::size_t pass = 0; s != total && pass < target.size() * 4; ++pass) {
            int& v = target[order[pass % order.size()]];
            if (s < total && v < hi_b) {
                ++v;
                ++s;
            } else if (s > total && v > lo_b) {
                --v;
                --s;
            }
        }
        return target;
    };

    std::vector<double> row_mass(U), col_mass(T);
    for (int u = 0; u < U; ++u) row_mass[u] = Crel.row(u).sum();
    for (int t = 0; t < T; ++t) col_mass[t] = Crel.col(t).sum();
    const std::vector<int> row_target = balanced(U, box.T_min, box.T_max, row_mass);
    const std::vector<int> col_target = balanced(T, box.U_min, box.U_max, col_mass);

    RMat X = RMat::Zero(U, T);
    std::vector<int> need(row_target);
    std::vector<int> placed(U, 0);
    std::vector<int> col_order(T);
    std::iota(col_order.begin(), col_order.end(), 0);
    std::stable_sort(col_order.begin(), col_order.end(),
                     [&](int a, int b) { return col_target[a] > col_target[b]; });
    for (int t : col_order) {
        std::vector<int> ues(U);
        std::iota(ues.begin(), ues.end(), 0);
        std::stable_sort(ues.begin(), ues.end(), [&](int a, int b) {
            if (need[a] != need[b]) return need[a] > need[b];
            return Crel(a, t) > Crel(b, t);
        });
        int taken = 0;
        for (int u : ues) {
            if (taken >= col_target[t]) break;
            if (placed[u] >= box.T_max || X(u, t) > 0.5) continue;
            X(u, t) = 1.0;
            need[u] -= 1;
            placed[u] += 1;
            ++taken;
        }
        if (taken < col_target[t]) throw std::runtime_error("quantize: feasible completion not found");
    }
    return X;
}

struct PhaseState {
    RMat X;
    std::vector<int> row_count;
    std::vector<int> col_count;
};

void place(PhaseState& st, int u, int t) {
    st.X(u, t) = 1.0;
    st.row_count[u] += 1;
    st.col_count[t] += 1;
}

}  // namespace

SchedulingMatrix quantize(const RMat& C_relaxed, const ObjectiveSpec& objective, const CMat& Hhat,
                          const RVec& Gamma, const ConstraintBox& box, std::vector<std::string>* warnings) {
    const int U = static_cast<int>(C_relaxed.rows());
    const int T = static_cast<int>(C_relaxed.cols());
    if (!feasibility_precheck(U, T, box))
        throw std::invalid_argument("quantize: constraint box fails the feasibility precheck");
    if ((C_relaxed.array() < -1e-9).any() || (C_relaxed.array() > 1.0 + 1e-9).any())
        throw std::invalid_argument("quantize: relaxed matrix must lie in [0, 1]");

    auto warn = [&](const std::string& msg) {
        if (warnings) warnings->push_back(msg);
    };

    // already binary and feasible: return unchanged
    if (((C_relaxed.array() == 0.0) || (C_relaxed.array() == 1.0)).all()) {
        SchedulingMatrix asis = SchedulingMatrix::binary(C_relaxed);
        if (is_feasible(asis, box)) return asis;
    }

    PhaseState st{RMat::Zero(U, T), std::vector<int>(U, 0), std::vector<int>(T, 0)};

    // lower phase: per slot, the U_min highest relaxed values among UEs still
    // short of T_min; UEs that must appear in every remaining slot to reach
    // T_min are taken first, and the pool is topped up from already-satisfied
    // UEs below T_max when the eligible set runs dry
    bool used_fallback = false;
    for (int t = 0; t < T && !used_fallback; ++t) {
        const int rem_after = T - t - 1;
        std::vector<int> order(U);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return C_relaxed(a, t) > C_relaxed(b, t); });

        std::vector<char> chosen(U, 0);
        std::vector<int> selected;
        for (int u : order) {
            const int need = box.T_min - st.row_count[u];
            if (need > rem_after && st.row_count[u] < box.T_max) {
                selected.push_back(u);
                chosen[u] = 1;
            }
        }
        for (int u : order) {
            if (static_cast<int>(selected.size()) >= box.U_min) break;
            if (chosen[u] || st.row_count[u] >= box.T_min) continue;
            selected.push_back(u);
            chosen[u] = 1;
        }
        for (int u : order) {  // top-up from satisfied UEs with spare slots
            if (static_cast<int>(selected.size()) >= box.U_min) break;
            if (chosen[u] || st.row_count[u] >= box.T_max) continue;
            selected.push_back(u);
            chosen[u] = 1;
        }
        if (static_cast<int>(selected.size()) < box.U_min ||
            static_cast<int>(selected.size()) > box.U_max) {
            used_fallback = true;
            break;
        }
        for (int u : selected) place(st, u, t);
    }

    if (!used_fallback) {
        // row repair: give every deficient UE its best slots with spare capacity
        for (int u = 0; u < U && !used_fallback; ++u) {
            while (st.row_count[u] < box.T_min) {
                int best = -1;
                for (int t = 0; t < T; ++t) {
                    if (st.X(u, t) > 0.5 || st.col_count[t] >= box.U_max) continue;
                    if (best < 0 || C_relaxed(u, t) > C_relaxed(u, best)) best = t;
                }
                if (best < 0) {
                    used_fallback = true;
                    break;
                }
                place(st, u, best);
                warn("quantize: row repair activated UE " + std::to_string(u));
            }
        }
    }

    if (!used_fallback) {
        // upper phase: activate the strongest unscheduled UEs per slot while
        // the activation strictly decreases the objective
        const int u_gap = box.U_max - box.U_min;
        if (u_gap > 0) {
            double f_cur = objective_cost(objective, st.X, Hhat, Gamma);
            for (int t = 0; t < T; ++t) {
                std::vector<int> cand;
                for (int u = 0; u < U; ++u)
                    if (st.X(u, t) < 0.5 && st.row_count[u] < box.T_max) cand.push_back(u);
                std::stable_sort(cand.begin(), cand.end(),
                                 [&](int a, int b) { return C_relaxed(a, t) > C_relaxed(b, t); });
                if (static_cast<int>(cand.size()) > u_gap) cand.resize(u_gap);
                for (int u : cand) {
                    if (st.col_count[t] >= box.U_max) break;
                    RMat trial = st.X;
                    trial(u, t) = 1.0;
                    const double f_new = objective_cost(objective, trial, Hhat, Gamma);
                    if (f_new < f_cur - 1e-12) {
                        place(st, u, t);
                        f_cur = f_new;
                    }
                }
            }
        }
    }

    SchedulingMatrix out = SchedulingMatrix::binary(used_fallback ? balanced_completion(C_relaxed, box)
                                                                  : std::move(st.X));
    if (!is_feasible(out, box)) {
        out = SchedulingMatrix::binary(balanced_completion(C_relaxed, box));
        used_fallback = true;
        if (!is_feasible(out, box))
            throw std::runtime_error("quantize: could not reach a feasible binary schedule");
    }
    if (used_fallback) warn("quantize: balanced completion fallback used");
    return out;
}

SchedulingMatrix quantize(const RMat& C_relaxed, const ObjectiveSpec& objective, const ChannelSet& channel,
                          const ConstraintBox& box, std::vector<std::string>* warnings) {
    return quantize(C_relaxed, objective, channel.Hhat, channel.Gamma, box, warnings);
}

SolveResult schedule(const ObjectiveSpec& objective, const ChannelSet& channel, int T,
                     const ConstraintBox& box, const FbsConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    SolveResult best;
    bool have_best = false;
    std::vector<std::string> failures;

    for (int k = 0; k < cfg.K_init; ++k) {
        try {
            Rng rng = derive_rng(seed, "restart", static_cast<std::uint64_t>(k));
            FbsTrace trace;
            RMat relaxed = fbs_solve(objective, channel.Hhat, channel.Gamma, T, box, cfg, rng, &trace);
            std::vector<std::string> warnings;
            if (trace.drs_warning) warnings.push_back("fbs: DRS projection hit K_max without converging");
            SchedulingMatrix binary = quantize(relaxed, objective, channel.Hhat, channel.Gamma, box, &warnings);
            const double cost = objective_cost(objective, binary.entries, channel.Hhat, channel.Gamma);
            if (!have_best || cost < best.cost) {
                best.C_binary = std::move(binary);
                best.C_relaxed = SchedulingMatrix::relaxed(std::move(relaxed));
                best.cost = cost;
                best.restart_index = k;
                best.iterations = trace.iterations;
                best.warnings = std::move(warnings);
                have_best = true;
            }
        } catch (const std::exception& e) {
            failures.push_back("restart " + std::to_string(k) + ": " + e.what());
        }
    }

    if (!have_best) {
        std::string msg = "schedule: all restarts failed";
        for (const auto& f : failures) msg += "; " + f;
        throw std::runtime_error(msg);
    }
    for (const auto& f : failures) best.warnings.push_back(f);
    return best;
}

}  // namespace musched

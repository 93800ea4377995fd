#pragma once

#include "musched/channel.hpp"
#include "musched/model.hpp"
#include "musched/objectives.hpp"
#include "musched/projection.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace musched {

struct FbsConfig {
    double tau_init = 0.01;  // initial step size
    int I_max = 100;         // gradient-step iteration cap
    int K_init = 1;          // random restarts
    double tol = 1e-6;       // stop when the iterate change drops below this
    double bt_shrink = 0.5;  // backtracking shrink factor
    int bt_window = 10;      // nonmonotone sufficient-decrease window
    double tau_min = 1e-8;
    bool spectral_steps = true;  // Barzilai-Borwein steps; false = fixed tau_init
    DrsConfig drs;

    void validate() const;
};

struct FbsTrace {
    std::vector<double> objective_values;  // F + R after each accepted step
    int iterations = 0;
    bool drs_warning = false;
};

struct SolveResult {
    SchedulingMatrix C_binary;
    SchedulingMatrix C_relaxed;
    double cost = 0.0;  // F on the binary schedule (regularizer excluded)
    int restart_index = 0;
    int iterations = 0;
    std::vector<std::string> warnings;
};

// Forward-backward splitting on the relaxed problem: gradient steps on F + R
// followed by projection onto C_U ∩ C_T ∩ [0,1]^{UxT}. Returns the relaxed
// final iterate (a U x T matrix with entries in [0, 1]).
RMat fbs_solve(const ObjectiveSpec& objective, const CMat& Hhat, const RVec& Gamma, int T,
               const ConstraintBox& box, const FbsConfig& cfg, Rng& rng, FbsTrace* trace = nullptr);

RMat fbs_solve(const ObjectiveSpec& objective, const ChannelSet& channel, int T, const ConstraintBox& box,
               const FbsConfig& cfg, std::uint64_t seed, FbsTrace* trace = nullptr);

// Two-phase quantization: fill each slot's U_min strongest eligible UEs,
// then activate up to U_max - U_min extra UEs per slot when doing so strictly
// decreases the objective. Repair passes guarantee an exactly feasible binary
// output for every box that passes the precheck.
SchedulingMatrix quantize(const RMat& C_relaxed, const ObjectiveSpec& objective, const CMat& Hhat,
                          const RVec& Gamma, const ConstraintBox& box,
                          std::vector<std::string>* warnings = nullptr);

SchedulingMatrix quantize(const RMat& C_relaxed, const ObjectiveSpec& objective, const ChannelSet& channel,
                          const ConstraintBox& box, std::vector<std::string>* warnings = nullptr);

// K_init independent FBS + quantize pipelines with derived seeds; returns the
// binary candidate of minimum F, ties to the lowest restart index.
SolveResult schedule(const ObjectiveSpec& objective, const ChannelSet& channel, int T,
                     const ConstraintBox& box, const FbsConfig& cfg, std::uint64_t seed);

}  // namespace musched

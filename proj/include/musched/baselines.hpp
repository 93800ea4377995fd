#pragma once

#include "musched/channel.hpp"
#include "musched/model.hpp"
#include "musched/objectives.hpp"
#include "musched/solver.hpp"

#include <cstdint>
#include <string>

namespace musched {

// Uniformly random partition of the U UEs into T slots of exactly U/T UEs.
// Requires T to divide U.
SchedulingMatrix random_schedule(int U, int T, std::uint64_t seed);

// All UEs active in all slots.
SchedulingMatrix aua_schedule(int U, int T);

// Enumerates every binary U x T matrix satisfying the box (column patterns
// with row-sum pruning), evaluates F on each, and returns the global
// minimizer; exact cost ties break toward the lexicographically smallest
// matrix in row-major order. Errors out once the number of feasible matrices
// exceeds `cap`.
SolveResult exhaustive_search(const ObjectiveSpec& objective, const ChannelSet& channel, int T,
                              const ConstraintBox& box, std::uint64_t cap = 10'000'000);

// Textual schedule interchange: U rows x T columns of whitespace-delimited
// 0/1 entries.
SchedulingMatrix load_schedule(const std::string& path);
void save_schedule(const std::string& path, const SchedulingMatrix& c);

}  // namespace musched

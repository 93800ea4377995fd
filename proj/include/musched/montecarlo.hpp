#pragma once

#include "musched/channel.hpp"
#include "musched/model.hpp"
#include "musched/modulation.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace musched {

struct MonteCarloConfig {
    int trials = 10000;
    double n0 = 1.0;  // noise variance per receive antenna and equalizer noise power
    int block = 512;  // trials simulated per matrix batch
};

// Per-UE reduction of the trial stream: bit errors, empirical joint bit
// histograms per bit position, and symbol-error energy. Accumulation is
// associative, so tests can fill it directly with synthetic detections.
struct UeAccumulator {
    std::int64_t bit_errors = 0;
    std::int64_t bits = 0;
    double symbol_err2 = 0.0;
    std::int64_t symbols = 0;
    // joint[q][b][bhat] counts for bit position q
    std::array<std::array<std::array<std::int64_t, 2>, 2>, 6> joint{};
};

struct TrialStats {
    int Q = 0;
    int trials = 0;
    std::vector<UeAccumulator> per_ue;

    void record_bits(int u, const std::uint8_t* tx, const std::uint8_t* rx, int nbits);
    void record_symbol(int u, cxd tx, cxd rx);
};

// Link-level simulation of a fixed binary schedule: per trial and slot draw
// bits for active UEs, transmit through Hhat D with CN(0, n0) noise, detect
// with the slot's LMMSE filter, and hard-demap. Deterministic per seed.
TrialStats run_monte_carlo(const ChannelSet& channel, const SchedulingMatrix& c, const ModulationScheme& mod,
                           const MonteCarloConfig& cfg, std::uint64_t seed);

// Per-UE metrics from the accumulated records; UEs never active get NaN
// (BER/HMI/MSE) so callers can filter them from distributions.
RVec ber(const TrialStats& stats);
RVec hmi(const TrialStats& stats);
RVec mse_metric(const TrialStats& stats);

double mse_to_db(double mse_linear);

// Deterministic per-UE achievable rate from the realized channel estimate and
// error matrix; inactive slots contribute zero.
RVec achievable_rate(const ChannelSet& channel, const SchedulingMatrix& c, double n0);

enum class Direction { Cdf, Ccdf };

// Nearest-rank 90th percentile: CDF-90 is the smallest sample x with
// fraction(<= x) >= 0.9; CCDF-90 the largest x with fraction(> x) >= 0.9.
double percentile90(std::vector<double> samples, Direction direction);

struct MetricsReport {
    RVec ber;
    RVec hmi;
    RVec mse_db;
    RVec rate;
};

MetricsReport evaluate_schedule(const ChannelSet& channel, const SchedulingMatrix& c,
                                const ModulationScheme& mod, const MonteCarloConfig& cfg,
                                std::uint64_t seed);

}  // namespace musched

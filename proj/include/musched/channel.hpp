#pragma once

#include "musched/model.hpp"
#include "musched/rng.hpp"

#include <cstdint>
#include <string>

namespace musched {

// Thermal noise N0 = W * k_B * T0 * 10^(NF/10).
struct NoiseModel {
    double bandwidth_hz = 100e6;
    double boltzmann_jpk = 1.381e-23;
    double noise_temp_k = 290.0;
    double noise_figure_db = 9.0;
};

double noise_power(const NoiseModel& nm);

// Synthetic channel generator standing in for ray-traced data. The mmWave
// model sums planar-wave ULA steering vectors with a dominant free-space
// line-of-sight path; the cell-free model draws Rayleigh fading scaled by
// log-distance path loss between each UE and the AP owning the antenna.
struct ChannelModel {
    enum class Kind { MmwaveUla, CellfreeRayleigh };

    Kind kind = Kind::MmwaveUla;
    double area_x_m = 150.0;
    double area_y_m = 200.0;
    double bs_height_m = 15.0;
    double ue_height_m = 1.65;
    double carrier_hz = 60e9;
    int path_count = 3;                // mmWave multipath components
    double pathloss_exponent = 3.5;    // cell-free log-distance exponent

    void validate() const;
};

// All channel-side quantities for one realization.
struct ChannelSet {
    CMat Hbar;   // raw B x U channel
    RVec Delta;  // power-control coefficients delta_u in (0, 1]
    CMat H;      // effective channel sqrt(rho/N0) * Hbar * diag(Delta)
    CMat Hhat;   // estimate H + E
    CMat E;      // estimation error
    RVec Gamma;  // per-UE error variances
};

// UE drop: row u holds the (x, y) ground position of UE u.
RMat generate_ue_positions(const ChannelModel& model, int U, Rng& rng);

// AP ground positions for the cell-free layout (near-square grid), row per AP.
RMat ap_grid_positions(const ChannelModel& model, int L);

CMat channel_from_positions(const ChannelModel& model, const Scenario& scenario, const RMat& ue_positions,
                            Rng& rng);

// Deterministic given the seed: positions are drawn first, then per-UE gains.
CMat generate_channel(const ChannelModel& model, const Scenario& scenario, std::uint64_t seed);

// delta_u^2 = min{ ||hbar_u||^2, 10^(eta/10) * min_u' ||hbar_u'||^2 } / ||hbar_u||^2.
// Throws if any column has zero norm (UE unreachable).
RVec power_control(const CMat& Hbar, double eta_db);

// Column u of the result is sqrt(rho/N0) * delta_u * hbar_u.
CMat effective_channel(const CMat& Hbar, const RVec& Delta, double rho_w, double N0_w);

struct ChannelEstimate {
    CMat Hhat;
    CMat E;
    RVec Gamma;
};

// Least-squares estimation model: E entries i.i.d. CN(0, n0/U), Gamma_u = n0/U.
ChannelEstimate estimate_channel(const CMat& H, double n0, Rng& rng);

// Full pipeline for one realization: raw channel, power control, effective
// channel at the scenario's physical rho/N0, and an estimate at the
// normalized noise power est_n0 (the unit-noise convention used downstream).
ChannelSet make_channel_set(const ChannelModel& model, const Scenario& scenario, double est_n0,
                            std::uint64_t master_seed, std::uint64_t realization);

// Textual interchange format so externally generated channels can be
// injected: header "B U L n_A" followed by B rows of interleaved re/im pairs.
void save_channel(const std::string& path, const CMat& Hbar, int L, int n_A);

struct LoadedChannel {
    CMat Hbar;
    int L = 0;
    int n_A = 0;
};

LoadedChannel load_channel(const std::string& path);

}  // namespace musched

#include "musched/channel.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace musched {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kSpeedOfLight = 299792458.0;

}  // namespace

double noise_power(const NoiseModel& nm) {
    if (!(nm.bandwidth_hz > 0) || !(nm.boltzmann_jpk > 0) || !(nm.noise_temp_k > 0))
        throw std::invalid_argument("noise_power: bandwidth, Boltzmann constant, and temperature must be positive");
    return nm.bandwidth_hz * nm.boltzmann_jpk * nm.noise_temp_k * std::pow(10.0, nm.noise_figure_db / 10.0);
}

void ChannelModel::validate() const {
    if (!(area_x_m > 0) || !(area_y_m > 0))
        throw std::invalid_argument("ChannelModel: area dimensions must be positive");
    if (path_count < 1)
        throw std::invalid_argument("ChannelModel: path_count must be >= 1");
    if (!(carrier_hz > 0))
        throw std::invalid_argument("ChannelModel: carrier frequency must be positive");
}

RMat generate_ue_positions(const ChannelModel& model, int U, Rng& rng) {
    RMat pos(U, 2);
    for (int u = 0; u < U; ++u) {
        pos(u, 0) = rng.uniform(0.0, model.area_x_m);
        pos(u, 1) = rng.uniform(0.0, model.area_y_m);
    }
    return pos;
}

RMat ap_grid_positions(const ChannelModel& model, int L) {
    const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(L))));
    const int rows = (L + cols - 1) / cols;
    RMat pos(L, 2);
    for (int l = 0; l < L; ++l) {
        const int r = l / cols;
        const int c = l % cols;
        pos(l, 0) = (c + 0.5) * model.area_x_m / cols;
        pos(l, 1) = (r + 0.5) * model.area_y_m / rows;
    }
    return pos;
}

namespace {

CMat mmwave_channel(const ChannelModel& model, const Scenario& scenario, const RMat& ue_positions, Rng& rng) {
    const int B = scenario.B;
    const int U = scenario.U;
    const double lambda = kSpeedOfLight / model.carrier_hz;
    // single BS with a half-wavelength ULA at the bottom edge, array along x
    const double bs_x = model.area_x_m / 2.0;
    const double bs_y = 0.0;
    const double dz = model.bs_height_m - model.ue_height_m;

    CMat H(B, U);
    for (int u = 0; u < U; ++u) {
        const double dx = ue_positions(u, 0) - bs_x;
        const double dy = ue_positions(u, 1) - bs_y;
        const double d3 = std::sqrt(dx * dx + dy * dy + dz * dz);
        const double fspl_amp = lambda / (4.0 * kPi * std::max(d3, 1.0));
        const double sin_los = dx / std::max(std::sqrt(dx * dx + dy * dy), 1e-9);

        CVec col = CVec::Zero(B);
        for (int p = 0; p < model.path_count; ++p) {
            double sin_aoa, amp;
            if (p == 0) {  // line-of-sight, free-space gain
                sin_aoa = sin_los;
                amp = fspl_amp;
            } else {  // reflected paths, 5-15 dB below LoS at random angles
                sin_aoa = std::sin(rng.uniform(-kPi / 2.0, kPi / 2.0));
                amp = fspl_amp * std::pow(10.0, -rng.uniform(5.0, 15.0) / 20.0);
            }
            const double phase = rng.uniform(0.0, 2.0 * kPi);
            const cxd gain = amp * cxd(std::cos(phase), std::sin(phase));
            for (int b = 0; b < B; ++b) {
                const double psi = kPi * b * sin_aoa;
                col(b) += gain * cxd(std::cos(psi), std::sin(psi));
            }
        }
        H.col(u) = col;
    }
    return H;
}

CMat cellfree_channel(const ChannelModel& model, const Scenario& scenario, const RMat& ue_positions, Rng& rng) {
    const int B = scenario.B;
    const int U = scenario.U;
    const int n_A = scenario.n_A;
    const double lambda = kSpeedOfLight / model.carrier_hz;
    const double dz = model.bs_height_m - model.ue_height_m;
    const RMat aps = ap_grid_positions(model, scenario.L);
    const double ref_amp = lambda / (4.0 * kPi);  // free-space amplitude at 1 m

    CMat H(B, U);
    for (int u = 0; u < U; ++u) {
        for (int b = 0; b < B; ++b) {
            const int l = b / n_A;
            const double dx = ue_positions(u, 0) - aps(l, 0);
            const double dy = ue_positions(u, 1) - aps(l, 1);
            const double d3 = std::max(std::sqrt(dx * dx + dy * dy + dz * dz), 1.0);
            const double amp = ref_amp * std::pow(d3, -model.pathloss_exponent / 2.0);
            H(b, u) = amp * rng.cgaussian(1.0);
        }
    }
    return H;
}

}  // namespace

CMat channel_from_positions(const ChannelModel& model, const Scenario& scenario, const RMat& ue_positions,
                            Rng& rng) {
    model.validate();
    if (ue_positions.rows() != scenario.U || ue_positions.cols() != 2)
        throw std::invalid_argument("channel_from_positions: positions must be U x 2");
    if (model.kind == ChannelModel::Kind::MmwaveUla) return mmwave_channel(model, scenario, ue_positions, rng);
    return cellfree_channel(model, scenario, ue_positions, rng);
}

CMat generate_channel(const ChannelModel& model, const Scenario& scenario, std::uint64_t seed) {
    Rng rng(seed);
    const RMat pos = generate_ue_positions(model, scenario.U, rng);
    return channel_from_positions(model, scenario, pos, rng);
}

RVec power_control(const CMat& Hbar, double eta_db) {
    const int U = static_cast<int>(Hbar.cols());
    RVec norms2(U);
    for (int u = 0; u < U; ++u) {
        norms2(u) = Hbar.col(u).squaredNorm();
        if (!(norms2(u) > 0))
            throw std::invalid_argument("power_control: UE " + std::to_string(u) + " has zero channel norm");
    }
    const double floor2 = std::pow(10.0, eta_db / 10.0) * norms2.minCoeff();
    RVec delta(U);
    for (int u = 0; u < U; ++u) delta(u) = std::sqrt(std::min(norms2(u), floor2) / norms2(u));
    return delta;
}

CMat effective_channel(const CMat& Hbar, const RVec& Delta, double rho_w, double N0_w) {
    if (!(rho_w > 0) || !(N0_w > 0))
        throw std::invalid_argument("effective_channel: rho and N0 must be positive");
    if (Delta.size() != Hbar.cols())
        throw std::invalid_argument("effective_channel: Delta size must match channel columns");
    return std::sqrt(rho_w / N0_w) * (Hbar * Delta.cast<cxd>().asDiagonal());
}

ChannelEstimate estimate_channel(const CMat& H, double n0, Rng& rng) {
    if (n0 < 0) throw std::invalid_argument("estimate_channel: n0 must be >= 0");
    const int B = static_cast<int>(H.rows());
    const int U = static_cast<int>(H.cols());
    const double var = U > 0 ? n0 / U : 0.0;
    CMat E(B, U);
    for (int u = 0; u < U; ++u)
        for (int b = 0; b < B; ++b) E(b, u) = rng.cgaussian(var);
    ChannelEstimate est;
    est.Hhat = H + E;
    est.E = std::move(E);
    est.Gamma = RVec::Constant(U, var);
    return est;
}

ChannelSet make_channel_set(const ChannelModel& model, const Scenario& scenario, double est_n0,
                            std::uint64_t master_seed, std::uint64_t realization) {
    ChannelSet cs;
    cs.Hbar = generate_channel(model, scenario, derive_seed(master_seed, "channel", realization));
    cs.Delta = power_control(cs.Hbar, scenario.eta_db);
    cs.H = effective_channel(cs.Hbar, cs.Delta, scenario.rho_w, scenario.N0_w);
    Rng est_rng = derive_rng(master_seed, "chanest", realization);
    ChannelEstimate est = estimate_channel(cs.H, est_n0, est_rng);
    cs.Hhat = std::move(est.Hhat);
    cs.E = std::move(est.E);
    cs.Gamma = std::move(est.Gamma);
    return cs;
}

void save_channel(const std::string& path, const CMat& Hbar, int L, int n_A) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_channel: cannot open " + path);
    out.precision(17);
    out << Hbar.rows() << ' ' << Hbar.cols() << ' ' << L << ' ' << n_A << '\n';
    for (Eigen::Index b = 0; b < Hbar.rows(); ++b) {
        for (Eigen::Index u = 0; u < Hbar.cols(); ++u) {
            if (u) out << ' ';
            out << Hbar(b, u).real() << ' ' << Hbar(b, u).imag();
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("save_channel: write failed for " + path);
}

LoadedChannel load_channel(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_channel: cannot open " + path);
    int B = 0, U = 0;
    LoadedChannel lc;
    if (!(in >> B >> U >> lc.L >> lc.n_A)) throw std::runtime_error("load_channel: bad header in " + path);
    if (B < 1 || U < 1 || lc.L < 1 || lc.n_A < 1 || B != lc.L * lc.n_A)
        throw std::runtime_error("load_channel: inconsistent header in " + path);
    lc.Hbar.resize(B, U);
    for (int b = 0; b < B; ++b)
        for (int u = 0; u < U; ++u) {
            double re = 0, im = 0;
            if (!(in >> re >> im)) throw std::runtime_error("load_channel: truncated data in " + path);
            lc.Hbar(b, u) = cxd(re, im);
        }
    return lc;
}

}  // namespace musched

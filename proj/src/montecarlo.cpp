#include "musched/montecarlo.hpp"

#include "musched/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace musched {

void TrialStats::record_bits(int u, const std::uint8_t* tx, const std::uint8_t* rx, int nbits) {
    UeAccumulator& acc = per_ue[u];
    for (int i = 0; i < nbits; ++i) {
        acc.bit_errors += tx[i] != rx[i];
        acc.joint[i % Q][tx[i]][rx[i]] += 1;
    }
    acc.bits += nbits;
}

void TrialStats::record_symbol(int u, cxd tx, cxd rx) {
    UeAccumulator& acc = per_ue[u];
    acc.symbol_err2 += std::norm(tx - rx);
    acc.symbols += 1;
}

TrialStats run_monte_carlo(const ChannelSet& channel, const SchedulingMatrix& c, const ModulationScheme& mod,
                           const MonteCarloConfig& cfg, std::uint64_t seed) {
    if (c.state != MatrixState::Binary)
        throw std::invalid_argument("run_monte_carlo: schedule must be binary");
    if (cfg.trials < 1) throw std::invalid_argument("run_monte_carlo: trials must be >= 1");
    const int U = c.users();
    const int T = c.slots();
    const int B = static_cast<int>(channel.Hhat.rows());
    if (U != channel.Hhat.cols())
        throw std::invalid_argument("run_monte_carlo: schedule and channel disagree on UE count");

    TrialStats stats;
    stats.Q = mod.Q;
    stats.trials = cfg.trials;
    stats.per_ue.resize(U);

    Rng rng(seed);
    std::vector<std::uint8_t> tx_bits(mod.Q), rx_bits(mod.Q);

    for (int t = 0; t < T; ++t) {
        std::vector<int> active;
        for (int u = 0; u < U; ++u)
            if (c.entries(u, t) == 1.0) active.push_back(u);
        if (active.empty()) continue;
        const int A = static_cast<int>(active.size());

        auto [W, L1] = lmmse_equalizer(channel.Hhat, c.entries.col(t), cfg.n0);
        // only active columns of W matter; detection is shat_u = w_u^H y
        CMat Wa(B, A);
        CMat Ha(B, A);
        for (int a = 0; a < A; ++a) {
            Wa.col(a) = W.col(active[a]);
            Ha.col(a) = channel.Hhat.col(active[a]);
        }
        const CMat WaH = Wa.adjoint();

        std::vector<std::uint8_t> bits(static_cast<std::size_t>(A) * mod.Q);
        for (int done = 0; done < cfg.trials;) {
            const int n = std::min(cfg.block, cfg.trials - done);
            CMat S(A, n);
            std::vector<std::uint8_t> batch_bits(static_cast<std::size_t>(A) * mod.Q * n);
            for (int j = 0; j < n; ++j) {
                for (int a = 0; a < A; ++a) {
                    std::uint8_t* bptr = batch_bits.data() + (static_cast<std::size_t>(j) * A + a) * mod.Q;
                    for (int q = 0; q < mod.Q; ++q) bptr[q] = static_cast<std::uint8_t>(rng.next_u64() & 1);
                    S(a, j) = mod.map(bptr);
                }
            }
            CMat Y = Ha * S;
            for (int j = 0; j < n; ++j)
                for (int b = 0; b < B; ++b) Y(b, j) += rng.cgaussian(cfg.n0);
            CMat Shat = WaH * Y;
            for (int j = 0; j < n; ++j) {
                for (int a = 0; a < A; ++a) {
                    const std::uint8_t* bptr =
                        batch_bits.data() + (static_cast<std::size_t>(j) * A + a) * mod.Q;
                    mod.demap(Shat(a, j), rx_bits.data());
                    stats.record_bits(active[a], bptr, rx_bits.data(), mod.Q);
                    stats.record_symbol(active[a], S(a, j), Shat(a, j));
                }
            }
            done += n;
        }
    }
    return stats;
}

RVec ber(const TrialStats& stats) {
    RVec out(static_cast<Eigen::Index>(stats.per_ue.size()));
    for (std::size_t u = 0; u < stats.per_ue.size(); ++u) {
        const auto& acc = stats.per_ue[u];
        out(static_cast<Eigen::Index>(u)) =
            acc.bits > 0 ? static_cast<double>(acc.bit_errors) / static_cast<double>(acc.bits)
                         : std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

RVec hmi(const TrialStats& stats) {
    RVec out(static_cast<Eigen::Index>(stats.per_ue.size()));
    for (std::size_t u = 0; u < stats.per_ue.size(); ++u) {
        const auto& acc = stats.per_ue[u];
        if (acc.bits == 0) {
            out(static_cast<Eigen::Index>(u)) = std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        double total = 0.0;
        for (int q = 0; q < stats.Q; ++q) {
            const auto& j = acc.joint[q];
            const double n = static_cast<double>(j[0][0] + j[0][1] + j[1][0] + j[1][1]);
            if (n == 0.0) continue;
            // H(b) = 1 by the equiprobable-bit assumption; subtract H(b | bhat)
            double cond = 0.0;
            for (int bh = 0; bh < 2; ++bh) {
                const double p_bh = static_cast<double>(j[0][bh] + j[1][bh]) / n;
                for (int b = 0; b < 2; ++b) {
                    const double p = static_cast<double>(j[b][bh]) / n;
                    if (p > 0.0 && p_bh > 0.0) cond -= p * std::log2(p / p_bh);
                }
            }
            total += 1.0 - cond;
        }
        out(static_cast<Eigen::Index>(u)) = total;
    }
    return out;
}

RVec mse_metric(const TrialStats& stats) {
    RVec out(static_cast<Eigen::Index>(stats.per_ue.size()));
    for (std::size_t u = 0; u < stats.per_ue.size(); ++u) {
        const auto& acc = stats.per_ue[u];
        out(static_cast<Eigen::Index>(u)) =
            acc.symbols > 0 ? acc.symbol_err2 / static_cast<double>(acc.symbols)
                            : std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

double mse_to_db(double mse_linear) { return 10.0 * std::log10(std::max(mse_linear, 1e-30)); }

RVec achievable_rate(const ChannelSet& channel, const SchedulingMatrix& c, double n0) {
    if (c.state != MatrixState::Binary)
        throw std::invalid_argument("achievable_rate: schedule must be binary");
    const int U = c.users();
    const int T = c.slots();
    RVec rate = RVec::Zero(U);
    for (int t = 0; t < T; ++t) {
        const RVec ct = c.entries.col(t);
        auto [W, L1] = lmmse_equalizer(channel.Hhat, ct, n0);
        const CMat Hm = mask_channel(channel.Hhat, ct);
        const CMat Em = mask_channel(channel.E, ct);
        for (int u = 0; u < U; ++u) {
            if (ct(u) == 0.0) continue;
            const CVec w = W.col(u);
            const double sig = std::norm(w.dot(Hm.col(u)));
            if (sig == 0.0) continue;
            double denom = n0 * w.squaredNorm();
            for (int j = 0; j < U; ++j) {
                if (j != u) denom += std::norm(w.dot(Hm.col(j)));
                denom += std::norm(w.dot(Em.col(j)));
            }
            if (denom > 0.0) rate(u) += std::log2(1.0 + sig / denom);
        }
    }
    return rate;
}

double percentile90(std::vector<double> samples, Direction direction) {
    if (samples.empty()) throw std::invalid_argument("percentile90: no samples");
    samples.erase(std::remove_if(samples.begin(), samples.end(), [](double v) { return std::isnan(v); }),
                  samples.end());
    if (samples.empty()) throw std::invalid_argument("percentile90: all samples are NaN");
    std::sort(samples.begin(), samples.end());
    const auto n = static_cast<double>(samples.size());
    if (direction == Direction::Cdf) {
        // smallest x with count(<= x) >= 0.9 n
        const auto rank = static_cast<std::size_t>(std::ceil(0.9 * n - 1e-9));
        return samples[std::min(samples.size() - 1, std::max<std::size_t>(rank, 1) - 1)];
    }
    // largest x with count(> x) >= 0.9 n, falling back to the minimum
    for (std::size_t k = samples.size(); k-- > 0;) {
        const double x = samples[k];
        const auto above = static_cast<double>(samples.end() - std::upper_bound(samples.begin(), samples.end(), x));
        if (above >= 0.9 * n - 1e-9) return x;
    }
    return samples.front();
}

MetricsReport evaluate_schedule(const ChannelSet& channel, const SchedulingMatrix& c,
                                const ModulationScheme& mod, const MonteCarloConfig& cfg,
                                std::uint64_t seed) {
    const TrialStats stats = run_monte_carlo(channel, c, mod, cfg, seed);
    MetricsReport report;
    report.ber = ber(stats);
    report.hmi = hmi(stats);
    const RVec mse_lin = mse_metric(stats);
    report.mse_db.resize(mse_lin.size());
    for (Eigen::Index u = 0; u < mse_lin.size(); ++u)
        report.mse_db(u) = std::isnan(mse_lin(u)) ? mse_lin(u) : mse_to_db(mse_lin(u));
    report.rate = achievable_rate(channel, c, cfg.n0);
    return report;
}

}  // namespace musched

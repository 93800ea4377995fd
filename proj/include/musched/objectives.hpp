#pragma once

#include "musched/model.hpp"

#include <string>
#include <utility>
#include <vector>

namespace musched {

enum class ObjectiveKind { MseLmmse, Capacity, SumRate };

std::string to_string(ObjectiveKind kind);

struct ObjectiveSpec {
    ObjectiveKind kind = ObjectiveKind::MseLmmse;
    double alpha = 0.0;  // binarization regularizer weight
    double n0 = 1.0;     // noise power seen by equalizer and costs
};

// Per-slot LMMSE equalizer W[t] = (Hhat D^2 Hhat^H + n0 I_B)^-1 Hhat D and the
// inverse L1[t] it is built from.
struct EqualizerBundle {
    std::vector<CMat> W;
    std::vector<CMat> L1;
};

// The two algebraically equivalent routes to W; lmmse_equalizer picks the
// U x U form when U < B and the B x B form otherwise.
CMat lmmse_weights_bform(const CMat& Hhat, const RVec& c_t, double n0);
CMat lmmse_weights_uform(const CMat& Hhat, const RVec& c_t, double n0);

std::pair<CMat, CMat> lmmse_equalizer(const CMat& Hhat, const RVec& c_t, double n0);

EqualizerBundle make_equalizer_bundle(const CMat& Hhat, const RMat& C, double n0);

// Post-LMMSE equalization MSE, closed form over unit-power symbols and
// CN(0, n0) noise with the estimate treated as the true channel.
double cost_mse(const RMat& C, const CMat& Hhat, double n0);
RMat grad_mse(const RMat& C, const CMat& Hhat, double n0);

// Negative channel capacity, Cholesky-based log-determinant.
double cost_capacity(const RMat& C, const CMat& Hhat, double n0);
RMat grad_capacity(const RMat& C, const CMat& Hhat, double n0);

// Negative post-LMMSE sum of achievable rates with channel-estimation error
// variances Gamma.
double cost_sum_rate(const RMat& C, const CMat& Hhat, const RVec& Gamma, double n0);
RMat grad_sum_rate(const RMat& C, const CMat& Hhat, const RVec& Gamma, double n0);

// R(C) = -alpha * sum |C_ut - 0.5|^2 pushes the relaxation toward {0, 1}.
double regularizer(const RMat& C, double alpha);
RMat grad_regularizer(const RMat& C, double alpha);

// Dispatch on the configured objective kind (regularizer not included).
double objective_cost(const ObjectiveSpec& spec, const RMat& C, const CMat& Hhat, const RVec& Gamma);
RMat objective_grad(const ObjectiveSpec& spec, const RMat& C, const CMat& Hhat, const RVec& Gamma);

}  // namespace musched

#pragma once

#include <string>
#include <string_view>

#include "boltzmap/rng.hpp"

namespace boltzmap {

/// Hidden-unit potential family. Each kind fixes the prior density rho(z)
/// of a hidden unit (bias c enters as a location/threshold parameter):
///   Linear       Gaussian, mean -c, unit variance
///   Relu         Gaussian truncated to [0, inf), location -c, unit scale
///   Step         Bernoulli on {0,1} with P(1) = sigmoid(-c)
///   Exponential  Poisson with rate exp(-c)
enum class ActivationKind { Linear, Relu, Step, Exponential };

/// Canonical serialized names: "linear", "relu", "step", "exp".
std::string to_string(ActivationKind kind);
ActivationKind activation_from_string(std::string_view name);

/// Cumulant generating function K(q) = log E_rho[e^{qz}] of the hidden
/// prior. K(0) = 0 for every kind and bias. Throws NumericError when the
/// Exponential kind would overflow (q - c beyond double range).
double cgf(ActivationKind kind, double bias, double q);

/// n-th cumulant of rho. Closed forms for n in {1,2} (all kinds), for all n
/// of Linear (0 beyond 2) and Exponential (exp(-bias) for every n). Other
/// (kind, n) pairs use Richardson-extrapolated central differences of cgf.
double cumulant(ActivationKind kind, double bias, int order);

/// Mean of z under P(z | input); equals dK/dq at q = input.
double conditional_mean(ActivationKind kind, double bias, double input);

/// Mode of z under P(z | input): the activation function proper.
double conditional_mode(ActivationKind kind, double bias, double input);

/// One draw from P(z | input).
double sample_hidden(ActivationKind kind, double bias, double input, Rng& rng);

}  // namespace boltzmap

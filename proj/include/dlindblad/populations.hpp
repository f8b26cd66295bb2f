#pragma once

// Birth-death dynamics of the populations P(n) = rho_nn when D1 = 0:
//
//   dP(n)/dt = t+(n-1) P(n-1) + t-(n+1) P(n+1) - [t+(n) + t-(n)] P(n)
//   t+(n) = (D2 - lambda) (n+1) f^2(n+1) = (D2 - lambda) [n+1]
//   t-(n) = (D2 + lambda) n f^2(n)       = (D2 + lambda) [n]
//
// The truncation boundary is reflecting: t+(dim-1) = 0.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "dlindblad/deformation.hpp"
#include "dlindblad/environment.hpp"
#include "dlindblad/errors.hpp"

namespace dlindblad {

using PopulationVector = std::vector<double>;

struct TransitionRates {
    double t_plus = 0.0;
    double t_minus = 0.0;
};

inline TransitionRates rates(const DeformationSpec& spec, const EnvironmentCoefficients& env, int n) {
    return {(env.d2 - env.lambda) * eval_box(spec, n + 1), (env.d2 + env.lambda) * eval_box(spec, n)};
}

inline std::vector<double> population_rhs(const DeformationSpec& spec,
                                          const EnvironmentCoefficients& env,
                                          const PopulationVector& p) {
    const int d = static_cast<int>(p.size());
    // flux[n] = net probability current from level n to n + 1
    std::vector<double> flux(p.size(), 0.0);
    for (int n = 0; n + 1 < d; ++n) {
        flux[n] = rates(spec, env, n).t_plus * p[n] - rates(spec, env, n + 1).t_minus * p[n + 1];
    }
    std::vector<double> dp(p.size(), 0.0);
    for (int n = 0; n < d; ++n) {
        dp[n] = (n > 0 ? flux[n - 1] : 0.0) - flux[n];
    }
    return dp;
}

// Fixed-step RK4 for the population chain.
inline PopulationVector integrate_populations(const DeformationSpec& spec,
                                              const EnvironmentCoefficients& env,
                                              PopulationVector p, double t_final, double dt) {
    if (!(dt > 0.0) || !(t_final >= 0.0)) {
        throw Error("integrate_populations needs dt > 0 and t_final >= 0");
    }
    const long steps = t_final == 0.0 ? 0 : static_cast<long>(std::ceil(t_final / dt - 1e-9));
    const double h = steps == 0 ? 0.0 : t_final / static_cast<double>(steps);
    const auto axpy = [](const PopulationVector& x, double a, const std::vector<double>& y) {
        PopulationVector out(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + a * y[i];
        return out;
    };
    for (long k = 0; k < steps; ++k) {
        const auto k1 = population_rhs(spec, env, p);
        const auto k2 = population_rhs(spec, env, axpy(p, 0.5 * h, k1));
        const auto k3 = population_rhs(spec, env, axpy(p, 0.5 * h, k2));
        const auto k4 = population_rhs(spec, env, axpy(p, h, k3));
        for (std::size_t i = 0; i < p.size(); ++i) {
            p[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    return p;
}

// Geometric ratio (D2 - lambda) / (D2 + lambda) of successive steady-state populations.
inline double steady_ratio(const EnvironmentCoefficients& env) {
    if (env.d2 < env.lambda) {
        throw NonContractive("D2 = " + std::to_string(env.d2) + " < lambda = " +
                             std::to_string(env.lambda) + ": no normalizable steady state");
    }
    return (env.d2 - env.lambda) / (env.d2 + env.lambda);
}

// P(n) = P(0) r^n normalized over the truncated range. The deformation does
// not enter; `spec` is accepted only so that callers pass the full model.
inline PopulationVector steady_state(const DeformationSpec& /*spec*/,
                                     const EnvironmentCoefficients& env, int dim) {
    if (dim < 1) {
        throw Error("steady_state needs at least one level");
    }
    const double r = steady_ratio(env);
    PopulationVector p(static_cast<std::size_t>(dim));
    double w = 1.0;
    double z = 0.0;
    for (auto& x : p) {
        x = w;
        z += w;
        w *= r;
    }
    for (auto& x : p) x /= z;
    return p;
}

// P(0) of the untruncated geometric distribution.
inline double infinite_range_p0(const EnvironmentCoefficients& env) { return 1.0 - steady_ratio(env); }

// max_n |t-(n) P(n) - t+(n-1) P(n-1)| over n = 1..dim-1.
inline double detailed_balance_report(const DeformationSpec& spec, const EnvironmentCoefficients& env,
                                      const PopulationVector& p) {
    double worst = 0.0;
    for (int n = 1; n < static_cast<int>(p.size()); ++n) {
        const double residual =
            rates(spec, env, n).t_minus * p[n] - rates(spec, env, n - 1).t_plus * p[n - 1];
        worst = std::max(worst, std::abs(residual));
    }
    return worst;
}

// Same residual with the common factor n f^2(n) of both flows divided out:
// max_n |(D2 + lambda) P(n) - (D2 - lambda) P(n-1)|. Deformation-free, so it
// is bit-identical across deformation kinds.
inline double detailed_balance_link_residual(const EnvironmentCoefficients& env, const PopulationVector& p) {
    double worst = 0.0;
    for (std::size_t n = 1; n < p.size(); ++n) {
        worst = std::max(worst, std::abs((env.d2 + env.lambda) * p[n] - (env.d2 - env.lambda) * p[n - 1]));
    }
    return worst;
}

// Z = sum_{n=0}^{n_max} exp(-theta (2n + 1)), theta = omega / 2T.
inline double partition_function(double theta, int n_max) {
    if (!(theta > 0.0)) {
        throw Error("partition function needs theta > 0");
    }
    double z = 0.0;
    for (int n = n_max; n >= 0; --n) {
        z += std::exp(-theta * (2.0 * n + 1.0));
    }
    return z;
}

inline double partition_function_closed(double theta) { return 1.0 / (2.0 * std::sinh(theta)); }

// E_n = omega (n + 1/2).
inline double oscillator_energy(double omega, int n) { return omega * (n + 0.5); }

// Normalized Boltzmann weights exp(-E_n / T) on dim levels, with
// omega / T = 2 theta.
inline PopulationVector boltzmann_distribution(double theta, int dim) {
    PopulationVector p(static_cast<std::size_t>(dim));
    double z = 0.0;
    for (int n = 0; n < dim; ++n) {
        p[n] = std::exp(-theta * (2.0 * n + 1.0));
        z += p[n];
    }
    for (auto& x : p) x /= z;
    return p;
}

// theta = omega / 2T from coth(theta); infinite at T = 0.
inline double theta_from_coth(double coth) { return std::atanh(1.0 / coth); }

}  // namespace dlindblad

#pragma once

// Environment (diffusion / dissipation) coefficients in natural units
// hbar = m = k = 1.
//
//   D1 = omega D_qq - D_pp / omega + 2i D_pq
//   D2 = omega D_qq + D_pp / omega
//
// Admissible coefficients satisfy D_pp > 0, D_qq > 0 and
// D_pp D_qq - D_pq^2 >= lambda^2 / 4.

#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <type_traits>
#include <variant>

#include "dlindblad/errors.hpp"

namespace dlindblad {

struct EnvironmentCoefficients {
    double omega = 1.0;
    double lambda = 0.0;
    double d_qq = 0.0;
    double d_pp = 0.0;
    double d_pq = 0.0;
    std::complex<double> d1{0.0, 0.0};
    double d2 = 0.0;
    // coth(omega / 2T); 1 encodes T = 0. Present only for thermal construction.
    std::optional<double> coth_factor;

    // Temperature factor seen by the thermal-form equations: the stored
    // coth when available, otherwise D2 / lambda (valid whenever D1 = 0).
    double effective_coth() const { return coth_factor ? *coth_factor : d2 / lambda; }
    bool is_thermal_form() const { return d1 == std::complex<double>(0.0, 0.0); }
    bool is_zero_temperature() const { return effective_coth() == 1.0; }
};

// Relative slack for the inequality checks; thermal inputs at T = 0 sit
// exactly on the boundary and round either way.
inline constexpr double kConstraintRelTol = 1e-12;

struct ConstraintMargins {
    double dpp = 0.0;          // D_pp
    double dqq = 0.0;          // D_qq
    double uncertainty = 0.0;  // D_pp D_qq - D_pq^2 - lambda^2/4
    double contraction = 0.0;  // D2 - lambda
};

inline ConstraintMargins constraint_margins(const EnvironmentCoefficients& env) {
    return {env.d_pp, env.d_qq,
            env.d_pp * env.d_qq - env.d_pq * env.d_pq - env.lambda * env.lambda / 4.0,
            env.d2 - env.lambda};
}

// Throws ConstraintViolation / NonContractive for inadmissible coefficients.
inline void validate(const EnvironmentCoefficients& env) {
    if (!(env.omega > 0.0) || !std::isfinite(env.omega)) {
        throw Error("omega must be positive");
    }
    if (!(env.lambda > 0.0) || !std::isfinite(env.lambda)) {
        throw NonDissipative("dissipation constant lambda must be positive");
    }
    const auto m = constraint_margins(env);
    if (!(m.dpp > 0.0)) {
        throw ConstraintViolation(Constraint::DppPositive,
                                  "constraint (i) violated: D_pp = " + std::to_string(env.d_pp) +
                                      " is not positive");
    }
    if (!(m.dqq > 0.0)) {
        throw ConstraintViolation(Constraint::DqqPositive,
                                  "constraint (ii) violated: D_qq = " + std::to_string(env.d_qq) +
                                      " is not positive");
    }
    const double bound = env.lambda * env.lambda / 4.0;
    if (m.uncertainty < -kConstraintRelTol * bound) {
        std::ostringstream os;
        os << "constraint (iii) violated: D_pp D_qq - D_pq^2 = "
           << env.d_pp * env.d_qq - env.d_pq * env.d_pq << " < lambda^2/4 = " << bound;
        throw ConstraintViolation(Constraint::Uncertainty, os.str());
    }
    if (m.contraction < -kConstraintRelTol * env.lambda) {
        std::ostringstream os;
        os << "D2 = " << env.d2 << " < lambda = " << env.lambda
           << ": no normalizable steady state";
        throw NonContractive(os.str());
    }
}

// Derived D1, D2 without any admissibility check.
inline EnvironmentCoefficients coefficients_unchecked(double omega, double lambda, double d_qq,
                                                      double d_pp, double d_pq) {
    EnvironmentCoefficients env;
    env.omega = omega;
    env.lambda = lambda;
    env.d_qq = d_qq;
    env.d_pp = d_pp;
    env.d_pq = d_pq;
    if (omega > 0.0) {
        env.d1 = {omega * d_qq - d_pp / omega, 2.0 * d_pq};
        env.d2 = omega * d_qq + d_pp / omega;
    }
    return env;
}

inline EnvironmentCoefficients from_diffusion(double omega, double lambda, double d_qq,
                                              double d_pp, double d_pq) {
    auto env = coefficients_unchecked(omega, lambda, d_qq, d_pp, d_pq);
    validate(env);
    return env;
}

// Couplings (a_j, b_j) of the environment operators V_j = a_j p + b_j q.
struct Coupling {
    std::complex<double> a;
    std::complex<double> b;
};

inline EnvironmentCoefficients couplings_unchecked(double omega, std::span<const Coupling> pairs) {
    double sum_a2 = 0.0;
    double sum_b2 = 0.0;
    std::complex<double> sum_ab{0.0, 0.0};
    for (const auto& [a, b] : pairs) {
        sum_a2 += std::norm(a);
        sum_b2 += std::norm(b);
        sum_ab += std::conj(a) * b;
    }
    return coefficients_unchecked(omega, -sum_ab.imag(), 0.5 * sum_a2, 0.5 * sum_b2,
                                  -0.5 * sum_ab.real());
}

inline EnvironmentCoefficients from_environment_couplings(double omega,
                                                          std::span<const Coupling> pairs) {
    if (pairs.empty()) {
        throw Error("at least one coupling pair is required");
    }
    auto env = couplings_unchecked(omega, pairs);
    if (!(env.lambda > 0.0)) {
        throw NonDissipative("couplings give lambda = " + std::to_string(env.lambda) +
                             "; lambda = -Im sum conj(a_j) b_j must be positive");
    }
    validate(env);
    return env;
}

struct ZeroTemperature {};
struct Theta {
    double value;  // omega / 2T
};
struct CothFactor {
    double value;  // coth(omega / 2T) >= 1
};
using Temperature = std::variant<ZeroTemperature, Theta, CothFactor>;

inline double coth_of(const Temperature& temperature) {
    return std::visit(
        [](const auto& t) -> double {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, ZeroTemperature>) {
                return 1.0;
            } else if constexpr (std::is_same_v<T, Theta>) {
                if (!(t.value > 0.0)) {
                    throw Error("theta = omega/2T must be positive");
                }
                return 1.0 / std::tanh(t.value);
            } else {
                if (!(t.value >= 1.0) || !std::isfinite(t.value)) {
                    throw Error("coth factor must be finite and >= 1");
                }
                return t.value;
            }
        },
        temperature);
}

inline EnvironmentCoefficients thermal_unchecked(double omega, double lambda, double coth) {
    auto env = coefficients_unchecked(omega, lambda, 0.5 * lambda * coth / omega,
                                      0.5 * lambda * omega * coth, 0.0);
    // Identical to the generic formulas; pinned to avoid round-off in D2 - lambda.
    env.d1 = {0.0, 0.0};
    env.d2 = lambda * coth;
    env.coth_factor = coth;
    return env;
}

// Coefficients for which the asymptotic state is the Gibbs state at the
// given temperature.
inline EnvironmentCoefficients thermal(double omega, double lambda,
                                       const Temperature& temperature) {
    auto env = thermal_unchecked(omega, lambda, coth_of(temperature));
    validate(env);
    return env;
}

}  // namespace dlindblad

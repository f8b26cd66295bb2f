#pragma once

// Deformation functions f(n) and the q-box bracket [n].
//
// The deformed ladder operators are A = a f(N), A^dag = f(N) a^dag. For the
// q-oscillator f(n) = sqrt([n]/n) with
//   [n] = sinh(n tau) / sinh(tau)      q = e^tau   (QReal)
//   [n] = sin(n tau) / sin(tau)        q = e^{i tau} (QPhase)
//   [n] = n - (tau^2/6)(n - n^3)       small-tau truncation (QTaylor)
// Every kind has f(0) = 1 and reduces to f = 1 at tau = 0.

#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "dlindblad/errors.hpp"

namespace dlindblad {

enum class DeformationKind { Identity, QReal, QPhase, QTaylor, Table };

struct DeformationSpec {
    DeformationKind kind = DeformationKind::Identity;
    double tau = 0.0;
    // f(0), f(1), ..., f(L); f(n) = 1 for n > L. Table kind only.
    std::vector<double> table;

    static DeformationSpec identity() { return {}; }
    static DeformationSpec q_real(double tau) { return {DeformationKind::QReal, tau, {}}; }
    static DeformationSpec q_phase(double tau) { return {DeformationKind::QPhase, tau, {}}; }
    static DeformationSpec q_taylor(double tau) { return {DeformationKind::QTaylor, tau, {}}; }
    static DeformationSpec from_table(std::vector<double> values) {
        return {DeformationKind::Table, 0.0, std::move(values)};
    }

    // Signed tau^2 entering the small-deformation moment equations:
    // +tau^2 for real q, -tau^2 for q a phase, 0 without deformation.
    double signed_tau_sq() const {
        switch (kind) {
            case DeformationKind::QReal:
            case DeformationKind::QTaylor:
                return tau * tau;
            case DeformationKind::QPhase:
                return -tau * tau;
            case DeformationKind::Identity:
                return 0.0;
            case DeformationKind::Table:
                break;
        }
        throw Error("a tabulated deformation has no tau^2 parameter");
    }

    bool is_q_deformation() const {
        return kind == DeformationKind::QReal || kind == DeformationKind::QPhase ||
               kind == DeformationKind::QTaylor;
    }
};

inline std::string_view to_string(DeformationKind kind) {
    switch (kind) {
        case DeformationKind::Identity: return "none";
        case DeformationKind::QReal: return "q-real";
        case DeformationKind::QPhase: return "q-phase";
        case DeformationKind::QTaylor: return "q-taylor";
        case DeformationKind::Table: return "table";
    }
    return "?";
}

// Below this tau the hyperbolic/trigonometric ratios are replaced by the
// Taylor form; both agree to better than 1e-10 relative there.
inline constexpr double kTaylorSwitchTau = 1e-6;

// [n] truncated at order tau^2; tau_sq may be negative (phase case).
inline double eval_box_taylor(double tau_sq, int n) {
    const double x = static_cast<double>(n);
    return x - (tau_sq / 6.0) * (x - x * x * x);
}

inline double eval_box(const DeformationSpec& spec, int n) {
    if (n < 0) {
        throw Error("eval_box: negative level " + std::to_string(n));
    }
    if (n == 0) {
        return 0.0;
    }
    const double x = static_cast<double>(n);
    const double tau = spec.tau;
    switch (spec.kind) {
        case DeformationKind::Identity:
            return x;
        case DeformationKind::QReal:
            if (tau < kTaylorSwitchTau) {
                return eval_box_taylor(tau * tau, n);
            }
            return std::sinh(x * tau) / std::sinh(tau);
        case DeformationKind::QPhase:
            if (tau < kTaylorSwitchTau) {
                return eval_box_taylor(-tau * tau, n);
            }
            return std::sin(x * tau) / std::sin(tau);
        case DeformationKind::QTaylor:
            return eval_box_taylor(tau * tau, n);
        case DeformationKind::Table: {
            const auto idx = static_cast<std::size_t>(n);
            const double f = idx < spec.table.size() ? spec.table[idx] : 1.0;
            return x * f * f;
        }
    }
    return x;
}

inline double eval_f(const DeformationSpec& spec, int n) {
    if (n < 0) {
        throw Error("eval_f: negative level " + std::to_string(n));
    }
    if (spec.kind == DeformationKind::Table) {
        const auto idx = static_cast<std::size_t>(n);
        if (idx >= spec.table.size()) {
            return 1.0;
        }
        if (!(spec.table[idx] > 0.0)) {
            throw InvalidTable("deformation table entry f(" + std::to_string(n) +
                               ") must be positive");
        }
        return spec.table[idx];
    }
    if (n == 0 || spec.kind == DeformationKind::Identity) {
        return 1.0;
    }
    const double box = eval_box(spec, n);
    if (!(box > 0.0)) {
        throw NegativeBracket(n, box);
    }
    return std::sqrt(box / static_cast<double>(n));
}

// Checks that f(n) is well defined and positive for 0 <= n <= max_level.
inline void validate(const DeformationSpec& spec, int max_level) {
    if (!(spec.tau >= 0.0) || !std::isfinite(spec.tau)) {
        throw Error("deformation tau must be a finite nonnegative number");
    }
    if (spec.kind == DeformationKind::Table) {
        if (spec.table.empty()) {
            throw InvalidTable("deformation table is empty");
        }
        if (spec.table.front() != 1.0) {
            throw InvalidTable("deformation table must start with f(0) = 1");
        }
        for (std::size_t i = 0; i < spec.table.size(); ++i) {
            if (!(spec.table[i] > 0.0) || !std::isfinite(spec.table[i])) {
                throw InvalidTable("deformation table entry f(" + std::to_string(i) +
                                   ") must be positive and finite");
            }
        }
        return;
    }
    for (int n = 1; n <= max_level; ++n) {
        (void)eval_f(spec, n);
    }
}

// f(0), ..., f(max_level), validated.
inline std::vector<double> f_values(const DeformationSpec& spec, int max_level) {
    validate(spec, max_level);
    std::vector<double> out(static_cast<std::size_t>(max_level) + 1);
    for (int n = 0; n <= max_level; ++n) {
        out[static_cast<std::size_t>(n)] = eval_f(spec, n);
    }
    return out;
}

}  // namespace dlindblad

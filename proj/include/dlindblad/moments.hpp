#pragma once

// Moment equations for S = (<N>, <N^2>).
//
// The exact equations of motion for the thermal-form generator are not
// closed. Expanding [N] to order tau^2 and dropping <a+^3 a^3> (i.e. using
// N^3 -> 3N^2 - 2N) closes them into the linear system dS/dt = M S + b.
// At T = 0, b = 0 and
//
//   M = lambda [[ tau^2 - 2,    -tau^2     ],
//               [ 2 + 3 tau^2,  -3 tau^2 - 4 ]]
//
// with eigenvalues -2 lambda and -2 lambda (2 + tau^2). A negative tau_sq
// everywhere below encodes q = e^{i tau}.

#include <array>
#include <atomic>
#include <cmath>
#include <vector>

#include "dlindblad/deformation.hpp"
#include "dlindblad/density_matrix.hpp"
#include "dlindblad/errors.hpp"
#include "dlindblad/generator.hpp"
#include "dlindblad/log.hpp"

namespace dlindblad {

struct MomentState {
    double mean_n = 0.0;
    double mean_n2 = 0.0;

    friend bool operator==(const MomentState&, const MomentState&) = default;
};

inline MomentState moments_of(const DensityMatrix& rho) { return {rho.mean_n(), rho.mean_n2()}; }

using Matrix2 = std::array<std::array<double, 2>, 2>;

struct MomentSystem {
    double lambda = 0.0;
    double tau_sq = 0.0;
    Matrix2 m{};

    double trace() const { return m[0][0] + m[1][1]; }
    double determinant() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
};

inline MomentSystem moment_system_t0(double lambda, double tau_sq) {
    MomentSystem sys;
    sys.lambda = lambda;
    sys.tau_sq = tau_sq;
    sys.m = {{{lambda * (tau_sq - 2.0), -lambda * tau_sq},
              {lambda * (2.0 + 3.0 * tau_sq), lambda * (-3.0 * tau_sq - 4.0)}}};
    return sys;
}

inline constexpr double kTauSqPolicy = 0.5;

// Closed truncated system at arbitrary bath temperature (coth factor c).
inline MomentState truncated_rhs(double coth, double tau_sq, const MomentState& s, double lambda) {
    if (std::abs(tau_sq) > kTauSqPolicy) {
        logger()->warn("truncated moment system used with |tau^2| = {} > {}", std::abs(tau_sq),
                       kTauSqPolicy);
    }
    const double c = coth;
    const double h = 0.5 * tau_sq;
    const double dn = lambda * (h * (c - 3.0) * s.mean_n2 - (2.0 - h * (c + 1.0)) * s.mean_n + c - 1.0);
    const double dn2 = lambda * ((h * (11.0 * c - 17.0) - 4.0) * s.mean_n2 +
                                 (4.0 * c - 2.0 - h * (5.0 * c - 11.0)) * s.mean_n + c - 1.0);
    return {dn, dn2};
}

struct MomentSample {
    double t = 0.0;
    MomentState s;
};

// Fixed-step RK4 on the truncated system, sampled every `sample_every` steps
// and at t_final.
inline std::vector<MomentSample> integrate_truncated(double coth, double tau_sq, double lambda,
                                                     const MomentState& s0, double t_final, double dt,
                                                     int sample_every = 1) {
    if (!(dt > 0.0) || !(t_final >= 0.0) || sample_every < 1) {
        throw Error("integrate_truncated needs dt > 0, t_final >= 0 and sample_every >= 1");
    }
    const long steps = t_final == 0.0 ? 0 : static_cast<long>(std::ceil(t_final / dt - 1e-9));
    const double h = steps == 0 ? 0.0 : t_final / static_cast<double>(steps);
    const auto rhs = [&](const MomentState& x) { return truncated_rhs(coth, tau_sq, x, lambda); };
    const auto axpy = [](const MomentState& x, double a, const MomentState& y) {
        return MomentState{x.mean_n + a * y.mean_n, x.mean_n2 + a * y.mean_n2};
    };
    std::vector<MomentSample> out{{0.0, s0}};
    MomentState s = s0;
    for (long k = 1; k <= steps; ++k) {
        const auto k1 = rhs(s);
        const auto k2 = rhs(axpy(s, 0.5 * h, k1));
        const auto k3 = rhs(axpy(s, 0.5 * h, k2));
        const auto k4 = rhs(axpy(s, h, k3));
        s.mean_n += h / 6.0 * (k1.mean_n + 2.0 * k2.mean_n + 2.0 * k3.mean_n + k4.mean_n);
        s.mean_n2 += h / 6.0 * (k1.mean_n2 + 2.0 * k2.mean_n2 + 2.0 * k3.mean_n2 + k4.mean_n2);
        if (k % sample_every == 0 || k == steps) out.push_back({static_cast<double>(k) * h, s});
    }
    return out;
}

// Exact solution of the T = 0 truncated system, S(t) = R^-1 e^{Ft} R S(0).
inline MomentState solve_t0(double lambda, double tau_sq, const MomentState& s0, double t) {
    const double denom = 2.0 * (1.0 + tau_sq);
    if (denom == 0.0) {
        throw Error("solve_t0 requires 1 + tau^2 != 0");
    }
    const double slow = std::exp(-2.0 * lambda * t);
    const double fast = std::exp(-2.0 * lambda * (2.0 + tau_sq) * t);
    // propagator entries, arranged so that t = 0 gives the identity exactly
    const double k = 2.0 + 3.0 * tau_sq;
    const double p00 = slow + tau_sq * (slow - fast) / denom;
    const double p01 = -tau_sq * (slow - fast) / denom;
    const double p10 = k * (slow - fast) / denom;
    const double p11 = fast + tau_sq * (fast - slow) / denom;
    return {p00 * s0.mean_n + p01 * s0.mean_n2, p10 * s0.mean_n + p11 * s0.mean_n2};
}

inline constexpr double kSecularWindow = 0.5;

// Leading order in tau^2 of solve_t0. Keeps the secular -2 lambda tau^2 t
// term of <N^2>, so it is only meaningful while lambda t |tau^2| is small.
inline MomentState solve_t0_leading(double lambda, double tau_sq, const MomentState& s0, double t) {
    static std::atomic<bool> warned{false};
    if (lambda * t * std::abs(tau_sq) > kSecularWindow && !warned.exchange(true)) {
        logger()->warn("leading-order moments used beyond lambda t |tau^2| = {} (first at {}); further warnings suppressed",
                       kSecularWindow, lambda * t * std::abs(tau_sq));
    }
    const double h = 0.5 * tau_sq;
    const double slow = std::exp(-2.0 * lambda * t);
    const double fast = std::exp(-4.0 * lambda * t);
    const double spread = s0.mean_n2 - s0.mean_n;
    // regrouped so that t = 0 returns s0 exactly
    return {slow * s0.mean_n + h * spread * (fast - slow),
            slow * s0.mean_n + spread * (fast * (1.0 - 2.0 * lambda * tau_sq * t) + h * (fast - slow))};
}

inline MomentState long_time_limit(double lambda, double /*tau_sq*/) {
    if (!(lambda > 0.0)) {
        throw Error("long-time limit requires lambda > 0");
    }
    return {0.0, 0.0};
}

// Which closed form of the exact moment equations to evaluate.
enum class MomentForm {
    Generic,  // in terms of f^2(N)
    QBox,     // in terms of the bracket [N]
};

// Exact (untruncated) d<N>/dt and d<N^2>/dt for thermal-form coefficients,
// as expectation values on the diagonal of rho.
inline MomentState full_moment_rhs(const DensityMatrix& rho, const DeformedLiouvillian& liouvillian,
                                   const DeformationSpec& spec, MomentForm form = MomentForm::Generic) {
    const auto& env = liouvillian.environment();
    if (!env.is_thermal_form()) {
        throw Error("moment equations require thermal-form coefficients (D1 = 0)");
    }
    if (rho.dim() != liouvillian.dim()) {
        throw DimensionMismatch("state and generator dimensions differ");
    }
    const double c = env.effective_coth();
    const double lambda = env.lambda;
    double up = 0.0, down = 0.0, up2 = 0.0, down2 = 0.0;
    for (int n = 0; n < rho.dim(); ++n) {
        const double p = rho.matrix()(n, n).real();
        double box_up = 0.0, box_n = 0.0;
        if (form == MomentForm::QBox) {
            box_up = eval_box(spec, n + 1);
            box_n = eval_box(spec, n);
        } else {
            const double fu = eval_f(spec, n + 1);
            const double fn = eval_f(spec, n);
            box_up = (n + 1.0) * fu * fu;
            box_n = n * fn * fn;
        }
        up += p * box_up;
        down += p * box_n;
        up2 += p * (2.0 * n + 1.0) * box_up;
        down2 += p * (2.0 * n - 1.0) * box_n;
    }
    return {lambda * ((c - 1.0) * up - (c + 1.0) * down),
            lambda * ((c - 1.0) * up2 - (c + 1.0) * down2)};
}

}  // namespace dlindblad

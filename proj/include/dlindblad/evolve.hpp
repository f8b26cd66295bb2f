#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dlindblad/density_matrix.hpp"
#include "dlindblad/errors.hpp"
#include "dlindblad/generator.hpp"
#include "dlindblad/log.hpp"
#include "dlindblad/moments.hpp"

namespace dlindblad {

struct TrajectoryRecord {
    double t = 0.0;
    double trace = 0.0;
    double purity = 0.0;
    double mean_n = 0.0;
    double mean_n2 = 0.0;
    double min_eig = 0.0;
    double top_pop = 0.0;
};

struct IntegrateOptions {
    int sample_every = 1;
    bool keep_snapshots = false;
    bool rehermitize = true;
    bool validate_step = true;
    double step_halving_tol = 1e-6;  // max |one step - two half steps| at t = 0
    double positivity_tol = kPositivityTol;
    double leakage_tol = 1e-8;
};

struct Trajectory {
    std::vector<TrajectoryRecord> records;
    std::vector<DensityMatrix> snapshots;  // filled when keep_snapshots
    DensityMatrix final_state;
    double step = 0.0;                     // step actually used
    int rehermitizations = 0;
    int leakage_warnings = 0;
    int positivity_warnings = 0;
    double max_trace_drift = 0.0;
    double max_top_pop = 0.0;
    double min_min_eig = 0.0;
};

// dt = 0.01 / lambda, capped at 0.1 / omega.
inline double default_dt(const EnvironmentCoefficients& env) {
    return std::min(0.01 / env.lambda, 0.1 / env.omega);
}

inline TrajectoryRecord record_of(const DensityMatrix& rho, double t) {
    return {t, rho.trace(), rho.purity(), rho.mean_n(), rho.mean_n2(), rho.min_eigenvalue(),
            rho.top_population()};
}

// One classical RK4 step of drho/dt = L(rho).
inline CMatrix rk4_step(const DeformedLiouvillian& liouvillian, const CMatrix& rho, double h) {
    const CMatrix k1 = liouvillian.apply(rho);
    const CMatrix k2 = liouvillian.apply(rho + (0.5 * h) * k1);
    const CMatrix k3 = liouvillian.apply(rho + (0.5 * h) * k2);
    const CMatrix k4 = liouvillian.apply(rho + h * k3);
    return rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Max elementwise difference between one step of h and two steps of h/2.
inline double step_halving_discrepancy(const DeformedLiouvillian& liouvillian, const CMatrix& rho,
                                       double h) {
    const CMatrix full = rk4_step(liouvillian, rho, h);
    const CMatrix half = rk4_step(liouvillian, rk4_step(liouvillian, rho, 0.5 * h), 0.5 * h);
    return (full - half).cwiseAbs().maxCoeff();
}

// Fixed-step RK4 over [0, t_final]. The step is dt rounded down so that an
// integer number of steps lands on t_final.
inline Trajectory integrate(const DeformedLiouvillian& liouvillian, const DensityMatrix& rho0,
                            double t_final, double dt, const IntegrateOptions& options = {}) {
    if (!(dt > 0.0)) {
        throw Error("time step must be positive");
    }
    if (!(t_final >= 0.0)) {
        throw Error("t_final must be nonnegative");
    }
    if (options.sample_every < 1) {
        throw Error("sample_every must be a positive integer");
    }
    if (rho0.dim() != liouvillian.dim()) {
        throw DimensionMismatch("initial state has dimension " + std::to_string(rho0.dim()) +
                                ", generator expects " + std::to_string(liouvillian.dim()));
    }
    rho0.validate();

    const long steps = t_final == 0.0 ? 0 : static_cast<long>(std::ceil(t_final / dt - 1e-9));
    const double h = steps == 0 ? dt : t_final / static_cast<double>(steps);

    if (options.validate_step && steps > 0) {
        const double disc = step_halving_discrepancy(liouvillian, rho0.matrix(), h);
        if (!(disc <= options.step_halving_tol)) {
            std::ostringstream os;
            os << "step-halving check failed at t = 0: |rho(dt) - rho(2 x dt/2)| = " << disc
               << " > " << options.step_halving_tol << " for dt = " << h << "; reduce dt";
            throw StepUnstable(os.str());
        }
    }

    Trajectory traj;
    traj.step = h;
    traj.min_min_eig = rho0.min_eigenvalue();
    auto log = logger();

    DensityMatrix rho = rho0;
    const auto sample = [&](long k) {
        const double t = static_cast<double>(k) * h;
        if (options.rehermitize && rho.hermiticity_error() > 0.0) {
            const double err = rho.hermiticity_error();
            rho.hermitize();
            ++traj.rehermitizations;
            log->debug("re-hermitized state at t = {} (deviation {:.3e})", t, err);
        }
        const auto rec = record_of(rho, t);
        if (rec.top_pop > options.leakage_tol) {
            ++traj.leakage_warnings;
            log->warn("truncation leakage at t = {}: top-level population {:.3e} exceeds {:.3e}", t,
                      rec.top_pop, options.leakage_tol);
        }
        if (rec.min_eig < -options.positivity_tol) {
            ++traj.positivity_warnings;
            log->warn("state lost positivity at t = {}: min eigenvalue {:.3e}", t, rec.min_eig);
        }
        traj.max_trace_drift = std::max(traj.max_trace_drift, std::abs(rec.trace - 1.0));
        traj.max_top_pop = std::max(traj.max_top_pop, rec.top_pop);
        traj.min_min_eig = std::min(traj.min_min_eig, rec.min_eig);
        traj.records.push_back(rec);
        if (options.keep_snapshots) {
            traj.snapshots.push_back(rho);
        }
    };

    sample(0);
    for (long k = 1; k <= steps; ++k) {
        rho.matrix() = rk4_step(liouvillian, rho.matrix(), h);
        if (k % options.sample_every == 0 || k == steps) {
            sample(k);
        }
    }
    traj.final_state = rho;
    return traj;
}

struct MomentConsistency {
    MomentState lhs;  // Tr[N L(rho)], Tr[N^2 L(rho)]
    MomentState rhs;  // exact moment equations on rho
    double max_deviation() const {
        return std::max(std::abs(lhs.mean_n - rhs.mean_n), std::abs(lhs.mean_n2 - rhs.mean_n2));
    }
};

// Compares the generator's action on <N>, <N^2> with the closed-form moment
// equations. Agreement is exact only when the top Fock level is empty,
// since the truncated generator cannot move population above it.
inline MomentConsistency moment_consistency_check(const DeformedLiouvillian& liouvillian,
                                                  const DensityMatrix& rho) {
    const CMatrix drho = liouvillian.apply(rho);
    MomentConsistency out;
    for (int n = 0; n < rho.dim(); ++n) {
        const double dp = drho(n, n).real();
        out.lhs.mean_n += n * dp;
        out.lhs.mean_n2 += static_cast<double>(n) * n * dp;
    }
    out.rhs = full_moment_rhs(rho, liouvillian, liouvillian.spec(), MomentForm::Generic);
    return out;
}

}  // namespace dlindblad

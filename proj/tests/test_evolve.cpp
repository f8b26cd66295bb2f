#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "dlindblad/evolve.hpp"
#include "test_support.hpp"

using namespace dlindblad;

namespace {

const double kTau02 = std::sqrt(0.2);

IntegrateOptions quiet() {
    IntegrateOptions o;
    o.leakage_tol = 1.0;
    return o;
}

}  // namespace

TEST(Evolve, Eq44UndeformedDecay) {
    const double lambda = 0.1;
    const DeformedLiouvillian L(DeformationSpec::identity(), 8, thermal(1.0, lambda, ZeroTemperature{}));
    const auto traj = integrate(L, DensityMatrix::fock(8, 3), 2.0 / lambda, 0.01 / lambda, quiet());
    ASSERT_GT(traj.records.size(), 100u);
    for (const auto& r : traj.records) {
        EXPECT_NEAR(r.mean_n, 3.0 * std::exp(-2.0 * lambda * r.t), 1e-6) << "t=" << r.t;
    }
}

TEST(Evolve, ZeroTimeReturnsInitialState) {
    const DeformedLiouvillian L(DeformationSpec::q_real(kTau02), 6, thermal(1.0, 0.1, CothFactor{2.0}));
    std::mt19937 rng(1);
    const DensityMatrix rho0(oracle::random_state(rng, 6));
    const auto traj = integrate(L, rho0, 0.0, 0.1);
    ASSERT_EQ(traj.records.size(), 1u);
    EXPECT_EQ(traj.records[0].t, 0.0);
    EXPECT_EQ(oracle::max_abs(traj.final_state.matrix() - rho0.matrix()), 0.0);
}

TEST(Evolve, SamplingGrid) {
    const DeformedLiouvillian L(DeformationSpec::identity(), 4, thermal(1.0, 0.1, ZeroTemperature{}));
    IntegrateOptions o = quiet();
    o.sample_every = 3;
    o.keep_snapshots = true;
    // 10 steps: samples at 0, 3, 6, 9 and the final step
    const auto traj = integrate(L, DensityMatrix::fock(4, 1), 1.0, 0.1, o);
    ASSERT_EQ(traj.records.size(), 5u);
    EXPECT_NEAR(traj.records[1].t, 0.3, 1e-15);
    EXPECT_NEAR(traj.records.back().t, 1.0, 1e-15);
    EXPECT_EQ(traj.snapshots.size(), traj.records.size());
}

TEST(Evolve, StepRoundedToLandOnFinalTime) {
    const DeformedLiouvillian L(DeformationSpec::identity(), 4, thermal(1.0, 0.1, ZeroTemperature{}));
    const auto traj = integrate(L, DensityMatrix::fock(4, 1), 1.0, 0.3, quiet());
    EXPECT_NEAR(traj.step, 0.25, 1e-15);
    EXPECT_EQ(traj.records.back().t, 1.0);
}

TEST(Evolve, Eq21ThermalSteadyMean) {
    const double lambda = 0.1;
    const DeformedLiouvillian L(DeformationSpec::identity(), 24, thermal(1.0, lambda, CothFactor{2.0}));
    IntegrateOptions o = quiet();
    o.sample_every = 1000;
    const auto traj = integrate(L, DensityMatrix::fock(24, 2), 20.0 / lambda, default_dt(L.environment()), o);
    EXPECT_NEAR(traj.records.back().mean_n, 0.5, 1e-6);
}

TEST(Evolve, Eq16RelaxesToGibbs) {
    const double lambda = 0.1, c = 2.0;
    const int dim = 24;
    const DeformedLiouvillian L(DeformationSpec::identity(), dim, thermal(1.0, lambda, CothFactor{c}));
    IntegrateOptions o = quiet();
    o.sample_every = 100;
    const auto traj = integrate(L, DensityMatrix::fock(dim, 2), 20.0 / lambda, default_dt(L.environment()), o);
    EXPECT_LT(trace_distance(traj.final_state.matrix(), DensityMatrix::gibbs(dim, c).matrix()), 1e-6);
    EXPECT_LT(traj.max_trace_drift, 1e-8);
    EXPECT_GT(traj.min_min_eig, -1e-8);
}

TEST(Evolve, TraceAndHermiticityDrift) {
    // top levels stay empty: T = 0 never populates above the initial level
    std::mt19937 rng(5);
    for (const auto& spec : {DeformationSpec::identity(), DeformationSpec::q_real(kTau02),
                             DeformationSpec::q_phase(0.2)}) {
        const DeformedLiouvillian L(spec, 12, from_diffusion(1.0, 0.1, 0.05, 0.05, 0.0));
        const DensityMatrix rho0(oracle::random_state(rng, 12, 6));
        IntegrateOptions o = quiet();
        o.rehermitize = false;
        const auto traj = integrate(L, rho0, 10.0, 0.01, o);
        EXPECT_LT(traj.max_top_pop, 1e-10);
        EXPECT_LT(traj.max_trace_drift, 1e-8);
        EXPECT_LT(traj.final_state.hermiticity_error(), 1e-10);
        for (const auto& r : traj.records) {
            EXPECT_GT(r.purity, 0.0);
            EXPECT_LE(r.purity, 1.0 + 1e-9);
        }
    }
}

TEST(Evolve, FourthOrderConvergence) {
    const DeformedLiouvillian L(DeformationSpec::q_real(kTau02), 6, thermal(0.5, 0.1, CothFactor{1.5}));
    std::mt19937 rng(3);
    const DensityMatrix rho0(oracle::random_state(rng, 6, 4));
    IntegrateOptions o = quiet();
    o.validate_step = false;
    const double t = 2.0;
    const auto ref = integrate(L, rho0, t, 0.005, o).final_state.matrix();
    const double e1 = oracle::max_abs(integrate(L, rho0, t, 0.1, o).final_state.matrix() - ref);
    const double e2 = oracle::max_abs(integrate(L, rho0, t, 0.05, o).final_state.matrix() - ref);
    EXPECT_GE(e1 / e2, 12.0);
    EXPECT_LE(e1 / e2, 20.0);
}

TEST(Evolve, StepHalvingRejectsLargeStep) {
    const DeformedLiouvillian L(DeformationSpec::identity(), 10, thermal(5.0, 1.0, CothFactor{2.0}));
    EXPECT_THROW(integrate(L, DensityMatrix::fock(10, 3), 5.0, 1.0), StepUnstable);
    EXPECT_THROW(integrate(L, DensityMatrix::fock(10, 3), 5.0, 0.0), Error);
}

TEST(Evolve, RejectsMismatchedState) {
    const DeformedLiouvillian L(DeformationSpec::identity(), 5, thermal(1.0, 0.1, ZeroTemperature{}));
    EXPECT_THROW(integrate(L, DensityMatrix::fock(6, 0), 1.0, 0.1), DimensionMismatch);
}

TEST(Evolve, LeakageWarningCounted) {
    const DeformedLiouvillian L(DeformationSpec::identity(), 4, thermal(1.0, 0.1, CothFactor{3.0}));
    IntegrateOptions o;
    o.leakage_tol = 1e-3;
    const auto traj = integrate(L, DensityMatrix::fock(4, 3), 1.0, 0.02, o);
    EXPECT_GT(traj.leakage_warnings, 0);
}

TEST(Evolve, Eq21Eq22MomentConsistencyUndeformed) {
    std::mt19937 rng(41);
    const DeformedLiouvillian L(DeformationSpec::identity(), 10, thermal(1.0, 0.2, CothFactor{1.6}));
    for (int k = 0; k < 10; ++k) {
        const DensityMatrix rho(oracle::random_state(rng, 10, 9));
        EXPECT_LT(moment_consistency_check(L, rho).max_deviation(), 1e-10);
    }
}

TEST(Evolve, Eq23Eq24MomentConsistencyDeformed) {
    std::mt19937 rng(43);
    for (const auto& spec : {DeformationSpec::q_real(kTau02), DeformationSpec::q_phase(0.2),
                             DeformationSpec::from_table({1.0, 1.2, 0.7, 1.1})}) {
        const DeformedLiouvillian L(spec, 10, thermal(1.0, 0.2, CothFactor{2.0}));
        for (int k = 0; k < 5; ++k) {
            const DensityMatrix rho(oracle::random_diagonal_state(rng, 10, 9));
            EXPECT_LT(moment_consistency_check(L, rho).max_deviation(), 1e-10);
        }
    }
}

TEST(Evolve, MomentConsistencyVacuum) {
    const DeformedLiouvillian L(DeformationSpec::q_real(0.5), 6, thermal(1.0, 0.2, ZeroTemperature{}));
    const auto mc = moment_consistency_check(L, DensityMatrix::fock(6, 0));
    EXPECT_EQ(mc.lhs.mean_n, 0.0);
    EXPECT_EQ(mc.rhs.mean_n, 0.0);
    EXPECT_EQ(mc.lhs.mean_n2, 0.0);
    EXPECT_EQ(mc.rhs.mean_n2, 0.0);
}

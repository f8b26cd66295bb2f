#include <cmath>

#include <gtest/gtest.h>

#include "dlindblad/fock_ops.hpp"
#include "test_support.hpp"

using namespace dlindblad;

TEST(FockOps, IdentityDeformationGivesPlainLadder) {
    const auto ops = build_operators(DeformationSpec::identity(), 3);
    EXPECT_EQ(ops.a(0, 1), Complex(1.0, 0.0));
    EXPECT_NEAR(ops.a(1, 2).real(), std::sqrt(2.0), 1e-15);
    EXPECT_EQ(oracle::max_abs(ops.A - ops.a), 0.0);
    EXPECT_EQ(oracle::max_abs(ops.a_dag - ops.a.adjoint()), 0.0);
    for (int n = 0; n < 3; ++n) EXPECT_EQ(ops.n_op(n, n).real(), n);
    EXPECT_LE(oracle::max_abs(ops.n_op - ops.a_dag * ops.a), 1e-15);
}

TEST(FockOps, Eq7QRealMatrixElement) {
    const auto ops = build_operators(DeformationSpec::q_real(0.4472135955), 4);
    // A|2> = sqrt([2]) |1>, sqrt(2 cosh tau) to 30 digits
    EXPECT_NEAR(ops.A(1, 2).real(), 1.48437045076264845691, 1e-14);
    for (int n = 1; n < 4; ++n) {
        EXPECT_NEAR(ops.A(n - 1, n).real(), std::sqrt(eval_box(ops.spec, n)), 1e-14);
    }
}

TEST(FockOps, AnnihilatesVacuum) {
    for (const auto& spec : {DeformationSpec::identity(), DeformationSpec::q_real(0.3),
                             DeformationSpec::q_phase(0.2), DeformationSpec::from_table({1.0, 2.0})}) {
        const auto ops = build_operators(spec, 6);
        EXPECT_EQ(ops.A.col(0).cwiseAbs().maxCoeff(), 0.0);
    }
}

TEST(FockOps, Eq1BothFactorizationsAgree) {
    for (double tau : {0.0, std::sqrt(0.05), std::sqrt(0.2), 0.8}) {
        for (const auto& spec : {DeformationSpec::q_real(tau), DeformationSpec::q_phase(tau / 8),
                                 DeformationSpec::q_taylor(tau)}) {
            for (int dim = 2; dim <= 20; ++dim) {
                const auto ops = build_operators(spec, dim);
                RVector shifted(dim);
                for (int n = 0; n < dim; ++n) shifted(n) = eval_f(spec, n + 1);
                const CMatrix alt = shifted.cast<Complex>().asDiagonal() * ops.a;
                EXPECT_LE(oracle::max_abs(ops.A - alt), 1e-14);
                // Hermitian conjugation condition (A^dag)^dag = A
                EXPECT_EQ(oracle::max_abs(ops.A_dag.adjoint() - ops.A), 0.0);
            }
        }
    }
}

TEST(FockOps, Eq2CommutatorsExact) {
    for (const auto& spec : {DeformationSpec::identity(), DeformationSpec::q_real(0.6),
                             DeformationSpec::from_table({1.0, 0.7, 1.3})}) {
        const auto ops = build_operators(spec, 9);
        const auto report = check_commutators(ops);
        // a few ulps of the largest matrix element times the level index
        const double tol = 1e-14 * oracle::max_abs(ops.A);
        EXPECT_LE(report.a_n_deviation, tol);
        EXPECT_LE(report.adag_n_deviation, tol);
    }
}

TEST(FockOps, Eq5IdentityBosonCommutator) {
    const auto report = check_commutators(build_operators(DeformationSpec::identity(), 5));
    EXPECT_LE(report.interior_deviation, 1e-15);
}

TEST(FockOps, Eq3Eq5InteriorCommutator) {
    for (double tau_sq : {0.0, 0.05, 0.2}) {
        const double tau = std::sqrt(tau_sq);
        for (const auto& spec : {DeformationSpec::q_real(tau), DeformationSpec::q_taylor(tau)}) {
            for (int dim = 3; dim <= 20; ++dim) {
                const auto ops = build_operators(spec, dim);
                EXPECT_LE(check_commutators(ops).interior_deviation, 1e-12 * eval_box(spec, dim))
                    << "dim=" << dim << " tau^2=" << tau_sq;
            }
        }
    }
}

TEST(FockOps, Eq5InteriorMatchesBoxDifferences) {
    const auto spec = DeformationSpec::q_real(0.4472135955);
    const auto ops = build_operators(spec, 6);
    const CMatrix comm = ops.A * ops.A_dag - ops.A_dag * ops.A;
    for (int n = 0; n <= 4; ++n) {
        EXPECT_NEAR(comm(n, n).real(), eval_box(spec, n + 1) - eval_box(spec, n), 1e-12);
        // (N+1) f^2(N+1) - N f^2(N)
        const double f1 = eval_f(spec, n + 1), f0 = eval_f(spec, n);
        EXPECT_NEAR(comm(n, n).real(), (n + 1) * f1 * f1 - n * f0 * f0, 1e-12);
    }
}

TEST(FockOps, Eq28NormalOrderingIdentity) {
    // N^3 = a+^3 a^3 + 3N^2 - 2N; a^3 only lowers, so truncation is exact
    const auto ops = build_operators(DeformationSpec::identity(), 9);
    const CMatrix a3 = ops.a * ops.a * ops.a;
    const CMatrix n2 = ops.n_op * ops.n_op;
    const CMatrix lhs = n2 * ops.n_op;
    const CMatrix rhs = a3.adjoint() * a3 + 3.0 * n2 - 2.0 * ops.n_op;
    EXPECT_LE(oracle::max_abs(lhs - rhs), 1e-12);
}

TEST(FockOps, RejectsTinyDimensionAndBadDeformation) {
    EXPECT_THROW(build_operators(DeformationSpec::identity(), 1), Error);
    // f(dim) must exist: q-phase tau = 0.5 fails at n = 7
    EXPECT_NO_THROW(build_operators(DeformationSpec::q_phase(0.5), 6));
    EXPECT_THROW(build_operators(DeformationSpec::q_phase(0.5), 7), NegativeBracket);
}

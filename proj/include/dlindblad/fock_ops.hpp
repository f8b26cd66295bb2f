#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "dlindblad/deformation.hpp"
#include "dlindblad/errors.hpp"

namespace dlindblad {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

// Truncated ladder operators on the Fock basis |0>, ..., |dim-1>, i.e. the
// top-left dim x dim block of the infinite matrices.
struct FockOperators {
    DeformationSpec spec;
    int dim = 0;
    CMatrix a;
    CMatrix a_dag;
    CMatrix n_op;
    RVector f_of_n;  // f(0), ..., f(dim-1)
    CMatrix A;       // a f(N)
    CMatrix A_dag;
};

inline CMatrix annihilation(int dim) {
    CMatrix a = CMatrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) {
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    return a;
}

inline FockOperators build_operators(const DeformationSpec& spec, int dim) {
    if (dim < 2) {
        throw Error("Fock dimension must be at least 2, got " + std::to_string(dim));
    }
    // f(dim) is needed by the f(N+1) factors of the generator.
    const auto f = f_values(spec, dim);

    FockOperators ops;
    ops.spec = spec;
    ops.dim = dim;
    ops.a = annihilation(dim);
    ops.a_dag = ops.a.adjoint();
    ops.n_op = CMatrix::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) ops.n_op(n, n) = static_cast<double>(n);
    ops.f_of_n.resize(dim);
    RVector f_shifted(dim);
    for (int n = 0; n < dim; ++n) {
        ops.f_of_n(n) = f[static_cast<std::size_t>(n)];
        f_shifted(n) = f[static_cast<std::size_t>(n) + 1];
    }
    ops.A = ops.a * ops.f_of_n.cast<Complex>().asDiagonal();
    const CMatrix A_alt = f_shifted.cast<Complex>().asDiagonal() * ops.a;
    const double mismatch = (ops.A - A_alt).cwiseAbs().maxCoeff();
    if (mismatch > 1e-14 * std::max(1.0, ops.A.cwiseAbs().maxCoeff())) {
        throw Error("a f(N) and f(N+1) a disagree by " + std::to_string(mismatch));
    }
    ops.A_dag = ops.A.adjoint();
    return ops;
}

struct CommutatorReport {
    // max |[A, A^dag] - diag([n+1] - [n])| over rows/cols 0..dim-2
    double interior_deviation = 0.0;
    // max |[A, N] - A| and |[A^dag, N] + A^dag| over the full matrix
    double a_n_deviation = 0.0;
    double adag_n_deviation = 0.0;
};

inline CommutatorReport check_commutators(const FockOperators& ops) {
    const DeformationSpec& spec = ops.spec;
    const int d = ops.dim;
    CommutatorReport report;
    const CMatrix comm = ops.A * ops.A_dag - ops.A_dag * ops.A;
    CMatrix expected = CMatrix::Zero(d, d);
    for (int n = 0; n < d; ++n) {
        expected(n, n) = eval_box(spec, n + 1) - eval_box(spec, n);
    }
    const int m = d - 1;
    report.interior_deviation =
        (comm.topLeftCorner(m, m) - expected.topLeftCorner(m, m)).cwiseAbs().maxCoeff();
    report.a_n_deviation =
        (ops.A * ops.n_op - ops.n_op * ops.A - ops.A).cwiseAbs().maxCoeff();
    report.adag_n_deviation =
        (ops.A_dag * ops.n_op - ops.n_op * ops.A_dag + ops.A_dag).cwiseAbs().maxCoeff();
    return report;
}

}  // namespace dlindblad

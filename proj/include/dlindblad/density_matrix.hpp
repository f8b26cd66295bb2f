#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "dlindblad/errors.hpp"
#include "dlindblad/fock_ops.hpp"

namespace dlindblad {

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPositivityTol = 1e-8;

// Complex dim x dim state in the Fock basis.
class DensityMatrix {
public:
    DensityMatrix() = default;
    explicit DensityMatrix(CMatrix elements) : rho_(std::move(elements)) {
        if (rho_.rows() != rho_.cols()) {
            throw DimensionMismatch("density matrix must be square");
        }
    }

    static DensityMatrix fock(int dim, int n) {
        if (n < 0 || n >= dim) {
            throw Error("Fock level " + std::to_string(n) + " outside truncation of " +
                        std::to_string(dim) + " levels");
        }
        CMatrix rho = CMatrix::Zero(dim, dim);
        rho(n, n) = 1.0;
        return DensityMatrix(std::move(rho));
    }

    static DensityMatrix diagonal(std::span<const double> populations) {
        const auto dim = static_cast<Eigen::Index>(populations.size());
        CMatrix rho = CMatrix::Zero(dim, dim);
        for (Eigen::Index n = 0; n < dim; ++n) {
            rho(n, n) = populations[static_cast<std::size_t>(n)];
        }
        return DensityMatrix(std::move(rho));
    }

    // Truncated, renormalized Gibbs state exp(-H/T)/Z of the undeformed
    // oscillator, parametrized by coth(omega/2T). Level ratio is
    // exp(-2 theta) = (coth - 1) / (coth + 1).
    static DensityMatrix gibbs(int dim, double coth) {
        const double r = (coth - 1.0) / (coth + 1.0);
        CMatrix rho = CMatrix::Zero(dim, dim);
        double weight = 1.0;
        double z = 0.0;
        for (int n = 0; n < dim; ++n) {
            rho(n, n) = weight;
            z += weight;
            weight *= r;
        }
        rho /= z;
        return DensityMatrix(std::move(rho));
    }

    int dim() const { return static_cast<int>(rho_.rows()); }
    const CMatrix& matrix() const { return rho_; }
    CMatrix& matrix() { return rho_; }

    double trace() const { return rho_.trace().real(); }
    double purity() const { return (rho_ * rho_).trace().real(); }
    double hermiticity_error() const { return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff(); }

    double min_eigenvalue() const {
        const CMatrix h = 0.5 * (rho_ + rho_.adjoint());
        Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
        return solver.eigenvalues().minCoeff();
    }

    // <N> and <N^2> from the diagonal.
    double mean_n() const {
        double s = 0.0;
        for (int n = 0; n < dim(); ++n) s += n * rho_(n, n).real();
        return s;
    }
    double mean_n2() const {
        double s = 0.0;
        for (int n = 0; n < dim(); ++n) s += static_cast<double>(n) * n * rho_(n, n).real();
        return s;
    }

    // Population of the two highest Fock levels.
    double top_population() const {
        double s = rho_(dim() - 1, dim() - 1).real();
        if (dim() >= 2) s += rho_(dim() - 2, dim() - 2).real();
        return s;
    }

    void hermitize() { rho_ = 0.5 * (rho_ + rho_.adjoint()).eval(); }

    // Throws unless Hermitian and of unit trace; positivity is reported,
    // not enforced.
    void validate() const {
        if (dim() < 1) {
            throw Error("empty density matrix");
        }
        if (hermiticity_error() > kHermitianTol) {
            throw Error("density matrix is not Hermitian (deviation " +
                        std::to_string(hermiticity_error()) + ")");
        }
        if (std::abs(trace() - 1.0) > kTraceTol) {
            throw Error("density matrix trace is " + std::to_string(trace()) + ", expected 1");
        }
    }

private:
    CMatrix rho_;
};

// Trace norm ||a - b||_1 of a Hermitian difference.
inline double trace_distance(const CMatrix& a, const CMatrix& b) {
    const CMatrix diff = a - b;
    const CMatrix h = 0.5 * (diff + diff.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseAbs().sum();
}

}  // namespace dlindblad

#pragma once

// Right-hand side of the master equation with deformed dissipation
//
//  drho/dt = -i omega [N, rho]
//    + D1/2  { f(N-1)f(N) a+a+ rho + rho a+a+ f(N+1)f(N+2) - 2 f(N) a+ rho a+ f(N+1) }
//    + D1*/2 { f(N+1)f(N+2) a a rho + rho a a f(N-1)f(N) - 2 f(N+1) a rho a f(N) }
//    - (D2+lambda)/2 { N f^2(N) rho + rho N f^2(N) - 2 f(N+1) a rho a+ f(N+1) }
//    - (D2-lambda)/2 { (N+1) f^2(N+1) rho + rho (N+1) f^2(N+1) - 2 f(N) a+ rho a f(N) }
//
// evaluated on the truncated Fock space, in operator form (apply) and as an
// explicit matrix-element recursion (apply_number_rep).

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dlindblad/deformation.hpp"
#include "dlindblad/density_matrix.hpp"
#include "dlindblad/environment.hpp"
#include "dlindblad/errors.hpp"
#include "dlindblad/fock_ops.hpp"

namespace dlindblad {

inline constexpr int kDefaultVectorizedCap = 60;

class DeformedLiouvillian {
public:
    // `inert_f` stands in for f(-1) and f(dim+1). Both only ever multiply
    // matrix elements that vanish on the truncated space.
    DeformedLiouvillian(const DeformationSpec& spec, int dim, const EnvironmentCoefficients& env,
                        double inert_f = 1.0)
        : ops_(build_operators(spec, dim)), env_(env) {
        const auto f = f_values(spec, dim);
        f_.resize(static_cast<std::size_t>(dim) + 3);
        // f_[k + 1] = f(k) for k = -1 .. dim + 1
        f_.front() = inert_f;
        for (int k = 0; k <= dim; ++k) f_[static_cast<std::size_t>(k) + 1] = f[static_cast<std::size_t>(k)];
        f_.back() = inert_f;

        RVector f0(dim), fp1(dim), fp2(dim), fm1(dim), g(dim), h(dim);
        for (int n = 0; n < dim; ++n) {
            f0(n) = f_at(n);
            fp1(n) = f_at(n + 1);
            fp2(n) = f_at(n + 2);
            fm1(n) = f_at(n - 1);
            g(n) = n * f0(n) * f0(n);
            h(n) = (n + 1) * fp1(n) * fp1(n);
        }
        const auto diag = [](const RVector& v) { return CMatrix(v.cast<Complex>().asDiagonal()); };
        const CMatrix F0 = diag(f0), Fp1 = diag(fp1), Fp2 = diag(fp2), Fm1 = diag(fm1);
        const CMatrix& a = ops_.a;
        const CMatrix& ad = ops_.a_dag;

        n_diag_ = ops_.n_op.diagonal().real();
        raise2_left_ = Fm1 * F0 * ad * ad;
        raise2_right_ = ad * ad * Fp1 * Fp2;
        lower2_left_ = Fp1 * Fp2 * a * a;
        lower2_right_ = a * a * Fm1 * F0;
        cross_raise_left_ = F0 * ad;
        cross_raise_right_ = ad * Fp1;
        cross_lower_left_ = Fp1 * a;
        cross_lower_right_ = a * F0;
        g_diag_ = g;
        h_diag_ = h;
        jump_down_ = Fp1 * a;
        jump_up_ = F0 * ad;
    }

    int dim() const { return ops_.dim; }
    const FockOperators& operators() const { return ops_; }
    const EnvironmentCoefficients& environment() const { return env_; }
    const DeformationSpec& spec() const { return ops_.spec; }

    // f(k) for -1 <= k <= dim + 1.
    double f_at(int k) const { return f_[static_cast<std::size_t>(k + 1)]; }

    CMatrix apply(const CMatrix& rho) const {
        check_dim(rho);
        const double omega = env_.omega;
        const double lambda = env_.lambda;
        const double d2 = env_.d2;
        const Complex d1 = env_.d1;
        const Complex i(0.0, 1.0);

        CMatrix out(dim(), dim());
        // -i omega [N, rho]
        for (int m = 0; m < dim(); ++m) {
            for (int n = 0; n < dim(); ++n) {
                out(m, n) = -i * omega * (n_diag_(m) - n_diag_(n)) * rho(m, n);
            }
        }
        if (d1 != Complex(0.0, 0.0)) {
            out += 0.5 * d1 *
                   (raise2_left_ * rho + rho * raise2_right_ -
                    2.0 * cross_raise_left_ * rho * cross_raise_right_);
            out += 0.5 * std::conj(d1) *
                   (lower2_left_ * rho + rho * lower2_right_ -
                    2.0 * cross_lower_left_ * rho * cross_lower_right_);
        }
        const CMatrix G = g_diag_.cast<Complex>().asDiagonal();
        const CMatrix H = h_diag_.cast<Complex>().asDiagonal();
        out -= 0.5 * (d2 + lambda) *
               (G * rho + rho * G - 2.0 * jump_down_ * rho * jump_down_.adjoint());
        out -= 0.5 * (d2 - lambda) *
               (H * rho + rho * H - 2.0 * jump_up_ * rho * jump_up_.adjoint());
        return out;
    }

    CMatrix apply(const DensityMatrix& rho) const { return apply(rho.matrix()); }

    // Element-by-element recursion in the number representation. Terms that
    // reference levels outside 0..dim-1 contribute zero.
    CMatrix apply_number_rep(const CMatrix& rho) const {
        check_dim(rho);
        const int d = dim();
        const double omega = env_.omega;
        const double plus = env_.d2 + env_.lambda;
        const double minus = env_.d2 - env_.lambda;
        const Complex d1 = env_.d1;
        const Complex d1c = std::conj(d1);
        const Complex i(0.0, 1.0);
        const auto r = [&](int m, int n) -> Complex {
            return (m < 0 || n < 0 || m >= d || n >= d) ? Complex(0.0, 0.0) : rho(m, n);
        };
        const auto f = [&](int k) { return f_at(k); };
        const auto s = [](double x) { return std::sqrt(x); };

        CMatrix out(d, d);
        for (int m = 0; m < d; ++m) {
            for (int n = 0; n < d; ++n) {
                Complex v = -i * omega * static_cast<double>(m - n) * r(m, n);
                v -= 0.5 *
                     (plus * (m * f(m) * f(m) + n * f(n) * f(n)) +
                      minus * ((m + 1) * f(m + 1) * f(m + 1) + (n + 1) * f(n + 1) * f(n + 1))) *
                     r(m, n);
                if (m + 1 < d && n + 1 < d) {
                    v += plus * s((m + 1.0) * (n + 1.0)) * f(m + 1) * f(n + 1) * r(m + 1, n + 1);
                }
                if (m >= 1 && n >= 1) {
                    v += minus * s(double(m) * n) * f(m) * f(n) * r(m - 1, n - 1);
                }
                if (m >= 1 && n + 1 < d) {
                    v -= d1 * s(m * (n + 1.0)) * f(m) * f(n + 1) * r(m - 1, n + 1);
                }
                if (m + 1 < d && n >= 1) {
                    v -= d1c * s((m + 1.0) * n) * f(m + 1) * f(n) * r(m + 1, n - 1);
                }
                if (n + 2 < d) {
                    v += 0.5 * d1 * s((n + 1.0) * (n + 2.0)) * f(n + 1) * f(n + 2) * r(m, n + 2);
                }
                if (m >= 2) {
                    v += 0.5 * d1 * s(m * (m - 1.0)) * f(m - 1) * f(m) * r(m - 2, n);
                }
                if (m + 2 < d) {
                    v += 0.5 * d1c * s((m + 1.0) * (m + 2.0)) * f(m + 1) * f(m + 2) * r(m + 2, n);
                }
                if (n >= 2) {
                    v += 0.5 * d1c * s(n * (n - 1.0)) * f(n - 1) * f(n) * r(m, n - 2);
                }
                out(m, n) = v;
            }
        }
        return out;
    }

    CMatrix apply_number_rep(const DensityMatrix& rho) const { return apply_number_rep(rho.matrix()); }

    // Matrix L with vec(drho/dt) = L vec(rho), vec stacking columns.
    CMatrix vectorized_matrix(int max_dim = kDefaultVectorizedCap) const {
        const int d = dim();
        if (d > max_dim) {
            throw DimensionTooLarge("vectorized Liouvillian requested for dim " + std::to_string(d) +
                                    " above the cap " + std::to_string(max_dim));
        }
        const CMatrix I = CMatrix::Identity(d, d);
        const auto left = [&](const CMatrix& x) { return kron(I, x); };              // x rho
        const auto right = [&](const CMatrix& y) { return kron(y.transpose(), I); };  // rho y
        const auto both = [&](const CMatrix& x, const CMatrix& y) { return kron(y.transpose(), x); };
        const Complex i(0.0, 1.0);
        const double lambda = env_.lambda;
        const double d2 = env_.d2;
        const Complex d1 = env_.d1;
        const CMatrix& N = ops_.n_op;
        const CMatrix G = g_diag_.cast<Complex>().asDiagonal();
        const CMatrix H = h_diag_.cast<Complex>().asDiagonal();

        CMatrix L = -i * env_.omega * (left(N) - right(N));
        L += 0.5 * d1 *
             (left(raise2_left_) + right(raise2_right_) -
              2.0 * both(cross_raise_left_, cross_raise_right_));
        L += 0.5 * std::conj(d1) *
             (left(lower2_left_) + right(lower2_right_) -
              2.0 * both(cross_lower_left_, cross_lower_right_));
        L -= 0.5 * (d2 + lambda) * (left(G) + right(G) - 2.0 * both(jump_down_, jump_down_.adjoint()));
        L -= 0.5 * (d2 - lambda) * (left(H) + right(H) - 2.0 * both(jump_up_, jump_up_.adjoint()));
        return L;
    }

    static CMatrix kron(const CMatrix& a, const CMatrix& b) {
        CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            for (Eigen::Index j = 0; j < a.cols(); ++j) {
                out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
            }
        }
        return out;
    }

private:
    void check_dim(const CMatrix& rho) const {
        if (rho.rows() != dim() || rho.cols() != dim()) {
            throw DimensionMismatch("state has dimension " + std::to_string(rho.rows()) + "x" +
                                    std::to_string(rho.cols()) + ", generator expects " +
                                    std::to_string(dim()));
        }
    }

    FockOperators ops_;
    EnvironmentCoefficients env_;
    std::vector<double> f_;
    RVector n_diag_;
    CMatrix raise2_left_, raise2_right_, lower2_left_, lower2_right_;
    CMatrix cross_raise_left_, cross_raise_right_, cross_lower_left_, cross_lower_right_;
    RVector g_diag_, h_diag_;
    CMatrix jump_down_, jump_up_;
};

// Column-stacking helpers matching vectorized_matrix.
inline Eigen::VectorXcd vec(const CMatrix& m) {
    return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size());
}

inline CMatrix unvec(const Eigen::VectorXcd& v, int dim) {
    return Eigen::Map<const CMatrix>(v.data(), dim, dim);
}

}  // namespace dlindblad

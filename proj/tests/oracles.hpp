// Independent reference computations used to check library results.
// Everything here is deliberately written against plain formulas
// (polynomial root finding, explicit inverses, SVD-based angles) so the
// checks do not share code paths with the implementations under test.
#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "rotarn/linalg.hpp"

namespace oracles {

using rotarn::Complex;
using rotarn::ComplexMatrix;
using rotarn::ComplexVector;

inline ComplexMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, unsigned seed) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    ComplexMatrix a(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) a(i, j) = Complex(dist(gen), dist(gen));
    return a;
}

inline ComplexVector random_vector(Eigen::Index n, unsigned seed) {
    return random_matrix(n, 1, seed).col(0);
}

/// Random matrix pushed away from singularity by a diagonal shift.
inline ComplexMatrix random_well_conditioned(Eigen::Index n, unsigned seed) {
    ComplexMatrix a = random_matrix(n, n, seed);
    a += static_cast<double>(n) * ComplexMatrix::Identity(n, n);
    return a;
}

/// Durand-Kerner simultaneous iteration for all roots of
/// c[0] + c[1] z + ... + c[d] z^d, c[d] != 0.
inline std::vector<Complex> polynomial_roots(const std::vector<Complex>& coeffs) {
    const int d = static_cast<int>(coeffs.size()) - 1;
    std::vector<Complex> z(d);
    // standard distinct non-real starting points
    const Complex seed(0.4, 0.9);
    Complex p(1.0, 0.0);
    for (int i = 0; i < d; ++i) {
        z[i] = p;
        p *= seed;
    }
    auto eval = [&](Complex x) {
        Complex v = coeffs[d];
        for (int i = d - 1; i >= 0; --i) v = v * x + coeffs[i];
        return v;
    };
    for (int iter = 0; iter < 500; ++iter) {
        double worst = 0.0;
        for (int i = 0; i < d; ++i) {
            Complex denom = coeffs[d];
            for (int j = 0; j < d; ++j) {
                if (j != i) denom *= z[i] - z[j];
            }
            const Complex delta = eval(z[i]) / denom;
            z[i] -= delta;
            worst = std::max(worst, std::abs(delta));
        }
        if (worst < 1e-14) break;
    }
    return z;
}

/// Coefficients of the product of two polynomials.
inline std::vector<Complex> poly_mul(const std::vector<Complex>& a,
                                     const std::vector<Complex>& b) {
    std::vector<Complex> out(a.size() + b.size() - 1, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

/// det(s^2 M + s C + K) for 2x2 blocks, expanded to the degree-4
/// scalar polynomial in s (coefficients in ascending order).
inline std::vector<Complex> qep_determinant_poly_2dof(const ComplexMatrix& m,
                                                      const ComplexMatrix& c,
                                                      const ComplexMatrix& k) {
    auto entry = [&](int i, int j) {
        return std::vector<Complex>{k(i, j), c(i, j), m(i, j)};
    };
    std::vector<Complex> det = poly_mul(entry(0, 0), entry(1, 1));
    std::vector<Complex> off = poly_mul(entry(0, 1), entry(1, 0));
    for (std::size_t i = 0; i < det.size(); ++i) det[i] -= off[i];
    return det;
}

/// Characteristic polynomial coefficients (ascending) via the
/// Faddeev-LeVerrier recurrence.
inline std::vector<Complex> characteristic_polynomial(const ComplexMatrix& a) {
    const Eigen::Index n = a.rows();
    std::vector<Complex> c(n + 1);
    c[n] = Complex(1.0, 0.0);
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    for (Eigen::Index k = 1; k <= n; ++k) {
        m = a * m + c[n - k + 1] * ComplexMatrix::Identity(n, n);
        c[n - k] = -(a * m).trace() / static_cast<double>(k);
    }
    return c;
}

/// Largest principal angle (radians) between the column spaces of u and
/// v, via the SVD of the product of orthonormalized factors.
inline double max_principal_angle(const ComplexMatrix& u, const ComplexMatrix& v) {
    Eigen::HouseholderQR<ComplexMatrix> qu(u), qv(v);
    ComplexMatrix quq = qu.householderQ() * ComplexMatrix::Identity(u.rows(), u.cols());
    ComplexMatrix qvq = qv.householderQ() * ComplexMatrix::Identity(v.rows(), v.cols());
    Eigen::JacobiSVD<ComplexMatrix> svd(quq.adjoint() * qvq);
    const double smin = svd.singularValues().minCoeff();
    return std::acos(std::min(1.0, smin));
}

/// Norm of the component of w outside the column space of v (columns
/// need not be orthonormal), relative to ||w||.
inline double projection_residual(const ComplexVector& w, const ComplexMatrix& v) {
    Eigen::HouseholderQR<ComplexMatrix> qr(v);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(v.rows(), v.cols());
    return (w - q * (q.adjoint() * w)).norm() / w.norm();
}

/// Greedy bipartite matching distance between two eigenvalue multisets.
inline double match_distance(std::vector<Complex> a, std::vector<Complex> b) {
    double worst = 0.0;
    for (const Complex& x : a) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_j = 0;
        for (std::size_t j = 0; j < b.size(); ++j) {
            const double d = std::abs(x - b[j]);
            if (d < best) {
                best = d;
                best_j = j;
            }
        }
        worst = std::max(worst, best);
        if (!b.empty()) b.erase(b.begin() + static_cast<long>(best_j));
    }
    return worst;
}

}  // namespace oracles

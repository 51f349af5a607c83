#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rotarn/linalg.hpp"

using namespace rotarn;
using oracles::random_matrix;
using oracles::random_vector;
using oracles::random_well_conditioned;

TEST_CASE("lu_factor on the identity") {
    LuFactors f = lu_factor(ComplexMatrix::Identity(3, 3));
    CHECK_FALSE(f.singular());
    CHECK(f.permutation() == Eigen::VectorXi::LinSpaced(3, 0, 2));
    CHECK((f.combined() - ComplexMatrix::Identity(3, 3)).cwiseAbs().maxCoeff() ==
          doctest::Approx(0.0));
}

TEST_CASE("lu_factor of a pure permutation") {
    ComplexMatrix a(2, 2);
    a << Complex(0, 0), Complex(1, 0), Complex(1, 0), Complex(0, 0);
    LuFactors f = lu_factor(a);
    CHECK_FALSE(f.singular());
    CHECK(f.permutation()(0) == 1);  // rows swapped
}

TEST_CASE("lu_factor reconstructs P*A = L*U on a seeded 8x8 matrix") {
    ComplexMatrix a = random_matrix(8, 8, 71);
    LuFactors f = lu_factor(a);
    ComplexMatrix l = ComplexMatrix::Identity(8, 8);
    ComplexMatrix u = ComplexMatrix::Zero(8, 8);
    for (Eigen::Index i = 0; i < 8; ++i)
        for (Eigen::Index j = 0; j < 8; ++j) {
            if (i > j) l(i, j) = f.combined()(i, j);
            else u(i, j) = f.combined()(i, j);
        }
    ComplexMatrix pa(8, 8);
    Eigen::VectorXi p = f.permutation();
    for (Eigen::Index i = 0; i < 8; ++i) pa.row(i) = a.row(p(i));
    const double scale = a.cwiseAbs().maxCoeff();
    CHECK((pa - l * u).cwiseAbs().maxCoeff() <= 1e-12 * scale);
}

TEST_CASE("lu_factor rejects non-square input") {
    CHECK_THROWS_AS(lu_factor(ComplexMatrix::Zero(2, 3)), DimensionError);
}

TEST_CASE("lu_factor flags singular matrices") {
    ComplexMatrix a = ComplexMatrix::Zero(3, 3);
    a(0, 0) = Complex(1.0, 0.0);
    LuFactors f = lu_factor(a);
    CHECK(f.singular());
    CHECK_THROWS_AS(f.solve(ComplexVector(ComplexVector::Ones(3))), SingularError);
}

TEST_CASE("lu_solve identity and diagonal cases") {
    ComplexVector b = random_vector(4, 5);
    CHECK((lu_solve(lu_factor(ComplexMatrix::Identity(4, 4)), b) - b).norm() <= 1e-14);

    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = Complex(2, 0);
    d(1, 1) = Complex(4, 0);
    ComplexVector rhs(2);
    rhs << Complex(2, 0), Complex(4, 0);
    ComplexVector x = lu_solve(lu_factor(d), rhs);
    CHECK((x - ComplexVector::Ones(2)).norm() <= 1e-14);
}

TEST_CASE("lu_solve matches the explicit inverse on a seeded 6x6 system") {
    ComplexMatrix a = random_well_conditioned(6, 12);
    ComplexVector b = random_vector(6, 13);
    ComplexVector x = lu_solve(lu_factor(a), b);
    ComplexVector x_ref = a.inverse() * b;  // adjugate-style dense inverse
    CHECK((x - x_ref).norm() <= 1e-10 * x_ref.norm());
}

TEST_CASE("lu round trip for seeded systems up to 64x64") {
    for (Eigen::Index n : {4, 16, 64}) {
        ComplexMatrix a = random_well_conditioned(n, 100 + static_cast<unsigned>(n));
        ComplexVector b = random_vector(n, 200 + static_cast<unsigned>(n));
        ComplexVector x = lu_solve(lu_factor(a), b);
        CHECK((a * x - b).norm() / b.norm() <= 1e-10);
    }
}

TEST_CASE("orthogonalize_against deflates a vector already in the span") {
    OrthonormalBasis basis(5, 3);
    basis.append_normalized(random_vector(5, 1));
    REQUIRE(basis.append(random_vector(5, 2), kDefaultEta));
    ComplexVector w = Complex(0.3, -0.2) * basis.columns().col(0) +
                      Complex(1.5, 0.4) * basis.columns().col(1);
    OrthogonalizeResult res = orthogonalize_against(w, basis, kDefaultEta);
    CHECK_FALSE(res.accepted);
    CHECK(res.residual.norm() <= 1e-12 * w.norm());
}

TEST_CASE("orthogonalize_against leaves an orthogonal vector unchanged") {
    OrthonormalBasis basis(4, 2);
    ComplexVector e0 = ComplexVector::Zero(4);
    e0(0) = 1.0;
    basis.append_normalized(e0);
    ComplexVector w = ComplexVector::Zero(4);
    w(2) = Complex(0.0, 2.0);
    OrthogonalizeResult res = orthogonalize_against(w, basis, kDefaultEta);
    CHECK(res.accepted);
    CHECK((res.residual - w).norm() <= 1e-14);
    CHECK(res.reorths == 0);  // one pass only
}

TEST_CASE("orthogonalize_against triggers the second pass on heavy cancellation") {
    // w = basis column + 1e-9 * fresh direction: the first pass removes
    // almost everything, so the eta test must fire a second pass.
    OrthonormalBasis basis(6, 1);
    basis.append_normalized(random_vector(6, 21));
    ComplexVector fresh = random_vector(6, 22);
    OrthogonalizeResult ortho = orthogonalize_against(fresh, basis, kDefaultEta);
    fresh = ortho.residual / ortho.residual.norm();

    ComplexVector w = basis.columns().col(0) + 1e-9 * fresh;
    OrthogonalizeResult res = orthogonalize_against(w, basis, kDefaultEta);
    CHECK(res.reorths == 1);

    // oracle: two explicit sequential projection passes
    ComplexVector ref = w;
    for (int pass = 0; pass < 2; ++pass) {
        ref -= (basis.columns().col(0).dot(ref)) * basis.columns().col(0);
    }
    CHECK((res.residual - ref).norm() <= 1e-8 * ref.norm());
    CHECK(std::abs(std::abs(fresh.dot(res.residual)) - res.residual.norm()) <=
          1e-8 * res.residual.norm());
}

TEST_CASE("orthogonalize_against rejects dimension mismatch and bad eta") {
    OrthonormalBasis basis(3, 1);
    basis.append_normalized(ComplexVector::Ones(3));
    CHECK_THROWS_AS(orthogonalize_against(ComplexVector::Ones(4), basis, 0.5),
                    DimensionError);
    CHECK_THROWS_AS(orthogonalize_against(ComplexVector::Ones(3), basis, 0.0), Error);
}

TEST_CASE("basis orthonormality holds out to 100 columns") {
    const Eigen::Index n = 120;
    OrthonormalBasis basis(n, 100);
    basis.append_normalized(random_vector(n, 500));
    for (unsigned j = 1; j < 100; ++j) {
        REQUIRE(basis.append(random_vector(n, 500 + j), kDefaultEta));
    }
    CHECK(basis.cols() == 100);
    CHECK(basis.orthogonality_defect() <= 1e-10);
    for (Eigen::Index j = 0; j < basis.cols(); ++j) {
        CHECK(std::abs(basis.columns().col(j).norm() - 1.0) <= 1e-12);
    }
}

TEST_CASE("dense_eig diagonal and companion cases") {
    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = Complex(1, 2);
    d(1, 1) = Complex(3, 0);
    EigenDecomposition dec = dense_eig(d, false);
    std::vector<Complex> vals(dec.eigenvalues.data(),
                              dec.eigenvalues.data() + dec.eigenvalues.size());
    CHECK(oracles::match_distance({Complex(1, 2), Complex(3, 0)}, vals) <= 1e-12);

    // companion of z^2 - 3z + 2 = (z-1)(z-2)
    ComplexMatrix comp = ComplexMatrix::Zero(2, 2);
    comp(0, 0) = Complex(3, 0);
    comp(0, 1) = Complex(-2, 0);
    comp(1, 0) = Complex(1, 0);
    dec = dense_eig(comp, false);
    vals.assign(dec.eigenvalues.data(), dec.eigenvalues.data() + 2);
    CHECK(oracles::match_distance({Complex(1, 0), Complex(2, 0)}, vals) <= 1e-10);
}

TEST_CASE("dense_eig matches the polynomial root oracle on a cubic companion") {
    // z^3 - (1+j) z^2 + 2 z - 5
    const std::vector<Complex> coeffs = {Complex(-5, 0), Complex(2, 0), Complex(-1, -1),
                                         Complex(1, 0)};
    ComplexMatrix comp = ComplexMatrix::Zero(3, 3);
    comp(0, 0) = Complex(1, 1);
    comp(0, 1) = Complex(-2, 0);
    comp(0, 2) = Complex(5, 0);
    comp(1, 0) = Complex(1, 0);
    comp(2, 1) = Complex(1, 0);
    EigenDecomposition dec = dense_eig(comp, true);
    std::vector<Complex> vals(dec.eigenvalues.data(), dec.eigenvalues.data() + 3);
    CHECK(oracles::match_distance(oracles::polynomial_roots(coeffs), vals) <= 1e-8);
    CHECK(dec.backward_error <= 1e-8);
}

TEST_CASE("dense_eig eigenvector residuals satisfy the decomposition contract") {
    ComplexMatrix h = random_matrix(12, 12, 31);
    EigenDecomposition dec = dense_eig(h, true);
    const double hnorm = h.norm();
    for (Eigen::Index i = 0; i < 12; ++i) {
        const ComplexVector x = dec.eigenvectors.col(i);
        CHECK((h * x - dec.eigenvalues(i) * x).norm() <= 1e-8 * hnorm * x.norm());
    }
}

TEST_CASE("dense_eig trace and determinant consistency up to size 40") {
    for (Eigen::Index n : {5, 20, 40}) {
        ComplexMatrix h = random_matrix(n, n, 600 + static_cast<unsigned>(n));
        EigenDecomposition dec = dense_eig(h, false);
        CHECK(std::abs(dec.eigenvalues.sum() - h.trace()) <=
              1e-8 * std::max(1.0, std::abs(h.trace())));
        Complex prod(1.0, 0.0);
        for (Eigen::Index i = 0; i < n; ++i) prod *= dec.eigenvalues(i);
        const Complex det = h.determinant();
        CHECK(std::abs(prod - det) <= 1e-6 * std::abs(det));
    }
}

TEST_CASE("dense_eig rejects bad input") {
    CHECK_THROWS_AS(dense_eig(ComplexMatrix::Zero(2, 3), false), DimensionError);
    ComplexMatrix bad = ComplexMatrix::Zero(2, 2);
    bad(0, 0) = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
    CHECK_THROWS_AS(dense_eig(bad, false), Error);
}

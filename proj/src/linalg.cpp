#include "rotarn/linalg.hpp"

#include <algorithm>
#include <cmath>

#include <lapacke.h>

namespace rotarn {

LuFactors::LuFactors(const ComplexMatrix& a) : lu_(a) {
    if (a.rows() != a.cols()) {
        throw DimensionError("lu_factor: matrix must be square, got " +
                             std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
    }
    const double scale = a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
    if (scale == 0.0) {
        singular_ = true;
        return;
    }
    const double tol = 1e-14 * scale;
    for (Eigen::Index i = 0; i < lu_.rows(); ++i) {
        if (std::abs(lu_.matrixLU()(i, i)) <= tol) {
            singular_ = true;
            break;
        }
    }
}

Eigen::VectorXi LuFactors::permutation() const {
    // Invert the stored convention (P)_{indices(i), i} = 1 so that entry i
    // names the input row landing in row i of P*A.
    const Eigen::VectorXi idx = lu_.permutationP().indices();
    Eigen::VectorXi out(idx.size());
    for (Eigen::Index i = 0; i < idx.size(); ++i) out(idx(i)) = static_cast<int>(i);
    return out;
}

ComplexVector LuFactors::solve(const ComplexVector& rhs) const {
    if (singular_) throw SingularError("lu_solve: factors are singular");
    if (rhs.size() != dim()) throw DimensionError("lu_solve: rhs size mismatch");
    return lu_.solve(rhs);
}

ComplexMatrix LuFactors::solve(const ComplexMatrix& rhs) const {
    if (singular_) throw SingularError("lu_solve: factors are singular");
    if (rhs.rows() != dim()) throw DimensionError("lu_solve: rhs size mismatch");
    return lu_.solve(rhs);
}

LuFactors lu_factor(const ComplexMatrix& a) { return LuFactors(a); }

ComplexVector lu_solve(const LuFactors& factors, const ComplexVector& rhs) {
    return factors.solve(rhs);
}

ComplexMatrix lu_solve(const LuFactors& factors, const ComplexMatrix& rhs) {
    return factors.solve(rhs);
}

OrthonormalBasis::OrthonormalBasis(Eigen::Index n, Eigen::Index max_cols)
    : storage_(n, std::max<Eigen::Index>(max_cols, 1)) {
    if (n < 1) throw DimensionError("OrthonormalBasis: dimension must be >= 1");
}

void OrthonormalBasis::append_normalized(const ComplexVector& w) {
    if (w.size() != rows()) throw DimensionError("OrthonormalBasis: column size mismatch");
    const double nrm = w.norm();
    if (nrm == 0.0) throw Error("OrthonormalBasis: zero start vector");
    if (cols_ == storage_.cols()) storage_.conservativeResize(Eigen::NoChange, 2 * cols_);
    storage_.col(cols_++) = w / nrm;
}

bool OrthonormalBasis::append(const ComplexVector& w, double eta) {
    OrthogonalizeResult res = orthogonalize_against(w, *this, eta);
    projection_count_ += res.projections;
    reorth_count_ += res.reorths;
    if (!res.accepted) {
        breakdown_ = true;
        return false;
    }
    if (cols_ == storage_.cols()) storage_.conservativeResize(Eigen::NoChange, 2 * cols_);
    storage_.col(cols_++) = res.residual / res.residual.norm();
    return true;
}

void OrthonormalBasis::truncate(Eigen::Index cols) {
    if (cols < cols_) cols_ = cols;
}

double OrthonormalBasis::orthogonality_defect() const {
    if (cols_ == 0) return 0.0;
    ComplexMatrix g = columns().adjoint() * columns();
    g -= ComplexMatrix::Identity(cols_, cols_);
    return g.cwiseAbs().maxCoeff();
}

OrthogonalizeResult orthogonalize_against(ComplexVector w,
                                          const OrthonormalBasis& basis,
                                          double eta) {
    if (w.size() != basis.rows()) {
        throw DimensionError("orthogonalize_against: vector size mismatch");
    }
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw Error("orthogonalize_against: eta must be in (0, 1]");
    }
    OrthogonalizeResult res;
    const double pre_norm = w.norm();
    auto v = basis.columns();
    for (Eigen::Index i = 0; i < basis.cols(); ++i) {
        w -= (v.col(i).dot(w)) * v.col(i);
        ++res.projections;
    }
    if (w.norm() < eta * pre_norm) {
        for (Eigen::Index i = 0; i < basis.cols(); ++i) {
            w -= (v.col(i).dot(w)) * v.col(i);
            ++res.reorths;
        }
    }
    res.accepted = w.norm() > kBreakdownTol * pre_norm;
    res.residual = std::move(w);
    return res;
}

EigenDecomposition dense_eig(const ComplexMatrix& h, bool want_vectors) {
    if (h.rows() != h.cols()) throw DimensionError("dense_eig: matrix must be square");
    if (!h.allFinite()) throw Error("dense_eig: matrix has non-finite entries");
    const lapack_int n = static_cast<lapack_int>(h.rows());
    ComplexMatrix a = h;  // zgeev overwrites its input
    EigenDecomposition dec;
    dec.eigenvalues.resize(n);
    if (want_vectors) dec.eigenvectors.resize(n, n);
    lapack_int info = LAPACKE_zgeev(
        LAPACK_COL_MAJOR, 'N', want_vectors ? 'V' : 'N', n,
        reinterpret_cast<lapack_complex_double*>(a.data()), n,
        reinterpret_cast<lapack_complex_double*>(dec.eigenvalues.data()), nullptr, 1,
        want_vectors ? reinterpret_cast<lapack_complex_double*>(dec.eigenvectors.data())
                     : nullptr,
        n);
    if (info < 0) throw Error("dense_eig: illegal argument to zgeev");
    if (info > 0) {
        throw ConvergenceError("dense_eig: QR iteration failed to converge (" +
                               std::to_string(info) + " of " + std::to_string(n) +
                               " eigenvalues missing)");
    }
    if (want_vectors && n > 0) {
        ComplexMatrix r = h * dec.eigenvectors -
                          dec.eigenvectors * dec.eigenvalues.asDiagonal();
        const double hnorm = h.norm();
        double worst = 0.0;
        for (lapack_int j = 0; j < n; ++j) {
            const double xn = dec.eigenvectors.col(j).norm();
            if (hnorm > 0.0 && xn > 0.0) {
                worst = std::max(worst, r.col(j).norm() / (hnorm * xn));
            }
        }
        dec.backward_error = worst;
    }
    return dec;
}

}  // namespace rotarn

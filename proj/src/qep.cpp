#include "rotarn/qep.hpp"

#include <cmath>

#include "rotarn/analysis.hpp"

namespace rotarn {

QuadraticPencil modal_pencil(const SystemMatrices& sys, double omega) {
    PencilBlocks blocks = compose_pencil(sys, omega);
    QuadraticPencil p;
    p.M = blocks.M.cast<Complex>();
    p.C = blocks.C.cast<Complex>();
    p.K = blocks.K.cast<Complex>();
    p.kind = PencilKind::Modal;
    p.parameter = omega;
    return p;
}

QuadraticPencil critical_speed_pencil(const SystemMatrices& sys, double n_ratio) {
    if (!(n_ratio > 0.0)) throw Error("critical_speed_pencil: n ratio must be > 0");
    const Complex jn(0.0, n_ratio);
    QuadraticPencil p;
    p.M = -n_ratio * n_ratio * sys.M0.cast<Complex>() + jn * sys.C1.cast<Complex>();
    p.C = jn * sys.damping_c0().cast<Complex>() + sys.K1.cast<Complex>();
    p.K = sys.K0.cast<Complex>();
    p.kind = PencilKind::CriticalSpeed;
    p.parameter = n_ratio;
    return p;
}

InverseOperators::InverseOperators(const QuadraticPencil& pencil)
    : k_lu_(pencil.K), c_(pencil.C), m_(pencil.M) {
    if (pencil.M.rows() != pencil.M.cols() || pencil.C.rows() != pencil.C.cols() ||
        pencil.K.rows() != pencil.K.cols() || pencil.M.rows() != pencil.C.rows() ||
        pencil.M.rows() != pencil.K.rows()) {
        throw DimensionError("invert: pencil blocks must be square and equal size");
    }
    if (k_lu_.singular()) {
        throw SingularError(
            "invert: K is singular; free-free rotors need a user-supplied "
            "spectral shift before the inverse operators exist");
    }
}

ComplexVector InverseOperators::apply_a(const ComplexVector& x) const {
    return -k_lu_.solve((c_ * x).eval());
}

ComplexVector InverseOperators::apply_b(const ComplexVector& x) const {
    return -k_lu_.solve((m_ * x).eval());
}

ComplexVector InverseOperators::apply_recurrence(const ComplexVector& x0,
                                                 const ComplexVector& x1) const {
    return -k_lu_.solve((m_ * x0 + c_ * x1).eval());
}

ComplexVector InverseOperators::apply_shifted(Complex s, const ComplexVector& x) const {
    return -k_lu_.solve((s * (m_ * x) + c_ * x).eval());
}

ComplexMatrix InverseOperators::materialize_a() const { return -k_lu_.solve(c_); }

ComplexMatrix InverseOperators::materialize_b() const { return -k_lu_.solve(m_); }

InverseOperators invert(const QuadraticPencil& pencil) {
    return InverseOperators(pencil);
}

void normalize_eigenvector(ComplexVector& v) {
    const double nrm = v.norm();
    if (nrm == 0.0) return;
    v /= nrm;
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    const Complex pivot = v(imax);
    if (std::abs(pivot) > 0.0) v *= std::abs(pivot) / pivot;
}

double pencil_residual(const QuadraticPencil& pencil, Complex s, const ComplexVector& v) {
    const double vn = v.norm();
    if (vn == 0.0) return 0.0;
    ComplexVector r = s * s * (pencil.M * v) + s * (pencil.C * v) + pencil.K * v;
    const double scale = std::norm(s) * pencil.M.norm() +
                         std::abs(s) * pencil.C.norm() + pencil.K.norm();
    return r.norm() / (scale * vn);
}

std::vector<EigenPair> exact_solve(const QuadraticPencil& pencil) {
    const Eigen::Index n = pencil.dof();
    LuFactors m_lu(pencil.M);
    if (m_lu.singular()) {
        throw SingularError("exact_solve: M is singular; expected a positive-definite mass block");
    }
    ComplexMatrix lin = ComplexMatrix::Zero(2 * n, 2 * n);
    lin.topLeftCorner(n, n) = -m_lu.solve(pencil.C);
    lin.topRightCorner(n, n) = -m_lu.solve(pencil.K);
    lin.bottomLeftCorner(n, n) = ComplexMatrix::Identity(n, n);

    EigenDecomposition dec = dense_eig(lin, true);
    std::vector<EigenPair> pairs;
    pairs.reserve(2 * n);
    for (Eigen::Index i = 0; i < 2 * n; ++i) {
        EigenPair p;
        p.s = dec.eigenvalues(i);
        p.v = dec.eigenvectors.col(i).tail(n);
        normalize_eigenvector(p.v);
        p.residual = pencil_residual(pencil, p.s, p.v);
        pairs.push_back(std::move(p));
    }
    canonical_sort(pairs);
    return pairs;
}

}  // namespace rotarn

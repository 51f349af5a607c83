#pragma once

#include <vector>

#include "rotarn/linalg.hpp"
#include "rotarn/rotor.hpp"

namespace rotarn {

enum class PencilKind { Modal, CriticalSpeed };

/// One concrete (M, C, K) pencil: (s^2 M + s C + K) v = 0.
struct QuadraticPencil {
    ComplexMatrix M, C, K;
    PencilKind kind = PencilKind::Modal;
    double parameter = 0.0;  // omega (modal) or the n ratio (critical speed)

    Eigen::Index dof() const { return M.rows(); }
};

struct EigenPair {
    Complex s;
    ComplexVector v;       // unit norm, largest-magnitude entry rotated real-positive
    double residual = 0.0; // scaled full-order residual
};

/// Modal pencil at angular velocity omega: blocks from compose_pencil.
QuadraticPencil modal_pencil(const SystemMatrices& sys, double omega);

/// Critical-speed pencil for excitation ratio n:
///   Mhat = -n^2 M0 + j n C1,  Chat = j n C0 + K1,  Khat = K0.
QuadraticPencil critical_speed_pencil(const SystemMatrices& sys, double n_ratio);

/// LU-backed actions of A = -K^{-1} C and B = -K^{-1} M. K is factored
/// once at construction and reused for every action.
class InverseOperators {
public:
    explicit InverseOperators(const QuadraticPencil& pencil);

    Eigen::Index dof() const { return c_.rows(); }
    ComplexVector apply_a(const ComplexVector& x) const;
    ComplexVector apply_b(const ComplexVector& x) const;
    /// B x0 + A x1 with a single back-substitution.
    ComplexVector apply_recurrence(const ComplexVector& x0, const ComplexVector& x1) const;
    /// (s B + A) x with a single back-substitution.
    ComplexVector apply_shifted(Complex s, const ComplexVector& x) const;
    ComplexMatrix materialize_a() const;
    ComplexMatrix materialize_b() const;
    const LuFactors& k_factors() const { return k_lu_; }

private:
    LuFactors k_lu_;
    ComplexMatrix c_, m_;
};

InverseOperators invert(const QuadraticPencil& pencil);

/// Unit 2-norm, then the entry of largest magnitude rotated to the
/// positive real axis.
void normalize_eigenvector(ComplexVector& v);

/// Scaled residual ||(s^2 M + s C + K) v|| /
///   ((|s|^2 ||M||_F + |s| ||C||_F + ||K||_F) ||v||).
double pencil_residual(const QuadraticPencil& pencil, Complex s, const ComplexVector& v);

/// Dense reference solve of the companion linearization
/// [[-M^{-1}C, -M^{-1}K], [I, 0]]; all 2n eigenpairs, canonically sorted.
std::vector<EigenPair> exact_solve(const QuadraticPencil& pencil);

}  // namespace rotarn

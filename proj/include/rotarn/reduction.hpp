#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rotarn/linalg.hpp"
#include "rotarn/qep.hpp"

namespace rotarn {

enum class Method { Arnoldi, Soar, Toar, Lqar, Qar, Tgsar1, Tgsar2 };

std::string method_name(Method m);
Method method_from_name(const std::string& name);  // "tgsar" maps to Tgsar2

struct ReductionSpec {
    Method method = Method::Tgsar2;
    int m = 10;
    double eta = kDefaultEta;
    // Start vectors; empty means all-ones of the pencil dimension.
    ComplexVector b, b0, b1;

    ReductionSpec() = default;
    ReductionSpec(Method method_, int m_) : method(method_), m(m_) {}
};

/// Fills empty start vectors with ones(n) and checks the rest.
ReductionSpec resolve_spec(const ReductionSpec& spec, Eigen::Index n);

struct Diagnostics {
    long projection_count = 0;
    long reorth_count = 0;
    bool breakdown = false;
    double factor_seconds = 0.0;  // LU of K
    double reduce_seconds = 0.0;  // basis + projection + reduced solve
};

struct ReductionResult {
    Method method = Method::Tgsar2;
    int m = 0;
    ComplexMatrix basis;      // n x d (2n x m for the Arnoldi baseline)
    ComplexMatrix reduced_a;  // d x d, or the m x m Hessenberg for Arnoldi
    ComplexMatrix reduced_b;  // empty for the Arnoldi baseline
    std::vector<EigenPair> eigenpairs;  // canonically sorted
    Diagnostics diagnostics;
};

// Basis procedures. Each returns as many columns as the subspace order
// allows; breakdown truncates and sets the basis flag.
OrthonormalBasis lqar_basis(const InverseOperators& ops, const ReductionSpec& spec);
double qar_power_estimate(const InverseOperators& ops, const ReductionSpec& spec);
OrthonormalBasis qar_basis(const InverseOperators& ops, const ReductionSpec& spec);
OrthonormalBasis tgsar1_basis(const InverseOperators& ops, const ReductionSpec& spec);
OrthonormalBasis tgsar2_basis(const InverseOperators& ops, const ReductionSpec& spec);
OrthonormalBasis soar_basis(const InverseOperators& ops, const ReductionSpec& spec);
OrthonormalBasis toar_basis(const InverseOperators& ops, const ReductionSpec& spec);

struct ToarData {
    OrthonormalBasis q;      // level-1 basis, the projection basis for A and B
    ComplexMatrix stacked;   // level-2 orthonormal stacked coefficient columns
};

ToarData toar_basis_full(const InverseOperators& ops, const ReductionSpec& spec);

struct LinearizedArnoldi {
    OrthonormalBasis basis;       // 2n x m
    ComplexMatrix hessenberg;     // m x m projection of [[0,I],[B,A]]
};

/// Standard Arnoldi on the 2n companion operator, started from the
/// stacked [b0; b1] normalized.
LinearizedArnoldi arnoldi_basis_linearized(const InverseOperators& ops,
                                           const ReductionSpec& spec);

/// d x d Galerkin projections V^H A V and V^H B V via operator actions.
std::pair<ComplexMatrix, ComplexMatrix> galerkin_reduce(const InverseOperators& ops,
                                                        const OrthonormalBasis& basis);

/// Threshold below which a reduced eigenvalue of the inverse problem is
/// treated as a spurious infinity and dropped.
inline constexpr double kSpuriousTol = 1e-12;

/// Linearizes [[0,I],[B_Q,A_Q]], solves it densely, maps lambda -> s =
/// 1/lambda, lifts eigenvectors through the basis and attaches the
/// full-order residual.
std::vector<EigenPair> solve_reduced(const ComplexMatrix& reduced_a,
                                     const ComplexMatrix& reduced_b,
                                     const ComplexMatrix& basis,
                                     const QuadraticPencil& pencil);

/// invert -> basis -> reduce -> solve, with the LU timed separately
/// from the reduction path.
ReductionResult run_reduction(const QuadraticPencil& pencil, const ReductionSpec& spec);

}  // namespace rotarn

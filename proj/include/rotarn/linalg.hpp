#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace rotarn {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class SingularError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Reorthogonalization threshold used throughout: sqrt(2)/2.
inline constexpr double kDefaultEta = 0.70710678118654752440;

/// A residual counts as zero (breakdown) when its norm falls below
/// this factor times the pre-orthogonalization norm.
inline constexpr double kBreakdownTol = 1e-12;

/// Partial-pivoting LU of a square complex matrix.
class LuFactors {
public:
    explicit LuFactors(const ComplexMatrix& a);

    Eigen::Index dim() const { return lu_.rows(); }
    bool singular() const { return singular_; }

    /// Combined L\U factor storage.
    const ComplexMatrix& combined() const { return lu_.matrixLU(); }
    /// Row permutation as applied to the input, P*A = L*U.
    Eigen::VectorXi permutation() const;

    ComplexVector solve(const ComplexVector& rhs) const;
    ComplexMatrix solve(const ComplexMatrix& rhs) const;

private:
    Eigen::PartialPivLU<ComplexMatrix> lu_;
    bool singular_ = false;
};

LuFactors lu_factor(const ComplexMatrix& a);
ComplexVector lu_solve(const LuFactors& factors, const ComplexVector& rhs);
ComplexMatrix lu_solve(const LuFactors& factors, const ComplexMatrix& rhs);

/// Growing orthonormal column set built by modified Gram-Schmidt with
/// one threshold-triggered reorthogonalization pass.
class OrthonormalBasis {
public:
    OrthonormalBasis(Eigen::Index n, Eigen::Index max_cols);

    Eigen::Index rows() const { return storage_.rows(); }
    Eigen::Index cols() const { return cols_; }

    /// The n x cols orthonormal matrix.
    Eigen::Ref<const ComplexMatrix> columns() const { return storage_.leftCols(cols_); }
    ComplexMatrix matrix() const { return storage_.leftCols(cols_); }

    /// Normalizes w and appends it without orthogonalization.
    void append_normalized(const ComplexVector& w);

    /// Orthogonalizes w against the current columns (eta branch) and
    /// appends the normalized residual. Returns false on breakdown, in
    /// which case the basis is unchanged and the breakdown flag is set.
    bool append(const ComplexVector& w, double eta);

    void truncate(Eigen::Index cols);

    long projection_count() const { return projection_count_; }
    long reorth_count() const { return reorth_count_; }
    bool breakdown() const { return breakdown_; }

    void add_projections(long n) { projection_count_ += n; }
    void add_reorths(long n) { reorth_count_ += n; }
    void set_breakdown() { breakdown_ = true; }

    double orthogonality_defect() const;

private:
    ComplexMatrix storage_;
    Eigen::Index cols_ = 0;
    long projection_count_ = 0;
    long reorth_count_ = 0;
    bool breakdown_ = false;
};

struct OrthogonalizeResult {
    ComplexVector residual;
    bool accepted = false;
    long projections = 0;   // first-pass column visits
    long reorths = 0;       // second-pass column visits
};

/// One modified Gram-Schmidt pass of w against the basis columns; a
/// single extra full pass when the norm drops below eta times the
/// pre-pass norm. accepted=false when the final residual norm is below
/// kBreakdownTol times the pre-pass norm.
OrthogonalizeResult orthogonalize_against(ComplexVector w,
                                          const OrthonormalBasis& basis,
                                          double eta);

struct EigenDecomposition {
    ComplexVector eigenvalues;
    ComplexMatrix eigenvectors;   // empty unless requested
    double backward_error = 0.0;  // max_i ||H x - l x|| / (||H||_F ||x||)
};

/// All eigenvalues (and optionally right eigenvectors) of a square
/// complex matrix.
EigenDecomposition dense_eig(const ComplexMatrix& h, bool want_vectors);

}  // namespace rotarn

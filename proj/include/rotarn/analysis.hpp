#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "rotarn/qep.hpp"
#include "rotarn/reduction.hpp"

namespace rotarn {

struct ModalQuantities {
    Complex s;              // rad/s
    double natural = 0.0;   // |s|
    double damped = 0.0;    // Im(s), sign-carrying
    double damping_ratio = 0.0;  // -Re(s)/|s|
};

ModalQuantities modal_quantities(Complex s);

struct CriticalSpeedResult {
    Complex omega;
    bool accepted = false;
    double speed = 0.0;  // Re(omega) when accepted
};

/// Keeps an eigenvalue as a physical critical speed iff |Im| < |Re|
/// (strict both ways; the boundary is rejected). Accepted results come
/// back ascending by |speed|.
std::vector<CriticalSpeedResult> critical_speed_filter(const std::vector<Complex>& omegas);

/// Ascending |s|; equal-magnitude (conjugate) partners ordered by
/// ascending imaginary part, then ascending real part.
void canonical_sort(std::vector<Complex>& values);
void canonical_sort(std::vector<EigenPair>& pairs);

/// Sum over positions of | |Re| - |Re| | + | |Im| - |Im| | between two
/// canonically sorted lists of equal length.
double error_metric(const std::vector<Complex>& exact, const std::vector<Complex>& approx);

/// Rank histogram n_1..n_5 -> sum n_i * (1 - (i-1)*0.2). Ranks past 5
/// score zero.
double score_metric(const std::vector<long>& rank_histogram);

struct MethodOutcome {
    Method method = Method::Arnoldi;
    int m = 0;
    std::vector<Complex> eigenvalues;  // canonically sorted, truncated to k
    double error = 0.0;
    double elapsed_seconds = 0.0;
    bool failed = false;
    std::string message;
};

struct ComparisonReport {
    std::vector<MethodOutcome> rows;
    std::vector<Complex> exact;  // truncated reference
    int k = 0;
    /// Per-method rank histograms over the per-m comparisons (ranks 1..5+).
    std::map<Method, std::vector<long>> rank_histograms;
    std::map<Method, double> scores;
};

/// Runs every spec against the pencil, sorts, truncates to k and scores
/// the error against the exact reference. Per-method failures are
/// recorded in the row instead of aborting the report. Rank histograms
/// and scores are computed across the distinct m values present; ties
/// share the better rank.
ComparisonReport compare_methods(const QuadraticPencil& pencil,
                                 const std::vector<ReductionSpec>& specs, int k,
                                 const std::vector<EigenPair>& exact);

/// Scores precomputed eigenvalue lists (replay path; nothing is re-run).
ComparisonReport compare_eigenvalue_lists(
    const std::vector<Complex>& exact,
    const std::vector<std::pair<Method, std::vector<Complex>>>& columns, int k);

struct CampbellPoint {
    double omega = 0.0;
    int mode = 0;          // 0-based index among the retained frequencies
    double damped = 0.0;   // w_d, rad/s
};

struct CampbellCrossing {
    double n_ratio = 0.0;
    int mode = 0;
    double omega = 0.0;  // interpolated speed where w_d = n*omega
    double frequency = 0.0;
};

struct CampbellSweep {
    std::vector<CampbellPoint> points;
    std::vector<CampbellCrossing> crossings;
};

using ModalSolver =
    std::function<std::vector<EigenPair>(const QuadraticPencil&)>;

/// First k positive damped natural frequencies over the speed grid,
/// plus linearly interpolated crossings with the lines w = n * omega.
CampbellSweep campbell_sweep(const SystemMatrices& sys,
                             const std::vector<double>& omega_grid,
                             const std::vector<double>& n_ratios, int k,
                             const ModalSolver& solver);

}  // namespace rotarn

#include "rotarn/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace rotarn {

ModalQuantities modal_quantities(Complex s) {
    if (s == Complex(0.0, 0.0)) throw Error("modal_quantities: s = 0 has no damping ratio");
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) {
        throw Error("modal_quantities: s must be finite");
    }
    ModalQuantities q;
    q.s = s;
    q.natural = std::abs(s);
    q.damped = s.imag();
    q.damping_ratio = -s.real() / q.natural;
    return q;
}

std::vector<CriticalSpeedResult> critical_speed_filter(const std::vector<Complex>& omegas) {
    std::vector<CriticalSpeedResult> out;
    out.reserve(omegas.size());
    for (const Complex& w : omegas) {
        CriticalSpeedResult r;
        r.omega = w;
        r.accepted = std::abs(w.imag()) < std::abs(w.real());
        r.speed = r.accepted ? w.real() : 0.0;
        out.push_back(r);
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const CriticalSpeedResult& a, const CriticalSpeedResult& b) {
                         if (a.accepted != b.accepted) return a.accepted > b.accepted;
                         if (std::abs(a.speed) != std::abs(b.speed))
                             return std::abs(a.speed) < std::abs(b.speed);
                         return a.speed < b.speed;
                     });
    return out;
}

namespace {

bool canonical_less(const Complex& a, const Complex& b) {
    // Conjugate partners come out of the dense solver with magnitudes
    // equal only to rounding; treat them as tied so the imaginary part
    // decides their order.
    const double ma = std::abs(a), mb = std::abs(b);
    if (std::abs(ma - mb) > 1e-9 * std::max(ma, mb)) return ma < mb;
    if (a.imag() != b.imag()) return a.imag() < b.imag();
    return a.real() < b.real();
}

}  // namespace

void canonical_sort(std::vector<Complex>& values) {
    std::sort(values.begin(), values.end(), canonical_less);
}

void canonical_sort(std::vector<EigenPair>& pairs) {
    std::sort(pairs.begin(), pairs.end(),
              [](const EigenPair& a, const EigenPair& b) { return canonical_less(a.s, b.s); });
}

double error_metric(const std::vector<Complex>& exact, const std::vector<Complex>& approx) {
    if (exact.size() != approx.size()) {
        throw DimensionError("error_metric: lists must have equal length");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < exact.size(); ++i) {
        sum += std::abs(std::abs(exact[i].real()) - std::abs(approx[i].real()));
        sum += std::abs(std::abs(exact[i].imag()) - std::abs(approx[i].imag()));
    }
    return sum;
}

double score_metric(const std::vector<long>& rank_histogram) {
    double score = 0.0;
    const std::size_t top = std::min<std::size_t>(rank_histogram.size(), 5);
    for (std::size_t i = 0; i < top; ++i) {
        score += static_cast<double>(rank_histogram[i]) * (1.0 - 0.2 * static_cast<double>(i));
    }
    return score;
}

namespace {

std::vector<Complex> truncated_eigenvalues(const std::vector<EigenPair>& pairs, int k) {
    std::vector<Complex> out;
    out.reserve(k);
    for (int i = 0; i < k && i < static_cast<int>(pairs.size()); ++i) {
        out.push_back(pairs[i].s);
    }
    return out;
}

void rank_and_score(ComparisonReport& report) {
    // collect the distinct m values, rank methods within each
    std::vector<int> ms;
    for (const auto& row : report.rows) {
        if (std::find(ms.begin(), ms.end(), row.m) == ms.end()) ms.push_back(row.m);
    }
    for (const auto& row : report.rows) {
        auto& hist = report.rank_histograms[row.method];
        if (hist.empty()) hist.assign(6, 0);
    }
    for (int m : ms) {
        std::vector<const MethodOutcome*> round;
        for (const auto& row : report.rows) {
            if (row.m == m && !row.failed) round.push_back(&row);
        }
        std::sort(round.begin(), round.end(),
                  [](const MethodOutcome* a, const MethodOutcome* b) {
                      return a->error < b->error;
                  });
        for (std::size_t i = 0; i < round.size(); ++i) {
            // tied errors share the better rank
            std::size_t rank = i;
            while (rank > 0 && round[rank - 1]->error == round[i]->error) --rank;
            auto& hist = report.rank_histograms[round[i]->method];
            hist[std::min<std::size_t>(rank, 5)] += 1;
        }
    }
    for (const auto& [method, hist] : report.rank_histograms) {
        report.scores[method] = score_metric(hist);
    }
}

}  // namespace

ComparisonReport compare_methods(const QuadraticPencil& pencil,
                                 const std::vector<ReductionSpec>& specs, int k,
                                 const std::vector<EigenPair>& exact) {
    if (static_cast<int>(exact.size()) < k) {
        throw Error("compare_methods: reference has fewer than k eigenvalues");
    }
    ComparisonReport report;
    report.k = k;
    report.exact = truncated_eigenvalues(exact, k);
    for (const ReductionSpec& spec : specs) {
        MethodOutcome row;
        row.method = spec.method;
        row.m = spec.m;
        try {
            const auto t0 = std::chrono::steady_clock::now();
            ReductionResult res = run_reduction(pencil, spec);
            row.elapsed_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            row.eigenvalues = truncated_eigenvalues(res.eigenpairs, k);
            if (static_cast<int>(row.eigenvalues.size()) < k) {
                row.failed = true;
                row.message = "method produced fewer than k eigenvalues";
            } else {
                row.error = error_metric(report.exact, row.eigenvalues);
            }
        } catch (const Error& e) {
            row.failed = true;
            row.message = e.what();
        }
        report.rows.push_back(std::move(row));
    }
    rank_and_score(report);
    return report;
}

ComparisonReport compare_eigenvalue_lists(
    const std::vector<Complex>& exact,
    const std::vector<std::pair<Method, std::vector<Complex>>>& columns, int k) {
    ComparisonReport report;
    report.k = k;
    report.exact = exact;
    if (static_cast<int>(report.exact.size()) > k) report.exact.resize(k);
    for (const auto& [method, values] : columns) {
        MethodOutcome row;
        row.method = method;
        row.m = 0;
        row.eigenvalues = values;
        if (static_cast<int>(row.eigenvalues.size()) > k) row.eigenvalues.resize(k);
        row.error = error_metric(report.exact, row.eigenvalues);
        report.rows.push_back(std::move(row));
    }
    rank_and_score(report);
    return report;
}

CampbellSweep campbell_sweep(const SystemMatrices& sys,
                             const std::vector<double>& omega_grid,
                             const std::vector<double>& n_ratios, int k,
                             const ModalSolver& solver) {
    if (omega_grid.empty()) throw Error("campbell_sweep: empty speed grid");
    for (std::size_t i = 1; i < omega_grid.size(); ++i) {
        if (!(omega_grid[i] > omega_grid[i - 1])) {
            throw Error("campbell_sweep: speed grid must be ascending");
        }
    }
    CampbellSweep sweep;
    // frequency table: first k positive damped frequencies per speed
    std::vector<std::vector<double>> freq(omega_grid.size());
    for (std::size_t g = 0; g < omega_grid.size(); ++g) {
        std::vector<EigenPair> pairs = solver(modal_pencil(sys, omega_grid[g]));
        for (const EigenPair& p : pairs) {
            if (p.s.imag() > 0.0) freq[g].push_back(p.s.imag());
            if (static_cast<int>(freq[g].size()) == k) break;
        }
        for (int mode = 0; mode < static_cast<int>(freq[g].size()); ++mode) {
            sweep.points.push_back({omega_grid[g], mode, freq[g][mode]});
        }
    }
    for (double n : n_ratios) {
        for (std::size_t g = 0; g + 1 < omega_grid.size(); ++g) {
            const std::size_t modes =
                std::min(freq[g].size(), freq[g + 1].size());
            for (std::size_t mode = 0; mode < modes; ++mode) {
                const double f0 = freq[g][mode] - n * omega_grid[g];
                const double f1 = freq[g + 1][mode] - n * omega_grid[g + 1];
                if (f0 == 0.0) {
                    sweep.crossings.push_back({n, static_cast<int>(mode), omega_grid[g],
                                               freq[g][mode]});
                } else if (f0 * f1 < 0.0) {
                    const double t = f0 / (f0 - f1);
                    const double omega =
                        omega_grid[g] + t * (omega_grid[g + 1] - omega_grid[g]);
                    const double w =
                        freq[g][mode] + t * (freq[g + 1][mode] - freq[g][mode]);
                    sweep.crossings.push_back({n, static_cast<int>(mode), omega, w});
                }
            }
        }
    }
    std::stable_sort(sweep.crossings.begin(), sweep.crossings.end(),
                     [](const CampbellCrossing& a, const CampbellCrossing& b) {
                         if (a.n_ratio != b.n_ratio) return a.n_ratio < b.n_ratio;
                         return a.omega < b.omega;
                     });
    return sweep;
}

}  // namespace rotarn

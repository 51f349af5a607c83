#include "rotarn/reduction.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "rotarn/analysis.hpp"

namespace rotarn {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Joint rescale of a recurrence pair; the ratio of norms and every
// generated direction are invariant under it, while the raw sequence
// itself would otherwise grow or decay geometrically.
void rescale_pair(ComplexVector& r0, ComplexVector& r1) {
    const double scale = std::max(r0.norm(), r1.norm());
    if (scale > 0.0) {
        r0 /= scale;
        r1 /= scale;
    }
}

}  // namespace

std::string method_name(Method m) {
    switch (m) {
        case Method::Arnoldi: return "arnoldi";
        case Method::Soar: return "soar";
        case Method::Toar: return "toar";
        case Method::Lqar: return "lqar";
        case Method::Qar: return "qar";
        case Method::Tgsar1: return "tgsar1";
        case Method::Tgsar2: return "tgsar2";
    }
    return "unknown";
}

Method method_from_name(const std::string& name) {
    if (name == "arnoldi") return Method::Arnoldi;
    if (name == "soar") return Method::Soar;
    if (name == "toar") return Method::Toar;
    if (name == "lqar") return Method::Lqar;
    if (name == "qar") return Method::Qar;
    if (name == "tgsar1") return Method::Tgsar1;
    if (name == "tgsar2" || name == "tgsar") return Method::Tgsar2;
    throw Error("unknown reduction method '" + name + "'");
}

ReductionSpec resolve_spec(const ReductionSpec& spec, Eigen::Index n) {
    ReductionSpec out = spec;
    if (out.m < 1) throw Error("reduction: m must be >= 1");
    // The linearized baseline iterates on the 2n companion operator and
    // may therefore run up to 2n steps.
    const Eigen::Index limit = out.method == Method::Arnoldi ? 2 * n : n;
    if (out.m > limit) throw Error("reduction: m must not exceed the pencil dimension");
    if (!(out.eta > 0.0 && out.eta <= 1.0)) throw Error("reduction: eta must be in (0, 1]");
    auto fill = [&](ComplexVector& v, const char* what) {
        if (v.size() == 0) v = ComplexVector::Ones(n);
        if (v.size() != n) throw DimensionError(std::string("reduction: start vector ") +
                                               what + " has wrong dimension");
        if (v.norm() == 0.0) throw Error(std::string("reduction: start vector ") + what +
                                         " is zero");
    };
    fill(out.b, "b");
    fill(out.b0, "b0");
    fill(out.b1, "b1");
    return out;
}

OrthonormalBasis lqar_basis(const InverseOperators& ops, const ReductionSpec& raw) {
    const ReductionSpec spec = resolve_spec(raw, ops.dof());
    OrthonormalBasis v(ops.dof(), spec.m);
    v.append_normalized(spec.b1);
    // The two-term recurrence runs on the raw sequence; only a copy of
    // each new vector is orthogonalized into the basis, so span(V)
    // stays the span of {r_0, ..., r_{m-1}} itself.
    ComplexVector r0 = spec.b0 / spec.b0.norm();
    ComplexVector r1 = spec.b1 / spec.b1.norm();
    // A deflated term does not end the recurrence: later terms can still
    // leave the current span, so keep iterating (up to a 2m-step cap)
    // until m columns are collected.
    auto recur = [&] {
        for (int j = 1; v.cols() < spec.m && j < 2 * spec.m; ++j) {
            ComplexVector next = ops.apply_recurrence(r0, r1);
            r0 = std::move(r1);
            r1 = std::move(next);
            rescale_pair(r0, r1);
            v.append(r1, spec.eta);
        }
    };
    recur();
    // In floating point the pair eventually settles into the dominant
    // invariant subspace and stops producing new directions. Reseed the
    // recurrence from outside the current span until the requested order
    // is reached or the whole space is exhausted.
    const Eigen::Index n = ops.dof();
    for (Eigen::Index probe = 0; v.cols() < spec.m && probe < n; ++probe) {
        ComplexVector e = ComplexVector::Zero(n);
        e(probe) = 1.0;
        OrthogonalizeResult res = orthogonalize_against(std::move(e), v, spec.eta);
        v.add_projections(res.projections);
        v.add_reorths(res.reorths);
        if (!res.accepted) continue;
        ComplexVector seed = res.residual / res.residual.norm();
        v.append_normalized(seed);
        r0 = seed;
        r1 = std::move(seed);
        recur();
    }
    return v;
}

double qar_power_estimate(const InverseOperators& ops, const ReductionSpec& raw) {
    // The estimate runs m-1 power steps, not m basis columns, so m may
    // exceed the pencil dimension here.
    ReductionSpec unbounded = raw;
    unbounded.m = 1;
    ReductionSpec spec = resolve_spec(unbounded, ops.dof());
    spec.m = raw.m;
    if (spec.m < 1) throw Error("reduction: m must be >= 1");
    ComplexVector u0 = spec.b0 / spec.b0.norm();
    ComplexVector u1 = spec.b1 / spec.b1.norm();
    for (int k = 1; k < spec.m; ++k) {
        ComplexVector next = ops.apply_recurrence(u0, u1);
        u0 = std::move(u1);
        u1 = std::move(next);
        rescale_pair(u0, u1);
    }
    const double denom = u1.norm();
    if (denom == 0.0) throw Error("qar_power_estimate: iteration collapsed to zero");
    return u0.norm() / denom;
}

OrthonormalBasis qar_basis(const InverseOperators& ops, const ReductionSpec& raw) {
    const ReductionSpec spec = resolve_spec(raw, ops.dof());
    const double shift = qar_power_estimate(ops, spec);
    OrthonormalBasis v(ops.dof(), spec.m);
    v.append_normalized(spec.b);
    for (int j = 1; j < spec.m; ++j) {
        ComplexVector w = ops.apply_shifted(shift, v.columns().col(j - 1));
        if (!v.append(w, spec.eta)) break;
    }
    return v;
}

OrthonormalBasis tgsar2_basis(const InverseOperators& ops, const ReductionSpec& raw) {
    const ReductionSpec spec = resolve_spec(raw, ops.dof());
    const int target = 2 * spec.m - 1;
    OrthonormalBasis v(ops.dof(), target + 1);
    v.append_normalized(spec.b);
    if (spec.m == 1) return v;
    // Per-operator chains, each orthonormal within itself so the power
    // directions stay independent in floating point; their spans are the
    // single-operator subspaces, and odd merged columns take the next A
    // direction, even columns the next B direction.
    OrthonormalBasis qa(ops.dof(), spec.m + 1);
    OrthonormalBasis qb(ops.dof(), spec.m + 1);
    qa.append_normalized(spec.b);
    qb.append_normalized(spec.b);
    auto advance = [&](int j) -> ComplexVector {
        OrthonormalBasis& chain = (j % 2 == 1) ? qa : qb;
        const ComplexVector last = chain.columns().col(chain.cols() - 1);
        ComplexVector next = (j % 2 == 1) ? ops.apply_a(last) : ops.apply_b(last);
        if (!chain.append(next, spec.eta)) return ComplexVector();
        return chain.columns().col(chain.cols() - 1);
    };
    for (int j = 1; j <= target; ++j) {
        ComplexVector w = advance(j);
        if (w.size() == 0) {
            v.set_breakdown();  // the operator's subspace is exhausted
            break;
        }
        if (j < target) {
            if (!v.append(w, spec.eta)) break;
        } else {
            // The procedure performs one more full sweep whose column is
            // then discarded; do the work so the counters reflect it.
            OrthogonalizeResult res = orthogonalize_against(std::move(w), v, spec.eta);
            v.add_projections(res.projections);
            v.add_reorths(res.reorths);
        }
    }
    return v;
}

OrthonormalBasis tgsar1_basis(const InverseOperators& ops, const ReductionSpec& raw) {
    const ReductionSpec spec = resolve_spec(raw, ops.dof());
    const Eigen::Index n = ops.dof();
    const int m = spec.m;

    // Phase bases of S_m(A;b) and S_m(B;b); each loop runs one step
    // past the kept width, matching the first-pass iteration budget.
    auto krylov_phase = [&](bool use_a) {
        OrthonormalBasis v(n, m + 1);
        v.append_normalized(spec.b);
        for (int j = 1; j <= m && !v.breakdown(); ++j) {
            ComplexVector w = use_a ? ops.apply_a(v.columns().col(j - 1))
                                    : ops.apply_b(v.columns().col(j - 1));
            if (j < m) {
                v.append(w, spec.eta);
            } else {
                OrthogonalizeResult res = orthogonalize_against(std::move(w), v, spec.eta);
                v.add_projections(res.projections);
                v.add_reorths(res.reorths);
            }
        }
        return v;
    };
    OrthonormalBasis v1 = krylov_phase(true);
    OrthonormalBasis v2 = krylov_phase(false);

    OrthonormalBasis merged(n, 2 * m - 1);
    for (Eigen::Index i = 0; i < v1.cols(); ++i) merged.append_normalized(v1.columns().col(i));
    merged.add_projections(v1.projection_count() + v2.projection_count());
    merged.add_reorths(v1.reorth_count() + v2.reorth_count());
    if (v1.breakdown() || v2.breakdown()) merged.set_breakdown();

    // Merge pass: columns 2..m of the B-phase, re-orthogonalized against
    // everything accumulated so far. The first-pass sweep for the column
    // at global position j spans j slots; the terminal slot only rescales
    // the column, so it is counted without a subtraction.
    for (Eigen::Index i = 1; i < std::min<Eigen::Index>(v2.cols(), m); ++i) {
        OrthogonalizeResult res =
            orthogonalize_against(v2.columns().col(i), merged, spec.eta);
        merged.add_projections(res.projections + 1);
        merged.add_reorths(res.reorths);
        if (!res.accepted) {
            merged.set_breakdown();
            break;
        }
        merged.append_normalized(res.residual);
    }
    return merged;
}

OrthonormalBasis soar_basis(const InverseOperators& ops, const ReductionSpec& raw) {
    const ReductionSpec spec = resolve_spec(raw, ops.dof());
    const Eigen::Index n = ops.dof();
    OrthonormalBasis q(n, spec.m);
    q.append_normalized(spec.b1);
    ComplexMatrix p = ComplexMatrix::Zero(n, spec.m);  // auxiliary second-order chain
    for (int j = 0; j + 1 < spec.m; ++j) {
        ComplexVector r = ops.apply_recurrence(p.col(j), q.columns().col(j));
        ComplexVector t = q.columns().col(j);
        const double pre = r.norm();
        auto sweep = [&](bool first_pass) {
            for (Eigen::Index i = 0; i <= j; ++i) {
                const Complex h = q.columns().col(i).dot(r);
                r -= h * q.columns().col(i);
                t -= h * p.col(i);
                if (first_pass) q.add_projections(1); else q.add_reorths(1);
            }
        };
        sweep(true);
        if (r.norm() < spec.eta * pre) sweep(false);
        const double h = r.norm();
        if (h <= kBreakdownTol * pre) {
            q.set_breakdown();  // deflation: r vanished while t need not
            break;
        }
        q.append_normalized(r);
        p.col(j + 1) = t / h;
    }
    return q;
}

ToarData toar_basis_full(const InverseOperators& ops, const ReductionSpec& raw) {
    const ReductionSpec spec = resolve_spec(raw, ops.dof());
    const Eigen::Index n = ops.dof();
    const int m = spec.m;
    ToarData data{OrthonormalBasis(n, m + 1), ComplexMatrix()};
    OrthonormalBasis& q = data.q;
    q.append_normalized(spec.b1);

    // Level-2 coefficient columns, stored padded to the maximum level-1
    // rank; column j represents the full vector [Q top_j; Q bot_j].
    const Eigen::Index max_rank = m + 1;
    ComplexMatrix top = ComplexMatrix::Zero(max_rank, m);
    ComplexMatrix bot = ComplexMatrix::Zero(max_rank, m);
    Eigen::Index rank = 1;
    Eigen::Index cols = 1;
    top(0, 0) = q.columns().col(0).dot(spec.b0);
    bot(0, 0) = spec.b1.norm();
    {
        const double nrm = std::sqrt(std::norm(top(0, 0)) + std::norm(bot(0, 0)));
        top(0, 0) /= nrm;
        bot(0, 0) /= nrm;
    }

    for (int j = 0; j + 1 < m; ++j) {
        ComplexVector x_top = q.columns() * top.block(0, j, rank, 1);
        ComplexVector x_bot = q.columns() * bot.block(0, j, rank, 1);
        ComplexVector r = ops.apply_recurrence(x_top, x_bot);

        // level-1 modified Gram-Schmidt, keeping the removed coefficients
        const double pre = r.norm();
        ComplexVector c = ComplexVector::Zero(rank);
        for (Eigen::Index i = 0; i < rank; ++i) {
            const Complex h = q.columns().col(i).dot(r);
            r -= h * q.columns().col(i);
            c(i) += h;
            q.add_projections(1);
        }
        if (r.norm() < spec.eta * pre) {
            for (Eigen::Index i = 0; i < rank; ++i) {
                const Complex h = q.columns().col(i).dot(r);
                r -= h * q.columns().col(i);
                c(i) += h;
                q.add_reorths(1);
            }
        }
        const double beta = r.norm();
        const bool grew = beta > kBreakdownTol * pre;
        Eigen::Index new_rank = rank;
        if (grew) {
            q.append_normalized(r);
            new_rank = rank + 1;
        }
        ComplexVector u_top = ComplexVector::Zero(new_rank);
        ComplexVector u_bot = ComplexVector::Zero(new_rank);
        u_top.head(rank) = bot.block(0, j, rank, 1);
        u_bot.head(rank) = c;
        if (grew) u_bot(rank) = beta;

        // level-2 modified Gram-Schmidt over the stacked coefficients
        const double pre2 = std::sqrt(u_top.squaredNorm() + u_bot.squaredNorm());
        auto project = [&](bool first_pass) {
            for (Eigen::Index i = 0; i < cols; ++i) {
                Complex h = top.col(i).head(new_rank).dot(u_top) +
                            bot.col(i).head(new_rank).dot(u_bot);
                u_top -= h * top.col(i).head(new_rank);
                u_bot -= h * bot.col(i).head(new_rank);
                (void)first_pass;
            }
        };
        project(true);
        double nrm = std::sqrt(u_top.squaredNorm() + u_bot.squaredNorm());
        if (nrm < spec.eta * pre2) {
            project(false);
            nrm = std::sqrt(u_top.squaredNorm() + u_bot.squaredNorm());
        }
        if (nrm <= kBreakdownTol * pre2) {
            q.set_breakdown();  // level-2 breakdown: no new second-order direction
            break;
        }
        top.block(0, cols, new_rank, 1) = u_top / nrm;
        bot.block(0, cols, new_rank, 1) = u_bot / nrm;
        rank = new_rank;
        ++cols;
    }
    data.stacked.resize(2 * rank, cols);
    data.stacked.topRows(rank) = top.block(0, 0, rank, cols);
    data.stacked.bottomRows(rank) = bot.block(0, 0, rank, cols);
    return data;
}

OrthonormalBasis toar_basis(const InverseOperators& ops, const ReductionSpec& spec) {
    return toar_basis_full(ops, spec).q;
}

LinearizedArnoldi arnoldi_basis_linearized(const InverseOperators& ops,
                                           const ReductionSpec& raw) {
    const ReductionSpec spec = resolve_spec(raw, ops.dof());
    const Eigen::Index n = ops.dof();
    const int m = spec.m;
    LinearizedArnoldi out{OrthonormalBasis(2 * n, m), ComplexMatrix::Zero(m, m)};
    OrthonormalBasis& u = out.basis;
    ComplexVector start(2 * n);
    start.head(n) = spec.b0;
    start.tail(n) = spec.b1;
    u.append_normalized(start);

    for (int j = 0; j < m; ++j) {
        // companion action: top <- bottom, bottom <- B top + A bottom
        ComplexVector w(2 * n);
        w.head(n) = u.columns().col(j).tail(n);
        w.tail(n) = ops.apply_recurrence(u.columns().col(j).head(n),
                                         u.columns().col(j).tail(n));
        const double pre = w.norm();
        for (Eigen::Index i = 0; i <= j; ++i) {
            const Complex h = u.columns().col(i).dot(w);
            w -= h * u.columns().col(i);
            out.hessenberg(i, j) += h;
            u.add_projections(1);
        }
        if (w.norm() < spec.eta * pre) {
            for (Eigen::Index i = 0; i <= j; ++i) {
                const Complex h = u.columns().col(i).dot(w);
                w -= h * u.columns().col(i);
                out.hessenberg(i, j) += h;
                u.add_reorths(1);
            }
        }
        if (j + 1 >= m) break;  // last column only completes the Hessenberg
        const double h = w.norm();
        if (h <= kBreakdownTol * pre) {
            u.set_breakdown();
            out.hessenberg.conservativeResize(j + 1, j + 1);
            break;
        }
        out.hessenberg(j + 1, j) = h;
        u.append_normalized(w);
    }
    if (u.cols() < m && !u.breakdown()) {
        out.hessenberg.conservativeResize(u.cols(), u.cols());
    }
    return out;
}

std::pair<ComplexMatrix, ComplexMatrix> galerkin_reduce(const InverseOperators& ops,
                                                        const OrthonormalBasis& basis) {
    if (basis.cols() < 1) throw Error("galerkin_reduce: empty basis");
    const Eigen::Index d = basis.cols();
    ComplexMatrix av(basis.rows(), d), bv(basis.rows(), d);
    for (Eigen::Index j = 0; j < d; ++j) {
        av.col(j) = ops.apply_a(basis.columns().col(j));
        bv.col(j) = ops.apply_b(basis.columns().col(j));
    }
    return {basis.columns().adjoint() * av, basis.columns().adjoint() * bv};
}

std::vector<EigenPair> solve_reduced(const ComplexMatrix& reduced_a,
                                     const ComplexMatrix& reduced_b,
                                     const ComplexMatrix& basis,
                                     const QuadraticPencil& pencil) {
    if (reduced_a.rows() != reduced_a.cols() || reduced_b.rows() != reduced_b.cols() ||
        reduced_a.rows() != reduced_b.rows()) {
        throw DimensionError("solve_reduced: reduced blocks must be square and equal size");
    }
    const Eigen::Index d = reduced_a.rows();
    ComplexMatrix lin = ComplexMatrix::Zero(2 * d, 2 * d);
    lin.topRightCorner(d, d) = ComplexMatrix::Identity(d, d);
    lin.bottomLeftCorner(d, d) = reduced_b;
    lin.bottomRightCorner(d, d) = reduced_a;

    EigenDecomposition dec = dense_eig(lin, true);
    const double lambda_max = dec.eigenvalues.cwiseAbs().maxCoeff();
    std::vector<EigenPair> pairs;
    for (Eigen::Index i = 0; i < 2 * d; ++i) {
        const Complex lambda = dec.eigenvalues(i);
        if (std::abs(lambda) < kSpuriousTol * lambda_max) continue;  // spurious infinity
        EigenPair p;
        p.s = 1.0 / lambda;
        ComplexVector w = dec.eigenvectors.col(i).tail(d);
        if (w.norm() == 0.0) continue;
        p.v = basis * w;
        if (p.v.norm() == 0.0) continue;
        normalize_eigenvector(p.v);
        p.residual = pencil_residual(pencil, p.s, p.v);
        pairs.push_back(std::move(p));
    }
    canonical_sort(pairs);
    return pairs;
}

ReductionResult run_reduction(const QuadraticPencil& pencil, const ReductionSpec& raw) {
    const ReductionSpec spec = resolve_spec(raw, pencil.dof());
    ReductionResult result;
    result.method = spec.method;
    result.m = spec.m;

    auto t0 = std::chrono::steady_clock::now();
    InverseOperators ops(pencil);
    result.diagnostics.factor_seconds = seconds_since(t0);

    auto t1 = std::chrono::steady_clock::now();
    if (spec.method == Method::Arnoldi) {
        LinearizedArnoldi arn = arnoldi_basis_linearized(ops, spec);
        const Eigen::Index n = pencil.dof();
        EigenDecomposition dec = dense_eig(arn.hessenberg, true);
        const double lambda_max = dec.eigenvalues.cwiseAbs().maxCoeff();
        for (Eigen::Index i = 0; i < dec.eigenvalues.size(); ++i) {
            const Complex lambda = dec.eigenvalues(i);
            if (std::abs(lambda) < kSpuriousTol * lambda_max) continue;
            EigenPair p;
            p.s = 1.0 / lambda;
            ComplexVector y = arn.basis.columns() * dec.eigenvectors.col(i);
            p.v = y.tail(n);
            if (p.v.norm() == 0.0) continue;
            normalize_eigenvector(p.v);
            p.residual = pencil_residual(pencil, p.s, p.v);
            result.eigenpairs.push_back(std::move(p));
        }
        canonical_sort(result.eigenpairs);
        result.basis = arn.basis.matrix();
        result.reduced_a = std::move(arn.hessenberg);
        result.diagnostics.projection_count = arn.basis.projection_count();
        result.diagnostics.reorth_count = arn.basis.reorth_count();
        result.diagnostics.breakdown = arn.basis.breakdown();
    } else {
        OrthonormalBasis basis = [&] {
            switch (spec.method) {
                case Method::Soar: return soar_basis(ops, spec);
                case Method::Toar: return toar_basis(ops, spec);
                case Method::Lqar: return lqar_basis(ops, spec);
                case Method::Qar: return qar_basis(ops, spec);
                case Method::Tgsar1: return tgsar1_basis(ops, spec);
                case Method::Tgsar2: return tgsar2_basis(ops, spec);
                default: throw Error("run_reduction: unhandled method");
            }
        }();
        auto [ra, rb] = galerkin_reduce(ops, basis);
        result.eigenpairs = solve_reduced(ra, rb, basis.matrix(), pencil);
        result.basis = basis.matrix();
        result.reduced_a = std::move(ra);
        result.reduced_b = std::move(rb);
        result.diagnostics.projection_count = basis.projection_count();
        result.diagnostics.reorth_count = basis.reorth_count();
        result.diagnostics.breakdown = basis.breakdown();
    }
    result.diagnostics.reduce_seconds = seconds_since(t1);
    return result;
}

}  // namespace rotarn

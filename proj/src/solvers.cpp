#include "cssr/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/QR>

namespace cssr {

const char* solver_name(SolverKind kind) {
    switch (kind) {
        case SolverKind::Omp: return "omp";
        case SolverKind::Cosamp: return "cosamp";
        case SolverKind::BasisPursuit: return "bp";
    }
    return "unknown";
}

SolverKind solver_from_name(const std::string& name) {
    if (name == "omp") return SolverKind::Omp;
    if (name == "cosamp") return SolverKind::Cosamp;
    if (name == "bp" || name == "basis-pursuit") return SolverKind::BasisPursuit;
    throw ParameterError("unknown solver '" + name + "' (expected omp, cosamp or bp)");
}

namespace {

void check_system(const Eigen::MatrixXd& A, const Eigen::VectorXd& y, const char* who) {
    if (A.rows() < 1 || A.cols() < 1)
        throw ParameterError(std::string(who) + ": empty sensing matrix");
    if (y.size() != A.rows())
        throw DimensionError(std::string(who) + ": measurement length " +
                             std::to_string(y.size()) + " does not match matrix rows " +
                             std::to_string(A.rows()));
}

// Least squares on the listed columns. Writes the coefficients into place and
// reports whether the selected system was rank deficient.
Eigen::VectorXd solve_on_support(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                                 const std::vector<int>& support, bool& rank_deficient) {
    Eigen::MatrixXd sub(A.rows(), static_cast<Eigen::Index>(support.size()));
    for (std::size_t i = 0; i < support.size(); ++i)
        sub.col(static_cast<Eigen::Index>(i)) = A.col(support[i]);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sub);
    if (qr.rank() < sub.cols()) rank_deficient = true;
    return qr.solve(y);
}

ReconstructionResult assemble(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                              const std::vector<int>& support, const Eigen::VectorXd& coeffs,
                              int iterations, bool rank_deficient) {
    ReconstructionResult out;
    out.coefficients = Eigen::VectorXd::Zero(A.cols());
    for (std::size_t i = 0; i < support.size(); ++i)
        out.coefficients(support[i]) = coeffs(static_cast<Eigen::Index>(i));
    out.support.assign(support.begin(), support.end());
    std::sort(out.support.begin(), out.support.end());
    out.iterations = iterations;
    out.residual_norm = (y - A * out.coefficients).norm();
    out.rank_deficient = rank_deficient;
    return out;
}

// Indices of the `count` largest |values|; ties resolved toward lower index.
std::vector<int> top_indices(const Eigen::VectorXd& values, int count) {
    std::vector<int> order(static_cast<std::size_t>(values.size()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return std::abs(values(a)) > std::abs(values(b));
    });
    order.resize(static_cast<std::size_t>(std::min<Eigen::Index>(count, values.size())));
    return order;
}

}  // namespace

ReconstructionResult omp(const Eigen::MatrixXd& A, const Eigen::VectorXd& y, int k) {
    check_system(A, y, "omp");
    if (k < 1 || k > A.rows())
        throw ParameterError("omp sparsity budget must lie in [1, rows], got " + std::to_string(k));
    if (k > A.cols()) throw ParameterError("omp sparsity budget exceeds column count");

    const double y_norm = y.norm();
    ReconstructionResult empty;
    empty.coefficients = Eigen::VectorXd::Zero(A.cols());
    empty.residual_norm = y_norm;
    if (y_norm == 0.0) return empty;

    const double stop = 1e-9 * y_norm;
    std::vector<int> support;
    support.reserve(static_cast<std::size_t>(k));
    std::vector<char> used(static_cast<std::size_t>(A.cols()), 0);
    // Greedy selection ranks correlations against unit-norm columns; the draw
    // variance convention only makes column norms approximately one, and the
    // spread would otherwise bias the ranking on small systems.
    const Eigen::VectorXd col_norms = A.colwise().norm();
    Eigen::VectorXd residual = y;
    Eigen::VectorXd coeffs;
    bool rank_deficient = false;
    int iterations = 0;

    while (iterations < k && residual.norm() > stop) {
        const Eigen::VectorXd corr =
            (A.transpose() * residual).cwiseQuotient(col_norms);
        int best = -1;
        double best_mag = -1.0;
        for (Eigen::Index j = 0; j < corr.size(); ++j) {
            if (used[static_cast<std::size_t>(j)]) continue;
            const double mag = std::abs(corr(j));
            if (mag > best_mag) {  // strict: ties go to the lowest index
                best_mag = mag;
                best = static_cast<int>(j);
            }
        }
        if (best < 0 || best_mag == 0.0) break;  // residual orthogonal to all columns

        used[static_cast<std::size_t>(best)] = 1;
        support.push_back(best);
        coeffs = solve_on_support(A, y, support, rank_deficient);
        residual = y;
        for (std::size_t i = 0; i < support.size(); ++i)
            residual -= coeffs(static_cast<Eigen::Index>(i)) * A.col(support[i]);
        ++iterations;
    }
    if (support.empty()) return empty;
    return assemble(A, y, support, coeffs, iterations, rank_deficient);
}

ReconstructionResult cosamp(const Eigen::MatrixXd& A, const Eigen::VectorXd& y, int k,
                            int max_iterations, double eta) {
    check_system(A, y, "cosamp");
    if (k < 1 || k > A.cols())
        throw ParameterError("cosamp sparsity budget must lie in [1, cols], got " +
                             std::to_string(k));
    if (max_iterations < 1) throw ParameterError("cosamp iteration budget must be >= 1");

    const double y_norm = y.norm();
    if (eta < 0.0) eta = 1e-6 * y_norm;

    ReconstructionResult out;
    out.coefficients = Eigen::VectorXd::Zero(A.cols());
    out.residual_norm = y_norm;
    if (y_norm == 0.0) return out;

    std::vector<int> support;  // current estimate, ascending
    Eigen::VectorXd x = Eigen::VectorXd::Zero(A.cols());
    const Eigen::VectorXd col_norms = A.colwise().norm();  // see omp()
    Eigen::VectorXd residual = y;
    bool rank_deficient = false;
    int iterations = 0;

    while (iterations < max_iterations && residual.norm() > eta) {
        ++iterations;

        const Eigen::VectorXd proxy =
            (A.transpose() * residual).cwiseQuotient(col_norms);
        std::vector<int> merged = top_indices(proxy, 2 * k);
        merged.insert(merged.end(), support.begin(), support.end());
        std::sort(merged.begin(), merged.end());
        merged.erase(std::unique(merged.begin(), merged.end()), merged.end());

        const Eigen::VectorXd b = solve_on_support(A, y, merged, rank_deficient);

        Eigen::VectorXd dense = Eigen::VectorXd::Zero(A.cols());
        for (std::size_t i = 0; i < merged.size(); ++i)
            dense(merged[i]) = b(static_cast<Eigen::Index>(i));
        std::vector<int> pruned = top_indices(dense, k);
        std::sort(pruned.begin(), pruned.end());

        x.setZero();
        const Eigen::VectorXd refit = solve_on_support(A, y, pruned, rank_deficient);
        for (std::size_t i = 0; i < pruned.size(); ++i)
            x(pruned[i]) = refit(static_cast<Eigen::Index>(i));

        support = std::move(pruned);
        residual = y - A * x;
    }

    out.coefficients = std::move(x);
    out.support.clear();
    for (Eigen::Index j = 0; j < out.coefficients.size(); ++j)
        if (out.coefficients(j) != 0.0) out.support.push_back(static_cast<int>(j));
    out.iterations = iterations;
    out.residual_norm = residual.norm();
    out.rank_deficient = rank_deficient;
    return out;
}

namespace {

// Entries with |v| below cutoff * max|v| become exact zeros.
void truncate_small(Eigen::VectorXd& v, double cutoff) {
    const double peak = v.cwiseAbs().maxCoeff();
    if (peak <= 0.0) return;
    const double floor = cutoff * peak;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (std::abs(v(i)) < floor) v(i) = 0.0;
}

}  // namespace

// ADMM on the consensus split
//     minimize ||z1||_1   s.t.  z1 = x,  z2 = A x,  ||z2 - y|| <= sigma.
// The x update solves (I + A^T A) x = (z1 - u1) + A^T (z2 - u2); by the
// Woodbury identity that needs only one Cholesky factor of (I + A A^T), and
// the penalty cancels, so adapting rho never refactorizes. z1 is a soft
// shrink, z2 a ball projection. The problem is solved on y scaled to unit
// norm so the tolerances are relative.
ReconstructionResult basis_pursuit(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                                   double sigma, const BasisPursuitOptions& options) {
    check_system(A, y, "basis pursuit");
    if (sigma < 0.0) throw ParameterError("basis pursuit noise radius must be >= 0");
    if (options.max_iterations < 1) throw ParameterError("basis pursuit budget must be >= 1");

    const Eigen::Index m = A.rows();
    const Eigen::Index n = A.cols();
    const double y_norm = y.norm();

    ReconstructionResult out;
    out.coefficients = Eigen::VectorXd::Zero(n);
    out.residual_norm = y_norm;
    if (y_norm <= sigma) return out;  // zero is feasible, hence optimal

    const Eigen::VectorXd yn = y / y_norm;
    const double sn = sigma / y_norm;

    Eigen::LLT<Eigen::MatrixXd> gram(Eigen::MatrixXd::Identity(m, m) + A * A.transpose());
    const auto solve_normal = [&](const Eigen::VectorXd& rhs) -> Eigen::VectorXd {
        return rhs - A.transpose() * gram.solve(A * rhs);
    };

    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd z1 = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd z2 = yn;
    Eigen::VectorXd u1 = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd u2 = Eigen::VectorXd::Zero(m);
    double rho = 1.0;

    const double sqrt_dims_pri = std::sqrt(static_cast<double>(n + m));
    const double sqrt_dims_dua = std::sqrt(static_cast<double>(n));

    int iterations = 0;
    bool converged = false;
    Eigen::VectorXd candidate;
    for (; iterations < options.max_iterations; ++iterations) {
        x = solve_normal((z1 - u1) + A.transpose() * (z2 - u2));
        const Eigen::VectorXd ax = A * x;

        const Eigen::VectorXd z1_old = z1;
        const Eigen::VectorXd z2_old = z2;

        const double shrink = 1.0 / rho;
        const Eigen::VectorXd w1 = x + u1;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double v = w1(i);
            z1(i) = v > shrink ? v - shrink : (v < -shrink ? v + shrink : 0.0);
        }

        const Eigen::VectorXd w2 = ax + u2;
        const double dist = (w2 - yn).norm();
        z2 = dist <= sn ? w2 : Eigen::VectorXd(yn + (sn / dist) * (w2 - yn));

        u1 += x - z1;
        u2 += ax - z2;

        const double r_pri = std::sqrt((x - z1).squaredNorm() + (ax - z2).squaredNorm());
        const double s_dua = rho * ((z1 - z1_old) + A.transpose() * (z2 - z2_old)).norm();

        const double bx = std::sqrt(x.squaredNorm() + ax.squaredNorm());
        const double zs = std::sqrt(z1.squaredNorm() + z2.squaredNorm());
        const double eps_pri =
            sqrt_dims_pri * options.eps_abs + options.eps_rel * std::max(bx, zs);
        const double eps_dua = sqrt_dims_dua * options.eps_abs +
                               options.eps_rel * rho * (u1 + A.transpose() * u2).norm();

        if (r_pri <= eps_pri && s_dua <= eps_dua) {
            // Accept only if the candidate stays feasible after truncation, so
            // the caller sees exactly what was certified.
            candidate = z1;
            truncate_small(candidate, 1e-6);
            if ((A * candidate - yn).norm() <= sn + options.feasibility_rel) {
                converged = true;
                ++iterations;
                break;
            }
        }

        // Rebalance the penalty only periodically and settle it eventually;
        // adapting every step keeps perturbing the fixed point and the
        // iteration then hovers instead of converging.
        if (iterations % 10 == 0 && iterations < 1000) {
            if (r_pri > 10.0 * s_dua) {
                rho *= 2.0;
                u1 *= 0.5;
                u2 *= 0.5;
            } else if (s_dua > 10.0 * r_pri) {
                rho *= 0.5;
                u1 *= 2.0;
                u2 *= 2.0;
            }
        }
    }

    if (!converged) {
        const Eigen::VectorXd last = z1 * y_norm;
        const double gap = ((A * z1 - yn).norm() - sn) * y_norm;
        throw ConvergenceError(
            "basis pursuit stopped after " + std::to_string(iterations) + " iterations",
            std::vector<double>(last.data(), last.data() + last.size()), gap);
    }

    out.coefficients = candidate * y_norm;
    for (Eigen::Index j = 0; j < out.coefficients.size(); ++j)
        if (out.coefficients(j) != 0.0) out.support.push_back(static_cast<int>(j));
    out.iterations = iterations;
    out.residual_norm = (y - A * out.coefficients).norm();
    return out;
}

}  // namespace cssr

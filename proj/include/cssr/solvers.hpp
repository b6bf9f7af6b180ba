#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cssr/errors.hpp"

namespace cssr {

enum class SolverKind : std::uint8_t { Omp = 0, Cosamp = 1, BasisPursuit = 2 };

const char* solver_name(SolverKind kind);
SolverKind solver_from_name(const std::string& name);  // throws ParameterError

// Decode-side solver selection. k is the per-block sparsity budget for the
// greedy solvers (0 = use the transmitted per-block value); sigma is the
// allowed l2 misfit for basis pursuit; eta is the CoSaMP halting precision
// relative to ||y||; max_iterations 0 picks the solver default (CoSaMP 50,
// basis pursuit 4000).
struct SolverConfig {
    SolverKind kind = SolverKind::Omp;
    int k = 0;
    double sigma = 0.0;
    int max_iterations = 0;
    double eta = 1e-6;
};

struct ReconstructionResult {
    Eigen::VectorXd coefficients;  // length N, exactly zero off support
    std::vector<int> support;      // ascending
    int iterations = 0;
    double residual_norm = 0.0;  // ||y - A * coefficients||_2
    bool rank_deficient = false;  // a least-squares step fell back to the pseudo-inverse
};

// Orthogonal matching pursuit. Per iteration: pick the unselected column most
// correlated with the residual (ties -> lowest index), re-solve least squares
// on the selected set via QR, update the residual. Stops after k iterations or
// once ||r|| <= 1e-9 * ||y||. Requires 1 <= k <= A.rows().
ReconstructionResult omp(const Eigen::MatrixXd& A, const Eigen::VectorXd& y, int k);

// CoSaMP. Per iteration: identify the 2k strongest correlations, merge with
// the current support, least-squares estimate on the merged set, prune to the
// k largest, update samples. Halts when ||r|| <= eta or the budget runs out.
// eta < 0 selects the default 1e-6 * ||y||.
ReconstructionResult cosamp(const Eigen::MatrixXd& A, const Eigen::VectorXd& y, int k,
                            int max_iterations = 50, double eta = -1.0);

struct BasisPursuitOptions {
    int max_iterations = 4000;
    double eps_abs = 1e-9;        // ADMM absolute residual floor
    double eps_rel = 1e-7;        // ADMM relative residual factor
    double feasibility_rel = 1e-7;  // target ||A*s - y|| <= sigma + feasibility_rel * ||y||
};

// Minimum-l1 recovery subject to ||A*s - y||_2 <= sigma (sigma == 0 gives the
// equality-constrained form). Solved by ADMM with closed-form steps; entries
// below 1e-6 * max|s| are truncated to exact zero for support reporting.
// Throws ConvergenceError (carrying the last iterate and gap) if the iteration
// cap is reached before the stopping rule fires.
ReconstructionResult basis_pursuit(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                                   double sigma = 0.0, const BasisPursuitOptions& options = {});

}  // namespace cssr

#include "bsdelab/regression.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "bsdelab/errors.hpp"

namespace bsdelab {

RegressionFit regress_conditional(std::span<const double> targets,
                                  std::span<const double> state,
                                  const RegressionConfig& cfg) {
    if (targets.size() != state.size()) {
        throw InvalidInputError("regression: targets and state must have equal length");
    }
    const auto n = static_cast<Eigen::Index>(targets.size());
    if (n < cfg.min_paths_per_fit) {
        throw InvalidConfigError("regression: fewer paths than min_paths_per_fit");
    }
    if (cfg.basis_degree < 0 || cfg.ridge < 0.0 || cfg.hinge_knots < 0) {
        throw InvalidConfigError(
            "regression: basis_degree, ridge and hinge_knots must be nonnegative");
    }

    double mean = 0.0;
    for (double x : state) mean += x;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double x : state) var += (x - mean) * (x - mean);
    var /= std::max<double>(1.0, static_cast<double>(n - 1));
    const double scale = std::sqrt(var);

    // A flat covariate carries no information beyond the mean.
    const int degree = scale > 1e-12 * std::max(1.0, std::abs(mean)) ? cfg.basis_degree : 0;

    // Hinge knots at interior sample quantiles; knots on or outside the sample
    // range give all-zero or affine columns, so only strictly interior distinct
    // knots survive.
    std::vector<double> knots;
    if (degree > 0 && cfg.hinge_knots > 0) {
        std::vector<double> sorted(state.begin(), state.end());
        std::sort(sorted.begin(), sorted.end());
        const double lo = sorted.front();
        const double hi = sorted.back();
        knots.reserve(static_cast<std::size_t>(cfg.hinge_knots));
        for (int q = 1; q <= cfg.hinge_knots; ++q) {
            const double frac = static_cast<double>(q) / (cfg.hinge_knots + 1);
            const auto idx = static_cast<std::size_t>(frac * static_cast<double>(n - 1));
            const double knot = sorted[idx];
            if (knot > lo && knot < hi && (knots.empty() || knot > knots.back())) {
                knots.push_back(knot);
            }
        }
    }
    const Eigen::Index k = degree + 1 + static_cast<Eigen::Index>(knots.size());

    // Monomials of the standardized covariate. Standardizing by the std keeps
    // resolution where the sample mass is; unit-norm columns keep the QR well
    // conditioned despite the wide dynamic range of high powers at the tails.
    Eigen::MatrixXd basis(n, k);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double raw = state[static_cast<std::size_t>(i)];
        const double x = degree > 0 ? (raw - mean) / scale : 0.0;
        double pow = 1.0;
        for (Eigen::Index c = 0; c <= degree; ++c) {
            basis(i, c) = pow;
            pow *= x;
        }
        for (std::size_t j = 0; j < knots.size(); ++j) {
            basis(i, degree + 1 + static_cast<Eigen::Index>(j)) =
                std::max(knots[j] - raw, 0.0) / scale;
        }
    }
    for (Eigen::Index c = 0; c < k; ++c) {
        const double norm = basis.col(c).norm();
        if (norm > 0.0) basis.col(c) /= norm;
    }
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) y(i) = targets[static_cast<std::size_t>(i)];

    // Least squares through a QR factorization of the design matrix itself;
    // normal equations square the condition number and fail at high degree.
    // Columns are unit-norm, so the penalty is already relative: coefficient
    // shrink is O(ridge).
    const double lambda = cfg.ridge;
    Eigen::VectorXd beta;
    Eigen::MatrixXd rfac;  // triangular factor: P^T (B^T B + lambda I) P = R^T R
    Eigen::PermutationMatrix<Eigen::Dynamic> perm(k);
    perm.setIdentity();
    if (lambda == 0.0) {
        const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(basis);
        if (qr.rank() < k) {
            throw RegressionSingularError(
                "regression: rank-deficient normal equations; set ridge > 0");
        }
        beta = qr.solve(y);
        rfac = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
        perm = qr.colsPermutation();
    } else {
        Eigen::MatrixXd augmented(n + k, k);
        augmented.topRows(n) = basis;
        augmented.bottomRows(k) =
            std::sqrt(lambda) * Eigen::MatrixXd::Identity(k, k);
        augmented(n, 0) = 0.0;  // constants stay exactly in the span
        Eigen::VectorXd rhs(n + k);
        rhs.head(n) = y;
        rhs.tail(k).setZero();
        const Eigen::HouseholderQR<Eigen::MatrixXd> qr(augmented);
        beta = qr.solve(rhs);
        rfac = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    }
    const Eigen::VectorXd fitted = basis * beta;

    const double dof = std::max<double>(1.0, static_cast<double>(n - k));
    const double s2 = (y - fitted).squaredNorm() / dof;

    RegressionFit fit;
    fit.fitted.resize(static_cast<std::size_t>(n));
    fit.se.resize(static_cast<std::size_t>(n));
    fit.residual_std = std::sqrt(s2);
    // Leverage h_i = b_i^T (B^T B + lambda I)^{-1} b_i = |R^{-T} P^T b_i|^2.
    const auto rT = rfac.transpose().triangularView<Eigen::Lower>();
    Eigen::VectorXd w(k);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double f = fitted(i);
        if (!std::isfinite(f)) {
            throw NumericOverflowError("regression: non-finite fitted value");
        }
        fit.fitted[static_cast<std::size_t>(i)] = f;
        w = rT.solve(perm.transpose() * basis.row(i).transpose());
        fit.se[static_cast<std::size_t>(i)] = std::sqrt(std::max(0.0, s2 * w.squaredNorm()));
    }
    return fit;
}

}  // namespace bsdelab

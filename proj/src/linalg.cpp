#include "coop_lms/linalg.hpp"

#include "coop_lms/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace coop_lms::linalg {

bool all_finite(const Matrix& a) { return a.allFinite(); }

namespace {

void require_square(const Matrix& a, const char* what) {
    if (a.rows() != a.cols() || a.rows() == 0) {
        throw NumericError(std::string(what) + ": expected a non-empty square matrix");
    }
}

void require_finite(const Matrix& a, const char* what) {
    if (!a.allFinite()) throw NumericError(std::string(what) + ": non-finite entry");
}

Eigen::SelfAdjointEigenSolver<Matrix> decompose(const Matrix& a, const char* what, bool vectors) {
    require_square(a, what);
    require_finite(a, what);
    const Matrix sym = 0.5 * (a + a.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym, vectors ? Eigen::ComputeEigenvectors
                                                          : Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericError(std::string(what) + ": eigensolver failed");
    return es;
}

}  // namespace

std::vector<double> sym_eigvals(const Matrix& a) {
    const auto es = decompose(a, "sym_eigvals", false);
    const Vector& ev = es.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

Matrix sym_sqrt(const Matrix& a) {
    const auto es = decompose(a, "sym_sqrt", true);
    const Vector root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
}

std::vector<double> eigvals_general(const Matrix& s1, const Matrix& s2) {
    require_square(s1, "eigvals_general");
    require_square(s2, "eigvals_general");
    if (s1.rows() != s2.rows()) throw NumericError("eigvals_general: factor size mismatch");

    for (const Matrix* f : {&s1, &s2}) {
        const double lo = sym_eigvals(*f).front();
        if (!(lo > 0.0)) {
            throw NumericError("eigvals_general: factor is not positive definite (min eigenvalue " +
                                   std::to_string(lo) + ")",
                               lo);
        }
    }
    const Matrix root = sym_sqrt(s2);
    return sym_eigvals(root * s1 * root);
}

Vector solve_linear(const Matrix& a, const Vector& b, double max_condition) {
    require_square(a, "solve_linear");
    require_finite(a, "solve_linear");
    if (b.size() != a.rows()) throw NumericError("solve_linear: right-hand side length mismatch");

    const Eigen::PartialPivLU<Matrix> lu(a);
    // rcond() comes back as 1 when a pivot is exactly zero, so look at the pivots too.
    const auto pivots = lu.matrixLU().diagonal().cwiseAbs();
    const double pivot_ratio = pivots.size() ? pivots.minCoeff() / pivots.maxCoeff() : 1.0;
    const double rcond = std::min(lu.rcond(), pivot_ratio);
    const double cond = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    if (!(cond <= max_condition)) {
        throw NumericError("solve_linear: matrix is singular or ill-conditioned (condition estimate " +
                               std::to_string(cond) + ")",
                           cond);
    }
    Vector x = lu.solve(b);
    if (!x.allFinite()) throw NumericError("solve_linear: non-finite solution", cond);
    return x;
}

Vector min_norm_lstsq(const Matrix& h, const Vector& y) {
    require_finite(h, "min_norm_lstsq");
    if (y.size() != h.rows()) throw NumericError("min_norm_lstsq: observation length mismatch");
    const Eigen::CompleteOrthogonalDecomposition<Matrix> cod(h);
    return cod.solve(y);
}

double gram_lambda_max(const Matrix& h) {
    require_finite(h, "gram_lambda_max");
    if (h.size() == 0) return 0.0;
    const Eigen::JacobiSVD<Matrix> svd(h);
    const double s = svd.singularValues()(0);
    return s * s;
}

}  // namespace coop_lms::linalg

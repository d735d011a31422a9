#include "ppcov/matrix.hpp"

#include "ppcov/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ppcov {

namespace {

void require_square_finite(const Eigen::MatrixXd& m) {
    if (m.rows() == 0 || m.rows() != m.cols()) {
        throw InputError("CovMatrix requires a non-empty square matrix, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
    if (!m.allFinite()) throw InputError("CovMatrix entries must be finite");
}

void require_finite(const Eigen::MatrixXd& m, const char* what) {
    if (!m.allFinite()) throw InputError(std::string(what) + " produced non-finite entries");
}

void require_same_dim(const CovMatrix& a, const CovMatrix& b) {
    if (a.dim() != b.dim()) {
        throw InputError("dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                         std::to_string(b.dim()));
    }
}

}  // namespace

CovMatrix::CovMatrix(const Eigen::MatrixXd& m) {
    require_square_finite(m);
    m_ = 0.5 * (m + m.transpose());
}

CovMatrix::CovMatrix(const Eigen::MatrixXd& m, Triangle authoritative) {
    require_square_finite(m);
    if (authoritative == Triangle::lower) {
        m_ = m.selfadjointView<Eigen::Lower>();
    } else {
        m_ = m.selfadjointView<Eigen::Upper>();
    }
}

CovMatrix CovMatrix::identity(std::size_t p) {
    if (p == 0) throw InputError("CovMatrix dimension must be >= 1");
    const auto n = static_cast<Eigen::Index>(p);
    return CovMatrix(Eigen::MatrixXd::Identity(n, n), Trusted{});
}

CovMatrix CovMatrix::zero(std::size_t p) {
    if (p == 0) throw InputError("CovMatrix dimension must be >= 1");
    const auto n = static_cast<Eigen::Index>(p);
    return CovMatrix(Eigen::MatrixXd::Zero(n, n), Trusted{});
}

CovMatrix CovMatrix::diagonal(const Eigen::VectorXd& d) {
    if (d.size() == 0) throw InputError("CovMatrix dimension must be >= 1");
    if (!d.allFinite()) throw InputError("CovMatrix entries must be finite");
    return CovMatrix(Eigen::MatrixXd(d.asDiagonal()), Trusted{});
}

void CovMatrix::set(std::size_t i, std::size_t j, double value) {
    if (!std::isfinite(value)) throw InputError("CovMatrix entries must be finite");
    m_(i, j) = value;
    m_(j, i) = value;
}

void CovMatrix::add_to_diagonal(double shift) {
    m_.diagonal().array() += shift;
    require_finite(m_, "diagonal shift");
}

CovMatrix operator-(const CovMatrix& a, const CovMatrix& b) {
    require_same_dim(a, b);
    Eigen::MatrixXd d = a.m_ - b.m_;
    require_finite(d, "matrix difference");
    return CovMatrix(std::move(d), CovMatrix::Trusted{});
}

CovMatrix operator+(const CovMatrix& a, const CovMatrix& b) {
    require_same_dim(a, b);
    Eigen::MatrixXd s = a.m_ + b.m_;
    require_finite(s, "matrix sum");
    return CovMatrix(std::move(s), CovMatrix::Trusted{});
}

CovMatrix operator*(double c, const CovMatrix& a) {
    Eigen::MatrixXd s = c * a.m_;
    require_finite(s, "scalar product");
    return CovMatrix(std::move(s), CovMatrix::Trusted{});
}

EigenSummary sym_eigen_extremes(const CovMatrix& m) {
    if (m.dim() == 1) return {m(0, 0), m(0, 0)};
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.dense(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw InputError("symmetric eigensolver did not converge");
    const auto& ev = solver.eigenvalues();  // ascending
    return {ev(0), ev(ev.size() - 1)};
}

double spectral_norm(const CovMatrix& m) {
    const auto [lo, hi] = sym_eigen_extremes(m);
    return std::max(std::abs(lo), std::abs(hi));
}

double matrix_one_norm(const CovMatrix& m) {
    return m.dense().cwiseAbs().colwise().sum().maxCoeff();
}

namespace {

// Left-looking Cholesky on a dense copy; returns the failing pivot index or -1.
Eigen::Index factor_in_place(Eigen::MatrixXd& a, double shift, double tol, double& bad_pivot) {
    const Eigen::Index n = a.rows();
    for (Eigen::Index k = 0; k < n; ++k) {
        double pivot = a(k, k) - shift;
        if (k > 0) pivot -= a.row(k).head(k).squaredNorm();
        if (!(pivot > tol)) {
            bad_pivot = pivot;
            return k;
        }
        const double lkk = std::sqrt(pivot);
        a(k, k) = lkk;
        const Eigen::Index rest = n - k - 1;
        if (rest > 0) {
            auto col = a.col(k).tail(rest);
            if (k > 0) col.noalias() -= a.bottomLeftCorner(rest, k) * a.row(k).head(k).transpose();
            col /= lkk;
        }
    }
    a.triangularView<Eigen::StrictlyUpper>().setZero();
    return -1;
}

}  // namespace

Eigen::MatrixXd cholesky(const CovMatrix& m, double pivot_tolerance) {
    Eigen::MatrixXd a = m.dense();
    double bad = 0.0;
    const Eigen::Index failed = factor_in_place(a, 0.0, pivot_tolerance, bad);
    if (failed >= 0) throw NotPositiveDefinite(static_cast<std::size_t>(failed), bad);
    return a;
}

Eigen::VectorXd cholesky_solve(const Eigen::MatrixXd& lower, const Eigen::VectorXd& rhs) {
    if (rhs.size() != lower.rows()) {
        throw InputError("right-hand side has length " + std::to_string(rhs.size()) +
                         ", expected " + std::to_string(lower.rows()));
    }
    Eigen::VectorXd y = lower.triangularView<Eigen::Lower>().solve(rhs);
    return lower.transpose().triangularView<Eigen::Upper>().solve(y);
}

Eigen::VectorXd solve_spd(const CovMatrix& m, const Eigen::VectorXd& rhs) {
    if (static_cast<std::size_t>(rhs.size()) != m.dim()) {
        throw InputError("right-hand side has length " + std::to_string(rhs.size()) +
                         ", expected " + std::to_string(m.dim()));
    }
    return cholesky_solve(cholesky(m), rhs);
}

bool exceeds_spectral_floor(const CovMatrix& m, double shift) {
    Eigen::MatrixXd a = m.dense();
    double bad = 0.0;
    return factor_in_place(a, shift, 0.0, bad) < 0;
}

}  // namespace ppcov

#pragma once

#include <Eigen/Dense>

#include <cstddef>

namespace ppcov {

/// Dense symmetric matrix. Symmetry is structural: every constructor and
/// mutator writes both (i,j) and (j,i), so entries(i,j) == entries(j,i)
/// holds bit-for-bit. All entries are finite and dim >= 1.
class CovMatrix {
public:
    enum class Triangle { lower, upper };

    /// Symmetrizes as (m + m^T) / 2. Throws InputError on non-square,
    /// empty or non-finite input.
    explicit CovMatrix(const Eigen::MatrixXd& m);

    /// Takes one triangle of `m` as authoritative and mirrors it.
    CovMatrix(const Eigen::MatrixXd& m, Triangle authoritative);

    static CovMatrix identity(std::size_t p);
    static CovMatrix zero(std::size_t p);
    static CovMatrix diagonal(const Eigen::VectorXd& d);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
    double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
    const Eigen::MatrixXd& dense() const noexcept { return m_; }

    /// Writes (i,j) and (j,i).
    void set(std::size_t i, std::size_t j, double value);
    /// Adds `shift` to every diagonal entry.
    void add_to_diagonal(double shift);

    friend bool operator==(const CovMatrix& a, const CovMatrix& b) {
        return a.m_.rows() == b.m_.rows() && a.m_ == b.m_;
    }

private:
    struct Trusted {};
    CovMatrix(Eigen::MatrixXd m, Trusted) : m_(std::move(m)) {}

    Eigen::MatrixXd m_;

    friend CovMatrix operator-(const CovMatrix& a, const CovMatrix& b);
    friend CovMatrix operator+(const CovMatrix& a, const CovMatrix& b);
    friend CovMatrix operator*(double c, const CovMatrix& a);
};

CovMatrix operator-(const CovMatrix& a, const CovMatrix& b);
CovMatrix operator+(const CovMatrix& a, const CovMatrix& b);
CovMatrix operator*(double c, const CovMatrix& a);

struct EigenSummary {
    double min_eig;
    double max_eig;
};

EigenSummary sym_eigen_extremes(const CovMatrix& m);

/// max |eigenvalue|, which is the operator 2-norm for a symmetric matrix.
double spectral_norm(const CovMatrix& m);

/// Maximum absolute column sum.
double matrix_one_norm(const CovMatrix& m);

/// Lower-triangular L with L * L^T == m. A pivot (the value whose square
/// root would become L(k,k)) that is <= pivot_tolerance raises
/// NotPositiveDefinite carrying k.
Eigen::MatrixXd cholesky(const CovMatrix& m, double pivot_tolerance = 0.0);

/// Solves L * L^T x = rhs given the factor from cholesky().
Eigen::VectorXd cholesky_solve(const Eigen::MatrixXd& lower, const Eigen::VectorXd& rhs);

Eigen::VectorXd solve_spd(const CovMatrix& m, const Eigen::VectorXd& rhs);

/// True when m - shift*I admits a Cholesky factorization, i.e. all
/// eigenvalues of m exceed `shift`. Cheaper than an eigen-solve.
bool exceeds_spectral_floor(const CovMatrix& m, double shift);

}  // namespace ppcov

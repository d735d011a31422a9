#pragma once

#include "ppcov/matrix.hpp"
#include "ppcov/returns.hpp"
#include "ppcov/rng.hpp"

#include <Eigen/Dense>

#include <cstddef>

namespace ppcov {

/// Inverse-Wishart parameters IW_p(scale, nu) in the convention whose density
/// is proportional to |S|^(-nu/2) exp(-tr(S^-1 scale)/2). That exponent
/// corresponds to the textbook degrees of freedom nu - p - 1, which is what
/// the Bartlett sampler consumes.
class IWParams {
public:
    /// Throws ParameterError unless nu > 2p, NotPositiveDefinite unless the
    /// scale is SPD.
    IWParams(CovMatrix scale, double nu);

    const CovMatrix& scale() const noexcept { return scale_; }
    double nu() const noexcept { return nu_; }
    std::size_t dim() const noexcept { return scale_.dim(); }
    /// nu - p - 1.
    double standard_dof() const noexcept { return nu_ - static_cast<double>(dim()) - 1.0; }
    /// Lower Cholesky factor of the scale, computed once at construction.
    const Eigen::MatrixXd& scale_factor() const noexcept { return scale_factor_; }

private:
    CovMatrix scale_;
    double nu_;
    Eigen::MatrixXd scale_factor_;
};

/// n rows of i.i.d. N_p(mean, cov), as mean + L z with L the Cholesky factor.
ReturnsMatrix sample_mvn(const Eigen::VectorXd& mean, const CovMatrix& cov, std::size_t n, RngStream rng);

/// One inverse-Wishart draw. With scale = C C^T and A the Bartlett factor of
/// a Wishart(I, nu - p - 1) matrix, returns (C A^-T)(C A^-T)^T, which is the
/// inverse of a Wishart(scale^-1, nu - p - 1) draw.
CovMatrix sample_inverse_wishart(const IWParams& params, Generator& gen);
CovMatrix sample_inverse_wishart(const IWParams& params, RngStream rng);

/// Conjugate update: IW(scale + n S_n, nu + n). S_n is the uncentered second
/// moment unless `demean` is set.
IWParams posterior_params(const IWParams& prior, const ReturnsMatrix& data, bool demean = false);

/// The default prior: scale = mean(diag S_n) * I_p, nu = 2p + 2.
IWParams default_prior(const ReturnsMatrix& data, bool demean = false);

}  // namespace ppcov

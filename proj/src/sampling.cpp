#include "ppcov/sampling.hpp"

#include "ppcov/errors.hpp"
#include "ppcov/estimators.hpp"

#include <cmath>
#include <string>

namespace ppcov {

IWParams::IWParams(CovMatrix scale, double nu) : scale_(std::move(scale)), nu_(nu) {
    const double p = static_cast<double>(scale_.dim());
    if (!std::isfinite(nu_) || !(nu_ > 2.0 * p)) {
        throw ParameterError("inverse-Wishart nu must exceed 2p = " + std::to_string(2.0 * p) +
                             ", got " + std::to_string(nu_));
    }
    scale_factor_ = cholesky(scale_);
}

ReturnsMatrix sample_mvn(const Eigen::VectorXd& mean, const CovMatrix& cov, std::size_t n, RngStream rng) {
    if (n == 0) throw InputError("sample_mvn needs n >= 1");
    if (static_cast<std::size_t>(mean.size()) != cov.dim()) throw InputError("mean length does not match covariance");
    const Eigen::MatrixXd lower = cholesky(cov);
    const auto p = static_cast<Eigen::Index>(cov.dim());
    const auto rows = static_cast<Eigen::Index>(n);

    Generator gen(rng);
    Eigen::MatrixXd z(rows, p);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < p; ++j) z(i, j) = gen.normal();
    }
    Eigen::MatrixXd x = z * lower.transpose();
    x.rowwise() += mean.transpose();
    return ReturnsMatrix(std::move(x));
}

CovMatrix sample_inverse_wishart(const IWParams& params, Generator& gen) {
    const auto p = static_cast<Eigen::Index>(params.dim());
    const double dof = params.standard_dof();

    Eigen::MatrixXd bartlett = Eigen::MatrixXd::Zero(p, p);
    for (Eigen::Index i = 0; i < p; ++i) {
        bartlett(i, i) = std::sqrt(gen.chi_square(dof - static_cast<double>(i)));
        for (Eigen::Index j = 0; j < i; ++j) bartlett(i, j) = gen.normal();
    }

    // A X = C^T  =>  X = A^-1 C^T = (C A^-T)^T, and the draw is X^T X.
    const Eigen::MatrixXd x =
        bartlett.triangularView<Eigen::Lower>().solve(params.scale_factor().transpose());
    Eigen::MatrixXd draw = Eigen::MatrixXd::Zero(p, p);
    draw.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose());
    return CovMatrix(draw, CovMatrix::Triangle::lower);
}

CovMatrix sample_inverse_wishart(const IWParams& params, RngStream rng) {
    Generator gen(rng);
    return sample_inverse_wishart(params, gen);
}

IWParams posterior_params(const IWParams& prior, const ReturnsMatrix& data, bool demean) {
    if (data.cols() != prior.dim()) {
        throw InputError("data has " + std::to_string(data.cols()) + " columns, prior has dimension " +
                         std::to_string(prior.dim()));
    }
    const double n = static_cast<double>(data.rows());
    return IWParams(prior.scale() + n * sample_covariance(data, demean), prior.nu() + n);
}

IWParams default_prior(const ReturnsMatrix& data, bool demean) {
    const CovMatrix s = sample_covariance(data, demean);
    const double p = static_cast<double>(s.dim());
    const double s_bar = s.dense().diagonal().mean();
    return IWParams(s_bar * CovMatrix::identity(s.dim()), 2.0 * p + 2.0);
}

}  // namespace ppcov

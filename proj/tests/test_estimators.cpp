#include "ppcov/errors.hpp"
#include "ppcov/estimators.hpp"
#include "ppcov/sampling.hpp"
#include "test_support.hpp"

#include <doctest.h>

using namespace ppcov;

TEST_CASE("sample_covariance examples") {
    Eigen::MatrixXd x(2, 2);
    x << 1, 0, -1, 0;
    const CovMatrix s = sample_covariance(ReturnsMatrix(x));
    CHECK(s(0, 0) == 1.0);
    CHECK(s(0, 1) == 0.0);
    CHECK(s(1, 1) == 0.0);

    CHECK(sample_covariance(ReturnsMatrix(Eigen::MatrixXd::Constant(1, 1, 2.0)))(0, 0) == 4.0);

    Eigen::MatrixXd y(2, 1);
    y << 1, 3;  // mean 2, centered (-1, 1)
    CHECK(sample_covariance(ReturnsMatrix(y), false)(0, 0) == 5.0);
    CHECK(sample_covariance(ReturnsMatrix(y), true)(0, 0) == 1.0);
}

TEST_CASE("sample_covariance Monte Carlo: N(0, diag(1, 4))") {
    const ReturnsMatrix x = sample_mvn(Eigen::VectorXd::Zero(2), CovMatrix::diagonal(Eigen::Vector2d(1, 4)), 100000,
                                       RngStream{51, 0});
    const CovMatrix s = sample_covariance(x);
    // Var(x_j^2) = 2 sigma_j^4, Var(x_0 x_1) = sigma_0^2 sigma_1^2.
    CHECK(std::abs(s(0, 0) - 1.0) < 3 * std::sqrt(2.0 / 1e5));
    CHECK(std::abs(s(1, 1) - 4.0) < 3 * std::sqrt(32.0 / 1e5));
    CHECK(std::abs(s(0, 1)) < 3 * std::sqrt(4.0 / 1e5));
}

TEST_CASE("sample_covariance is PSD") {
    Generator gen(RngStream{52, 0});
    for (int trial = 0; trial < 100; ++trial) {
        const auto n = static_cast<Eigen::Index>(1 + gen.uniform_int(0, 10));
        const auto p = static_cast<Eigen::Index>(1 + gen.uniform_int(0, 15));
        const ReturnsMatrix x(ppcov::testing::random_dense(gen, n, p));
        CHECK(sym_eigen_extremes(sample_covariance(x, trial % 2 == 0)).min_eig >= -1e-10);
    }
}

TEST_CASE("thresholded_sample_cov") {
    Generator gen(RngStream{53, 0});
    const ReturnsMatrix x(ppcov::testing::random_dense(gen, 20, 6));
    ThresholdConfig cfg;
    cfg.p = 6;
    cfg.n = 20;
    cfg.gamma = 0.0;
    const PointEstimate zero = thresholded_sample_cov(x, cfg);
    CHECK(zero.matrix == sample_covariance(x));
    CHECK(zero.method == Method::thres);
    REQUIRE(zero.config.has_value());

    cfg.gamma = 1e9;
    CHECK(thresholded_sample_cov(x, cfg).matrix == CovMatrix::zero(6));

    for (double g : {0.3, 0.8, 1.5}) {
        cfg.gamma = g;
        CHECK(thresholded_sample_cov(x, cfg).matrix == hard_threshold(sample_covariance(x), cfg));
    }
}

TEST_CASE("gmvp_ready repairs a non-PD estimate with the default floor") {
    const CovMatrix singular = CovMatrix::diagonal(Eigen::Vector2d(1.0, 0.0));
    const CovMatrix fixed = gmvp_ready(singular, false);
    CHECK(fixed(1, 1) == doctest::Approx(kDefaultEpsilon));
    CHECK(gmvp_ready(CovMatrix::identity(2), false) == CovMatrix::identity(2));
}

TEST_CASE("method names") {
    CHECK(parse_method("PPP") == Method::ppp);
    CHECK(parse_method("samplecov") == Method::sample_cov);
    CHECK(method_name(Method::thres) == "Thres");
    CHECK_THROWS_AS(parse_method("cgm"), InputError);
}

#pragma once

#include "ppcov/matrix.hpp"
#include "ppcov/ppp.hpp"
#include "ppcov/returns.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace ppcov {

/// Portfolio weights summing to one (within 1e-10). Short positions allowed.
class PortfolioWeights {
public:
    explicit PortfolioWeights(Eigen::VectorXd w);
    const Eigen::VectorXd& values() const noexcept { return w_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(w_.size()); }
    double operator[](std::size_t i) const { return w_(static_cast<Eigen::Index>(i)); }

private:
    Eigen::VectorXd w_;
};

struct AssetInterval {
    double mean;
    double lower;
    double upper;
};

struct IntervalSummary {
    double level;
    std::vector<AssetInterval> assets;
};

/// Sigma^-1 1 / (1^T Sigma^-1 1) through a Cholesky solve. Non-PD input raises
/// NotPositiveDefinite with a hint to post-process first.
PortfolioWeights gmvp_weights(const CovMatrix& sigma);

/// gmvp_weights over every draw, in order. The error names the failing draw.
std::vector<PortfolioWeights> gmvp_ensemble(const PosteriorEnsemble& e, unsigned workers = 1);
std::vector<PortfolioWeights> gmvp_ensemble(const std::vector<CovMatrix>& draws, unsigned workers = 1);

/// Per-asset average across draws.
Eigen::VectorXd mean_weights(const std::vector<PortfolioWeights>& ws);

/// Empirical quantile with linear interpolation between order statistics
/// (h = (n - 1) q, "type 7"). `sorted` must be ascending and non-empty.
double quantile_type7(const std::vector<double>& sorted, double q);

/// Equal-tailed intervals: the (1 - level)/2 and (1 + level)/2 quantiles.
IntervalSummary credible_intervals(const std::vector<PortfolioWeights>& ws, double level);

/// Percentage of assets whose true weight lies in [lower, upper], inclusive.
double coverage(const IntervalSummary& summary, const PortfolioWeights& truth);

/// ||truth - est||_2 / ||truth||_2 in the spectral norm.
double relative_cov_error(const CovMatrix& truth, const CovMatrix& est);

/// Euclidean-norm ratio ||truth - est|| / ||truth||.
double relative_gmvp_error(const Eigen::VectorXd& truth, const Eigen::VectorXd& est);

/// Sample variance (divisor n - 1) of the portfolio returns w^T x_t.
double portfolio_variance(const Eigen::VectorXd& w, const ReturnsMatrix& test);

/// 100 * sqrt(portfolio_variance(w, test)).
double realized_portfolio_sd(const Eigen::VectorXd& w, const ReturnsMatrix& test);

void write_intervals_csv(const std::filesystem::path& path, const IntervalSummary& s,
                         const std::vector<std::string>& asset_ids);
void write_weights_csv(const std::filesystem::path& path, const Eigen::VectorXd& w,
                       const std::vector<std::string>& asset_ids);

}  // namespace ppcov

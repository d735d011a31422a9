#include "ppcov/gmvp.hpp"

#include "ppcov/csv.hpp"
#include "ppcov/errors.hpp"
#include "ppcov/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

namespace ppcov {

PortfolioWeights::PortfolioWeights(Eigen::VectorXd w) : w_(std::move(w)) {
    if (w_.size() == 0) throw InputError("portfolio weights must be non-empty");
    if (!w_.allFinite()) throw InputError("portfolio weights must be finite");
    if (std::abs(w_.sum() - 1.0) > 1e-10) {
        throw InputError("portfolio weights must sum to 1, got " + std::to_string(w_.sum()));
    }
}

PortfolioWeights gmvp_weights(const CovMatrix& sigma) {
    Eigen::MatrixXd lower;
    try {
        lower = cholesky(sigma);
    } catch (const NotPositiveDefinite& e) {
        throw NotPositiveDefinite(e.pivot(), e.pivot_value(),
                                  "GMVP needs an SPD covariance; post-process the estimate first");
    }
    const Eigen::VectorXd x = cholesky_solve(lower, Eigen::VectorXd::Ones(lower.rows()));
    const double total = x.sum();
    if (!(total > 0.0) || !std::isfinite(total)) throw InputError("GMVP normalizer is not positive");
    return PortfolioWeights(x / total);
}

std::vector<PortfolioWeights> gmvp_ensemble(const std::vector<CovMatrix>& draws, unsigned workers) {
    std::vector<std::optional<PortfolioWeights>> slots(draws.size());
    parallel_for(draws.size(), workers, [&](std::size_t k) {
        try {
            slots[k] = gmvp_weights(draws[k]);
        } catch (const NotPositiveDefinite& e) {
            throw NotPositiveDefinite(e.pivot(), e.pivot_value(), "ensemble draw " + std::to_string(k));
        }
    });
    std::vector<PortfolioWeights> out;
    out.reserve(draws.size());
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

std::vector<PortfolioWeights> gmvp_ensemble(const PosteriorEnsemble& e, unsigned workers) {
    return gmvp_ensemble(e.draws(), workers);
}

Eigen::VectorXd mean_weights(const std::vector<PortfolioWeights>& ws) {
    if (ws.empty()) throw InputError("no weight vectors to average");
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ws.front().size()));
    for (const auto& w : ws) {
        if (w.size() != ws.front().size()) throw InputError("weight vectors differ in length");
        sum += w.values();
    }
    return sum / static_cast<double>(ws.size());
}

double quantile_type7(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) throw InputError("quantile of an empty sample");
    const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

IntervalSummary credible_intervals(const std::vector<PortfolioWeights>& ws, double level) {
    if (ws.empty()) throw InputError("credible intervals need at least one weight vector");
    if (ws.size() < 2) throw InputError("credible intervals need at least two draws");
    if (!(level > 0.0 && level < 1.0)) throw ParameterError("credible level must lie in (0, 1)");
    const Eigen::VectorXd mean = mean_weights(ws);
    const std::size_t p = ws.front().size();
    IntervalSummary out{level, {}};
    out.assets.reserve(p);
    std::vector<double> column(ws.size());
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t k = 0; k < ws.size(); ++k) column[k] = ws[k][i];
        std::sort(column.begin(), column.end());
        out.assets.push_back({mean(static_cast<Eigen::Index>(i)), quantile_type7(column, (1.0 - level) / 2.0),
                              quantile_type7(column, (1.0 + level) / 2.0)});
    }
    return out;
}

double coverage(const IntervalSummary& summary, const PortfolioWeights& truth) {
    if (summary.assets.size() != truth.size()) {
        throw InputError("coverage: " + std::to_string(summary.assets.size()) + " intervals vs " +
                         std::to_string(truth.size()) + " true weights");
    }
    std::size_t hit = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const auto& a = summary.assets[i];
        if (truth[i] >= a.lower && truth[i] <= a.upper) ++hit;
    }
    return 100.0 * static_cast<double>(hit) / static_cast<double>(truth.size());
}

double relative_cov_error(const CovMatrix& truth, const CovMatrix& est) {
    const double denom = spectral_norm(truth);
    if (denom == 0.0) throw InputError("relative error against a zero truth");
    return spectral_norm(truth - est) / denom;
}

double relative_gmvp_error(const Eigen::VectorXd& truth, const Eigen::VectorXd& est) {
    if (truth.size() != est.size()) throw InputError("weight vectors differ in length");
    const double denom = truth.norm();
    if (denom == 0.0) throw InputError("relative error against a zero truth");
    return (truth - est).norm() / denom;
}

double portfolio_variance(const Eigen::VectorXd& w, const ReturnsMatrix& test) {
    if (test.rows() < 2) throw InputError("portfolio variance needs at least 2 test rows");
    if (static_cast<std::size_t>(w.size()) != test.cols()) throw InputError("weights do not match test columns");
    const Eigen::VectorXd r = test.values() * w;
    const double mean = r.mean();
    return (r.array() - mean).square().sum() / static_cast<double>(r.size() - 1);
}

double realized_portfolio_sd(const Eigen::VectorXd& w, const ReturnsMatrix& test) {
    return 100.0 * std::sqrt(portfolio_variance(w, test));
}

void write_intervals_csv(const std::filesystem::path& path, const IntervalSummary& s,
                         const std::vector<std::string>& asset_ids) {
    if (asset_ids.size() != s.assets.size()) throw InputError("asset label count does not match intervals");
    csv::Writer w(path);
    w.row({"asset", "mean", "lower", "upper"});
    for (std::size_t i = 0; i < s.assets.size(); ++i) {
        const auto& a = s.assets[i];
        w.row({asset_ids[i], csv::format_double(a.mean), csv::format_double(a.lower), csv::format_double(a.upper)});
    }
    w.close();
}

void write_weights_csv(const std::filesystem::path& path, const Eigen::VectorXd& weights,
                       const std::vector<std::string>& asset_ids) {
    if (asset_ids.size() != static_cast<std::size_t>(weights.size())) {
        throw InputError("asset label count does not match weights");
    }
    csv::Writer w(path);
    w.row({"asset", "weight"});
    for (std::size_t i = 0; i < asset_ids.size(); ++i) {
        w.row({asset_ids[i], csv::format_double(weights(static_cast<Eigen::Index>(i)))});
    }
    w.close();
}

}  // namespace ppcov

#include "ppcov/ppp.hpp"

#include "ppcov/errors.hpp"
#include "ppcov/parallel.hpp"

#include <cmath>
#include <optional>
#include <string>

namespace ppcov {

double ThresholdConfig::cutoff() const {
    validate();
    if (p == 1) return 0.0;
    return gamma * std::sqrt(std::log(static_cast<double>(p)) / static_cast<double>(n));
}

void ThresholdConfig::validate() const {
    if (!std::isfinite(gamma) || gamma < 0.0) throw ParameterError("gamma must be finite and >= 0");
    if (!std::isfinite(epsilon) || epsilon < 0.0) throw ParameterError("epsilon must be finite and >= 0");
    if (n == 0) throw ParameterError("threshold config needs n >= 1");
    if (p == 0) throw ParameterError("threshold config needs p >= 1");
}

namespace {

void require_dim(const CovMatrix& m, const ThresholdConfig& cfg) {
    if (m.dim() != cfg.p) {
        throw InputError("matrix dimension " + std::to_string(m.dim()) + " does not match threshold config p = " +
                         std::to_string(cfg.p));
    }
}

}  // namespace

CovMatrix hard_threshold(const CovMatrix& m, const ThresholdConfig& cfg) {
    require_dim(m, cfg);
    const double cut = cfg.cutoff();
    Eigen::MatrixXd out = m.dense();
    const Eigen::Index p = out.rows();
    for (Eigen::Index j = 0; j < p; ++j) {
        for (Eigen::Index i = 0; i < p; ++i) {
            if (i == j && cfg.preserve_diagonal) continue;
            if (!(std::abs(out(i, j)) >= cut)) out(i, j) = 0.0;
        }
    }
    // Elementwise rule on an exactly symmetric input keeps it exactly symmetric.
    return CovMatrix(out, CovMatrix::Triangle::lower);
}

CovMatrix pd_adjust(const CovMatrix& m, const ThresholdConfig& cfg) {
    cfg.validate();
    // A successful Cholesky of m - eps*I proves lambda_min > eps.
    if (exceeds_spectral_floor(m, cfg.epsilon)) return m;
    const double lambda_min = sym_eigen_extremes(m).min_eig;
    if (!(lambda_min < cfg.epsilon)) return m;
    CovMatrix out = m;
    out.add_to_diagonal(cfg.epsilon - lambda_min);
    return out;
}

CovMatrix post_process(const CovMatrix& m, const ThresholdConfig& cfg) {
    return pd_adjust(hard_threshold(m, cfg), cfg);
}

PosteriorEnsemble::PosteriorEnsemble(std::vector<CovMatrix> draws, ThresholdConfig config, IWParams prior,
                                     std::uint64_t seed, bool post_processed)
    : draws_(std::move(draws)), config_(config), prior_(std::move(prior)), seed_(seed),
      post_processed_(post_processed) {
    if (draws_.empty()) throw InputError("posterior ensemble needs at least one draw");
    const std::size_t p = draws_.front().dim();
    for (std::size_t k = 0; k < draws_.size(); ++k) {
        if (draws_[k].dim() != p) throw InputError("ensemble draw " + std::to_string(k) + " has a different dimension");
    }
    if (prior_.dim() != p) throw InputError("ensemble prior dimension does not match draws");
}

std::vector<CovMatrix> draw_posterior(const IWParams& posterior, std::size_t count, std::uint64_t seed,
                                      unsigned workers) {
    std::vector<std::optional<CovMatrix>> slots(count);
    parallel_for(count, workers, [&](std::size_t k) {
        slots[k] = sample_inverse_wishart(posterior, RngStream{seed, k});
    });
    std::vector<CovMatrix> draws;
    draws.reserve(count);
    for (auto& s : slots) draws.push_back(std::move(*s));
    return draws;
}

PosteriorEnsemble generate_ppp_ensemble(const IWParams& prior, const ReturnsMatrix& data,
                                        const ThresholdConfig& cfg, std::size_t count, std::uint64_t seed,
                                        bool demean, unsigned workers) {
    if (count == 0) throw InputError("ensemble size must be >= 1");
    cfg.validate();
    if (cfg.p != data.cols()) throw InputError("threshold config p does not match data columns");
    const IWParams posterior = posterior_params(prior, data, demean);

    std::vector<std::optional<CovMatrix>> slots(count);
    parallel_for(count, workers, [&](std::size_t k) {
        slots[k] = post_process(sample_inverse_wishart(posterior, RngStream{seed, k}), cfg);
    });
    std::vector<CovMatrix> draws;
    draws.reserve(count);
    for (auto& s : slots) draws.push_back(std::move(*s));
    return PosteriorEnsemble(std::move(draws), cfg, prior, seed, true);
}

CovMatrix ensemble_mean(const std::vector<CovMatrix>& draws) {
    if (draws.empty()) throw InputError("cannot average an empty ensemble");
    Eigen::MatrixXd sum = draws.front().dense();
    for (std::size_t k = 1; k < draws.size(); ++k) {
        if (draws[k].dim() != draws.front().dim()) throw InputError("ensemble draws differ in dimension");
        sum += draws[k].dense();
    }
    sum /= static_cast<double>(draws.size());
    return CovMatrix(sum, CovMatrix::Triangle::lower);
}

CovMatrix ensemble_mean(const PosteriorEnsemble& e) { return ensemble_mean(e.draws()); }

}  // namespace ppcov

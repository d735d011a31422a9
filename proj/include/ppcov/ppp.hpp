#pragma once

#include "ppcov/matrix.hpp"
#include "ppcov/returns.hpp"
#include "ppcov/sampling.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace ppcov {

/// Default positive-definite floor applied after thresholding.
inline constexpr double kDefaultEpsilon = 1e-4;

/// Threshold multiplier gamma and PD floor epsilon. The entrywise cutoff is
/// gamma * sqrt(log p / n); p = 1 gives a zero cutoff.
struct ThresholdConfig {
    double gamma = 0.0;
    double epsilon = kDefaultEpsilon;
    std::size_t n = 1;
    std::size_t p = 1;
    /// Exempt the diagonal from thresholding. Off by default: the
    /// thresholding rule applies to every entry.
    bool preserve_diagonal = false;

    double cutoff() const;
    /// Throws ParameterError on negative/non-finite gamma or epsilon, or n, p == 0.
    void validate() const;
};

/// Zero every entry with |m(i,j)| < cutoff; entries at the cutoff are kept.
CovMatrix hard_threshold(const CovMatrix& m, const ThresholdConfig& cfg);

/// If lambda_min(m) < epsilon, shift the diagonal by epsilon - lambda_min.
CovMatrix pd_adjust(const CovMatrix& m, const ThresholdConfig& cfg);

/// pd_adjust(hard_threshold(m)).
CovMatrix post_process(const CovMatrix& m, const ThresholdConfig& cfg);

/// N covariance draws with the prior, threshold config and seed that produced
/// them. Immutable once built.
class PosteriorEnsemble {
public:
    PosteriorEnsemble(std::vector<CovMatrix> draws, ThresholdConfig config, IWParams prior,
                      std::uint64_t seed, bool post_processed);

    const std::vector<CovMatrix>& draws() const noexcept { return draws_; }
    std::size_t size() const noexcept { return draws_.size(); }
    std::size_t dim() const noexcept { return draws_.front().dim(); }
    const ThresholdConfig& config() const noexcept { return config_; }
    const IWParams& prior() const noexcept { return prior_; }
    std::uint64_t seed() const noexcept { return seed_; }
    bool post_processed() const noexcept { return post_processed_; }

private:
    std::vector<CovMatrix> draws_;
    ThresholdConfig config_;
    IWParams prior_;
    std::uint64_t seed_;
    bool post_processed_;
};

/// N raw inverse-Wishart draws; draw k uses RngStream{seed, k}, so the result
/// is independent of `workers`.
std::vector<CovMatrix> draw_posterior(const IWParams& posterior, std::size_t count, std::uint64_t seed,
                                      unsigned workers = 1);

/// Conjugate posterior from (prior, data), N draws, each post-processed.
PosteriorEnsemble generate_ppp_ensemble(const IWParams& prior, const ReturnsMatrix& data,
                                        const ThresholdConfig& cfg, std::size_t count, std::uint64_t seed,
                                        bool demean = false, unsigned workers = 1);

CovMatrix ensemble_mean(const PosteriorEnsemble& e);
CovMatrix ensemble_mean(const std::vector<CovMatrix>& draws);

/// Flat CSV with header draw_index,i,j,value; one row per lower-triangle
/// entry (i >= j), 0-based indices, 17 significant digits.
void write_ensemble_csv(const std::filesystem::path& path, const std::vector<CovMatrix>& draws);
std::vector<CovMatrix> read_ensemble_csv(const std::filesystem::path& path);

/// JSON sidecar with seed, prior, threshold config and draw count.
void write_ensemble_metadata(const std::filesystem::path& path, const PosteriorEnsemble& e);
/// Rebuilds the ensemble from both files and re-checks the spectral floor
/// when the metadata says the draws were post-processed.
PosteriorEnsemble read_ensemble(const std::filesystem::path& csv_path, const std::filesystem::path& meta_path);

}  // namespace ppcov

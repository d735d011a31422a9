#pragma once

#include "ppcov/matrix.hpp"
#include "ppcov/ppp.hpp"
#include "ppcov/returns.hpp"
#include "ppcov/sampling.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string_view>
#include <vector>

namespace ppcov {

enum class CvObjective { cov_spectral, gmvp_variance };

std::string_view objective_name(CvObjective o);
CvObjective parse_objective(std::string_view token);

/// Which estimator is being tuned: a posterior ensemble scored by its average
/// loss over draws, or a single thresholded sample covariance.
enum class CvPath { posterior, point };

struct CvPlan {
    std::size_t n_splits = 5;
    double train_fraction = 2.0 / 3.0;
    /// Ascending (duplicates allowed). Empty means "use default_gamma_grid".
    std::vector<double> grid_gamma;
    std::size_t grid_points = 21;  // size of the default grid when grid_gamma is empty
    std::vector<double> grid_epsilon{kDefaultEpsilon};
    CvObjective objective = CvObjective::cov_spectral;
    std::uint64_t seed = 0;
    // Tuned pipelines keep the diagonal: with the default grid the cutoff can pass the
    // smallest variances, and thresholding them leaves eps*I blocks that look riskless.
    bool preserve_diagonal = true;

    void validate() const;
};

struct CvScore {
    double gamma;
    double epsilon;
    double mean_loss;
    double se_loss;
};

struct CvResult {
    ThresholdConfig best;
    std::vector<CvScore> score_table;  // grid order: gamma-major, epsilon-minor
    std::size_t splits_used;
};

using PriorBuilder = std::function<IWParams(const ReturnsMatrix&)>;

struct CvOptions {
    bool demean = false;
    unsigned workers = 1;
};

/// || estimate - val^T val / N_val ||_2.
double cv_loss_cov(const CovMatrix& estimate, const ReturnsMatrix& val);

/// Sample variance of validation returns under gmvp_weights(estimate).
/// Throws NotPositiveDefinite when the estimate is not SPD.
double cv_loss_gmvp(const CovMatrix& estimate, const ReturnsMatrix& val);

/// Average loss over draws. Under the GMVP objective a draw that is not SPD
/// scores +infinity.
double cv_posterior_loss(const std::vector<CovMatrix>& draws, const ReturnsMatrix& val, CvObjective objective);
double cv_posterior_loss(const PosteriorEnsemble& e, const ReturnsMatrix& val, CvObjective objective);

/// 21-point (by default) equispaced grid from 0 to the smallest gamma that
/// zeroes every off-diagonal entry of the full-data sample covariance.
std::vector<double> default_gamma_grid(const ReturnsMatrix& data, bool demean = false, std::size_t points = 21);

/// Random-split cross-validation over the (gamma, epsilon) grid. Returns the
/// grid point with the smallest mean validation loss; ties go to the earliest
/// grid point. The posterior path draws `n_cv` initial-posterior samples per
/// split and reuses them across grid points.
CvResult cv_select(const ReturnsMatrix& data, const PriorBuilder& prior_builder, const CvPlan& plan,
                   std::size_t n_cv, CvPath path, const CvOptions& options = {});

/// Row split used for split `index`: (train rows, validation rows), both ascending.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> cv_split_rows(std::size_t n, const CvPlan& plan,
                                                                            std::size_t index);

/// Columns gamma,epsilon,mean_loss,se_loss.
void write_cv_result_csv(const std::filesystem::path& path, const CvResult& result);

}  // namespace ppcov

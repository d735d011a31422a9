#include "ppcov/tuning.hpp"

#include "ppcov/csv.hpp"
#include "ppcov/errors.hpp"
#include "ppcov/estimators.hpp"
#include "ppcov/gmvp.hpp"
#include "ppcov/parallel.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace ppcov {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kSplitTag = 0x5350'4C49'5400ull;
constexpr std::uint64_t kDrawTag = 0x4452'4157'5300ull;

}  // namespace

std::string_view objective_name(CvObjective o) {
    return o == CvObjective::cov_spectral ? "cov-spectral" : "gmvp-variance";
}

CvObjective parse_objective(std::string_view token) {
    if (token == "cov-spectral") return CvObjective::cov_spectral;
    if (token == "gmvp-variance") return CvObjective::gmvp_variance;
    throw InputError("unknown CV objective '" + std::string(token) + "' (expected cov-spectral or gmvp-variance)");
}

void CvPlan::validate() const {
    if (n_splits == 0) throw ParameterError("CV needs at least one split");
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw ParameterError("train_fraction must lie in (0, 1)");
    if (grid_epsilon.empty()) throw ParameterError("epsilon grid is empty");
    if (grid_gamma.empty() && grid_points < 2) throw ParameterError("default gamma grid needs at least 2 points");
    for (double g : grid_gamma) {
        if (!std::isfinite(g) || g < 0.0) throw ParameterError("gamma grid values must be finite and >= 0");
    }
    if (!std::is_sorted(grid_gamma.begin(), grid_gamma.end())) throw ParameterError("gamma grid must be ascending");
    for (double e : grid_epsilon) {
        if (!std::isfinite(e) || e < 0.0) throw ParameterError("epsilon grid values must be finite and >= 0");
    }
}

double cv_loss_cov(const CovMatrix& estimate, const ReturnsMatrix& val) {
    if (estimate.dim() != val.cols()) throw InputError("CV loss: estimate and validation data differ in dimension");
    return spectral_norm(estimate - sample_covariance(val, false));
}

double cv_loss_gmvp(const CovMatrix& estimate, const ReturnsMatrix& val) {
    if (estimate.dim() != val.cols()) throw InputError("CV loss: estimate and validation data differ in dimension");
    return portfolio_variance(gmvp_weights(estimate).values(), val);
}

namespace {

double draw_loss(const CovMatrix& draw, const CovMatrix& val_moment, const ReturnsMatrix& val, CvObjective objective) {
    if (objective == CvObjective::cov_spectral) return spectral_norm(draw - val_moment);
    try {
        return cv_loss_gmvp(draw, val);
    } catch (const NotPositiveDefinite&) {
        return kInf;
    }
}

}  // namespace

double cv_posterior_loss(const std::vector<CovMatrix>& draws, const ReturnsMatrix& val, CvObjective objective) {
    if (draws.empty()) throw InputError("CV loss over an empty ensemble");
    if (draws.front().dim() != val.cols()) throw InputError("CV loss: ensemble and validation data differ in dimension");
    const CovMatrix moment = sample_covariance(val, false);
    double sum = 0.0;
    for (const auto& d : draws) sum += draw_loss(d, moment, val, objective);
    return sum / static_cast<double>(draws.size());
}

double cv_posterior_loss(const PosteriorEnsemble& e, const ReturnsMatrix& val, CvObjective objective) {
    return cv_posterior_loss(e.draws(), val, objective);
}

std::vector<double> default_gamma_grid(const ReturnsMatrix& data, bool demean, std::size_t points) {
    if (points < 2) throw ParameterError("gamma grid needs at least 2 points");
    const std::size_t p = data.cols();
    if (p == 1) return {0.0};
    const Eigen::MatrixXd s = sample_covariance(data, demean).dense();
    double max_off = 0.0;
    for (Eigen::Index j = 0; j < s.cols(); ++j) {
        for (Eigen::Index i = j + 1; i < s.rows(); ++i) max_off = std::max(max_off, std::abs(s(i, j)));
    }
    if (max_off == 0.0) return {0.0};
    const double rate = std::sqrt(std::log(static_cast<double>(p)) / static_cast<double>(data.rows()));
    // Entries at the cutoff survive, so step just past max|s_ij| / rate.
    const double gamma_max = (max_off / rate) * (1.0 + 8.0 * DBL_EPSILON);
    std::vector<double> grid(points);
    for (std::size_t k = 0; k < points; ++k) {
        grid[k] = gamma_max * static_cast<double>(k) / static_cast<double>(points - 1);
    }
    grid.back() = gamma_max;
    return grid;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> cv_split_rows(std::size_t n, const CvPlan& plan,
                                                                            std::size_t index) {
    const auto n_train = static_cast<std::size_t>(std::floor(plan.train_fraction * static_cast<double>(n)));
    if (n_train < 2 || n - n_train < 2) {
        throw InputError("too few rows (" + std::to_string(n) + ") for a train/validation split with fraction " +
                         std::to_string(plan.train_fraction));
    }
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Generator gen(RngStream{derive_seed(plan.seed, {kSplitTag}), index});
    for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[gen.uniform_int(0, i)]);
    std::vector<std::size_t> train(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
    std::vector<std::size_t> val(perm.begin() + static_cast<std::ptrdiff_t>(n_train), perm.end());
    std::sort(train.begin(), train.end());
    std::sort(val.begin(), val.end());
    return {std::move(train), std::move(val)};
}

CvResult cv_select(const ReturnsMatrix& data, const PriorBuilder& prior_builder, const CvPlan& plan_in,
                   std::size_t n_cv, CvPath path, const CvOptions& options) {
    CvPlan plan = plan_in;
    plan.validate();
    if (plan.grid_gamma.empty()) plan.grid_gamma = default_gamma_grid(data, options.demean, plan.grid_points);
    if (path == CvPath::point) plan.grid_epsilon = {kDefaultEpsilon};
    if (path == CvPath::posterior && n_cv == 0) throw ParameterError("CV ensemble size must be >= 1");

    const std::size_t p = data.cols();
    const std::size_t n_grid = plan.grid_gamma.size() * plan.grid_epsilon.size();
    // loss[g * n_splits + s]
    std::vector<double> loss(n_grid * plan.n_splits, 0.0);

    for (std::size_t s = 0; s < plan.n_splits; ++s) {
        const auto [train_rows, val_rows] = cv_split_rows(data.rows(), plan, s);
        const ReturnsMatrix train = data.select_rows(train_rows);
        const ReturnsMatrix val = data.select_rows(val_rows);
        const CovMatrix val_moment = sample_covariance(val, false);

        std::vector<CovMatrix> raw;
        CovMatrix s_train = CovMatrix::identity(p);
        if (path == CvPath::posterior) {
            const IWParams posterior = posterior_params(prior_builder(train), train, options.demean);
            raw = draw_posterior(posterior, n_cv, derive_seed(plan.seed, {kDrawTag, s}), options.workers);
        } else {
            s_train = sample_covariance(train, options.demean);
        }

        parallel_for(n_grid, options.workers, [&](std::size_t g) {
            ThresholdConfig cfg;
            cfg.gamma = plan.grid_gamma[g / plan.grid_epsilon.size()];
            cfg.epsilon = plan.grid_epsilon[g % plan.grid_epsilon.size()];
            cfg.n = train.rows();
            cfg.p = p;
            cfg.preserve_diagonal = plan.preserve_diagonal;
            double value = 0.0;
            if (path == CvPath::posterior) {
                double sum = 0.0;
                for (const auto& d : raw) sum += draw_loss(post_process(d, cfg), val_moment, val, plan.objective);
                value = sum / static_cast<double>(raw.size());
            } else {
                const CovMatrix est = hard_threshold(s_train, cfg);
                if (plan.objective == CvObjective::cov_spectral) {
                    value = spectral_norm(est - val_moment);
                } else {
                    value = draw_loss(gmvp_ready(est, false), val_moment, val, plan.objective);
                }
            }
            loss[g * plan.n_splits + s] = value;
        });
    }

    CvResult result{};
    result.splits_used = plan.n_splits;
    std::size_t best = 0;
    for (std::size_t g = 0; g < n_grid; ++g) {
        const auto first = loss.begin() + static_cast<std::ptrdiff_t>(g * plan.n_splits);
        const double mean = std::accumulate(first, first + static_cast<std::ptrdiff_t>(plan.n_splits), 0.0) /
                            static_cast<double>(plan.n_splits);
        double se = 0.0;
        if (plan.n_splits > 1 && std::isfinite(mean)) {
            double ss = 0.0;
            for (auto it = first; it != first + static_cast<std::ptrdiff_t>(plan.n_splits); ++it) {
                ss += (*it - mean) * (*it - mean);
            }
            se = std::sqrt(ss / static_cast<double>(plan.n_splits - 1) / static_cast<double>(plan.n_splits));
        } else if (!std::isfinite(mean)) {
            se = kInf;
        }
        result.score_table.push_back(
            {plan.grid_gamma[g / plan.grid_epsilon.size()], plan.grid_epsilon[g % plan.grid_epsilon.size()], mean, se});
        if (mean < result.score_table[best].mean_loss) best = g;
    }
    result.best.gamma = result.score_table[best].gamma;
    result.best.epsilon = result.score_table[best].epsilon;
    result.best.n = data.rows();
    result.best.p = p;
    result.best.preserve_diagonal = plan.preserve_diagonal;
    return result;
}

void write_cv_result_csv(const std::filesystem::path& path, const CvResult& result) {
    csv::Writer w(path);
    w.row({"gamma", "epsilon", "mean_loss", "se_loss"});
    for (const auto& s : result.score_table) {
        w.row({csv::format_double(s.gamma), csv::format_double(s.epsilon), csv::format_double(s.mean_loss),
               csv::format_double(s.se_loss)});
    }
    w.close();
}

}  // namespace ppcov

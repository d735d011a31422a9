#pragma once

#include "ppcov/estimators.hpp"
#include "ppcov/matrix.hpp"
#include "ppcov/tuning.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ppcov {

/// 10x10 diagonal blocks of 0.1 (even block index) and 4 (odd), plus 0.1 I.
/// p must be a positive multiple of 10.
CovMatrix build_sigma1(std::size_t p);

/// 10x10 diagonal blocks whose value cycles 0.25, 0.5, 1, 2, 4 with the block
/// index (mod 5), plus 0.1 I. p must be a positive multiple of 100.
CovMatrix build_sigma2(std::size_t p);

struct SparsityClassParams {
    double q = 0.0;
    double c_np = 1.0;
    double M0 = 1.0;
    double M1 = 0.0;
};

struct MembershipReport {
    bool member = true;
    /// Empty for members, otherwise the first violated condition.
    std::string violation;
};

/// Checks (i) each column's off-diagonal vector lies in the weak-lq ball of
/// radius c_np (for q = 0: at most c_np nonzeros), (ii) diagonal <= M0,
/// (iii) lambda_min > M1, in that order.
MembershipReport check_gq_membership(const CovMatrix& m, const SparsityClassParams& params);

enum class TruthId { sigma1, sigma2, custom };
std::string_view truth_name(TruthId t);
TruthId parse_truth(std::string_view token);

struct ExperimentPlan {
    TruthId truth_id = TruthId::sigma1;
    std::optional<CovMatrix> custom_truth;
    std::vector<std::size_t> n_list{50, 500};
    std::size_t p = 20;
    std::size_t replications = 10;
    std::size_t n_draws = 500;
    std::vector<Method> methods{Method::ppp, Method::iw, Method::thres, Method::sample_cov};
    std::uint64_t seed = 1;
    double level = 0.95;
    /// Ensemble size inside CV.
    std::size_t n_cv = 200;
    unsigned workers = 1;

    void validate() const;
    CovMatrix truth() const;
};

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

/// Metrics for one (method, n, replication). NaN marks "not applicable"
/// (coverage of a frequentist method) or "infeasible" (GMVP of a singular
/// sample covariance).
struct ReplicationResult {
    Method method;
    std::size_t n;
    std::size_t replication;
    double cov_error = kMissing;
    double gmvp_error = kMissing;
    double coverage = kMissing;
    double gamma_cov = kMissing;
    double gamma_gmvp = kMissing;
};

/// Per-asset GMVP posterior summary for the first replication at each n.
struct PlotRow {
    Method method;
    std::size_t n;
    std::size_t asset;
    double mean;
    double lower;
    double upper;
    double truth;
};

struct ResultSet {
    TruthId truth = TruthId::sigma1;
    std::size_t p = 0;
    std::vector<std::size_t> n_list;
    std::vector<Method> methods;
    /// Ordered by (n, replication, method) as listed in the plan.
    std::vector<ReplicationResult> rows;
    std::vector<PlotRow> plot;
};

/// The N_p(0, truth) dataset used by replication `replication` at sample size n.
ReturnsMatrix experiment_data(const ExperimentPlan& plan, const CovMatrix& truth, std::size_t n,
                              std::size_t replication);

/// Replicated simulation. Replication r at sample size n draws its data,
/// posterior samples and CV splits from substreams of plan.seed keyed by
/// (n, r), so results do not depend on plan.workers.
ResultSet run_experiment(const ExperimentPlan& plan, const CvPlan& cv);

/// Mean of a metric over replications; NaN when any replication lacks it.
double cell_mean(const ResultSet& r, Method m, std::size_t n, double ReplicationResult::*metric);

/// Writes table1_cov_error.csv, table2_gmvp_error.csv, table3_coverage.csv
/// and gmvp_intervals.csv into `dir`.
void emit_tables(const ResultSet& results, const std::filesystem::path& dir);

/// Per-replication rows (results.csv) and their reader, used by `tables`.
void write_results_csv(const std::filesystem::path& path, const ResultSet& results);
ResultSet read_results_csv(const std::filesystem::path& path);

}  // namespace ppcov

#include "ppcov/simbench.hpp"

#include "ppcov/csv.hpp"
#include "ppcov/errors.hpp"
#include "ppcov/gmvp.hpp"
#include "ppcov/parallel.hpp"
#include "ppcov/ppp.hpp"
#include "ppcov/sampling.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace ppcov {

namespace {

constexpr std::uint64_t kDataTag = 0x4441'5441ull;
constexpr std::uint64_t kPosteriorTag = 0x504F'5354ull;
constexpr std::uint64_t kCvCovTag = 0x4356'4356ull;
constexpr std::uint64_t kCvGmvpTag = 0x4356'474Dull;

// Block k covers 0-based rows/cols 10k..10k+9 (the 1-based 10k+1..10k+10).
CovMatrix block_truth(std::size_t p, double (*block_value)(std::size_t)) {
    const auto n = static_cast<Eigen::Index>(p);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i / 10 == j / 10) m(i, j) = block_value(static_cast<std::size_t>(i / 10));
        }
    }
    m.diagonal().array() += 0.1;
    return CovMatrix(m);
}

}  // namespace

CovMatrix build_sigma1(std::size_t p) {
    if (p == 0 || p % 10 != 0) throw InputError("Sigma1 needs p a positive multiple of 10, got " + std::to_string(p));
    return block_truth(p, [](std::size_t k) { return k % 2 == 0 ? 0.1 : 4.0; });
}

CovMatrix build_sigma2(std::size_t p) {
    if (p == 0 || p % 100 != 0) throw InputError("Sigma2 needs p a positive multiple of 100, got " + std::to_string(p));
    return block_truth(p, [](std::size_t k) {
        constexpr double values[] = {0.25, 0.5, 1.0, 2.0, 4.0};
        return values[k % 5];
    });
}

MembershipReport check_gq_membership(const CovMatrix& m, const SparsityClassParams& params) {
    if (!(params.q >= 0.0 && params.q < 1.0)) throw ParameterError("G_q membership needs 0 <= q < 1");
    const std::size_t p = m.dim();
    std::vector<double> mags;
    mags.reserve(p);
    for (std::size_t j = 0; j < p; ++j) {
        mags.clear();
        for (std::size_t i = 0; i < p; ++i) {
            if (i != j) mags.push_back(std::abs(m(i, j)));
        }
        std::sort(mags.begin(), mags.end(), std::greater<>());
        if (params.q == 0.0) {
            const auto nonzero = static_cast<double>(std::count_if(mags.begin(), mags.end(), [](double v) { return v != 0.0; }));
            if (nonzero > params.c_np) {
                return {false, "column " + std::to_string(j) + " has " + std::to_string(static_cast<std::size_t>(nonzero)) +
                                   " nonzero off-diagonals, more than c_np = " + std::to_string(params.c_np)};
            }
        } else {
            for (std::size_t k = 0; k < mags.size(); ++k) {
                const double rank = static_cast<double>(k + 1);
                if (std::pow(mags[k], params.q) > params.c_np / rank) {
                    return {false, "column " + std::to_string(j) + ": |xi|_(" + std::to_string(k + 1) +
                                       ")^q exceeds c_np / " + std::to_string(k + 1)};
                }
            }
        }
    }
    for (std::size_t i = 0; i < p; ++i) {
        if (m(i, i) > params.M0) {
            return {false, "diagonal entry " + std::to_string(i) + " = " + std::to_string(m(i, i)) + " exceeds M0"};
        }
    }
    const double lambda_min = sym_eigen_extremes(m).min_eig;
    if (!(lambda_min > params.M1)) {
        return {false, "minimum eigenvalue " + std::to_string(lambda_min) + " is not above M1"};
    }
    return {};
}

std::string_view truth_name(TruthId t) {
    switch (t) {
        case TruthId::sigma1: return "sigma1";
        case TruthId::sigma2: return "sigma2";
        case TruthId::custom: return "custom";
    }
    return "?";
}

TruthId parse_truth(std::string_view token) {
    if (token == "sigma1") return TruthId::sigma1;
    if (token == "sigma2") return TruthId::sigma2;
    if (token == "custom") return TruthId::custom;
    throw InputError("unknown truth '" + std::string(token) + "' (expected sigma1, sigma2, custom)");
}

void ExperimentPlan::validate() const {
    if (replications == 0) throw ParameterError("replications must be >= 1");
    if (n_list.empty()) throw ParameterError("n_list must be non-empty");
    for (std::size_t n : n_list) {
        if (n < 2) throw ParameterError("every sample size must be >= 2");
    }
    if (n_draws < 2) throw ParameterError("n_draws must be >= 2 for credible intervals");
    if (!(level > 0.0 && level < 1.0)) throw ParameterError("credible level must lie in (0, 1)");
    if (truth_id == TruthId::custom && !custom_truth) throw ParameterError("custom truth requested but none supplied");
}

CovMatrix ExperimentPlan::truth() const {
    switch (truth_id) {
        case TruthId::sigma1: return build_sigma1(p);
        case TruthId::sigma2: return build_sigma2(p);
        case TruthId::custom: return *custom_truth;
    }
    throw ParameterError("unknown truth");
}

namespace {

struct Job {
    std::size_t n_index;
    std::size_t rep;
};

struct JobOutput {
    std::vector<ReplicationResult> rows;
    std::vector<PlotRow> plot;
};

IWParams default_prior_uncentered(const ReturnsMatrix& d) { return default_prior(d, false); }

void add_plot(JobOutput& out, Method m, std::size_t n, const IntervalSummary& s, const PortfolioWeights& truth) {
    for (std::size_t i = 0; i < s.assets.size(); ++i) {
        out.plot.push_back({m, n, i, s.assets[i].mean, s.assets[i].lower, s.assets[i].upper, truth[i]});
    }
}

JobOutput run_job(const ExperimentPlan& plan, const CvPlan& cv, const CovMatrix& truth,
                  const PortfolioWeights& true_w, const Job& job) {
    const std::size_t n = plan.n_list[job.n_index];
    JobOutput out;
    auto context = [&](Method m) {
        return std::string(method_name(m)) + ", n=" + std::to_string(n) + ", replication " + std::to_string(job.rep);
    };

    const ReturnsMatrix data = experiment_data(plan, truth, n, job.rep);
    const CovMatrix s = sample_covariance(data, false);

    CvPlan cv_cov = cv;
    cv_cov.objective = CvObjective::cov_spectral;
    cv_cov.seed = derive_seed(plan.seed, {kCvCovTag, cv.seed, n, job.rep});
    CvPlan cv_gmvp = cv;
    cv_gmvp.objective = CvObjective::gmvp_variance;
    cv_gmvp.seed = derive_seed(plan.seed, {kCvGmvpTag, cv.seed, n, job.rep});

    const bool bayesian = std::any_of(plan.methods.begin(), plan.methods.end(),
                                      [](Method m) { return m == Method::ppp || m == Method::iw; });
    std::vector<CovMatrix> raw;
    if (bayesian) {
        const IWParams posterior = posterior_params(default_prior(data, false), data, false);
        raw = draw_posterior(posterior, plan.n_draws, derive_seed(plan.seed, {kPosteriorTag, n, job.rep}));
    }

    auto bayes_metrics = [&](ReplicationResult& r, const std::vector<CovMatrix>& cov_draws,
                             const std::vector<CovMatrix>& gmvp_draws) {
        r.cov_error = relative_cov_error(truth, ensemble_mean(cov_draws));
        const auto ws = gmvp_ensemble(gmvp_draws);
        r.gmvp_error = relative_gmvp_error(true_w.values(), mean_weights(ws));
        const IntervalSummary summary = credible_intervals(ws, plan.level);
        r.coverage = coverage(summary, true_w);
        if (job.rep == 0) add_plot(out, r.method, n, summary, true_w);
    };

    for (Method m : plan.methods) {
        ReplicationResult r{m, n, job.rep};
        try {
            switch (m) {
                case Method::sample_cov: {
                    r.cov_error = relative_cov_error(truth, s);
                    if (exceeds_spectral_floor(s, 0.0)) {
                        r.gmvp_error = relative_gmvp_error(true_w.values(), gmvp_weights(s).values());
                    }
                    break;
                }
                case Method::thres: {
                    const CvResult for_cov = cv_select(data, default_prior_uncentered, cv_cov, plan.n_cv, CvPath::point);
                    const CvResult for_gmvp = cv_select(data, default_prior_uncentered, cv_gmvp, plan.n_cv, CvPath::point);
                    r.gamma_cov = for_cov.best.gamma;
                    r.gamma_gmvp = for_gmvp.best.gamma;
                    r.cov_error = relative_cov_error(truth, thresholded_sample_cov(data, for_cov.best).matrix);
                    const CovMatrix est = gmvp_ready(thresholded_sample_cov(data, for_gmvp.best).matrix);
                    r.gmvp_error = relative_gmvp_error(true_w.values(), gmvp_weights(est).values());
                    break;
                }
                case Method::iw: {
                    r.gamma_cov = 0.0;
                    r.gamma_gmvp = 0.0;
                    bayes_metrics(r, raw, raw);
                    break;
                }
                case Method::ppp: {
                    const CvResult for_cov = cv_select(data, default_prior_uncentered, cv_cov, plan.n_cv, CvPath::posterior);
                    const CvResult for_gmvp = cv_select(data, default_prior_uncentered, cv_gmvp, plan.n_cv, CvPath::posterior);
                    r.gamma_cov = for_cov.best.gamma;
                    r.gamma_gmvp = for_gmvp.best.gamma;
                    std::vector<CovMatrix> cov_draws, gmvp_draws;
                    cov_draws.reserve(raw.size());
                    gmvp_draws.reserve(raw.size());
                    for (const auto& d : raw) {
                        cov_draws.push_back(post_process(d, for_cov.best));
                        gmvp_draws.push_back(post_process(d, for_gmvp.best));
                    }
                    bayes_metrics(r, cov_draws, gmvp_draws);
                    break;
                }
            }
        } catch (const std::exception& e) {
            throw std::runtime_error(context(m) + ": " + e.what());
        }
        out.rows.push_back(r);
    }
    return out;
}

}  // namespace

ReturnsMatrix experiment_data(const ExperimentPlan& plan, const CovMatrix& truth, std::size_t n,
                              std::size_t replication) {
    return sample_mvn(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(truth.dim())), truth, n,
                      RngStream{derive_seed(plan.seed, {kDataTag, n, replication}), 0});
}

ResultSet run_experiment(const ExperimentPlan& plan, const CvPlan& cv) {
    plan.validate();
    cv.validate();
    const CovMatrix truth = plan.truth();
    const PortfolioWeights true_w = gmvp_weights(truth);

    std::vector<Job> jobs;
    for (std::size_t k = 0; k < plan.n_list.size(); ++k) {
        for (std::size_t r = 0; r < plan.replications; ++r) jobs.push_back({k, r});
    }
    std::vector<JobOutput> outputs(jobs.size());
    parallel_for(jobs.size(), plan.workers,
                 [&](std::size_t j) { outputs[j] = run_job(plan, cv, truth, true_w, jobs[j]); });

    ResultSet result;
    result.truth = plan.truth_id;
    result.p = truth.dim();
    result.n_list = plan.n_list;
    result.methods = plan.methods;
    for (auto& o : outputs) {
        result.rows.insert(result.rows.end(), o.rows.begin(), o.rows.end());
        result.plot.insert(result.plot.end(), o.plot.begin(), o.plot.end());
    }
    return result;
}

double cell_mean(const ResultSet& r, Method m, std::size_t n, double ReplicationResult::*metric) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& row : r.rows) {
        if (row.method != m || row.n != n) continue;
        const double v = row.*metric;
        if (std::isnan(v)) return kMissing;
        sum += v;
        ++count;
    }
    return count == 0 ? kMissing : sum / static_cast<double>(count);
}

namespace {

std::string cell(double v) { return std::isnan(v) ? std::string() : csv::format_double(v); }

struct TableRow {
    const char* label;
    std::optional<Method> method;  // nullopt: comparator not implemented here
};

void write_table(const std::filesystem::path& path, const ResultSet& r, const std::vector<TableRow>& layout,
                 double ReplicationResult::*metric) {
    csv::Writer w(path);
    std::vector<std::string> header{"method"};
    for (std::size_t n : r.n_list) header.push_back("n=" + std::to_string(n));
    header.push_back("note");
    w.row(header);
    if (!r.methods.empty()) {
        for (const auto& row : layout) {
            std::vector<std::string> fields{row.label};
            if (!row.method) {
                fields.resize(1 + r.n_list.size());
                fields.push_back("not implemented: comparator outside this library");
                w.row(fields);
                continue;
            }
            if (std::find(r.methods.begin(), r.methods.end(), *row.method) == r.methods.end()) continue;
            for (std::size_t n : r.n_list) fields.push_back(cell(cell_mean(r, *row.method, n, metric)));
            fields.emplace_back();
            w.row(fields);
        }
    }
    w.close();
}

}  // namespace

void emit_tables(const ResultSet& r, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_table(dir / "table1_cov_error.csv", r,
                {{"PPP", Method::ppp}, {"CGM", std::nullopt}, {"IW", Method::iw}, {"Thres", Method::thres},
                 {"SampleCov", Method::sample_cov}},
                &ReplicationResult::cov_error);
    write_table(dir / "table2_gmvp_error.csv", r,
                {{"PPP", Method::ppp}, {"CGM", std::nullopt}, {"IW", Method::iw}, {"Thres", Method::thres},
                 {"Bona fide", std::nullopt}, {"SampleCov", Method::sample_cov}},
                &ReplicationResult::gmvp_error);
    write_table(dir / "table3_coverage.csv", r, {{"PPP", Method::ppp}, {"CGM", std::nullopt}, {"IW", Method::iw}},
                &ReplicationResult::coverage);

    csv::Writer w(dir / "gmvp_intervals.csv");
    w.row({"method", "n", "asset", "mean", "lower", "upper", "truth"});
    for (const auto& row : r.plot) {
        w.row({std::string(method_name(row.method)), std::to_string(row.n), std::to_string(row.asset),
               csv::format_double(row.mean), csv::format_double(row.lower), csv::format_double(row.upper),
               csv::format_double(row.truth)});
    }
    w.close();
}

void write_results_csv(const std::filesystem::path& path, const ResultSet& r) {
    csv::Writer w(path);
    w.row({"truth", "p", "method", "n", "replication", "cov_error", "gmvp_error", "coverage", "gamma_cov",
           "gamma_gmvp"});
    for (const auto& row : r.rows) {
        w.row({std::string(truth_name(r.truth)), std::to_string(r.p), std::string(method_name(row.method)),
               std::to_string(row.n), std::to_string(row.replication), cell(row.cov_error), cell(row.gmvp_error),
               cell(row.coverage), cell(row.gamma_cov), cell(row.gamma_gmvp)});
    }
    w.close();
}

ResultSet read_results_csv(const std::filesystem::path& path) {
    const auto rows = csv::read_file(path);
    const std::vector<std::string> header{"truth", "p", "method", "n", "replication", "cov_error", "gmvp_error",
                                          "coverage", "gamma_cov", "gamma_gmvp"};
    if (rows.empty() || rows.front() != header) throw InputError("'" + path.string() + "' is not a results.csv file");
    ResultSet r;
    auto number = [&](const std::string& f, std::size_t line) {
        if (f.empty()) return kMissing;
        double v = 0.0;
        if (!csv::try_parse_double(f, v)) {
            throw InputError("results.csv line " + std::to_string(line) + ": bad number '" + f + "'");
        }
        return v;
    };
    auto count = [&](const std::string& f, std::size_t line) {
        const double v = number(f, line);
        if (std::isnan(v) || v < 0 || v != std::floor(v)) {
            throw InputError("results.csv line " + std::to_string(line) + ": bad count '" + f + "'");
        }
        return static_cast<std::size_t>(v);
    };
    for (std::size_t k = 1; k < rows.size(); ++k) {
        const auto& f = rows[k];
        if (f.size() != header.size()) throw InputError("results.csv line " + std::to_string(k + 1) + ": wrong field count");
        r.truth = parse_truth(f[0]);
        r.p = count(f[1], k + 1);
        ReplicationResult row{parse_method(f[2]), count(f[3], k + 1), count(f[4], k + 1)};
        row.cov_error = number(f[5], k + 1);
        row.gmvp_error = number(f[6], k + 1);
        row.coverage = number(f[7], k + 1);
        row.gamma_cov = number(f[8], k + 1);
        row.gamma_gmvp = number(f[9], k + 1);
        if (std::find(r.n_list.begin(), r.n_list.end(), row.n) == r.n_list.end()) r.n_list.push_back(row.n);
        if (std::find(r.methods.begin(), r.methods.end(), row.method) == r.methods.end()) r.methods.push_back(row.method);
        r.rows.push_back(row);
    }
    return r;
}

}  // namespace ppcov

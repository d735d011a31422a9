#include "ppcov/ingest.hpp"

#include "ppcov/csv.hpp"
#include "ppcov/errors.hpp"
#include "ppcov/gmvp.hpp"
#include "ppcov/parallel.hpp"
#include "ppcov/ppp.hpp"
#include "ppcov/sampling.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

namespace ppcov {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::uint64_t kWindowTag = 0x57494E44ull;
constexpr std::uint64_t kDrawTag = 0x44524157ull;
constexpr std::uint64_t kCvTag = 0x43560000ull;

bool is_missing_token(std::string field) {
    field.erase(std::remove_if(field.begin(), field.end(), [](unsigned char c) { return std::isspace(c); }),
                field.end());
    std::transform(field.begin(), field.end(), field.begin(), [](unsigned char c) { return std::tolower(c); });
    return field.empty() || field == "na" || field == "nan" || field == "null" || field == "n/a";
}

}  // namespace

InputFormat parse_input_format(std::string_view token) {
    if (token == "returns-csv") return InputFormat::returns_csv;
    if (token == "prices-csv") return InputFormat::prices_csv;
    throw InputError("unknown input format '" + std::string(token) + "' (expected returns-csv or prices-csv)");
}

ReturnsMatrix load_returns(const std::filesystem::path& path, InputFormat format, ReturnKind kind) {
    const auto rows = csv::read_file(path);
    if (rows.size() < 2) throw InputError("'" + path.string() + "' needs a header row and at least one data row");
    const auto& header = rows.front();
    if (header.size() < 2) throw InputError("'" + path.string() + "' header lists no assets");
    const std::size_t raw_assets = header.size() - 1;
    const std::size_t raw_rows = rows.size() - 1;

    Eigen::MatrixXd raw(static_cast<Eigen::Index>(raw_rows), static_cast<Eigen::Index>(raw_assets));
    std::vector<bool> keep(raw_assets, true);
    std::vector<std::string> periods;
    periods.reserve(raw_rows);
    for (std::size_t r = 0; r < raw_rows; ++r) {
        const auto& f = rows[r + 1];
        const std::size_t line = r + 2;
        if (f.size() != header.size()) {
            throw InputError("'" + path.string() + "' line " + std::to_string(line) + ": expected " +
                             std::to_string(header.size()) + " fields, found " + std::to_string(f.size()));
        }
        periods.push_back(f[0]);
        for (std::size_t c = 0; c < raw_assets; ++c) {
            double v = kNaN;
            if (is_missing_token(f[c + 1])) {
                keep[c] = false;
            } else if (!csv::try_parse_double(f[c + 1], v) || !std::isfinite(v)) {
                throw InputError("'" + path.string() + "' line " + std::to_string(line) + ", column " +
                                 std::to_string(c + 2) + " (" + header[c + 1] + "): cannot parse '" + f[c + 1] + "'");
            }
            raw(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
        }
    }

    std::vector<Eigen::Index> kept;
    std::vector<std::string> assets;
    for (std::size_t c = 0; c < raw_assets; ++c) {
        if (keep[c]) {
            kept.push_back(static_cast<Eigen::Index>(c));
            assets.push_back(header[c + 1]);
        }
    }
    if (kept.empty()) throw InputError("'" + path.string() + "': no asset without missing values");
    Eigen::MatrixXd values = raw(Eigen::all, kept);

    if (format == InputFormat::returns_csv) {
        if (kind == ReturnKind::log) throw InputError("log returns apply to prices-csv input only");
        return ReturnsMatrix(std::move(values), std::move(assets), std::move(periods));
    }

    if (values.rows() < 2) throw InputError("'" + path.string() + "': prices need at least two rows");
    if ((values.array() <= 0.0).any()) throw InputError("'" + path.string() + "': prices must be positive");
    const Eigen::Index n = values.rows() - 1;
    Eigen::MatrixXd ratio = values.bottomRows(n).array() / values.topRows(n).array();
    Eigen::MatrixXd ret = kind == ReturnKind::simple ? Eigen::MatrixXd(ratio.array() - 1.0)
                                                     : Eigen::MatrixXd(ratio.array().log());
    periods.erase(periods.begin());
    return ReturnsMatrix(std::move(ret), std::move(assets), std::move(periods));
}

void write_returns_csv(const std::filesystem::path& path, const ReturnsMatrix& data) {
    csv::Writer w(path);
    std::vector<std::string> header{"period"};
    header.insert(header.end(), data.asset_ids().begin(), data.asset_ids().end());
    w.row(header);
    std::vector<std::string> fields;
    for (std::size_t i = 0; i < data.rows(); ++i) {
        fields.assign(1, data.period_ids()[i]);
        for (std::size_t j = 0; j < data.cols(); ++j) {
            fields.push_back(csv::format_double(data.values()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))));
        }
        w.row(fields);
    }
    w.close();
}

void BacktestPlan::validate(std::size_t n) const {
    if (window_train < 2 || window_test < 2) throw ParameterError("train and test windows need at least 2 rows");
    if (iterations == 0) throw ParameterError("backtest needs at least one iteration");
    if (window_train + window_test > n) {
        throw InputError("backtest windows (" + std::to_string(window_train) + " + " + std::to_string(window_test) +
                         ") exceed the " + std::to_string(n) + " available rows");
    }
    if (n_draws < 1) throw ParameterError("backtest needs at least one posterior draw");
}

WindowSplit window_at(std::size_t n, const BacktestPlan& plan, std::size_t end_index) {
    plan.validate(n);
    if (end_index < plan.window_train || end_index > n - plan.window_test) {
        throw InputError("window end index " + std::to_string(end_index) + " outside " +
                         std::to_string(plan.window_train) + ".." + std::to_string(n - plan.window_test));
    }
    return {end_index, end_index - plan.window_train, plan.window_train, end_index, plan.window_test};
}

WindowSplit rolling_split(std::size_t n, const BacktestPlan& plan, std::size_t iteration) {
    plan.validate(n);
    Generator gen(RngStream{derive_seed(plan.seed, {kWindowTag}), iteration});
    return window_at(n, plan, gen.uniform_int(plan.window_train, n - plan.window_test));
}

namespace {

Eigen::VectorXd fit_weights(Method m, const ReturnsMatrix& train, const BacktestPlan& plan, const CvPlan& cv,
                            std::size_t iteration, const std::vector<CovMatrix>& raw) {
    const PriorBuilder prior = [&](const ReturnsMatrix& d) { return default_prior(d, plan.demean); };
    CvOptions opts{plan.demean, 1};
    CvPlan cv_local = cv;
    cv_local.seed = derive_seed(plan.seed, {kCvTag, cv.seed, iteration});
    switch (m) {
        case Method::sample_cov:
            return gmvp_weights(sample_covariance(train, plan.demean)).values();
        case Method::thres: {
            const CvResult best = cv_select(train, prior, cv_local, plan.n_cv, CvPath::point, opts);
            return gmvp_weights(gmvp_ready(thresholded_sample_cov(train, best.best, plan.demean).matrix)).values();
        }
        case Method::iw:
            return mean_weights(gmvp_ensemble(raw));
        case Method::ppp: {
            const CvResult best = cv_select(train, prior, cv_local, plan.n_cv, CvPath::posterior, opts);
            std::vector<CovMatrix> draws;
            draws.reserve(raw.size());
            for (const auto& d : raw) draws.push_back(post_process(d, best.best));
            return mean_weights(gmvp_ensemble(draws));
        }
    }
    throw ParameterError("unknown method");
}

}  // namespace

std::vector<BacktestRow> run_backtest(const ReturnsMatrix& data, const BacktestPlan& plan,
                                      const std::vector<Method>& methods, const CvPlan& cv) {
    plan.validate(data.rows());
    cv.validate();
    if (methods.empty()) return {};

    const bool bayesian = std::any_of(methods.begin(), methods.end(),
                                      [](Method m) { return m == Method::ppp || m == Method::iw; });
    // sd[it * methods.size() + k]; NaN marks a failed window.
    std::vector<double> sd(plan.iterations * methods.size(), kNaN);
    std::vector<std::string> failures(plan.iterations * methods.size());

    parallel_for(plan.iterations, plan.workers, [&](std::size_t it) {
        const WindowSplit w = rolling_split(data.rows(), plan, it);
        const ReturnsMatrix train = data.row_block(w.train_first, w.train_count);
        const ReturnsMatrix test = data.row_block(w.test_first, w.test_count);
        std::vector<CovMatrix> raw;
        if (bayesian) {
            const IWParams posterior = posterior_params(default_prior(train, plan.demean), train, plan.demean);
            raw = draw_posterior(posterior, plan.n_draws, derive_seed(plan.seed, {kDrawTag, it}));
        }
        for (std::size_t k = 0; k < methods.size(); ++k) {
            try {
                sd[it * methods.size() + k] = realized_portfolio_sd(fit_weights(methods[k], train, plan, cv, it, raw), test);
            } catch (const std::exception& e) {
                failures[it * methods.size() + k] = e.what();
            }
        }
    });

    std::vector<BacktestRow> rows;
    for (std::size_t k = 0; k < methods.size(); ++k) {
        BacktestRow row{methods[k], kNaN, 0, 0, {}};
        double sum = 0.0;
        for (std::size_t it = 0; it < plan.iterations; ++it) {
            const double v = sd[it * methods.size() + k];
            row.per_window.push_back(v);
            if (std::isnan(v)) {
                ++row.windows_failed;
                std::cerr << "warning: " << method_name(methods[k]) << " failed in window " << it << ": "
                          << failures[it * methods.size() + k] << '\n';
            } else {
                sum += v;
                ++row.windows_used;
            }
        }
        if (row.windows_used > 0) row.mean_realized_sd = sum / static_cast<double>(row.windows_used);
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_backtest_csv(const std::filesystem::path& path, const std::vector<BacktestRow>& rows) {
    csv::Writer w(path);
    w.row({"method", "mean_realized_sd", "n_windows_used", "status"});
    for (const auto& r : rows) {
        const char* status = r.windows_used == 0 ? "infeasible" : (r.windows_failed > 0 ? "partial" : "ok");
        w.row({std::string(method_name(r.method)),
               std::isnan(r.mean_realized_sd) ? std::string() : csv::format_double(r.mean_realized_sd),
               std::to_string(r.windows_used), status});
    }
    w.close();
}

CovMatrix synthetic_block_covariance(std::size_t p) {
    if (p == 0) throw InputError("synthetic covariance needs p >= 1");
    const auto n = static_cast<Eigen::Index>(p);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const Eigen::Index b = i / 10;
            if (b != j / 10) continue;
            const double vol = 0.04 + 0.02 * static_cast<double>(b % 5);
            const double rho = 0.3 + 0.1 * static_cast<double>(b % 4);
            m(i, j) = vol * vol * (i == j ? 1.0 : rho);
        }
    }
    return CovMatrix(m);
}

ReturnsMatrix synthetic_block_returns(std::size_t n, std::size_t p, std::uint64_t seed) {
    const CovMatrix cov = synthetic_block_covariance(p);
    const ReturnsMatrix draws =
        sample_mvn(Eigen::VectorXd::Constant(static_cast<Eigen::Index>(p), 0.008), cov, n, RngStream{seed, 0});
    std::vector<std::string> assets, periods;
    for (std::size_t j = 0; j < p; ++j) {
        std::ostringstream id;
        id << "S" << (j + 1);
        assets.push_back(id.str());
    }
    for (std::size_t i = 0; i < n; ++i) {
        std::ostringstream id;
        id << 2011 + (i + 4) / 12 << '-' << (((i + 4) % 12) + 1 < 10 ? "0" : "") << ((i + 4) % 12) + 1;
        periods.push_back(id.str());
    }
    return ReturnsMatrix(draws.values(), std::move(assets), std::move(periods));
}

}  // namespace ppcov

#pragma once

#include "ppcov/estimators.hpp"
#include "ppcov/returns.hpp"
#include "ppcov/tuning.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ppcov {

enum class InputFormat { returns_csv, prices_csv };
enum class ReturnKind { simple, log };

InputFormat parse_input_format(std::string_view token);

/// Header row: period label column, then asset ids. Each following row: a
/// period id, then one value per asset. Empty, NA, NaN and null cells are
/// missing; an asset with any missing cell is dropped. Prices become returns
/// r_t = p_t / p_{t-1} - 1 (or log(p_t / p_{t-1})), one row fewer.
ReturnsMatrix load_returns(const std::filesystem::path& path, InputFormat format,
                           ReturnKind kind = ReturnKind::simple);

/// Writes values with 17 significant digits under the same header contract.
void write_returns_csv(const std::filesystem::path& path, const ReturnsMatrix& data);

struct BacktestPlan {
    std::size_t window_train = 48;
    std::size_t window_test = 12;
    std::size_t iterations = 20;
    std::uint64_t seed = 1;
    bool demean = true;
    std::size_t n_draws = 2000;
    std::size_t n_cv = 200;
    unsigned workers = 1;

    void validate(std::size_t n) const;
};

/// 0-based half-open row ranges; the window end index i (1-based, as in
/// "train = rows i-47..i") is drawn uniformly from window_train..n-window_test.
struct WindowSplit {
    std::size_t end_index;  // i, 1-based
    std::size_t train_first;
    std::size_t train_count;
    std::size_t test_first;
    std::size_t test_count;
};

/// Split for a given 1-based window end index i.
WindowSplit window_at(std::size_t n, const BacktestPlan& plan, std::size_t end_index);

/// Split for `iteration`: i drawn with replacement from the admissible range
/// under (plan.seed, iteration).
WindowSplit rolling_split(std::size_t n, const BacktestPlan& plan, std::size_t iteration);

struct BacktestRow {
    Method method;
    double mean_realized_sd;  // NaN when no window succeeded
    std::size_t windows_used;
    std::size_t windows_failed;
    std::vector<double> per_window;  // NaN for failed windows, iteration order
};

/// Fits each method on every train window (CV-tuned for PPP and Thres), forms
/// GMVP weights (posterior mean of per-draw weights for the Bayesian methods)
/// and averages realized_portfolio_sd over the test windows. A method that
/// fails in a window is excluded for that window with a warning on stderr.
std::vector<BacktestRow> run_backtest(const ReturnsMatrix& data, const BacktestPlan& plan,
                                      const std::vector<Method>& methods, const CvPlan& cv);

/// Columns method,mean_realized_sd,n_windows_used,status.
void write_backtest_csv(const std::filesystem::path& path, const std::vector<BacktestRow>& rows);

/// Deterministic block-sparse monthly-returns fixture: blocks of 10 assets
/// (the last may be shorter) with within-block correlation, per-block
/// volatility and a small positive drift.
ReturnsMatrix synthetic_block_returns(std::size_t n, std::size_t p, std::uint64_t seed);

/// The truth behind synthetic_block_returns.
CovMatrix synthetic_block_covariance(std::size_t p);

}  // namespace ppcov

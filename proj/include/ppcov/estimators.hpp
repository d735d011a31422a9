#pragma once

#include "ppcov/matrix.hpp"
#include "ppcov/ppp.hpp"
#include "ppcov/returns.hpp"

#include <optional>
#include <string_view>

namespace ppcov {

enum class Method { ppp, iw, thres, sample_cov };

std::string_view method_name(Method m);
/// Accepts ppp, iw, thres, samplecov (case-insensitive). Throws InputError.
Method parse_method(std::string_view token);

/// Point estimate of Sigma tagged with the method that produced it. A Thres
/// estimate always carries its threshold config.
struct PointEstimate {
    CovMatrix matrix;
    Method method;
    std::optional<ThresholdConfig> config;
};

/// n^-1 sum x_i x_i^T; with `demean`, columns are centered first (divisor
/// stays n).
CovMatrix sample_covariance(const ReturnsMatrix& data, bool demean = false);

/// hard_threshold(sample_covariance(data)); no PD repair.
PointEstimate thresholded_sample_cov(const ReturnsMatrix& data, const ThresholdConfig& cfg, bool demean = false);

/// Matrix handed to the GMVP solver for a frequentist estimate: unchanged when
/// it is PD, otherwise pd_adjust with the default epsilon (logged to stderr
/// when `log` is set).
CovMatrix gmvp_ready(const CovMatrix& estimate, bool log = true);

}  // namespace ppcov

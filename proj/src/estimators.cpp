#include "ppcov/estimators.hpp"

#include "ppcov/errors.hpp"

#include <algorithm>
#include <cctype>
#include <iostream>
#include <string>

namespace ppcov {

std::string_view method_name(Method m) {
    switch (m) {
        case Method::ppp: return "PPP";
        case Method::iw: return "IW";
        case Method::thres: return "Thres";
        case Method::sample_cov: return "SampleCov";
    }
    return "?";
}

Method parse_method(std::string_view token) {
    std::string t(token);
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (t == "ppp") return Method::ppp;
    if (t == "iw") return Method::iw;
    if (t == "thres") return Method::thres;
    if (t == "samplecov" || t == "sample_cov" || t == "sample-cov") return Method::sample_cov;
    throw InputError("unknown method '" + std::string(token) + "' (expected ppp, iw, thres, samplecov)");
}

CovMatrix sample_covariance(const ReturnsMatrix& data, bool demean) {
    const double n = static_cast<double>(data.rows());
    if (demean) {
        const Eigen::MatrixXd centered = data.values().rowwise() - data.values().colwise().mean();
        Eigen::MatrixXd s = Eigen::MatrixXd::Zero(centered.cols(), centered.cols());
        s.selfadjointView<Eigen::Lower>().rankUpdate(centered.transpose(), 1.0 / n);
        return CovMatrix(s, CovMatrix::Triangle::lower);
    }
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(data.values().cols(), data.values().cols());
    s.selfadjointView<Eigen::Lower>().rankUpdate(data.values().transpose(), 1.0 / n);
    return CovMatrix(s, CovMatrix::Triangle::lower);
}

PointEstimate thresholded_sample_cov(const ReturnsMatrix& data, const ThresholdConfig& cfg, bool demean) {
    return {hard_threshold(sample_covariance(data, demean), cfg), Method::thres, cfg};
}

CovMatrix gmvp_ready(const CovMatrix& estimate, bool log) {
    if (exceeds_spectral_floor(estimate, 0.0)) return estimate;
    ThresholdConfig floor;
    floor.p = estimate.dim();
    if (log) std::cerr << "note: estimate is not positive definite, applying pd_adjust(eps=" << floor.epsilon << ")\n";
    return pd_adjust(estimate, floor);
}

}  // namespace ppcov

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <vector>

namespace ppcov {

/// n x p observation matrix: rows are time points, columns are assets.
/// Holds no missing values; labels are unique.
class ReturnsMatrix {
public:
    /// Labels default to "asset_<j>" / "<i>" when omitted.
    explicit ReturnsMatrix(Eigen::MatrixXd values, std::vector<std::string> asset_ids = {},
                           std::vector<std::string> period_ids = {});

    std::size_t rows() const noexcept { return static_cast<std::size_t>(values_.rows()); }
    std::size_t cols() const noexcept { return static_cast<std::size_t>(values_.cols()); }
    const Eigen::MatrixXd& values() const noexcept { return values_; }
    const std::vector<std::string>& asset_ids() const noexcept { return asset_ids_; }
    const std::vector<std::string>& period_ids() const noexcept { return period_ids_; }

    /// Rows [first, first + count), labels carried along.
    ReturnsMatrix row_block(std::size_t first, std::size_t count) const;
    /// Arbitrary row subset in the given order.
    ReturnsMatrix select_rows(const std::vector<std::size_t>& rows) const;

private:
    Eigen::MatrixXd values_;
    std::vector<std::string> asset_ids_;
    std::vector<std::string> period_ids_;
};

}  // namespace ppcov

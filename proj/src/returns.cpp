#include "ppcov/returns.hpp"

#include "ppcov/errors.hpp"

#include <unordered_set>

namespace ppcov {

namespace {

void require_unique(const std::vector<std::string>& labels, const char* what) {
    std::unordered_set<std::string> seen;
    for (const auto& l : labels) {
        if (!seen.insert(l).second) throw InputError(std::string("duplicate ") + what + " label '" + l + "'");
    }
}

}  // namespace

ReturnsMatrix::ReturnsMatrix(Eigen::MatrixXd values, std::vector<std::string> asset_ids,
                             std::vector<std::string> period_ids)
    : values_(std::move(values)), asset_ids_(std::move(asset_ids)), period_ids_(std::move(period_ids)) {
    if (values_.rows() < 1 || values_.cols() < 1) {
        throw InputError("returns matrix needs at least one row and one column");
    }
    if (!values_.allFinite()) throw InputError("returns matrix contains missing or non-finite values");
    if (asset_ids_.empty()) {
        for (Eigen::Index j = 0; j < values_.cols(); ++j) asset_ids_.push_back("asset_" + std::to_string(j + 1));
    }
    if (period_ids_.empty()) {
        for (Eigen::Index i = 0; i < values_.rows(); ++i) period_ids_.push_back(std::to_string(i + 1));
    }
    if (asset_ids_.size() != cols()) throw InputError("asset label count does not match column count");
    if (period_ids_.size() != rows()) throw InputError("period label count does not match row count");
    require_unique(asset_ids_, "asset");
    require_unique(period_ids_, "period");
}

ReturnsMatrix ReturnsMatrix::row_block(std::size_t first, std::size_t count) const {
    if (count == 0 || first + count > rows()) throw InputError("row block out of range");
    std::vector<std::string> periods(period_ids_.begin() + static_cast<std::ptrdiff_t>(first),
                                     period_ids_.begin() + static_cast<std::ptrdiff_t>(first + count));
    return ReturnsMatrix(values_.middleRows(static_cast<Eigen::Index>(first), static_cast<Eigen::Index>(count)),
                         asset_ids_, std::move(periods));
}

ReturnsMatrix ReturnsMatrix::select_rows(const std::vector<std::size_t>& rows) const {
    if (rows.empty()) throw InputError("row selection is empty");
    Eigen::MatrixXd v(static_cast<Eigen::Index>(rows.size()), values_.cols());
    std::vector<std::string> periods;
    periods.reserve(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        if (rows[k] >= this->rows()) throw InputError("row index out of range");
        v.row(static_cast<Eigen::Index>(k)) = values_.row(static_cast<Eigen::Index>(rows[k]));
        periods.push_back(period_ids_[rows[k]]);
    }
    return ReturnsMatrix(std::move(v), asset_ids_, std::move(periods));
}

}  // namespace ppcov

#pragma once

#include <Eigen/Dense>

namespace bgm {

/// Covariate matrix with every column centred to mean zero and scaled to unit
/// population standard deviation. The original location and scale of each
/// column are kept so coefficients can be mapped back to raw units.
class StandardizedDesign {
public:
    const Eigen::MatrixXd& values() const noexcept { return values_; }
    const Eigen::VectorXd& column_means() const noexcept { return means_; }
    const Eigen::VectorXd& column_scales() const noexcept { return scales_; }

    Eigen::Index rows() const noexcept { return values_.rows(); }
    Eigen::Index cols() const noexcept { return values_.cols(); }

    /// Coefficients on the standardized scale mapped to raw covariate units.
    Eigen::VectorXd to_original_scale(const Eigen::VectorXd& coefficients) const;

    friend StandardizedDesign standardize_columns(const Eigen::MatrixXd& raw);

private:
    StandardizedDesign() = default;

    Eigen::MatrixXd values_;
    Eigen::VectorXd means_;
    Eigen::VectorXd scales_;
};

/// Centres each column and divides by sqrt(sum((x - mean)^2) / n).
/// Throws ConstantColumn for zero-variance columns and DimensionMismatch for
/// empty input or fewer than two rows.
StandardizedDesign standardize_columns(const Eigen::MatrixXd& raw);

} // namespace bgm

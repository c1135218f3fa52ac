#include "bgm/design.hpp"

#include "bgm/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bgm {

Eigen::VectorXd StandardizedDesign::to_original_scale(const Eigen::VectorXd& coefficients) const
{
    if (coefficients.size() != scales_.size()) {
        throw Error(ErrorKind::DimensionMismatch, "glm_solvers",
                    "coefficient vector length does not match design width");
    }
    return coefficients.cwiseQuotient(scales_);
}

StandardizedDesign standardize_columns(const Eigen::MatrixXd& raw)
{
    if (raw.rows() < 2 || raw.cols() < 1) {
        throw Error(ErrorKind::DimensionMismatch, "glm_solvers",
                    "design must have at least 2 rows and 1 column");
    }
    const auto n = static_cast<double>(raw.rows());

    StandardizedDesign out;
    out.means_ = raw.colwise().mean().transpose();
    out.scales_.resize(raw.cols());
    out.values_.resize(raw.rows(), raw.cols());

    for (Eigen::Index j = 0; j < raw.cols(); ++j) {
        Eigen::VectorXd centred = raw.col(j).array() - out.means_[j];
        const double sd = std::sqrt(centred.squaredNorm() / n);
        const double magnitude = raw.col(j).cwiseAbs().maxCoeff();
        if (!(sd > 1e-12 * std::max(1.0, magnitude))) {
            throw Error(ErrorKind::ConstantColumn, "glm_solvers",
                        "column " + std::to_string(j + 1) + " has zero variance");
        }
        out.scales_[j] = sd;
        out.values_.col(j) = centred / sd;
    }
    return out;
}

} // namespace bgm

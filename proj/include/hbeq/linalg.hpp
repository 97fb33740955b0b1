#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>

#include "hbeq/errors.hpp"

namespace hbeq {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrixd = Matrix<double>;
using Vectord = Vector<double>;

inline constexpr double max_condition_number = 1e12;

template <typename Derived>
typename Derived::Scalar condition_number(const Eigen::MatrixBase<Derived>& m) {
    using Scalar = typename Derived::Scalar;
    Eigen::JacobiSVD<Matrix<Scalar>> svd(m);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return Scalar(1);
    const Scalar smin = sv(sv.size() - 1);
    if (!(smin > Scalar(0))) return std::numeric_limits<Scalar>::infinity();
    return sv(0) / smin;
}

/// Inverse with a conditioning guard; `which` names the matrix in the error.
template <typename Derived>
Matrix<typename Derived::Scalar> checked_inverse(const Eigen::MatrixBase<Derived>& m, std::string_view which) {
    using Scalar = typename Derived::Scalar;
    using std::isfinite;
    const Scalar cond = condition_number(m);
    if (!isfinite(cond) || cond > Scalar(max_condition_number))
        throw SingularMatrix(std::string(which), static_cast<double>(cond));
    return Matrix<Scalar>(m).partialPivLu().inverse();
}

template <typename Derived>
Matrix<typename Derived::Scalar> symmetrize(const Eigen::MatrixBase<Derived>& m) {
    return (m + m.transpose()) / typename Derived::Scalar(2);
}

template <typename Derived>
typename Derived::Scalar asymmetry(const Eigen::MatrixBase<Derived>& m) {
    if (m.size() == 0) return typename Derived::Scalar(0);
    return (m - m.transpose()).cwiseAbs().maxCoeff();
}

template <typename Derived>
Vector<typename Derived::Scalar> symmetric_eigenvalues(const Eigen::MatrixBase<Derived>& m) {
    Eigen::SelfAdjointEigenSolver<Matrix<typename Derived::Scalar>> es(symmetrize(m), Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

enum class Definiteness {
    positive_definite,
    positive_semi,
    semi,  // every eigenvalue within tolerance of zero: both PSD and NSD
    indefinite,
    negative_semi,
    negative_definite,
};

inline std::string_view to_string(Definiteness d) {
    switch (d) {
        case Definiteness::positive_definite: return "positive-definite";
        case Definiteness::positive_semi: return "positive-semi";
        case Definiteness::semi: return "semi";
        case Definiteness::indefinite: return "indefinite";
        case Definiteness::negative_semi: return "negative-semi";
        case Definiteness::negative_definite: return "negative-definite";
    }
    return "unknown";
}

inline bool is_positive_semi(Definiteness d) {
    return d == Definiteness::positive_definite || d == Definiteness::positive_semi || d == Definiteness::semi;
}

inline bool is_negative_semi(Definiteness d) {
    return d == Definiteness::negative_definite || d == Definiteness::negative_semi || d == Definiteness::semi;
}

/// Eigenvalue-sign classification of a symmetric matrix; eigenvalues within
/// `tol` of zero count as zero. Throws NotSymmetric if max |m - m'| > tol.
template <typename Derived>
Definiteness definiteness(const Eigen::MatrixBase<Derived>& m, typename Derived::Scalar tol) {
    using Scalar = typename Derived::Scalar;
    const Scalar asym = asymmetry(m);
    if (asym > tol) throw NotSymmetric(static_cast<double>(asym));
    const auto ev = symmetric_eigenvalues(m);
    const auto pos = (ev.array() > tol).count();
    const auto neg = (ev.array() < -tol).count();
    const auto n = ev.size();
    if (pos > 0 && neg > 0) return Definiteness::indefinite;
    if (pos == n) return Definiteness::positive_definite;
    if (neg == n) return Definiteness::negative_definite;
    if (pos > 0) return Definiteness::positive_semi;
    if (neg > 0) return Definiteness::negative_semi;
    return Definiteness::semi;
}

}  // namespace hbeq

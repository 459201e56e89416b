#pragma once

#include "matsim/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace matsim {

// Fraction of coordinates differing by more than `tolerance`.
struct Hamming {
    double tolerance = 0.0;
};
// (sum |u_i - v_i|^p)^(1/p), p >= 1.
struct PNorm {
    double p = 2.0;
};
// 1 - u.v / (|u| |v|)
struct Cosine {};
// sum |u_i - v_i| / sum |u_i + v_i|
struct BrayCurtis {};

using Measure = std::variant<Hamming, PNorm, Cosine, BrayCurtis>;

// "hamming", "l1", "l2", "l3", "cosine", "braycurtis" (and "l<p>" generally).
std::string measure_name(const Measure& m);
Measure parse_measure(std::string_view name);

namespace detail {

template <class A, class B>
void check_same_size(const Eigen::MatrixBase<A>& u, const Eigen::MatrixBase<B>& v)
{
    if (u.size() != v.size())
        throw DimensionMismatchError("distance: dimension mismatch (" + std::to_string(u.size()) + " vs " +
                                     std::to_string(v.size()) + ")");
    if (u.size() == 0) throw DimensionMismatchError("distance: empty vectors");
}

} // namespace detail

template <class A, class B>
double distance(const Hamming& m, const Eigen::MatrixBase<A>& u, const Eigen::MatrixBase<B>& v)
{
    detail::check_same_size(u, v);
    const auto differing = ((u.derived().array() - v.derived().array()).abs() > m.tolerance).count();
    return static_cast<double>(differing) / static_cast<double>(u.size());
}

template <class A, class B>
double distance(const PNorm& m, const Eigen::MatrixBase<A>& u, const Eigen::MatrixBase<B>& v)
{
    detail::check_same_size(u, v);
    if (!(m.p >= 1.0)) throw DomainError("p-norm requires p >= 1");
    const auto diff = (u.derived().array() - v.derived().array()).abs();
    if (m.p == 1.0) return diff.sum();
    if (m.p == 2.0) return std::sqrt(diff.square().sum());
    return std::pow(diff.pow(m.p).sum(), 1.0 / m.p);
}

template <class A, class B>
double distance(const Cosine&, const Eigen::MatrixBase<A>& u, const Eigen::MatrixBase<B>& v)
{
    detail::check_same_size(u, v);
    const double nu = u.norm();
    const double nv = v.norm();
    if (nu == 0.0 || nv == 0.0) throw DomainError("cosine distance undefined for a zero vector");
    if ((u.derived().array() == v.derived().array()).all()) return 0.0;
    const double d = 1.0 - u.dot(v) / (nu * nv);
    return std::clamp(d, 0.0, 2.0);
}

template <class A, class B>
double distance(const BrayCurtis&, const Eigen::MatrixBase<A>& u, const Eigen::MatrixBase<B>& v)
{
    detail::check_same_size(u, v);
    const double numer = (u.derived().array() - v.derived().array()).abs().sum();
    const double denom = (u.derived().array() + v.derived().array()).abs().sum();
    if (denom == 0.0) {
        if (numer == 0.0) return 0.0;
        throw DomainError("Bray-Curtis dissimilarity has zero denominator");
    }
    return numer / denom;
}

template <class A, class B>
double distance(const Measure& m, const Eigen::MatrixBase<A>& u, const Eigen::MatrixBase<B>& v)
{
    return std::visit([&](const auto& concrete) { return distance(concrete, u, v); }, m);
}

// Pairwise dissimilarities of the rows of a feature matrix.
struct AffinityMatrix {
    Eigen::MatrixXd values;
    Measure measure;
};

// Rows of X are samples. Throws the distance error annotated with the
// offending pair of row indices.
AffinityMatrix affinity_matrix(const Eigen::MatrixXd& X, const Measure& m);

// Strict upper triangle, row by row.
Eigen::VectorXd upper_triangle(const Eigen::MatrixXd& A);

// Pearson correlation; throws DomainError when either input has zero variance.
double pearson(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

// Pearson correlation between the strict upper triangles of the affinity
// matrix under `m` and under exact-match Hamming.
double distinctiveness_correlation(const Eigen::MatrixXd& X, const Measure& m);
double distinctiveness_correlation(const AffinityMatrix& measured, const AffinityMatrix& hamming);

// Mean over points q of #{p != q : d(p, q) <= (1 + eps) DMIN(q)}.
double avg_neighbor_count(const Eigen::MatrixXd& X, const Measure& m, double eps);
double avg_neighbor_count(const AffinityMatrix& A, double eps);

// Mean over columns of the population variance of each column.
double data_variance(const Eigen::MatrixXd& X);

} // namespace matsim

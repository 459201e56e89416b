#pragma once

#include "matsim/similarity.hpp"

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace matsim {

// ---------------------------------------------------------------- kernels
//
// Every kernel except Linear has the form exp(-gamma * D(x, x')):
//   Rbf               D = squared Euclidean distance
//   Laplacian         D = Manhattan distance
//   PNorm3Kernel      D = 3-norm distance
//   CosineKernel      D = cosine distance
//   BrayCurtisKernel  D = Bray-Curtis dissimilarity
// Only Rbf and Laplacian are guaranteed positive semidefinite.

struct Rbf {
    double gamma = 1.0;
};
struct Laplacian {
    double gamma = 1.0;
};
struct PNorm3Kernel {
    double gamma = 1.0;
};
struct CosineKernel {
    double gamma = 1.0;
};
struct BrayCurtisKernel {
    double gamma = 1.0;
};
// K = X X^T; makes kernel ridge regression coincide with ridge regression.
struct Linear {};

using Kernel = std::variant<Rbf, Laplacian, PNorm3Kernel, CosineKernel, BrayCurtisKernel, Linear>;

// "rbf", "laplacian", "l3", "cosine", "braycurtis", "linear"
std::string kernel_name(const Kernel& k);
Kernel make_kernel(std::string_view name, double gamma);
std::optional<double> kernel_gamma(const Kernel& k);

template <class A, class B>
double kernel_value(const Kernel& k, const Eigen::MatrixBase<A>& u, const Eigen::MatrixBase<B>& v)
{
    struct Eval {
        const Eigen::MatrixBase<A>& u;
        const Eigen::MatrixBase<B>& v;
        static double positive(double gamma)
        {
            if (!(gamma > 0.0)) throw DomainError("kernel gamma must be positive");
            return gamma;
        }
        double operator()(const Rbf& k) const
        {
            detail::check_same_size(u, v);
            return std::exp(-positive(k.gamma) * (u.derived() - v.derived()).squaredNorm());
        }
        double operator()(const Laplacian& k) const { return std::exp(-positive(k.gamma) * distance(PNorm{1.0}, u, v)); }
        double operator()(const PNorm3Kernel& k) const { return std::exp(-positive(k.gamma) * distance(PNorm{3.0}, u, v)); }
        double operator()(const CosineKernel& k) const { return std::exp(-positive(k.gamma) * distance(Cosine{}, u, v)); }
        double operator()(const BrayCurtisKernel& k) const
        {
            return std::exp(-positive(k.gamma) * distance(BrayCurtis{}, u, v));
        }
        double operator()(const Linear&) const
        {
            detail::check_same_size(u, v);
            return u.dot(v);
        }
    };
    return std::visit(Eval{u, v}, k);
}

// Gram matrix between the rows of A and the rows of B.
Eigen::MatrixXd kernel_matrix(const Kernel& k, const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);
// Symmetric Gram matrix of the rows of A (exactly symmetric by construction).
Eigen::MatrixXd kernel_matrix(const Kernel& k, const Eigen::MatrixXd& A);

// -------------------------------------------------------------------- KNN

struct KnnConfig {
    int k = 5;
    Measure measure = PNorm{1.0};
    // drop the training point the query came from (see `self` arguments)
    bool self_exclusion = false;
};

// Indices of the k smallest entries of `distances`, ascending by distance with
// ties broken by ascending index; `exclude` is never selected.
std::vector<Eigen::Index> nearest_indices(std::span<const double> distances, int k,
                                          std::optional<Eigen::Index> exclude = std::nullopt);

// Mean target over the k nearest training rows. When cfg.self_exclusion is set
// and `self` names the query's own training row, that row is skipped.
// Throws DomainError if fewer than k rows are available.
double knn_predict(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& query,
                   const KnnConfig& cfg, std::optional<Eigen::Index> self = std::nullopt);

// Prediction at every training row, each excluding itself iff cfg.self_exclusion.
Eigen::VectorXd knn_predict_in_sample(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const KnnConfig& cfg);

// Mean target over training rows within (1 + eps) * DMIN of the query,
// boundary inclusive; DMIN is the distance to the nearest non-self row.
double fixed_radius_predict(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& query,
                            const Measure& measure, double eps, std::optional<Eigen::Index> self = std::nullopt);

// ------------------------------------------------------------------ ridge

struct RidgeModel {
    Eigen::VectorXd beta;
    double lambda = 0.0;
};

// beta = (X^T X + lambda I)^-1 X^T y, no intercept.
// Throws SingularSystemError when the normal equations are singular. With more
// columns than rows and lambda > 0 the equivalent n x n dual system is solved.
RidgeModel ridge_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda);
Eigen::VectorXd ridge_predict(const RidgeModel& m, const Eigen::MatrixXd& X);

// -------------------------------------------------------------------- KRR

struct KrrModel {
    Eigen::VectorXd dual_coeffs; // (K + lambda I)^-1 y
    Eigen::MatrixXd train_X;
    Kernel kernel;
    double lambda = 1.0;
};

// Solved with a pivoted LU, since the exp(-gamma d) kernels built on
// non-Euclidean dissimilarities may be indefinite.
KrrModel krr_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda, const Kernel& kernel);
Eigen::VectorXd krr_predict(const KrrModel& m, const Eigen::MatrixXd& Q);

// ----------------------------------------------------- degrees of freedom

// tr(X (X^T X + lambda I)^-1 X^T)
double degrees_of_freedom(const RidgeModel& m, const Eigen::MatrixXd& X);
// tr(K (K + lambda I)^-1) with K the model's training Gram matrix
double degrees_of_freedom(const KrrModel& m);
// tr(G (G + lambda I)^-1) for a symmetric matrix G, evaluated from its
// eigenvalues as sum mu / (mu + lambda).
double smoother_trace(const Eigen::MatrixXd& gram, double lambda);

// --------------------------------------------------------- preprocessing

// Column standardization fitted on training data; constant columns are
// centred only.
struct Standardizer {
    Eigen::RowVectorXd mean;
    Eigen::RowVectorXd scale;

    static Standardizer fit(const Eigen::MatrixXd& X);
    Eigen::MatrixXd apply(const Eigen::MatrixXd& X) const;
};

} // namespace matsim

#pragma once

#include "matsim/regression.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace matsim {

struct Metrics {
    double rmse = 0.0;
    double mae = 0.0;
    double r2 = 0.0;
};

// Throws DimensionMismatchError on length mismatch and DomainError when y has
// zero variance (R^2 undefined).
Metrics metrics(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat);

// Same, but reports R^2 as NaN instead of throwing when y is constant
// (e.g. single-sample folds).
Metrics metrics_allow_constant(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat);

// ------------------------------------------------------------------ models

struct KnnSpec {
    int k = 5;
    Measure measure = PNorm{1.0};
};
struct FixedRadiusSpec {
    Measure measure = PNorm{1.0};
    double eps = 0.0;
};
struct RidgeSpec {
    double lambda = 1.0;
};
struct KrrSpec {
    double lambda = 1.0;
    Kernel kernel = Laplacian{1.0};
};

using ModelSpec = std::variant<KnnSpec, FixedRadiusSpec, RidgeSpec, KrrSpec>;

// e.g. "knn(k=5,l1)", "ridge", "krr(laplacian)"
std::string describe(const ModelSpec& spec);
std::optional<double> spec_lambda(const ModelSpec& spec);
std::optional<double> spec_gamma(const ModelSpec& spec);

// Fits on (X, y) and predicts the rows of Q. Test rows are disjoint from the
// training rows, so no self-exclusion applies.
Eigen::VectorXd fit_predict(const ModelSpec& spec, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                            const Eigen::MatrixXd& Q);

// ------------------------------------------------------------------- folds

inline constexpr std::uint64_t kDefaultSeed = 42;

struct FoldPlan {
    int n = 0;
    int n_folds = 0;
    std::uint64_t seed = kDefaultSeed;
    std::vector<int> assignment; // index -> fold

    std::vector<Eigen::Index> test_indices(int fold) const;
    std::vector<Eigen::Index> train_indices(int fold) const;
};

// Shuffle the indices with the seeded generator, then deal them round-robin.
FoldPlan make_fold_plan(int n, int n_folds, std::uint64_t seed = kDefaultSeed);

struct EvaluationReport {
    std::string model;
    std::string descriptor;
    std::optional<double> lambda;
    std::optional<double> gamma;
    std::vector<Metrics> folds;
    Metrics mean;
    Metrics stddev; // population standard deviation across folds
};

struct CvOptions {
    bool standardize = false;
    std::string descriptor;
};

EvaluationReport kfold_cv(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const ModelSpec& spec,
                          const FoldPlan& plan, const CvOptions& options = {});

// ------------------------------------------------------------- grid search

struct RidgeFamily {};
struct KrrFamily {
    std::string kernel; // name accepted by make_kernel
};
using ModelFamily = std::variant<RidgeFamily, KrrFamily>;

ModelSpec instantiate(const ModelFamily& family, double lambda, double gamma);

struct GridCell {
    double lambda = 0.0;
    double gamma = 0.0;
    std::optional<double> mean_rmse; // empty if the fit failed
    std::string error;
};

struct GridSearchResult {
    double lambda = 0.0;
    std::optional<double> gamma; // empty for ridge
    EvaluationReport report;
    std::vector<GridCell> cells;
};

// {1e-5, 1e-4, ..., 10, 100}
std::vector<double> default_grid();

// Picks the cell with the smallest mean CV RMSE; ties go to the larger lambda,
// then the smaller gamma. The gamma grid is ignored for ridge.
GridSearchResult grid_search(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const ModelFamily& family,
                             const std::vector<double>& lambda_grid, const std::vector<double>& gamma_grid,
                             const FoldPlan& plan, const CvOptions& options = {});

// ----------------------------------------------------------- PCA / groups

struct PcaResult {
    Eigen::MatrixXd projection;  // n x n_components
    Eigen::MatrixXd components;  // d x n_components, unit columns
    Eigen::VectorXd explained;   // fraction of total variance per component
};

// Projection of the mean-centred rows onto the leading principal directions.
// Each direction is signed so its largest-magnitude loading is positive.
PcaResult pca_project(const Eigen::MatrixXd& X, int n_components = 2);

struct KMeansOptions {
    int k = 3;
    std::uint64_t seed = kDefaultSeed;
    int restarts = 10;
    int max_iterations = 300;
};

// Lloyd's algorithm with k-means++ seeding; the restart with the smallest
// within-cluster sum of squares wins. Labels are renumbered by first
// appearance so identical partitions produce identical labels.
std::vector<int> cluster_groups(const Eigen::MatrixXd& P, const KMeansOptions& options = {});

} // namespace matsim

#include "matsim/error.hpp"
#include "matsim/regression.hpp"

#include <doctest.h>

#include <random>

using namespace matsim;

namespace {

Eigen::MatrixXd gaussian(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols)
{
    std::normal_distribution<double> g;
    Eigen::MatrixXd M(rows, cols);
    for (Eigen::Index i = 0; i < M.size(); ++i) M.data()[i] = g(rng);
    return M;
}

// tr(X (X^T X + l I)^-1 X^T), formed explicitly
double direct_ridge_trace(const Eigen::MatrixXd& X, double lambda)
{
    Eigen::MatrixXd A = X.transpose() * X;
    A.diagonal().array() += lambda;
    return (X * A.inverse() * X.transpose()).trace();
}

} // namespace

TEST_CASE("kernels by hand")
{
    Eigen::VectorXd u(2), v(2);
    u << 1, 2;
    v << 3, 0;
    // |u - v|_1 = 4, |u - v|_2^2 = 8, |u - v|_3 = 16^(1/3)
    CHECK(kernel_value(Rbf{0.5}, u, v) == doctest::Approx(std::exp(-4.0)).epsilon(1e-15));
    CHECK(kernel_value(Laplacian{0.5}, u, v) == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
    CHECK(kernel_value(PNorm3Kernel{1.0}, u, v) == doctest::Approx(std::exp(-std::cbrt(16.0))).epsilon(1e-15));
    CHECK(kernel_value(CosineKernel{2.0}, u, v) ==
          doctest::Approx(std::exp(-2.0 * (1.0 - 3.0 / (std::sqrt(5.0) * 3.0)))).epsilon(1e-15));
    CHECK(kernel_value(BrayCurtisKernel{1.0}, u, v) == doctest::Approx(std::exp(-4.0 / 6.0)).epsilon(1e-15));
    CHECK(kernel_value(Linear{}, u, v) == 3.0);

    CHECK(kernel_name(make_kernel("l3", 1.0)) == "l3");
    CHECK(*kernel_gamma(make_kernel("rbf", 0.25)) == 0.25);
    CHECK(!kernel_gamma(Linear{}));
    CHECK_THROWS_AS(make_kernel("rbf", 0.0), DomainError);
    CHECK_THROWS_AS(make_kernel("poly", 1.0), DomainError);

    std::mt19937_64 rng(1);
    const auto A = gaussian(rng, 6, 3);
    const auto K = kernel_matrix(Rbf{0.3}, A);
    CHECK(K == K.transpose());
    CHECK(K.diagonal() == Eigen::VectorXd::Ones(6));
    CHECK(kernel_matrix(Rbf{0.3}, A, A).isApprox(K, 1e-15));
}

TEST_CASE("nearest neighbours")
{
    const std::vector<double> d{3.0, 1.0, 2.0, 1.0, 0.5};
    CHECK(nearest_indices(d, 3) == std::vector<Eigen::Index>{4, 1, 3});
    // ties go to the lower index
    CHECK(nearest_indices(d, 2, 4) == std::vector<Eigen::Index>{1, 3});
    CHECK_THROWS_AS(nearest_indices(d, 5, 0), DomainError);
    CHECK_THROWS_AS(nearest_indices(d, 0), DomainError);

    Eigen::MatrixXd X(4, 1);
    X << 0, 1, 2, 10;
    Eigen::VectorXd y(4);
    y << 1, 2, 4, 8;
    Eigen::VectorXd q(1);
    q << 0.4;
    CHECK(knn_predict(X, y, q, KnnConfig{2, PNorm{1}, false}) == 1.5);
    CHECK(knn_predict(X, y, q, KnnConfig{4, PNorm{1}, false}) == 3.75);

    // in-sample with self exclusion: point 1 averages its neighbours 0 and 2
    const auto in = knn_predict_in_sample(X, y, KnnConfig{2, PNorm{1}, true});
    CHECK(in[1] == 2.5);
    CHECK(in[3] == 3.0);
    // without exclusion each point is its own nearest neighbour
    CHECK(knn_predict_in_sample(X, y, KnnConfig{1, PNorm{1}, false}) == y);
}

TEST_CASE("fixed radius regression")
{
    Eigen::MatrixXd X(4, 1);
    X << 0, 1, 2, 4;
    Eigen::VectorXd y(4);
    y << 1, 2, 4, 8;
    Eigen::VectorXd q(1);
    q << 1.5;
    // DMIN = 0.5 reaches points 1 and 2 only
    CHECK(fixed_radius_predict(X, y, q, PNorm{1}, 0.0) == 3.0);
    // radius 1.5 adds point 0
    CHECK(fixed_radius_predict(X, y, q, PNorm{1}, 2.0) == doctest::Approx(7.0 / 3.0));
    // self excluded: point 1 has DMIN 1 to both 0 and 2
    CHECK(fixed_radius_predict(X, y, X.row(1).transpose(), PNorm{1}, 0.0, 1) == 2.5);
    CHECK_THROWS_AS(fixed_radius_predict(X, y, q, PNorm{1}, -1.0), DomainError);
}

TEST_CASE("ridge against the closed form")
{
    std::mt19937_64 rng(2);
    const auto X = gaussian(rng, 30, 5);
    const Eigen::VectorXd y = gaussian(rng, 30, 1);
    for (double lambda : {0.0, 0.1, 10.0}) {
        const auto m = ridge_fit(X, y, lambda);
        Eigen::MatrixXd A = X.transpose() * X + lambda * Eigen::MatrixXd::Identity(5, 5);
        const Eigen::VectorXd beta = A.inverse() * X.transpose() * y;
        CHECK((m.beta - beta).norm() <= 1e-10 * beta.norm());
        CHECK(ridge_predict(m, X).isApprox(X * beta, 1e-10));
    }

    // wide data goes through the dual system; same coefficients
    const auto W = gaussian(rng, 8, 40);
    const Eigen::VectorXd t = gaussian(rng, 8, 1);
    const auto wide = ridge_fit(W, t, 0.5);
    Eigen::MatrixXd A = W.transpose() * W + 0.5 * Eigen::MatrixXd::Identity(40, 40);
    CHECK((wide.beta - A.ldlt().solve(W.transpose() * t)).norm() <= 1e-10 * wide.beta.norm());

    Eigen::MatrixXd rank_deficient = X;
    rank_deficient.col(4) = rank_deficient.col(3);
    CHECK_THROWS_AS(ridge_fit(rank_deficient, y, 0.0), SingularSystemError);
    CHECK_THROWS_AS(ridge_fit(X, y, -1.0), DomainError);
    CHECK_THROWS_AS(ridge_fit(X, Eigen::VectorXd::Zero(3), 1.0), DimensionMismatchError);
}

TEST_CASE("ridge equals linear-kernel KRR")
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const auto X = gaussian(rng, 25, 6);
        const Eigen::VectorXd y = gaussian(rng, 25, 1);
        const auto Q = gaussian(rng, 7, 6);
        for (double lambda : {1e-3, 1.0, 10.0}) {
            const auto r = ridge_fit(X, y, lambda);
            const auto k = krr_fit(X, y, lambda, Linear{});
            CHECK((ridge_predict(r, Q) - krr_predict(k, Q)).cwiseAbs().maxCoeff() <=
                  1e-9 * ridge_predict(r, Q).cwiseAbs().maxCoeff());
            CHECK(ridge_predict(r, X).isApprox(krr_predict(k, X), 1e-9));
        }
    }
}

TEST_CASE("KRR solve")
{
    std::mt19937_64 rng(4);
    const auto X = gaussian(rng, 12, 3);
    const Eigen::VectorXd y = gaussian(rng, 12, 1);
    const auto m = krr_fit(X, y, 0.1, Laplacian{0.5});
    Eigen::MatrixXd K = kernel_matrix(Laplacian{0.5}, X);
    // (K + l I) alpha = y, and in-sample predictions are K alpha = y - l alpha
    CHECK(((K + 0.1 * Eigen::MatrixXd::Identity(12, 12)) * m.dual_coeffs - y).norm() < 1e-10);
    CHECK(krr_predict(m, X).isApprox(y - 0.1 * m.dual_coeffs, 1e-10));
    CHECK_THROWS_AS(krr_fit(X, y, 0.0, Rbf{1.0}), DomainError);

    // duplicate rows with a linear kernel and tiny lambda: numerically singular
    Eigen::MatrixXd D(3, 1);
    D << 1e8, 1e8, 1e8;
    CHECK_THROWS_AS(krr_fit(D, Eigen::VectorXd::Ones(3), 1e-9, Linear{}), SingularSystemError);
}

TEST_CASE("degrees of freedom against a direct trace")
{
    std::mt19937_64 rng(5);
    const auto X = gaussian(rng, 20, 4);
    // full-rank, unpenalized: df equals the number of columns exactly
    CHECK(degrees_of_freedom(RidgeModel{Eigen::VectorXd::Zero(4), 0.0}, X) == 4.0);

    double prev = 1e300;
    for (double lambda : {1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0}) {
        const double df = degrees_of_freedom(RidgeModel{Eigen::VectorXd::Zero(4), lambda}, X);
        CHECK(df == doctest::Approx(direct_ridge_trace(X, lambda)).epsilon(1e-10));
        CHECK(df <= prev);
        prev = df;
    }

    // wide X takes the n x n route
    const auto W = gaussian(rng, 6, 30);
    CHECK(degrees_of_freedom(RidgeModel{Eigen::VectorXd::Zero(30), 0.7}, W) ==
          doctest::Approx(direct_ridge_trace(W, 0.7)).epsilon(1e-10));

    const KrrModel krr{Eigen::VectorXd::Zero(20), X, Rbf{0.2}, 0.3};
    Eigen::MatrixXd K = kernel_matrix(Rbf{0.2}, X);
    const double direct = (K * (K + 0.3 * Eigen::MatrixXd::Identity(20, 20)).inverse()).trace();
    CHECK(degrees_of_freedom(krr) == doctest::Approx(direct).epsilon(1e-10));

    // K = I, lambda = 1: each eigenvalue contributes 1/2
    CHECK(smoother_trace(Eigen::MatrixXd::Identity(9, 9), 1.0) == doctest::Approx(4.5).epsilon(1e-15));

    Eigen::MatrixXd singular = Eigen::MatrixXd::Zero(3, 3);
    CHECK_THROWS_AS(smoother_trace(singular, 0.0), SingularSystemError);
    CHECK_THROWS_AS(smoother_trace(Eigen::MatrixXd::Identity(2, 3), 1.0), DimensionMismatchError);
}

TEST_CASE("standardizer")
{
    Eigen::MatrixXd X(3, 2);
    X << 1, 5, 2, 5, 3, 5;
    const auto s = Standardizer::fit(X);
    CHECK(s.mean(0) == 2.0);
    CHECK(s.scale(0) == doctest::Approx(std::sqrt(2.0 / 3.0)));
    // a constant column is centred but not scaled
    CHECK(s.scale(1) == 1.0);
    const auto Z = s.apply(X);
    CHECK(Z.col(0).sum() == doctest::Approx(0.0));
    CHECK(Z.col(1).isZero());
}

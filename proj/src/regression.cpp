#include "matsim/regression.hpp"

#include "matsim/io.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <limits>
#include <numeric>

namespace matsim {

namespace {

// Below this reciprocal condition estimate a linear system counts as singular.
constexpr double kMinRcond = 1e-14;

void check_training(const Eigen::MatrixXd& X, const Eigen::VectorXd& y)
{
    if (X.rows() != y.size())
        throw DimensionMismatchError("training data: " + std::to_string(X.rows()) + " rows but " +
                                     std::to_string(y.size()) + " targets");
    if (X.rows() == 0) throw DomainError("training data is empty");
}

std::vector<double> distances_to(const Eigen::MatrixXd& X, const Eigen::VectorXd& query, const Measure& m)
{
    if (query.size() != X.cols())
        throw DimensionMismatchError("query has " + std::to_string(query.size()) + " features, training data " +
                                     std::to_string(X.cols()));
    std::vector<double> d(static_cast<std::size_t>(X.rows()));
    for (Eigen::Index i = 0; i < X.rows(); ++i) d[static_cast<std::size_t>(i)] = distance(m, X.row(i), query.transpose());
    return d;
}

} // namespace

std::string kernel_name(const Kernel& k)
{
    struct Namer {
        std::string operator()(const Rbf&) const { return "rbf"; }
        std::string operator()(const Laplacian&) const { return "laplacian"; }
        std::string operator()(const PNorm3Kernel&) const { return "l3"; }
        std::string operator()(const CosineKernel&) const { return "cosine"; }
        std::string operator()(const BrayCurtisKernel&) const { return "braycurtis"; }
        std::string operator()(const Linear&) const { return "linear"; }
    };
    return std::visit(Namer{}, k);
}

Kernel make_kernel(std::string_view name, double gamma)
{
    if (name != "linear" && !(gamma > 0.0)) throw DomainError("kernel gamma must be positive");
    if (name == "rbf") return Rbf{gamma};
    if (name == "laplacian") return Laplacian{gamma};
    if (name == "l3") return PNorm3Kernel{gamma};
    if (name == "cosine") return CosineKernel{gamma};
    if (name == "braycurtis") return BrayCurtisKernel{gamma};
    if (name == "linear") return Linear{};
    throw DomainError("unknown kernel '" + std::string(name) + "'");
}

std::optional<double> kernel_gamma(const Kernel& k)
{
    return std::visit(
        [](const auto& concrete) -> std::optional<double> {
            if constexpr (requires { concrete.gamma; })
                return concrete.gamma;
            else
                return std::nullopt;
        },
        k);
}

Eigen::MatrixXd kernel_matrix(const Kernel& k, const Eigen::MatrixXd& A, const Eigen::MatrixXd& B)
{
    if (A.cols() != B.cols())
        throw DimensionMismatchError("kernel_matrix: feature counts differ (" + std::to_string(A.cols()) + " vs " +
                                     std::to_string(B.cols()) + ")");
    Eigen::MatrixXd K(A.rows(), B.rows());
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < B.rows(); ++j) K(i, j) = kernel_value(k, A.row(i), B.row(j));
    return K;
}

Eigen::MatrixXd kernel_matrix(const Kernel& k, const Eigen::MatrixXd& A)
{
    Eigen::MatrixXd K(A.rows(), A.rows());
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        K(i, i) = kernel_value(k, A.row(i), A.row(i));
        for (Eigen::Index j = i + 1; j < A.rows(); ++j) K(i, j) = K(j, i) = kernel_value(k, A.row(i), A.row(j));
    }
    return K;
}

std::vector<Eigen::Index> nearest_indices(std::span<const double> distances, int k, std::optional<Eigen::Index> exclude)
{
    if (k < 1) throw DomainError("k must be >= 1");
    std::vector<Eigen::Index> order;
    order.reserve(distances.size());
    for (std::size_t i = 0; i < distances.size(); ++i)
        if (!exclude || static_cast<Eigen::Index>(i) != *exclude) order.push_back(static_cast<Eigen::Index>(i));
    if (order.size() < static_cast<std::size_t>(k))
        throw DomainError("k = " + std::to_string(k) + " exceeds the " + std::to_string(order.size()) +
                          " available training points");
    const auto less = [&](Eigen::Index a, Eigen::Index b) {
        const double da = distances[static_cast<std::size_t>(a)];
        const double db = distances[static_cast<std::size_t>(b)];
        return da != db ? da < db : a < b;
    };
    std::partial_sort(order.begin(), order.begin() + k, order.end(), less);
    order.resize(static_cast<std::size_t>(k));
    return order;
}

double knn_predict(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& query,
                   const KnnConfig& cfg, std::optional<Eigen::Index> self)
{
    check_training(X, y);
    const auto d = distances_to(X, query, cfg.measure);
    const auto idx = nearest_indices(d, cfg.k, cfg.self_exclusion ? self : std::nullopt);
    double sum = 0.0;
    for (auto i : idx) sum += y[i];
    return sum / static_cast<double>(idx.size());
}

Eigen::VectorXd knn_predict_in_sample(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const KnnConfig& cfg)
{
    check_training(X, y);
    Eigen::VectorXd out(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i) out[i] = knn_predict(X, y, X.row(i).transpose(), cfg, i);
    return out;
}

double fixed_radius_predict(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& query,
                            const Measure& measure, double eps, std::optional<Eigen::Index> self)
{
    check_training(X, y);
    if (!(eps >= 0.0)) throw DomainError("eps must be >= 0");
    const auto d = distances_to(X, query, measure);
    double dmin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < d.size(); ++i)
        if (!self || static_cast<Eigen::Index>(i) != *self) dmin = std::min(dmin, d[i]);
    if (!std::isfinite(dmin)) throw DomainError("fixed_radius_predict: no training point besides the query");
    const double radius = (1.0 + eps) * dmin;
    double sum = 0.0;
    int count = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (self && static_cast<Eigen::Index>(i) == *self) continue;
        if (d[i] <= radius) {
            sum += y[static_cast<Eigen::Index>(i)];
            ++count;
        }
    }
    return sum / count;
}

RidgeModel ridge_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda)
{
    check_training(X, y);
    if (!(lambda >= 0.0)) throw DomainError("ridge lambda must be >= 0");
    if (lambda > 0.0 && X.cols() > X.rows()) {
        // wide data: beta = X^T (X X^T + l I)^-1 y, same minimizer, n x n solve
        Eigen::MatrixXd dual = X * X.transpose();
        dual.diagonal().array() += lambda;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(dual);
        if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || ldlt.rcond() < kMinRcond)
            throw SingularSystemError("ridge dual system is singular at lambda = " + format_double(lambda));
        return RidgeModel{X.transpose() * ldlt.solve(y), lambda};
    }
    Eigen::MatrixXd normal = X.transpose() * X;
    normal.diagonal().array() += lambda;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(normal);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || ldlt.rcond() < kMinRcond)
        throw SingularSystemError("ridge normal equations are singular at lambda = " + format_double(lambda));
    return RidgeModel{ldlt.solve(X.transpose() * y), lambda};
}

Eigen::VectorXd ridge_predict(const RidgeModel& m, const Eigen::MatrixXd& X)
{
    if (X.cols() != m.beta.size())
        throw DimensionMismatchError("ridge_predict: model has " + std::to_string(m.beta.size()) +
                                     " coefficients, data " + std::to_string(X.cols()) + " columns");
    return X * m.beta;
}

KrrModel krr_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda, const Kernel& kernel)
{
    check_training(X, y);
    if (!(lambda > 0.0)) throw DomainError("KRR lambda must be > 0");
    Eigen::MatrixXd system = kernel_matrix(kernel, X);
    system.diagonal().array() += lambda;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
    if (!(lu.rcond() >= kMinRcond))
        throw SingularSystemError("K + lambda I is numerically singular for kernel " + kernel_name(kernel) +
                                  " at lambda = " + format_double(lambda));
    KrrModel m;
    m.dual_coeffs = lu.solve(y);
    if (!m.dual_coeffs.allFinite()) throw SingularSystemError("KRR solve produced non-finite coefficients");
    m.train_X = X;
    m.kernel = kernel;
    m.lambda = lambda;
    return m;
}

Eigen::VectorXd krr_predict(const KrrModel& m, const Eigen::MatrixXd& Q)
{
    if (Q.cols() != m.train_X.cols())
        throw DimensionMismatchError("krr_predict: queries have " + std::to_string(Q.cols()) +
                                     " features, model " + std::to_string(m.train_X.cols()));
    return kernel_matrix(m.kernel, Q, m.train_X) * m.dual_coeffs;
}

double smoother_trace(const Eigen::MatrixXd& gram, double lambda)
{
    if (gram.rows() != gram.cols()) throw DimensionMismatchError("smoother_trace: matrix must be square");
    if (!(lambda >= 0.0)) throw DomainError("lambda must be >= 0");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw SingularSystemError("eigen decomposition failed");
    const Eigen::VectorXd& mu = solver.eigenvalues();
    const double scale = std::max(mu.cwiseAbs().maxCoeff(), 1.0);
    double df = 0.0;
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
        const double denom = mu[i] + lambda;
        if (std::abs(denom) <= 1e-12 * scale)
            throw SingularSystemError("smoother is singular at lambda = " + format_double(lambda));
        df += mu[i] / denom;
    }
    return df;
}

double degrees_of_freedom(const RidgeModel& m, const Eigen::MatrixXd& X)
{
    if (X.cols() != m.beta.size())
        throw DimensionMismatchError("degrees_of_freedom: X does not match the model");
    // tr(X (X^T X + l I)^-1 X^T) = tr((X^T X + l I)^-1 X^T X). X X^T shares the
    // nonzero spectrum, and zero eigenvalues add nothing once lambda > 0.
    if (m.lambda > 0.0 && X.cols() > X.rows()) return smoother_trace(X * X.transpose(), m.lambda);
    return smoother_trace(X.transpose() * X, m.lambda);
}

double degrees_of_freedom(const KrrModel& m)
{
    return smoother_trace(kernel_matrix(m.kernel, m.train_X), m.lambda);
}

Standardizer Standardizer::fit(const Eigen::MatrixXd& X)
{
    Standardizer s;
    s.mean = X.colwise().mean();
    s.scale = ((X.rowwise() - s.mean).array().square().colwise().mean()).sqrt().matrix();
    for (Eigen::Index j = 0; j < s.scale.size(); ++j)
        if (s.scale[j] == 0.0) s.scale[j] = 1.0;
    return s;
}

Eigen::MatrixXd Standardizer::apply(const Eigen::MatrixXd& X) const
{
    return ((X.rowwise() - mean).array().rowwise() / scale.array()).matrix();
}

} // namespace matsim

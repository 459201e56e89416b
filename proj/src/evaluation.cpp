#include "matsim/evaluation.hpp"

#include "matsim/io.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace matsim {

namespace {

Metrics compute_metrics(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat, bool allow_constant)
{
    if (y.size() != yhat.size())
        throw DimensionMismatchError("metrics: " + std::to_string(y.size()) + " targets vs " +
                                     std::to_string(yhat.size()) + " predictions");
    if (y.size() == 0) throw DimensionMismatchError("metrics: empty input");
    const Eigen::ArrayXd resid = (y - yhat).array();
    Metrics m;
    m.rmse = std::sqrt(resid.square().mean());
    m.mae = resid.abs().mean();
    const double ss_tot = (y.array() - y.mean()).square().sum();
    if (ss_tot == 0.0) {
        if (!allow_constant) throw DomainError("R^2 undefined: targets have zero variance");
        m.r2 = std::numeric_limits<double>::quiet_NaN();
    } else {
        m.r2 = 1.0 - resid.square().sum() / ss_tot;
    }
    return m;
}

// mean and population std of the finite entries
std::pair<double, double> summarize(const std::vector<double>& values)
{
    std::vector<double> finite;
    for (double v : values)
        if (std::isfinite(v)) finite.push_back(v);
    if (finite.empty()) return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
    double mean = 0.0;
    for (double v : finite) mean += v;
    mean /= static_cast<double>(finite.size());
    double var = 0.0;
    for (double v : finite) var += (v - mean) * (v - mean);
    var /= static_cast<double>(finite.size());
    return {mean, std::sqrt(var)};
}

} // namespace

Metrics metrics(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat) { return compute_metrics(y, yhat, false); }

Metrics metrics_allow_constant(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat)
{
    return compute_metrics(y, yhat, true);
}

std::string describe(const ModelSpec& spec)
{
    struct Describer {
        std::string operator()(const KnnSpec& s) const
        {
            return "knn(k=" + std::to_string(s.k) + "," + measure_name(s.measure) + ")";
        }
        std::string operator()(const FixedRadiusSpec& s) const
        {
            return "fixed_radius(eps=" + format_double(s.eps) + "," + measure_name(s.measure) + ")";
        }
        std::string operator()(const RidgeSpec&) const { return "ridge"; }
        std::string operator()(const KrrSpec& s) const { return "krr(" + kernel_name(s.kernel) + ")"; }
    };
    return std::visit(Describer{}, spec);
}

std::optional<double> spec_lambda(const ModelSpec& spec)
{
    if (const auto* r = std::get_if<RidgeSpec>(&spec)) return r->lambda;
    if (const auto* k = std::get_if<KrrSpec>(&spec)) return k->lambda;
    return std::nullopt;
}

std::optional<double> spec_gamma(const ModelSpec& spec)
{
    if (const auto* k = std::get_if<KrrSpec>(&spec)) return kernel_gamma(k->kernel);
    return std::nullopt;
}

Eigen::VectorXd fit_predict(const ModelSpec& spec, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                            const Eigen::MatrixXd& Q)
{
    struct Runner {
        const Eigen::MatrixXd& X;
        const Eigen::VectorXd& y;
        const Eigen::MatrixXd& Q;
        Eigen::VectorXd operator()(const KnnSpec& s) const
        {
            const KnnConfig cfg{s.k, s.measure, false};
            Eigen::VectorXd out(Q.rows());
            for (Eigen::Index i = 0; i < Q.rows(); ++i) out[i] = knn_predict(X, y, Q.row(i).transpose(), cfg);
            return out;
        }
        Eigen::VectorXd operator()(const FixedRadiusSpec& s) const
        {
            Eigen::VectorXd out(Q.rows());
            for (Eigen::Index i = 0; i < Q.rows(); ++i)
                out[i] = fixed_radius_predict(X, y, Q.row(i).transpose(), s.measure, s.eps);
            return out;
        }
        Eigen::VectorXd operator()(const RidgeSpec& s) const { return ridge_predict(ridge_fit(X, y, s.lambda), Q); }
        Eigen::VectorXd operator()(const KrrSpec& s) const
        {
            return krr_predict(krr_fit(X, y, s.lambda, s.kernel), Q);
        }
    };
    return std::visit(Runner{X, y, Q}, spec);
}

std::vector<Eigen::Index> FoldPlan::test_indices(int fold) const
{
    std::vector<Eigen::Index> out;
    for (int i = 0; i < n; ++i)
        if (assignment[static_cast<std::size_t>(i)] == fold) out.push_back(i);
    return out;
}

std::vector<Eigen::Index> FoldPlan::train_indices(int fold) const
{
    std::vector<Eigen::Index> out;
    for (int i = 0; i < n; ++i)
        if (assignment[static_cast<std::size_t>(i)] != fold) out.push_back(i);
    return out;
}

FoldPlan make_fold_plan(int n, int n_folds, std::uint64_t seed)
{
    if (n_folds < 2) throw DomainError("need at least 2 folds");
    if (n < n_folds)
        throw DomainError("cannot split " + std::to_string(n) + " samples into " + std::to_string(n_folds) + " folds");
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(seed);
    for (int i = n - 1; i > 0; --i) {
        std::uniform_int_distribution<int> pick(0, i);
        std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(pick(rng))]);
    }
    FoldPlan plan{n, n_folds, seed, std::vector<int>(static_cast<std::size_t>(n))};
    for (int i = 0; i < n; ++i) plan.assignment[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = i % n_folds;
    return plan;
}

EvaluationReport kfold_cv(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const ModelSpec& spec,
                          const FoldPlan& plan, const CvOptions& options)
{
    if (X.rows() != y.size()) throw DimensionMismatchError("kfold_cv: X and y lengths differ");
    if (plan.n != X.rows()) throw DimensionMismatchError("kfold_cv: fold plan built for a different sample count");

    EvaluationReport report;
    report.model = describe(spec);
    report.descriptor = options.descriptor;
    report.lambda = spec_lambda(spec);
    report.gamma = spec_gamma(spec);

    for (int f = 0; f < plan.n_folds; ++f) {
        const auto test = plan.test_indices(f);
        const auto train = plan.train_indices(f);
        if (test.empty()) throw DomainError("fold " + std::to_string(f) + " is empty");
        Eigen::MatrixXd Xtr = X(train, Eigen::all);
        Eigen::MatrixXd Xte = X(test, Eigen::all);
        const Eigen::VectorXd ytr = y(train);
        const Eigen::VectorXd yte = y(test);
        if (options.standardize) {
            const auto st = Standardizer::fit(Xtr);
            Xtr = st.apply(Xtr);
            Xte = st.apply(Xte);
        }
        try {
            report.folds.push_back(metrics_allow_constant(yte, fit_predict(spec, Xtr, ytr, Xte)));
        } catch (const SingularSystemError& e) {
            throw SingularSystemError("fold " + std::to_string(f) + ": " + e.what());
        } catch (const Error& e) {
            throw Error("fold " + std::to_string(f) + ": " + e.what());
        }
    }

    std::vector<double> rmse, mae, r2;
    for (const auto& m : report.folds) {
        rmse.push_back(m.rmse);
        mae.push_back(m.mae);
        r2.push_back(m.r2);
    }
    std::tie(report.mean.rmse, report.stddev.rmse) = summarize(rmse);
    std::tie(report.mean.mae, report.stddev.mae) = summarize(mae);
    std::tie(report.mean.r2, report.stddev.r2) = summarize(r2);
    return report;
}

ModelSpec instantiate(const ModelFamily& family, double lambda, double gamma)
{
    if (std::holds_alternative<RidgeFamily>(family)) return RidgeSpec{lambda};
    return KrrSpec{lambda, make_kernel(std::get<KrrFamily>(family).kernel, gamma)};
}

std::vector<double> default_grid() { return {1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0}; }

GridSearchResult grid_search(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const ModelFamily& family,
                             const std::vector<double>& lambda_grid, const std::vector<double>& gamma_grid,
                             const FoldPlan& plan, const CvOptions& options)
{
    const bool ridge = std::holds_alternative<RidgeFamily>(family);
    if (lambda_grid.empty() || (!ridge && gamma_grid.empty())) throw DomainError("grid_search: empty grid");
    const std::vector<double> gammas = ridge ? std::vector<double>{std::numeric_limits<double>::quiet_NaN()} : gamma_grid;

    GridSearchResult result;
    std::optional<std::size_t> best;
    std::optional<EvaluationReport> best_report;
    const auto better = [](const GridCell& a, const GridCell& b) {
        if (*a.mean_rmse != *b.mean_rmse) return *a.mean_rmse < *b.mean_rmse;
        if (a.lambda != b.lambda) return a.lambda > b.lambda;
        return a.gamma < b.gamma;
    };

    for (double lambda : lambda_grid) {
        for (double gamma : gammas) {
            GridCell cell{lambda, gamma, std::nullopt, {}};
            try {
                auto report = kfold_cv(X, y, instantiate(family, lambda, gamma), plan, options);
                if (std::isfinite(report.mean.rmse)) {
                    cell.mean_rmse = report.mean.rmse;
                    if (!best || better(cell, result.cells[*best])) {
                        best = result.cells.size();
                        best_report = std::move(report);
                    }
                } else {
                    cell.error = "non-finite RMSE";
                }
            } catch (const Error& e) {
                cell.error = e.what();
            }
            result.cells.push_back(std::move(cell));
        }
    }
    if (!best) throw SingularSystemError("grid_search: every grid cell failed");
    result.lambda = result.cells[*best].lambda;
    if (!ridge) result.gamma = result.cells[*best].gamma;
    result.report = std::move(*best_report);
    return result;
}

PcaResult pca_project(const Eigen::MatrixXd& X, int n_components)
{
    if (X.rows() < 2) throw DomainError("pca_project: need at least 2 samples");
    if (n_components < 1) throw DomainError("pca_project: need at least one component");
    const Eigen::MatrixXd centred = X.rowwise() - X.colwise().mean();
    Eigen::BDCSVD<Eigen::MatrixXd> svd(centred, Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double total = centred.squaredNorm();

    PcaResult out;
    out.components = Eigen::MatrixXd::Zero(X.cols(), n_components);
    out.explained = Eigen::VectorXd::Zero(n_components);
    const Eigen::Index available = std::min<Eigen::Index>(n_components, sv.size());
    for (Eigen::Index c = 0; c < available; ++c) {
        if (sv[c] == 0.0) break;
        Eigen::VectorXd dir = svd.matrixV().col(c);
        Eigen::Index arg = 0;
        dir.cwiseAbs().maxCoeff(&arg);
        if (dir[arg] < 0) dir = -dir;
        out.components.col(c) = dir;
        out.explained[c] = sv[c] * sv[c] / total;
    }
    out.projection = centred * out.components;
    return out;
}

std::vector<int> cluster_groups(const Eigen::MatrixXd& P, const KMeansOptions& options)
{
    const Eigen::Index n = P.rows();
    const int k = options.k;
    if (k < 1) throw DomainError("cluster_groups: k must be >= 1");
    if (n < k) throw DomainError("cluster_groups: " + std::to_string(n) + " points for " + std::to_string(k) + " groups");

    std::mt19937_64 rng(options.seed);
    std::vector<int> best_labels;
    double best_wcss = std::numeric_limits<double>::infinity();

    for (int restart = 0; restart < std::max(1, options.restarts); ++restart) {
        // k-means++ seeding
        Eigen::MatrixXd centers(k, P.cols());
        std::uniform_int_distribution<Eigen::Index> first(0, n - 1);
        centers.row(0) = P.row(first(rng));
        Eigen::VectorXd d2 = (P.rowwise() - centers.row(0)).rowwise().squaredNorm();
        for (int c = 1; c < k; ++c) {
            const double total = d2.sum();
            Eigen::Index chosen = 0;
            if (total > 0.0) {
                std::uniform_real_distribution<double> u(0.0, total);
                double target = u(rng);
                for (chosen = 0; chosen < n - 1; ++chosen) {
                    target -= d2[chosen];
                    if (target < 0.0) break;
                }
            } else {
                chosen = first(rng);
            }
            centers.row(c) = P.row(chosen);
            d2 = d2.cwiseMin((P.rowwise() - centers.row(c)).rowwise().squaredNorm());
        }

        std::vector<int> labels(static_cast<std::size_t>(n), -1);
        for (int iter = 0; iter < options.max_iterations; ++iter) {
            bool changed = false;
            for (Eigen::Index i = 0; i < n; ++i) {
                Eigen::Index arg = 0;
                (centers.rowwise() - P.row(i)).rowwise().squaredNorm().minCoeff(&arg);
                if (labels[static_cast<std::size_t>(i)] != static_cast<int>(arg)) {
                    labels[static_cast<std::size_t>(i)] = static_cast<int>(arg);
                    changed = true;
                }
            }
            if (!changed) break;
            Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, P.cols());
            Eigen::VectorXd counts = Eigen::VectorXd::Zero(k);
            for (Eigen::Index i = 0; i < n; ++i) {
                sums.row(labels[static_cast<std::size_t>(i)]) += P.row(i);
                counts[labels[static_cast<std::size_t>(i)]] += 1.0;
            }
            for (int c = 0; c < k; ++c)
                if (counts[c] > 0) centers.row(c) = sums.row(c) / counts[c];
        }

        double wcss = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) wcss += (P.row(i) - centers.row(labels[static_cast<std::size_t>(i)])).squaredNorm();
        if (wcss < best_wcss) {
            best_wcss = wcss;
            best_labels = labels;
        }
    }

    // relabel by first appearance
    std::vector<int> remap(static_cast<std::size_t>(k), -1);
    int next = 0;
    for (int& l : best_labels) {
        if (remap[static_cast<std::size_t>(l)] < 0) remap[static_cast<std::size_t>(l)] = next++;
        l = remap[static_cast<std::size_t>(l)];
    }
    return best_labels;
}

} // namespace matsim

#include "matsim/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

namespace matsim {

double appendix_a_function(double x) { return std::exp(-x) + std::cos(1.2 * std::numbers::pi * x); }

SyntheticSample generate_appendix_a(const SyntheticSpec& spec)
{
    if (spec.n < 2) throw DomainError("synthetic: n must be >= 2");
    if (!(spec.lo < spec.hi)) throw DomainError("synthetic: invalid range, need lo < hi");
    if (!(spec.sigma >= 0.0)) throw DomainError("synthetic: sigma must be >= 0");

    std::mt19937_64 rng(spec.seed);
    std::vector<double> xs(static_cast<std::size_t>(spec.n));
    if (spec.sampling == Sampling::Grid) {
        const double step = (spec.hi - spec.lo) / (spec.n - 1);
        for (int i = 0; i < spec.n; ++i) xs[static_cast<std::size_t>(i)] = spec.lo + step * i;
        xs.back() = spec.hi;
    } else {
        std::uniform_real_distribution<double> u(spec.lo, spec.hi);
        for (auto& x : xs) x = u(rng);
        std::sort(xs.begin(), xs.end());
    }

    SyntheticSample out;
    out.x = Eigen::Map<const Eigen::VectorXd>(xs.data(), spec.n);
    out.y_true = out.x.unaryExpr([](double x) { return appendix_a_function(x); });
    out.y = out.y_true;
    if (spec.sigma > 0.0) {
        std::normal_distribution<double> noise(spec.mu, spec.sigma);
        for (Eigen::Index i = 0; i < out.y.size(); ++i) out.y[i] += noise(rng);
    } else {
        out.y.array() += spec.mu;
    }
    return out;
}

KnnSweep run_appendix_a(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const std::vector<int>& ks)
{
    if (x.size() != y.size()) throw DimensionMismatchError("run_appendix_a: x and y lengths differ");
    for (int k : ks)
        if (k < 1 || k >= x.size())
            throw DomainError("run_appendix_a: k = " + std::to_string(k) + " must be in [1, n)");

    const Eigen::MatrixXd X = x; // one feature column
    KnnSweep sweep;
    sweep.ks = ks;
    sweep.predictions.resize(x.size(), static_cast<Eigen::Index>(ks.size()));
    for (std::size_t c = 0; c < ks.size(); ++c) {
        const KnnConfig cfg{ks[c], PNorm{1.0}, true};
        sweep.predictions.col(static_cast<Eigen::Index>(c)) = knn_predict_in_sample(X, y, cfg);
        sweep.metrics.push_back(metrics_allow_constant(y, sweep.predictions.col(static_cast<Eigen::Index>(c))));
    }
    return sweep;
}

Eigen::MatrixXd generate_sparse_benchmark(int n, int d, double sparsity, std::uint64_t seed)
{
    if (n < 2 || d < 2) throw DomainError("sparse benchmark: n and d must be >= 2");
    if (!(sparsity > 0.0 && sparsity < 1.0)) throw DomainError("sparse benchmark: sparsity must be in (0, 1)");
    // guard against (1 - 0.7) * 10 = 3.0000000000000004 rounding up to 4
    const int nnz = std::clamp(static_cast<int>(std::ceil((1.0 - sparsity) * d - 1e-9)), 1, d);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> value(0.0, 1.0);
    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(n, d);
    std::vector<int> positions(static_cast<std::size_t>(d));
    for (int r = 0; r < n; ++r) {
        std::iota(positions.begin(), positions.end(), 0);
        // partial Fisher-Yates: the first nnz slots become the support
        for (int i = 0; i < nnz; ++i) {
            std::uniform_int_distribution<int> pick(i, d - 1);
            std::swap(positions[static_cast<std::size_t>(i)], positions[static_cast<std::size_t>(pick(rng))]);
            X(r, positions[static_cast<std::size_t>(i)]) = 1.0 - value(rng); // (0, 1]
        }
    }
    return X;
}

} // namespace matsim

#include "matsim/similarity.hpp"

#include "matsim/io.hpp"

#include <algorithm>
#include <limits>

namespace matsim {

std::string measure_name(const Measure& m)
{
    struct Namer {
        std::string operator()(const Hamming&) const { return "hamming"; }
        std::string operator()(const PNorm& p) const
        {
            if (p.p == std::floor(p.p)) return "l" + std::to_string(static_cast<int>(p.p));
            return "l" + format_double(p.p);
        }
        std::string operator()(const Cosine&) const { return "cosine"; }
        std::string operator()(const BrayCurtis&) const { return "braycurtis"; }
    };
    return std::visit(Namer{}, m);
}

Measure parse_measure(std::string_view name)
{
    if (name == "hamming") return Hamming{};
    if (name == "cosine") return Cosine{};
    if (name == "braycurtis") return BrayCurtis{};
    if (name.size() > 1 && name.front() == 'l') {
        try {
            std::size_t used = 0;
            const std::string rest(name.substr(1));
            const double p = std::stod(rest, &used);
            if (used == rest.size() && p >= 1.0) return PNorm{p};
        } catch (const std::exception&) {
        }
    }
    throw DomainError("unknown measure '" + std::string(name) + "'");
}

AffinityMatrix affinity_matrix(const Eigen::MatrixXd& X, const Measure& m)
{
    const Eigen::Index n = X.rows();
    if (n < 1) throw DomainError("affinity_matrix: need at least one sample");
    AffinityMatrix A{Eigen::MatrixXd::Zero(n, n), m};
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            try {
                A.values(i, j) = A.values(j, i) = distance(m, X.row(i), X.row(j));
            } catch (const DomainError& e) {
                throw DomainError(std::string(e.what()) + " (pair " + std::to_string(i) + ", " + std::to_string(j) +
                                  ")");
            }
        }
    }
    return A;
}

Eigen::VectorXd upper_triangle(const Eigen::MatrixXd& A)
{
    const Eigen::Index n = A.rows();
    Eigen::VectorXd out(n * (n - 1) / 2);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) out[k++] = A(i, j);
    return out;
}

double pearson(const Eigen::VectorXd& a, const Eigen::VectorXd& b)
{
    if (a.size() != b.size()) throw DimensionMismatchError("pearson: length mismatch");
    if (a.size() < 2) throw DomainError("pearson: need at least two values");
    const Eigen::ArrayXd da = a.array() - a.mean();
    const Eigen::ArrayXd db = b.array() - b.mean();
    const double saa = (da * da).sum();
    const double sbb = (db * db).sum();
    if (saa == 0.0 || sbb == 0.0) throw DomainError("pearson: zero variance input");
    return std::clamp((da * db).sum() / std::sqrt(saa * sbb), -1.0, 1.0);
}

double distinctiveness_correlation(const AffinityMatrix& measured, const AffinityMatrix& hamming)
{
    if (measured.values.rows() < 3) throw DomainError("distinctiveness_correlation: need at least 3 samples");
    return pearson(upper_triangle(measured.values), upper_triangle(hamming.values));
}

double distinctiveness_correlation(const Eigen::MatrixXd& X, const Measure& m)
{
    if (X.rows() < 3) throw DomainError("distinctiveness_correlation: need at least 3 samples");
    return distinctiveness_correlation(affinity_matrix(X, m), affinity_matrix(X, Hamming{}));
}

double avg_neighbor_count(const AffinityMatrix& A, double eps)
{
    const Eigen::Index n = A.values.rows();
    if (n < 2) throw DomainError("avg_neighbor_count: need at least 2 samples");
    if (!(eps >= 0.0)) throw DomainError("avg_neighbor_count: eps must be >= 0");
    double total = 0.0;
    for (Eigen::Index q = 0; q < n; ++q) {
        double dmin = std::numeric_limits<double>::infinity();
        for (Eigen::Index p = 0; p < n; ++p)
            if (p != q) dmin = std::min(dmin, A.values(q, p));
        const double radius = (1.0 + eps) * dmin;
        Eigen::Index count = 0;
        for (Eigen::Index p = 0; p < n; ++p)
            if (p != q && A.values(q, p) <= radius) ++count;
        total += static_cast<double>(count);
    }
    return total / static_cast<double>(n);
}

double avg_neighbor_count(const Eigen::MatrixXd& X, const Measure& m, double eps)
{
    if (X.rows() < 2) throw DomainError("avg_neighbor_count: need at least 2 samples");
    return avg_neighbor_count(affinity_matrix(X, m), eps);
}

double data_variance(const Eigen::MatrixXd& X)
{
    if (X.rows() < 2) throw DomainError("data_variance: need at least 2 samples");
    if (X.cols() < 1) throw DomainError("data_variance: need at least one feature");
    const Eigen::RowVectorXd mean = X.colwise().mean();
    const Eigen::RowVectorXd var = (X.rowwise() - mean).array().square().colwise().mean();
    return var.mean();
}

} // namespace matsim

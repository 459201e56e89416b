#pragma once

#include "matsim/evaluation.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace matsim {

enum class Sampling { UniformRandom, Grid };

struct SyntheticSpec {
    int n = 200;
    double lo = 0.0;
    double hi = 5.0;
    double mu = 0.0;
    double sigma = 0.1;
    std::uint64_t seed = 7;
    Sampling sampling = Sampling::UniformRandom;
};

// exp(-x) + cos(1.2 pi x)
double appendix_a_function(double x);

struct SyntheticSample {
    Eigen::VectorXd x;      // ascending
    Eigen::VectorXd y_true; // noiseless function values
    Eigen::VectorXd y;      // with N(mu, sigma^2) noise
};

// Deterministic in spec.seed. Throws DomainError for an invalid spec.
SyntheticSample generate_appendix_a(const SyntheticSpec& spec);

struct KnnSweep {
    std::vector<int> ks;
    Eigen::MatrixXd predictions; // n x ks.size()
    std::vector<Metrics> metrics; // against the observed y; r2 NaN if y is constant
};

// Leave-one-out KNN at every sample with |x_i - x_j| as the distance.
// Throws DomainError if any k >= n.
KnnSweep run_appendix_a(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const std::vector<int>& ks = {4, 8, 10});

// n rows of length d, each with ceil((1 - sparsity) d) nonzeros drawn from
// (0, 1] at distinct random positions.
Eigen::MatrixXd generate_sparse_benchmark(int n, int d, double sparsity, std::uint64_t seed);

} // namespace matsim

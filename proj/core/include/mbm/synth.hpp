#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mbm/hurst.hpp"

namespace mbm {

/// One realized trajectory on the uniform grid {i/n}, values[0] = 0.
struct PathSample {
    int n = 0;
    std::vector<double> values;  // size n+1
    std::string hurst_spec;
    std::uint64_t seed = 0;
    int replicate = 0;
};

/// Covariance matrix [R_h(i/n, j/n)] for grid indices 1..n. Index 0 is
/// dropped (zero-variance row) and re-inserted as the constant 0 in
/// PathSample. Exactly symmetric by construction.
Eigen::MatrixXd build_cov_matrix(const HurstFunction& f, int n);

/// Lower-triangular L with L L^T = M. On factorization failure, diagonal
/// jitter 1e-12 * max(diag) is added and escalated x10 up to 3 times;
/// throws NotPositiveSemidefinite after that.
Eigen::MatrixXd cholesky_factor(const Eigen::MatrixXd& M);

/// Factorizes once, then samples any number of replicates; sampling is
/// read-only and safe to call concurrently.
class PathSynthesizer {
public:
    PathSynthesizer(const HurstFunction& f, int n);

    PathSample sample(std::uint64_t master_seed, int replicate) const;

    int n() const { return n_; }
    const Eigen::MatrixXd& factor() const { return chol_; }

private:
    int n_;
    std::string spec_;
    Eigen::MatrixXd chol_;
};

PathSample sample_path(const HurstFunction& f, int n, std::uint64_t master_seed,
                       int replicate);

void write_path_csv(std::ostream& out, const PathSample& path);
PathSample read_path_csv(std::istream& in);

}  // namespace mbm

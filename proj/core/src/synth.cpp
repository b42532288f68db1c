#include "mbm/synth.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "mbm/detail/format.hpp"
#include "mbm/errors.hpp"
#include "mbm/kernel.hpp"
#include "mbm/rng.hpp"

namespace mbm {

Eigen::MatrixXd build_cov_matrix(const HurstFunction& f, int n) {
    if (n < 1) throw std::domain_error("build_cov_matrix: n must be >= 1");
    KernelGrid grid(f, n);
    Eigen::MatrixXd M(n, n);
    for (int i = 1; i <= n; ++i) {
        for (int j = i; j <= n; ++j) {
            const double v = grid.r(i, j);
            M(i - 1, j - 1) = v;
            M(j - 1, i - 1) = v;
        }
    }
    return M;
}

Eigen::MatrixXd cholesky_factor(const Eigen::MatrixXd& M) {
    const double max_diag = M.diagonal().maxCoeff();
    double jitter = 0.0;
    for (int attempt = 0; attempt <= 3; ++attempt) {
        Eigen::MatrixXd A = M;
        if (jitter > 0.0) A.diagonal().array() += jitter;
        Eigen::LLT<Eigen::MatrixXd> llt(A);
        if (llt.info() == Eigen::Success)
            return llt.matrixL();
        jitter = (jitter == 0.0) ? 1e-12 * max_diag : 10.0 * jitter;
    }
    throw NotPositiveSemidefinite(
        "cholesky_factor: matrix not positive definite after jitter escalation");
}

PathSynthesizer::PathSynthesizer(const HurstFunction& f, int n)
    : n_(n), spec_(f.spec_string()), chol_(cholesky_factor(build_cov_matrix(f, n))) {
    if (n < 2) throw std::domain_error("PathSynthesizer: n must be >= 2");
}

PathSample PathSynthesizer::sample(std::uint64_t master_seed, int replicate) const {
    CounterRng rng(master_seed, static_cast<std::uint64_t>(replicate));
    Eigen::VectorXd z(n_);
    for (int i = 0; i < n_; ++i) z(i) = rng.normal(static_cast<std::uint64_t>(i));
    const Eigen::VectorXd v = chol_.triangularView<Eigen::Lower>() * z;
    PathSample path;
    path.n = n_;
    path.hurst_spec = spec_;
    path.seed = master_seed;
    path.replicate = replicate;
    path.values.resize(n_ + 1);
    path.values[0] = 0.0;
    for (int i = 0; i < n_; ++i) path.values[i + 1] = v(i);
    return path;
}

PathSample sample_path(const HurstFunction& f, int n, std::uint64_t master_seed,
                       int replicate) {
    return PathSynthesizer(f, n).sample(master_seed, replicate);
}

void write_path_csv(std::ostream& out, const PathSample& path) {
    out << "# hurst=" << path.hurst_spec << "\n";
    out << "# n=" << path.n << "\n";
    out << "# seed=" << path.seed << "\n";
    out << "# replicate=" << path.replicate << "\n";
    out << "t,value\n";
    for (int i = 0; i <= path.n; ++i) {
        out << detail::fmt17(static_cast<double>(i) / path.n) << "," << detail::fmt17(path.values[i])
            << "\n";
    }
}

PathSample read_path_csv(std::istream& in) {
    PathSample path;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            std::string key = line.substr(1, eq - 1);
            key.erase(0, key.find_first_not_of(' '));
            key.erase(key.find_last_not_of(' ') + 1);
            const std::string val = line.substr(eq + 1);
            if (key == "hurst") path.hurst_spec = val;
            else if (key == "seed") path.seed = std::strtoull(val.c_str(), nullptr, 10);
            else if (key == "replicate") path.replicate = std::atoi(val.c_str());
            continue;
        }
        if (!header_seen) {
            if (line != "t,value")
                throw IoError("path CSV: expected header 't,value', got '" + line + "'");
            header_seen = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw IoError("path CSV: malformed row '" + line + "'");
        char* end = nullptr;
        const std::string field = line.substr(comma + 1);
        const double v = std::strtod(field.c_str(), &end);
        if (end == field.c_str() || *end != '\0')
            throw IoError("path CSV: malformed value '" + field + "'");
        path.values.push_back(v);
    }
    if (!header_seen || path.values.size() < 2)
        throw IoError("path CSV: no data rows");
    path.n = static_cast<int>(path.values.size()) - 1;
    return path;
}

}  // namespace mbm

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include "mipat/counting.hpp"
#include "mipat/error.hpp"
#include "mipat/linalg.hpp"
#include "mipat/partition.hpp"

namespace mipat {

/**
 * A reproducible random stream keyed by (seed, stream id). Two streams with
 * the same key produce the same sequence no matter which thread runs them,
 * so each independent task (simulation run, null replicate) gets its own id.
 *
 * One logical task at a time: the stream carries mutable engine state.
 */
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                          0x6d697061u};
        engine_.seed(seq);
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1).
    double uniform_open() {
        double u;
        do u = uniform(); while (u == 0.0);
        return u;
    }

    /// Uniform integer in [0, bound), exact (rejection of the biased tail).
    std::uint64_t uniform_below(std::uint64_t bound) {
        if (bound == 0) throw invalid_input("uniform_below: empty range");
        const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
        std::uint64_t x;
        do x = engine_(); while (x >= limit);
        return x % bound;
    }

private:
    friend double sample_standard_normal(RngStream&);

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Marsaglia polar method; the second variate of each pair is cached.
inline double sample_standard_normal(RngStream& rng) {
    if (rng.has_spare_) {
        rng.has_spare_ = false;
        return rng.spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * rng.uniform() - 1.0;
        v = 2.0 * rng.uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    rng.spare_ = v * f;
    rng.has_spare_ = true;
    return u * f;
}

/// Gamma(shape, 1). Marsaglia-Tsang squeeze for shape >= 1; shape < 1 is
/// boosted via Gamma(shape + 1) * U^(1/shape).
inline double sample_gamma(double shape, RngStream& rng) {
    if (!(shape > 0.0) || !std::isfinite(shape)) throw invalid_input("gamma shape must be > 0, got " + std::to_string(shape));
    if (shape < 1.0) {
        const double g = sample_gamma(shape + 1.0, rng);
        return g * std::pow(rng.uniform_open(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    while (true) {
        double x, v;
        do {
            x = sample_standard_normal(rng);
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform_open();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

/// Chi-squared with `df` degrees of freedom: 2 * Gamma(df / 2).
inline double sample_chi_squared(double df, RngStream& rng) { return 2.0 * sample_gamma(0.5 * df, rng); }

/**
 * Draws W ~ Wishart(I, dim + 1) by the Bartlett construction and rescales it
 * to a correlation matrix D^(-1/2) W D^(-1/2). With dim + 1 degrees of
 * freedom every off-diagonal entry is marginally uniform on (-1, 1).
 */
inline Matrix sample_wishart_correlation(std::size_t dim, RngStream& rng) {
    if (dim == 0) throw invalid_input("wishart dimension must be >= 1");
    if (dim == 1) return Matrix::identity(1);
    const double df = static_cast<double>(dim + 1);
    Matrix l(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) {
        l(i, i) = std::sqrt(sample_chi_squared(df - static_cast<double>(i), rng));
        for (std::size_t j = 0; j < i; ++j) l(i, j) = sample_standard_normal(rng);
    }
    Matrix w(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            double s = 0.0;
            for (std::size_t p = 0; p <= j; ++p) s += l(i, p) * l(j, p);
            w(i, j) = s;
            w(j, i) = s;
        }
    Matrix r(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) {
        r(i, i) = 1.0;
        for (std::size_t j = 0; j < i; ++j) {
            const double v = w(i, j) / std::sqrt(w(i, i) * w(j, j));
            r(i, j) = v;
            r(j, i) = v;
        }
    }
    return r;
}

/// k i.i.d. rows from N(0, covariance), via the Cholesky factor.
inline DataMatrix sample_mvn(const Matrix& covariance, std::size_t k, RngStream& rng) {
    const Matrix l = cholesky(covariance);
    const std::size_t n = covariance.rows();
    Matrix out(k, n);
    std::vector<double> z(n);
    for (std::size_t s = 0; s < k; ++s) {
        for (double& zi : z) zi = sample_standard_normal(rng);
        for (std::size_t i = 0; i < n; ++i) {
            double v = 0.0;
            for (std::size_t j = 0; j <= i; ++j) v += l(i, j) * z[j];
            out(s, i) = v;
        }
    }
    return DataMatrix(std::move(out));
}

/**
 * Uniform draw among the S(n, K) partitions of {1..n} with exactly K blocks.
 * Walking down from the last element: it is a singleton with probability
 * S(m-1, K-1) / S(m, K), otherwise it joins one of the K blocks of a
 * partition of the first m - 1 elements, each with equal probability. The
 * choices use exact integer draws.
 */
inline Partition random_partition_with_k_blocks(std::size_t n, std::size_t blocks, RngStream& rng) {
    if (n == 0 || blocks < 1 || blocks > n)
        throw invalid_input("random partition: need 1 <= K <= n, got n = " + std::to_string(n) + ", K = " + std::to_string(blocks));
    // decisions[m] for element m (0-based): -1 = opens a new block, otherwise
    // the index (among the blocks present at that point) it joins.
    std::vector<long> decision(n, -1);
    std::size_t k = blocks;
    for (std::size_t m = n; m >= 1; --m) {
        if (k == m) break;  // everything left is a singleton
        if (k == 1) {
            for (std::size_t e = 0; e < m; ++e) decision[e] = e == 0 ? -1 : 0;
            break;
        }
        const std::uint64_t total = stirling2(static_cast<unsigned>(m), static_cast<unsigned>(k));
        const std::uint64_t alone = stirling2(static_cast<unsigned>(m - 1), static_cast<unsigned>(k - 1));
        if (rng.uniform_below(total) < alone) {
            decision[m - 1] = -1;
            --k;
        } else {
            decision[m - 1] = static_cast<long>(rng.uniform_below(k));
        }
    }
    // Replay forwards. "Join block j" refers to blocks ordered by creation.
    std::vector<int> labels(n);
    int created = 0;
    for (std::size_t e = 0; e < n; ++e) labels[e] = decision[e] < 0 ? created++ : static_cast<int>(decision[e]);
    return Partition::from_labels(labels);
}

} // namespace mipat

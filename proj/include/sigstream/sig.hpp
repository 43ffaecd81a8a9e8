#ifndef SIGSTREAM_SIG_HPP
#define SIGSTREAM_SIG_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace sigstream::sig {

// Hard caps on truncation depth and level size; iterated-integral
// dimensionality grows as d^m.
inline constexpr int kMaxDepth = 6;
inline constexpr std::int64_t kMaxLevelSize = 100000;

/// A piecewise-linear path: F vertices in R^d, row-major storage.
struct PiecewiseLinearPath {
    int dim = 0;
    std::vector<double> points;  // vertex_count() x dim

    PiecewiseLinearPath() = default;
    PiecewiseLinearPath(int d, std::vector<double> pts);

    int vertex_count() const { return dim > 0 ? static_cast<int>(points.size()) / dim : 0; }
    std::span<const double> vertex(int i) const {
        return {points.data() + static_cast<std::size_t>(i) * dim, static_cast<std::size_t>(dim)};
    }

    // F >= 2, d >= 1, all coordinates finite.
    void validate() const;
};

/// Truncated signature: levels 1..depth, level k holds dim^k coefficients
/// in lexicographic multi-index order with i_1 varying slowest, so the
/// offset of word (i_1,...,i_k) is its base-dim positional encoding.
/// The level-0 coefficient is 1 by convention and never stored.
struct TruncatedSignature {
    int dim = 0;
    int depth = 0;
    std::vector<std::vector<double>> levels;

    std::size_t coefficient_count() const;
    std::size_t word_index(std::span<const int> word) const;
    double at(std::span<const int> word) const;
};

/// Per-family truncation depths. Defaults follow the spatial/temporal
/// sweep optimum: m_T=4, m_S=2, m_T_S=3.
struct SigDepthConfig {
    int m_s = 2;
    int m_t = 4;
    int m_t_s = 3;

    void validate() const;  // each in [1, 6]
};

/// Number of coefficients of a depth-m signature in R^d: d + d^2 + ... + d^m.
std::int64_t sig_dimension(int d, int m);

/// Signature of the straight segment start -> end: the level-k coefficient
/// for word (i_1..i_k) is (1/k!) * prod_j (end[i_j] - start[i_j]).
TruncatedSignature segment_signature(std::span<const double> start, std::span<const double> end,
                                     int m);

/// Chen's identity: truncated tensor-algebra product of a and b, equal to
/// the signature of the concatenated path when a and b are path signatures.
TruncatedSignature chen_combine(const TruncatedSignature& a, const TruncatedSignature& b);

/// Signature of a piecewise-linear path: left fold of chen_combine over the
/// segment signatures of consecutive vertex pairs.
TruncatedSignature path_signature(const PiecewiseLinearPath& path, int m);

/// Append a strictly monotone time coordinate j/(F-1) in [0, 1]; output
/// dimension is d+1. Applying twice appends two time coordinates.
PiecewiseLinearPath time_augment(const PiecewiseLinearPath& path);

/// Shuffle-product defect sig[w1]*sig[w2] - sum over shuffles of (w1, w2);
/// zero (up to rounding) whenever sig is an exact path signature.
/// Words use 0-based letters in [0, dim).
double shuffle_residual(const TruncatedSignature& sig, std::span<const int> w1,
                        std::span<const int> w2);

}  // namespace sigstream::sig

#endif

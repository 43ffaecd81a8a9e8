#include "sigstream/sig.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sigstream::sig {

namespace {

std::int64_t checked_pow(int d, int k) {
    std::int64_t p = 1;
    for (int i = 0; i < k; ++i) {
        p *= d;
        if (p > kMaxLevelSize) {
            throw std::domain_error("signature level size d^" + std::to_string(k) + " exceeds " +
                                    std::to_string(kMaxLevelSize) + " (d=" + std::to_string(d) +
                                    ")");
        }
    }
    return p;
}

void check_depth(int d, int m) {
    if (d < 1) throw std::domain_error("signature dimension must be >= 1");
    if (m < 1) throw std::domain_error("signature depth must be >= 1");
    if (m > kMaxDepth) {
        throw std::domain_error("signature depth " + std::to_string(m) + " exceeds cap " +
                                std::to_string(kMaxDepth));
    }
    checked_pow(d, m);
}

// result += a (x) b restricted to the cross terms of level n, i.e. the
// splits with nonempty halves. result may alias a copy of a; levels are
// written top-down so lower levels of the aliased copy are still intact.
void accumulate_cross_terms(TruncatedSignature& result, const TruncatedSignature& a,
                            const TruncatedSignature& b) {
    const int m = a.depth;
    for (int level = m; level >= 2; --level) {
        auto& dest_level = result.levels[level - 1];
        for (int left = level - 1; left >= 1; --left) {
            const int right = level - left;
            const auto& la = a.levels[left - 1];
            const auto& lb = b.levels[right - 1];
            std::size_t dest = 0;
            for (double av : la) {
                for (double bv : lb) dest_level[dest++] += av * bv;
            }
        }
    }
}

void append_shuffle_values(const TruncatedSignature& sig, std::span<const int> w1,
                           std::span<const int> w2, std::vector<int>& word, std::size_t p1,
                           std::size_t p2, double& total) {
    if (p1 == w1.size() && p2 == w2.size()) {
        total += sig.at(word);
        return;
    }
    if (p1 < w1.size()) {
        word.push_back(w1[p1]);
        append_shuffle_values(sig, w1, w2, word, p1 + 1, p2, total);
        word.pop_back();
    }
    if (p2 < w2.size()) {
        word.push_back(w2[p2]);
        append_shuffle_values(sig, w1, w2, word, p1, p2 + 1, total);
        word.pop_back();
    }
}

}  // namespace

PiecewiseLinearPath::PiecewiseLinearPath(int d, std::vector<double> pts)
    : dim(d), points(std::move(pts)) {
    if (dim < 1) throw std::invalid_argument("path dimension must be >= 1");
    if (points.size() % static_cast<std::size_t>(dim) != 0) {
        throw std::invalid_argument("path point count not a multiple of dimension");
    }
}

void PiecewiseLinearPath::validate() const {
    if (dim < 1) throw std::invalid_argument("path dimension must be >= 1");
    if (vertex_count() < 2) throw std::invalid_argument("path needs at least 2 vertices");
    for (double v : points) {
        if (!std::isfinite(v)) throw std::invalid_argument("path has non-finite coordinate");
    }
}

std::size_t TruncatedSignature::coefficient_count() const {
    std::size_t n = 0;
    for (const auto& level : levels) n += level.size();
    return n;
}

std::size_t TruncatedSignature::word_index(std::span<const int> word) const {
    std::size_t idx = 0;
    for (int letter : word) {
        if (letter < 0 || letter >= dim) throw std::out_of_range("word letter outside [0, dim)");
        idx = idx * static_cast<std::size_t>(dim) + static_cast<std::size_t>(letter);
    }
    return idx;
}

double TruncatedSignature::at(std::span<const int> word) const {
    if (word.empty()) return 1.0;
    if (static_cast<int>(word.size()) > depth) {
        throw std::out_of_range("word longer than truncation depth");
    }
    return levels[word.size() - 1][word_index(word)];
}

void SigDepthConfig::validate() const {
    for (int m : {m_s, m_t, m_t_s}) {
        if (m < 1 || m > kMaxDepth) {
            throw std::invalid_argument("truncation depth must be in [1, " +
                                        std::to_string(kMaxDepth) + "]");
        }
    }
}

std::int64_t sig_dimension(int d, int m) {
    if (d < 1) throw std::domain_error("sig_dimension: d must be >= 1");
    if (m < 1) throw std::domain_error("sig_dimension: m must be >= 1");
    std::int64_t total = 0;
    std::int64_t p = 1;
    for (int k = 1; k <= m; ++k) {
        if (p > (std::int64_t{1} << 62) / d) throw std::overflow_error("sig_dimension overflow");
        p *= d;
        total += p;
    }
    return total;
}

TruncatedSignature segment_signature(std::span<const double> start, std::span<const double> end,
                                     int m) {
    if (start.size() != end.size() || start.empty()) {
        throw std::invalid_argument("segment endpoints must have equal nonzero dimension");
    }
    const int d = static_cast<int>(start.size());
    check_depth(d, m);

    TruncatedSignature s;
    s.dim = d;
    s.depth = m;
    s.levels.resize(m);
    auto& first = s.levels[0];
    first.resize(d);
    for (int i = 0; i < d; ++i) first[i] = end[i] - start[i];
    for (int k = 2; k <= m; ++k) {
        const auto& prev = s.levels[k - 2];
        auto& cur = s.levels[k - 1];
        cur.resize(prev.size() * static_cast<std::size_t>(d));
        std::size_t out = 0;
        for (double pv : prev) {
            for (int i = 0; i < d; ++i) cur[out++] = pv * first[i] / k;
        }
    }
    return s;
}

TruncatedSignature chen_combine(const TruncatedSignature& a, const TruncatedSignature& b) {
    if (a.dim != b.dim || a.depth != b.depth) {
        throw std::invalid_argument("chen_combine: mismatched dimension or depth");
    }
    TruncatedSignature result = a;
    accumulate_cross_terms(result, a, b);
    // empty-word splits: 1 (x) b[n] and a[n] (x) 1
    for (int level = 1; level <= a.depth; ++level) {
        auto& dest = result.levels[level - 1];
        const auto& src = b.levels[level - 1];
        for (std::size_t i = 0; i < dest.size(); ++i) dest[i] += src[i];
    }
    return result;
}

TruncatedSignature path_signature(const PiecewiseLinearPath& path, int m) {
    path.validate();
    check_depth(path.dim, m);
    const int segments = path.vertex_count() - 1;
    TruncatedSignature acc = segment_signature(path.vertex(0), path.vertex(1), m);
    for (int i = 1; i < segments; ++i) {
        acc = chen_combine(acc, segment_signature(path.vertex(i), path.vertex(i + 1), m));
    }
    return acc;
}

PiecewiseLinearPath time_augment(const PiecewiseLinearPath& path) {
    path.validate();
    const int f = path.vertex_count();
    const int d = path.dim;
    PiecewiseLinearPath out;
    out.dim = d + 1;
    out.points.reserve(static_cast<std::size_t>(f) * (d + 1));
    for (int j = 0; j < f; ++j) {
        auto v = path.vertex(j);
        out.points.insert(out.points.end(), v.begin(), v.end());
        out.points.push_back(static_cast<double>(j) / (f - 1));
    }
    return out;
}

double shuffle_residual(const TruncatedSignature& sig, std::span<const int> w1,
                        std::span<const int> w2) {
    if (w1.empty() || w2.empty()) throw std::invalid_argument("shuffle words must be nonempty");
    if (static_cast<int>(w1.size() + w2.size()) > sig.depth) {
        throw std::invalid_argument("shuffle word lengths exceed truncation depth");
    }
    double shuffled = 0.0;
    std::vector<int> word;
    word.reserve(w1.size() + w2.size());
    append_shuffle_values(sig, w1, w2, word, 0, 0, shuffled);
    return sig.at(w1) * sig.at(w2) - shuffled;
}

}  // namespace sigstream::sig

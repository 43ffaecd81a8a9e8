#ifndef SIGSTREAM_TESTS_RIEMANN_ORACLE_HPP
#define SIGSTREAM_TESTS_RIEMANN_ORACLE_HPP

// Independent oracle for iterated integrals: composed trapezoid sums on a
// fine uniform grid over each segment. Deliberately avoids the segment
// closed form and Chen's identity so it can check them.

#include <span>
#include <vector>

#include "sigstream/sig.hpp"

namespace sigtest {

// S^{w} of the path as the nested integral of the word's letters,
// integrating level by level: g_0 = 1, g_j(t) = int g_{j-1} dP^{w_j}.
inline double riemann_word_value(const sigstream::sig::PiecewiseLinearPath& path,
                                 std::span<const int> word, int steps_per_segment = 3000) {
    const int d = path.dim;
    const int f = path.vertex_count();
    const int n_pts = (f - 1) * steps_per_segment + 1;

    // grid coordinates per letter use, filled lazily per level
    std::vector<double> g_prev(n_pts, 1.0);
    std::vector<double> g_cur(n_pts, 0.0);
    std::vector<double> coord(n_pts);
    for (int letter : word) {
        for (int seg = 0; seg < f - 1; ++seg) {
            const double a = path.points[static_cast<std::size_t>(seg) * d + letter];
            const double b = path.points[static_cast<std::size_t>(seg + 1) * d + letter];
            for (int s = 0; s < steps_per_segment; ++s) {
                const double t = static_cast<double>(s) / steps_per_segment;
                coord[seg * steps_per_segment + s] = a + t * (b - a);
            }
        }
        coord[n_pts - 1] = path.points[static_cast<std::size_t>(f - 1) * d + letter];

        g_cur[0] = 0.0;
        for (int i = 1; i < n_pts; ++i) {
            g_cur[i] = g_cur[i - 1] +
                       0.5 * (g_prev[i - 1] + g_prev[i]) * (coord[i] - coord[i - 1]);
        }
        std::swap(g_prev, g_cur);
    }
    return g_prev[n_pts - 1];
}

// all words of a level in the library's lexicographic order
inline std::vector<std::vector<int>> words_of_level(int d, int k) {
    std::vector<std::vector<int>> words;
    std::vector<int> word(k, 0);
    while (true) {
        words.push_back(word);
        int pos = k - 1;
        while (pos >= 0 && word[pos] == d - 1) {
            word[pos] = 0;
            --pos;
        }
        if (pos < 0) break;
        ++word[pos];
    }
    return words;
}

inline sigstream::sig::TruncatedSignature riemann_signature(
    const sigstream::sig::PiecewiseLinearPath& path, int m, int steps_per_segment = 3000) {
    sigstream::sig::TruncatedSignature s;
    s.dim = path.dim;
    s.depth = m;
    s.levels.resize(m);
    for (int k = 1; k <= m; ++k) {
        for (const auto& word : words_of_level(path.dim, k)) {
            s.levels[k - 1].push_back(riemann_word_value(path, word, steps_per_segment));
        }
    }
    return s;
}

}  // namespace sigtest

#endif

#ifndef SIGSTREAM_TTM_HPP
#define SIGSTREAM_TTM_HPP

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "sigstream/mat.hpp"

namespace sigstream::ttm {

/// Localization network: input_dim -> hidden (tanh) -> 1. The final layer
/// is zero-initialized so the module starts as the identity transform.
struct LocalizationNet {
    mat::Mat w1;             // input_dim x hidden
    std::vector<double> b1;  // hidden
    std::vector<double> w2;  // hidden
    double b2 = 0.0;

    int input_dim() const { return w1.rows; }
    int hidden_dim() const { return w1.cols; }

    static LocalizationNet init(int input_dim, int hidden, std::mt19937_64& rng);
};

struct LocalizationGrads {
    mat::Mat w1;
    std::vector<double> b1;
    std::vector<double> w2;
    double b2 = 0.0;

    static LocalizationGrads zeros(const LocalizationNet& net);
    void accumulate(const LocalizationGrads& other);
    void scale(double factor);
};

/// Regress the scalar temporal shift from an RC vector.
double ln_forward(const LocalizationNet& net, std::span<const double> input);

/// Per-column interpolation state of one temporal shift. Column x of the
/// frame matrix is reconstructed from source columns floor_col[x] and
/// floor_col[x]+1 with weights (1-alpha[x], alpha[x]); clamped[x] marks
/// columns whose sample point x-delta fell outside [1, F].
struct ShiftCache {
    double delta = 0.0;
    int rows = 0;
    int cols = 0;
    std::vector<double> v_in;       // column-contiguous rows x cols
    std::vector<int> floor_col;     // 0-based source column
    std::vector<double> alpha;      // in [0, 1)
    std::vector<std::uint8_t> clamped;
};

/// Shift the frame axis by delta with linear interpolation; sample points
/// x-delta are clamped to [1, F]. Storage is column-contiguous (a column is
/// one frame), matching the frame-major RC vector layout. delta = 0
/// reproduces the input bitwise.
std::vector<double> temporal_shift(std::span<const double> v_in, int rows, int cols, double delta,
                                   ShiftCache* cache = nullptr);

struct ForwardCache {
    std::vector<double> input;
    std::vector<double> hidden;  // tanh activations
    ShiftCache shift;
};

/// Full module: delta = LN(input), reshape to rows x frames, shift, flatten.
std::vector<double> ttm_forward(std::span<const double> input, int rows, int frames,
                                const LocalizationNet& net, ForwardCache* cache = nullptr);

/// Analytic backward pass. The output column derivative w.r.t. delta is
/// v_in[floor] - v_in[floor+1] on the alpha=0 branch (the convention at
/// integer sample points) and 0 where the sample point is clamped; the
/// shift gradient then flows through the localization net, and the input
/// gradient combines the interpolation scatter with the localization
/// pathway. Requires the cache of the matching forward call.
std::vector<double> ttm_backward(std::span<const double> grad_out, const ForwardCache& cache,
                                 const LocalizationNet& net, LocalizationGrads& grads);

}  // namespace sigstream::ttm

#endif

#include "sigstream/ttm.hpp"

#include <cmath>
#include <stdexcept>

namespace sigstream::ttm {

LocalizationNet LocalizationNet::init(int input_dim, int hidden, std::mt19937_64& rng) {
    if (input_dim < 1 || hidden < 1) {
        throw std::invalid_argument("localization net needs positive dimensions");
    }
    LocalizationNet net;
    net.w1 = mat::Mat(input_dim, hidden);
    const double limit = std::sqrt(6.0 / (input_dim + hidden));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (double& v : net.w1.v) v = dist(rng);
    net.b1.assign(hidden, 0.0);
    // zero final layer: the module starts as the identity shift
    net.w2.assign(hidden, 0.0);
    net.b2 = 0.0;
    return net;
}

LocalizationGrads LocalizationGrads::zeros(const LocalizationNet& net) {
    LocalizationGrads g;
    g.w1 = mat::Mat(net.w1.rows, net.w1.cols);
    g.b1.assign(net.b1.size(), 0.0);
    g.w2.assign(net.w2.size(), 0.0);
    g.b2 = 0.0;
    return g;
}

void LocalizationGrads::accumulate(const LocalizationGrads& other) {
    for (std::size_t i = 0; i < w1.v.size(); ++i) w1.v[i] += other.w1.v[i];
    for (std::size_t i = 0; i < b1.size(); ++i) b1[i] += other.b1[i];
    for (std::size_t i = 0; i < w2.size(); ++i) w2[i] += other.w2[i];
    b2 += other.b2;
}

void LocalizationGrads::scale(double factor) {
    for (double& v : w1.v) v *= factor;
    for (double& v : b1) v *= factor;
    for (double& v : w2) v *= factor;
    b2 *= factor;
}

namespace {

std::vector<double> hidden_activations(const LocalizationNet& net, std::span<const double> input) {
    std::vector<double> z(net.b1.begin(), net.b1.end());
    for (int i = 0; i < net.w1.rows; ++i) {
        const double xi = input[i];
        if (xi == 0.0) continue;
        auto wr = net.w1.row(i);
        for (int j = 0; j < net.w1.cols; ++j) z[j] += xi * wr[j];
    }
    for (double& v : z) v = std::tanh(v);
    return z;
}

}  // namespace

double ln_forward(const LocalizationNet& net, std::span<const double> input) {
    if (static_cast<int>(input.size()) != net.input_dim()) {
        throw std::invalid_argument("ln_forward: input length does not match net");
    }
    const auto h = hidden_activations(net, input);
    double delta = net.b2;
    for (std::size_t j = 0; j < h.size(); ++j) delta += net.w2[j] * h[j];
    if (!std::isfinite(delta)) throw std::runtime_error("ln_forward: non-finite shift");
    return delta;
}

std::vector<double> temporal_shift(std::span<const double> v_in, int rows, int cols, double delta,
                                   ShiftCache* cache) {
    if (rows < 1 || cols < 2) throw std::invalid_argument("temporal_shift: need rows>=1, cols>=2");
    if (v_in.size() != static_cast<std::size_t>(rows) * cols) {
        throw std::invalid_argument("temporal_shift: matrix size mismatch");
    }

    std::vector<double> out(v_in.size());
    if (cache) {
        cache->delta = delta;
        cache->rows = rows;
        cache->cols = cols;
        cache->v_in.assign(v_in.begin(), v_in.end());
        cache->floor_col.assign(cols, 0);
        cache->alpha.assign(cols, 0.0);
        cache->clamped.assign(cols, 0);
    }
    for (int c = 0; c < cols; ++c) {
        // sample point in 1-based frame coordinates, clamped to [1, F]
        double sample = (c + 1) - delta;
        const bool clamped = sample < 1.0 || sample > static_cast<double>(cols);
        if (clamped) sample = sample < 1.0 ? 1.0 : static_cast<double>(cols);
        int fl = static_cast<int>(std::floor(sample));
        double a = sample - fl;
        if (fl >= cols) {
            fl = cols;
            a = 0.0;
        }
        const double* src = v_in.data() + static_cast<std::size_t>(fl - 1) * rows;
        double* dst = out.data() + static_cast<std::size_t>(c) * rows;
        if (a == 0.0) {
            for (int r = 0; r < rows; ++r) dst[r] = src[r];
        } else {
            const double* src2 = src + rows;
            for (int r = 0; r < rows; ++r) dst[r] = (1.0 - a) * src[r] + a * src2[r];
        }
        if (cache) {
            cache->floor_col[c] = fl - 1;
            cache->alpha[c] = a;
            cache->clamped[c] = clamped ? 1 : 0;
        }
    }
    return out;
}

std::vector<double> ttm_forward(std::span<const double> input, int rows, int frames,
                                const LocalizationNet& net, ForwardCache* cache) {
    if (input.size() != static_cast<std::size_t>(rows) * frames) {
        throw std::invalid_argument("ttm_forward: input length does not match rows*frames");
    }
    if (static_cast<int>(input.size()) != net.input_dim()) {
        throw std::invalid_argument("ttm_forward: input length does not match localization net");
    }
    const auto h = hidden_activations(net, input);
    double delta = net.b2;
    for (std::size_t j = 0; j < h.size(); ++j) delta += net.w2[j] * h[j];
    if (!std::isfinite(delta)) throw std::runtime_error("ttm_forward: non-finite shift");

    if (cache) {
        cache->input.assign(input.begin(), input.end());
        cache->hidden = h;
    }
    return temporal_shift(input, rows, frames, delta, cache ? &cache->shift : nullptr);
}

std::vector<double> ttm_backward(std::span<const double> grad_out, const ForwardCache& cache,
                                 const LocalizationNet& net, LocalizationGrads& grads) {
    const int rows = cache.shift.rows;
    const int cols = cache.shift.cols;
    if (rows < 1 || cols < 2 || cache.input.size() != static_cast<std::size_t>(rows) * cols ||
        static_cast<int>(cache.input.size()) != net.input_dim() ||
        static_cast<int>(cache.hidden.size()) != net.hidden_dim()) {
        throw std::invalid_argument("ttm_backward: cache does not match net (stale cache?)");
    }
    if (grad_out.size() != cache.input.size()) {
        throw std::invalid_argument("ttm_backward: gradient length mismatch");
    }

    std::vector<double> grad_input(cache.input.size(), 0.0);
    double grad_delta = 0.0;
    const auto& sc = cache.shift;
    for (int c = 0; c < cols; ++c) {
        const int fl = sc.floor_col[c];
        const double a = sc.alpha[c];
        const double* g = grad_out.data() + static_cast<std::size_t>(c) * rows;
        double* dst = grad_input.data() + static_cast<std::size_t>(fl) * rows;
        if (a == 0.0) {
            for (int r = 0; r < rows; ++r) dst[r] += g[r];
        } else {
            double* dst2 = dst + rows;
            for (int r = 0; r < rows; ++r) {
                dst[r] += (1.0 - a) * g[r];
                dst2[r] += a * g[r];
            }
        }
        // d(output column)/d(delta) = v_floor - v_ceil on the alpha=0 branch;
        // zero where the sample point was clamped or sits at the last frame
        if (!sc.clamped[c] && fl + 1 < cols) {
            const double* v0 = sc.v_in.data() + static_cast<std::size_t>(fl) * rows;
            const double* v1 = v0 + rows;
            for (int r = 0; r < rows; ++r) grad_delta += g[r] * (v0[r] - v1[r]);
        }
    }

    // localization pathway
    grads.b2 += grad_delta;
    std::vector<double> gz(cache.hidden.size());
    for (std::size_t j = 0; j < gz.size(); ++j) {
        grads.w2[j] += grad_delta * cache.hidden[j];
        gz[j] = grad_delta * net.w2[j] * (1.0 - cache.hidden[j] * cache.hidden[j]);
        grads.b1[j] += gz[j];
    }
    for (int i = 0; i < net.w1.rows; ++i) {
        const double xi = cache.input[i];
        auto wr = net.w1.row(i);
        auto gr = grads.w1.row(i);
        double acc = 0.0;
        for (int j = 0; j < net.w1.cols; ++j) {
            gr[j] += xi * gz[j];
            acc += wr[j] * gz[j];
        }
        grad_input[i] += acc;
    }
    return grad_input;
}

}  // namespace sigstream::ttm

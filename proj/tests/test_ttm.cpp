#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "sigstream/ttm.hpp"

using namespace sigstream;

namespace {

ttm::LocalizationNet random_ln(int input_dim, int hidden, std::mt19937_64& rng, double w2_scale) {
    ttm::LocalizationNet net;
    net.w1 = mat::Mat(input_dim, hidden);
    std::uniform_real_distribution<double> dist(-0.5, 0.5);
    for (double& v : net.w1.v) v = dist(rng);
    net.b1.resize(hidden);
    for (double& v : net.b1) v = dist(rng);
    net.w2.resize(hidden);
    for (double& v : net.w2) v = w2_scale * dist(rng);
    net.b2 = w2_scale * dist(rng);
    return net;
}

double shifted_dot(const ttm::LocalizationNet& net, const std::vector<double>& input, int rows,
                   int frames, const std::vector<double>& weights) {
    auto out = ttm::ttm_forward(input, rows, frames, net);
    double total = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) total += weights[i] * out[i];
    return total;
}

// every interpolation sample point must sit away from integers and the
// clamp boundaries so central differences stay on one branch
bool well_separated(double delta, int frames, double margin = 1e-3) {
    for (int x = 1; x <= frames; ++x) {
        const double s = x - delta;
        if (std::abs(s - std::round(s)) < margin) return false;
        if (std::abs(s - 1.0) < margin || std::abs(s - frames) < margin) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("ln_forward closed forms") {
    std::mt19937_64 rng(1);
    auto net = ttm::LocalizationNet::init(6, 4, rng);
    std::vector<double> input{0.3, -0.2, 0.9, 0.1, -0.5, 0.4};
    // zero final layer: identity at init
    CHECK(ttm::ln_forward(net, input) == 0.0);

    ttm::LocalizationNet fixed;
    fixed.w1 = mat::Mat(6, 4);
    fixed.b1.assign(4, 0.0);
    fixed.w2.assign(4, 1.0);
    fixed.b2 = 0.3;
    CHECK(ttm::ln_forward(fixed, input) == doctest::Approx(0.3).epsilon(1e-15));

    std::vector<double> short_input{1.0};
    CHECK_THROWS_AS(ttm::ln_forward(fixed, short_input), std::invalid_argument);
}

TEST_CASE("ln_forward is not permutation invariant unless rows are permuted too") {
    std::mt19937_64 rng(2);
    auto net = random_ln(4, 3, rng, 1.0);
    std::vector<double> input{0.4, -0.7, 0.2, 0.9};
    std::vector<double> permuted{0.9, 0.4, -0.7, 0.2};
    const double d0 = ttm::ln_forward(net, input);
    CHECK(ttm::ln_forward(net, permuted) != d0);

    // permuting W1 rows identically restores the output
    ttm::LocalizationNet pnet = net;
    const int perm[4] = {3, 0, 1, 2};
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 3; ++j) pnet.w1.at(i, j) = net.w1.at(perm[i], j);
    }
    CHECK(ttm::ln_forward(pnet, permuted) == doctest::Approx(d0).epsilon(1e-15));
}

TEST_CASE("temporal_shift matches the interpolation closed forms") {
    std::vector<double> row{1.0, 2.0, 3.0, 4.0};

    auto same = ttm::temporal_shift(row, 1, 4, 0.0);
    CHECK(same == row);

    auto right = ttm::temporal_shift(row, 1, 4, 1.0);
    CHECK(right == std::vector<double>{1.0, 1.0, 2.0, 3.0});

    auto left_half = ttm::temporal_shift(row, 1, 4, -0.5);
    CHECK(left_half == std::vector<double>{1.5, 2.5, 3.5, 4.0});
}

TEST_CASE("temporal_shift applies one shared delta to every row") {
    // column-contiguous 2 x 4 matrix
    std::vector<double> m{1.0, 10.0, 2.0, 20.0, 3.0, 30.0, 4.0, 40.0};
    auto out = ttm::temporal_shift(m, 2, 4, 1.0);
    CHECK(out == std::vector<double>{1.0, 10.0, 1.0, 10.0, 2.0, 20.0, 3.0, 30.0});
}

TEST_CASE("property: integer shifts replicate edges exactly") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const int rows = 1 + static_cast<int>(rng() % 3);
        const int frames = 4 + static_cast<int>(rng() % 6);
        std::vector<double> m(static_cast<std::size_t>(rows) * frames);
        for (double& v : m) v = dist(rng);
        const int k = static_cast<int>(rng() % (2 * frames + 1)) - frames;
        auto out = ttm::temporal_shift(m, rows, frames, static_cast<double>(k));
        for (int c = 0; c < frames; ++c) {
            const int src = std::clamp(c - k, 0, frames - 1);
            for (int r = 0; r < rows; ++r) {
                CHECK(out[static_cast<std::size_t>(c) * rows + r] ==
                      m[static_cast<std::size_t>(src) * rows + r]);
            }
        }
    }
}

TEST_CASE("property: shifted columns are convex combinations of inputs") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::uniform_real_distribution<double> ddist(-8.0, 8.0);
    for (int trial = 0; trial < 30; ++trial) {
        const int rows = 2;
        const int frames = 5;
        std::vector<double> m(rows * frames);
        for (double& v : m) v = dist(rng);
        auto out = ttm::temporal_shift(m, rows, frames, ddist(rng));
        for (int r = 0; r < rows; ++r) {
            double lo = m[r], hi = m[r];
            for (int c = 1; c < frames; ++c) {
                lo = std::min(lo, m[static_cast<std::size_t>(c) * rows + r]);
                hi = std::max(hi, m[static_cast<std::size_t>(c) * rows + r]);
            }
            for (int c = 0; c < frames; ++c) {
                const double v = out[static_cast<std::size_t>(c) * rows + r];
                CHECK(v >= lo - 1e-15);
                CHECK(v <= hi + 1e-15);
            }
        }
    }
}

TEST_CASE("ttm_forward is the identity at init and deterministic") {
    std::mt19937_64 rng(5);
    auto net = ttm::LocalizationNet::init(12, 8, rng);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> input(12);
    for (double& v : input) v = dist(rng);
    auto out = ttm::ttm_forward(input, 3, 4, net);
    CHECK(out == input);

    auto net2 = random_ln(12, 8, rng, 1.0);
    auto a = ttm::ttm_forward(input, 3, 4, net2);
    auto b = ttm::ttm_forward(input, 3, 4, net2);
    CHECK(a == b);
}

TEST_CASE("interior columns recover after an integer round trip") {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const int rows = 2, frames = 8, k = 2;
    std::vector<double> m(rows * frames);
    for (double& v : m) v = dist(rng);
    auto fwd = ttm::temporal_shift(m, rows, frames, static_cast<double>(k));
    auto back = ttm::temporal_shift(fwd, rows, frames, static_cast<double>(-k));
    // boundaries are lost to clamping; interior columns are exact
    for (int c = k; c < frames - k; ++c) {
        for (int r = 0; r < rows; ++r) {
            CHECK(std::abs(back[static_cast<std::size_t>(c) * rows + r] -
                           m[static_cast<std::size_t>(c) * rows + r]) <= 1e-12);
        }
    }
}

TEST_CASE("ttm_backward matches central finite differences") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const int rows = 3, frames = 6, hidden = 5;
    const int input_dim = rows * frames;
    const double h = 1e-5;

    int accepted = 0;
    int attempts = 0;
    double worst = 0.0;
    while (accepted < 50 && attempts < 2000) {
        ++attempts;
        auto net = random_ln(input_dim, hidden, rng, 2.0);
        std::vector<double> input(input_dim);
        for (double& v : input) v = dist(rng);
        const double delta = ttm::ln_forward(net, input);
        if (!well_separated(delta, frames)) continue;
        ++accepted;

        std::vector<double> weights(input_dim);
        for (double& v : weights) v = dist(rng);

        ttm::ForwardCache cache;
        auto out = ttm::ttm_forward(input, rows, frames, net, &cache);
        (void)out;
        auto grads = ttm::LocalizationGrads::zeros(net);
        auto grad_input = ttm::ttm_backward(weights, cache, net, grads);

        auto check_fd = [&](double* param, double analytic) {
            const double saved = *param;
            *param = saved + h;
            const double up = shifted_dot(net, input, rows, frames, weights);
            *param = saved - h;
            const double down = shifted_dot(net, input, rows, frames, weights);
            *param = saved;
            const double fd = (up - down) / (2.0 * h);
            const double denom = std::max({std::abs(analytic), std::abs(fd), 1e-6});
            const double rel = std::abs(analytic - fd) / denom;
            worst = std::max(worst, rel);
            CHECK(rel < 1e-5);
        };

        for (std::size_t i = 0; i < net.w1.v.size(); ++i) check_fd(&net.w1.v[i], grads.w1.v[i]);
        for (std::size_t i = 0; i < net.b1.size(); ++i) check_fd(&net.b1[i], grads.b1[i]);
        for (std::size_t i = 0; i < net.w2.size(); ++i) check_fd(&net.w2[i], grads.w2[i]);
        check_fd(&net.b2, grads.b2);
        for (std::size_t i = 0; i < input.size(); ++i) check_fd(&input[i], grad_input[i]);
    }
    REQUIRE(accepted == 50);
    MESSAGE("worst relative gradient error: ", worst);
}

TEST_CASE("fully clamped shifts receive no delta gradient") {
    std::mt19937_64 rng(8);
    const int rows = 2, frames = 4;
    const int input_dim = rows * frames;
    auto net = random_ln(input_dim, 3, rng, 1.0);
    net.b2 = 10.0;  // |delta| >= F: every sample point clamps
    std::vector<double> input(input_dim);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (double& v : input) v = dist(rng);

    ttm::ForwardCache cache;
    auto out = ttm::ttm_forward(input, rows, frames, net, &cache);
    for (int c = 0; c < frames; ++c) {
        for (int r = 0; r < rows; ++r) CHECK(out[static_cast<std::size_t>(c) * rows + r] == input[r]);
    }

    std::vector<double> weights(input_dim, 1.0);
    auto grads = ttm::LocalizationGrads::zeros(net);
    ttm::ttm_backward(weights, cache, net, grads);
    CHECK(grads.b2 == 0.0);
    for (double v : grads.w2) CHECK(v == 0.0);
    for (double v : grads.w1.v) CHECK(v == 0.0);
}

TEST_CASE("integer sample points use the alpha=0 branch derivative") {
    // delta fixed at 1: column x samples x-1; columns 2..F take the
    // one-sided derivative v_{x-1} - v_x, column 1 is clamped
    ttm::LocalizationNet net;
    net.w1 = mat::Mat(3, 2);
    net.b1.assign(2, 0.0);
    net.w2.assign(2, 0.0);
    net.b2 = 1.0;
    std::vector<double> input{0.7, -0.3, 0.5};

    ttm::ForwardCache cache;
    auto out = ttm::ttm_forward(input, 1, 3, net, &cache);
    CHECK(out == std::vector<double>{0.7, 0.7, -0.3});

    std::vector<double> g{2.0, 3.0, 5.0};
    auto grads = ttm::LocalizationGrads::zeros(net);
    ttm::ttm_backward(g, cache, net, grads);
    const double expected = 3.0 * (0.7 - (-0.3)) + 5.0 * ((-0.3) - 0.5);
    CHECK(grads.b2 == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("ttm_backward rejects mismatched caches") {
    std::mt19937_64 rng(9);
    auto net = random_ln(8, 3, rng, 1.0);
    std::vector<double> input(8, 0.5);
    ttm::ForwardCache cache;
    ttm::ttm_forward(input, 2, 4, net, &cache);
    auto grads = ttm::LocalizationGrads::zeros(net);
    std::vector<double> bad_grad(7, 1.0);
    CHECK_THROWS_AS(ttm::ttm_backward(bad_grad, cache, net, grads), std::invalid_argument);

    auto other_net = random_ln(10, 3, rng, 1.0);
    std::vector<double> g(8, 1.0);
    auto grads2 = ttm::LocalizationGrads::zeros(other_net);
    CHECK_THROWS_AS(ttm::ttm_backward(g, cache, other_net, grads2), std::invalid_argument);
}

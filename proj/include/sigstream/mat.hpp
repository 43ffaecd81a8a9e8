#ifndef SIGSTREAM_MAT_HPP
#define SIGSTREAM_MAT_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace sigstream::mat {

/// Dense row-major matrix of doubles.
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> v;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), v(static_cast<std::size_t>(r) * c, 0.0) {}

    double& at(int r, int c) { return v[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return v[static_cast<std::size_t>(r) * cols + c]; }
    std::span<double> row(int r) {
        return {v.data() + static_cast<std::size_t>(r) * cols, static_cast<std::size_t>(cols)};
    }
    std::span<const double> row(int r) const {
        return {v.data() + static_cast<std::size_t>(r) * cols, static_cast<std::size_t>(cols)};
    }
    void fill(double x) { v.assign(v.size(), x); }
};

/// y = x * w + broadcast(b); x is batch x in, w is in x out.
/// Blocked over the shared dimension so w streams from memory once per call.
void linear_forward(const Mat& x, const Mat& w, std::span<const double> b, Mat& y);

/// dw += x^T * dy; db += column sums of dy.
void linear_grad_params(const Mat& x, const Mat& dy, Mat& dw, std::span<double> db);

/// dx = dy * w^T.
void linear_grad_input(const Mat& dy, const Mat& w, Mat& dx);

}  // namespace sigstream::mat

#endif

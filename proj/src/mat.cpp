#include "sigstream/mat.hpp"

#include <algorithm>
#include <stdexcept>

namespace sigstream::mat {

namespace {
// shared-dimension block sized so a w-block plus an x-block stay cache resident
constexpr int kBlock = 2048;
}  // namespace

void linear_forward(const Mat& x, const Mat& w, std::span<const double> b, Mat& y) {
    if (x.cols != w.rows || static_cast<int>(b.size()) != w.cols) {
        throw std::invalid_argument("linear_forward: shape mismatch");
    }
    y = Mat(x.rows, w.cols);
    for (int r = 0; r < y.rows; ++r) {
        auto yr = y.row(r);
        for (int c = 0; c < y.cols; ++c) yr[c] = b[c];
    }
    for (int i0 = 0; i0 < x.cols; i0 += kBlock) {
        const int i1 = std::min(i0 + kBlock, x.cols);
        for (int r = 0; r < x.rows; ++r) {
            auto xr = x.row(r);
            auto yr = y.row(r);
            for (int i = i0; i < i1; ++i) {
                const double xv = xr[i];
                if (xv == 0.0) continue;
                auto wr = w.row(i);
                for (int c = 0; c < w.cols; ++c) yr[c] += xv * wr[c];
            }
        }
    }
}

void linear_grad_params(const Mat& x, const Mat& dy, Mat& dw, std::span<double> db) {
    if (x.rows != dy.rows || dw.rows != x.cols || dw.cols != dy.cols ||
        static_cast<int>(db.size()) != dy.cols) {
        throw std::invalid_argument("linear_grad_params: shape mismatch");
    }
    for (int r = 0; r < dy.rows; ++r) {
        auto gr = dy.row(r);
        for (int c = 0; c < dy.cols; ++c) db[c] += gr[c];
    }
    for (int i0 = 0; i0 < x.cols; i0 += kBlock) {
        const int i1 = std::min(i0 + kBlock, x.cols);
        for (int r = 0; r < x.rows; ++r) {
            auto xr = x.row(r);
            auto gr = dy.row(r);
            for (int i = i0; i < i1; ++i) {
                const double xv = xr[i];
                if (xv == 0.0) continue;
                auto dwr = dw.row(i);
                for (int c = 0; c < dy.cols; ++c) dwr[c] += xv * gr[c];
            }
        }
    }
}

void linear_grad_input(const Mat& dy, const Mat& w, Mat& dx) {
    if (dy.cols != w.cols) throw std::invalid_argument("linear_grad_input: shape mismatch");
    dx = Mat(dy.rows, w.rows);
    for (int r = 0; r < dy.rows; ++r) {
        auto gr = dy.row(r);
        auto dxr = dx.row(r);
        for (int i = 0; i < w.rows; ++i) {
            auto wr = w.row(i);
            double acc = 0.0;
            for (int c = 0; c < w.cols; ++c) acc += gr[c] * wr[c];
            dxr[i] = acc;
        }
    }
}

}  // namespace sigstream::mat

#include "sigstream/transforms.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sigstream::transforms {

void DyadicConfig::validate() const {
    if (level < 0 || level > kMaxDyadicLevel) {
        throw std::invalid_argument("dyadic level must be in [0, " +
                                    std::to_string(kMaxDyadicLevel) + "]");
    }
}

FrameSequence::FrameSequence(int w, std::vector<double> vals) : width(w), values(std::move(vals)) {
    if (width < 1) throw std::invalid_argument("frame width must be >= 1");
    if (values.size() % static_cast<std::size_t>(width) != 0) {
        throw std::invalid_argument("frame values not a multiple of width");
    }
}

void FrameSequence::validate() const {
    if (width < 1) throw std::invalid_argument("frame width must be >= 1");
    if (frame_count() < 2) throw std::invalid_argument("sequence needs at least 2 frames");
    for (double v : values) {
        if (!std::isfinite(v)) throw std::invalid_argument("sequence has non-finite value");
    }
}

void JointFrames::validate() const {
    if (frames < 1 || joints < 1 || dim < 1) {
        throw std::invalid_argument("skeleton clip needs at least one frame, joint and axis");
    }
    if (coords.size() !=
        static_cast<std::size_t>(frames) * static_cast<std::size_t>(joints) * dim) {
        throw std::invalid_argument("skeleton coordinate count does not match frames*joints*dim");
    }
    for (double v : coords) {
        if (!std::isfinite(v)) throw std::invalid_argument("skeleton has non-finite coordinate");
    }
}

sig::PiecewiseLinearPath lead_lag(std::span<const double> series) {
    const int n = static_cast<int>(series.size());
    if (n < 2) throw std::invalid_argument("lead_lag needs at least 2 samples");
    sig::PiecewiseLinearPath path;
    path.dim = 2;
    path.points.reserve(static_cast<std::size_t>(2 * n - 1) * 2);
    for (int i = 0; i < n; ++i) {
        path.points.push_back(series[i]);
        path.points.push_back(series[i]);
        if (i + 1 < n) {
            path.points.push_back(series[i + 1]);
            path.points.push_back(series[i]);
        }
    }
    return path;
}

std::vector<IndexInterval> dyadic_subpaths(int vertex_count, int dyadic_level) {
    DyadicConfig{dyadic_level}.validate();
    if (vertex_count < 2) throw std::invalid_argument("dyadic_subpaths needs at least 2 vertices");

    std::vector<IndexInterval> intervals;
    intervals.reserve((std::size_t{2} << dyadic_level) - 1);
    for (int level = 0; level <= dyadic_level; ++level) {
        const int pieces = 1 << level;
        int prev = 0;
        for (int j = 1; j <= pieces; ++j) {
            // round-half-up of (j/2^l)*(F-1)
            const int split = static_cast<int>(
                std::floor(static_cast<double>(j) * (vertex_count - 1) / pieces + 0.5));
            if (split <= prev) {
                throw std::invalid_argument(
                    "dyadic level " + std::to_string(level) + " degenerates with " +
                    std::to_string(vertex_count) + " vertices");
            }
            intervals.push_back({prev, split});
            prev = split;
        }
    }
    return intervals;
}

FrameSequence resample(const FrameSequence& seq, int target_frames) {
    seq.validate();
    if (target_frames < 2) throw std::invalid_argument("resample target must be >= 2");
    const int f = seq.frame_count();
    if (f == target_frames) return seq;

    FrameSequence out;
    out.width = seq.width;
    out.values.resize(static_cast<std::size_t>(target_frames) * seq.width);
    if (f < target_frames) {
        // upsample: linear interpolation at uniform positions over the frame axis
        for (int j = 0; j < target_frames; ++j) {
            const double pos = static_cast<double>(j) * (f - 1) / (target_frames - 1);
            const int lo = std::min(static_cast<int>(std::floor(pos)), f - 2);
            const double t = pos - lo;
            auto a = seq.frame(lo);
            auto b = seq.frame(lo + 1);
            double* dst = out.values.data() + static_cast<std::size_t>(j) * seq.width;
            if (t == 0.0) {
                for (int w = 0; w < seq.width; ++w) dst[w] = a[w];
            } else if (t == 1.0) {
                for (int w = 0; w < seq.width; ++w) dst[w] = b[w];
            } else {
                for (int w = 0; w < seq.width; ++w) dst[w] = (1.0 - t) * a[w] + t * b[w];
            }
        }
    } else {
        // downsample: uniform index sampling, round-half-up
        for (int j = 0; j < target_frames; ++j) {
            const int src = static_cast<int>(
                std::floor(static_cast<double>(j) * (f - 1) / (target_frames - 1) + 0.5));
            auto a = seq.frame(src);
            double* dst = out.values.data() + static_cast<std::size_t>(j) * seq.width;
            for (int w = 0; w < seq.width; ++w) dst[w] = a[w];
        }
    }
    return out;
}

JointFrames normalize_skeleton(const JointFrames& clip) {
    clip.validate();
    const std::size_t n = static_cast<std::size_t>(clip.frames) * clip.joints;

    std::vector<double> mean(clip.dim, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (int a = 0; a < clip.dim; ++a) mean[a] += clip.coords[i * clip.dim + a];
    }
    for (int a = 0; a < clip.dim; ++a) mean[a] /= static_cast<double>(n);

    JointFrames out = clip;
    double max_abs = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (int a = 0; a < clip.dim; ++a) {
            double& v = out.coords[i * clip.dim + a];
            v -= mean[a];
            max_abs = std::max(max_abs, std::abs(v));
        }
    }
    if (max_abs > 0.0) {
        for (double& v : out.coords) v /= max_abs;
    }
    return out;
}

}  // namespace sigstream::transforms

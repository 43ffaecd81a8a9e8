#ifndef SIGSTREAM_TRANSFORMS_HPP
#define SIGSTREAM_TRANSFORMS_HPP

#include <span>
#include <vector>

#include "sigstream/sig.hpp"

namespace sigstream::transforms {

inline constexpr int kMaxDyadicLevel = 6;

/// Dyadic decomposition level; a path splits into 2^(level+1)-1 subpaths.
struct DyadicConfig {
    int level = 0;

    void validate() const;  // 0 <= level <= kMaxDyadicLevel
};

/// F frames of equal width, row-major.
struct FrameSequence {
    int width = 0;
    std::vector<double> values;  // frame_count() x width

    FrameSequence() = default;
    FrameSequence(int w, std::vector<double> vals);

    int frame_count() const { return width > 0 ? static_cast<int>(values.size()) / width : 0; }
    std::span<const double> frame(int i) const {
        return {values.data() + static_cast<std::size_t>(i) * width,
                static_cast<std::size_t>(width)};
    }

    // F >= 2, finite values.
    void validate() const;
};

/// Skeleton coordinates: frames x joints x dim, row-major.
struct JointFrames {
    int frames = 0;
    int joints = 0;
    int dim = 0;
    std::vector<double> coords;

    double at(int f, int j, int axis) const {
        return coords[(static_cast<std::size_t>(f) * joints + j) * dim + axis];
    }
    double& at(int f, int j, int axis) {
        return coords[(static_cast<std::size_t>(f) * joints + j) * dim + axis];
    }
    void validate() const;
};

/// Inclusive 0-based vertex interval [begin, end] of a subpath.
struct IndexInterval {
    int begin = 0;
    int end = 0;

    bool operator==(const IndexInterval&) const = default;
};

/// Lift a 1D sequence x_1..x_n to the 2D lead-lag path with 2n-1 vertices
/// (x_i, x_i), (x_{i+1}, x_i), ...; the first coordinate (lead) advances
/// first. Its level-2 signature encodes lagged covariation that a plain 1D
/// path cannot express.
sig::PiecewiseLinearPath lead_lag(std::span<const double> series);

/// Dyadic subpath intervals of a path with vertex_count vertices: for each
/// level l = 0..dyadic_level, the 2^l intervals with split points
/// round-half-up((j/2^l)*(F-1)); 2^(dyadic_level+1)-1 intervals in total,
/// level by level, adjacent intervals sharing endpoints. Throws if any
/// interval degenerates to a single vertex.
std::vector<IndexInterval> dyadic_subpaths(int vertex_count, int dyadic_level);

/// Resample to target frame count: linear interpolation when upsampling,
/// uniform index sampling when downsampling, bitwise identity when equal.
/// Endpoints are always preserved.
FrameSequence resample(const FrameSequence& seq, int target_frames);

/// Center on the clip-global mean joint position, then scale by the
/// clip-global max absolute coordinate so outputs lie in [-1, 1]. A clip
/// with zero extent is centered only.
JointFrames normalize_skeleton(const JointFrames& clip);

}  // namespace sigstream::transforms

#endif

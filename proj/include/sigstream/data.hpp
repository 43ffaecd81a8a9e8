#ifndef SIGSTREAM_DATA_HPP
#define SIGSTREAM_DATA_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sigstream/transforms.hpp"

namespace sigstream::data {

/// One skeleton clip on disk: frames x joints x dim coordinates plus label
/// and metadata.
struct SkeletonSequence {
    std::string id;
    std::optional<int> label;
    std::optional<double> fps;
    std::string source;
    transforms::JointFrames frames;
};

struct DatasetManifest {
    std::vector<std::string> classes;
    std::vector<std::pair<std::string, int>> layout;  // joint name -> index
    std::vector<std::string> train_ids;
    std::vector<std::string> val_ids;
    std::vector<std::string> test_ids;

    void validate(const std::vector<SkeletonSequence>& sequences) const;
};

/// One JSON object per line:
/// {"id": str, "label": int|null, "fps": num|null, "frames": [[[x,y,z],..J],..F]}.
/// Coordinates round-trip losslessly. Parse and schema errors carry the
/// offending line number.
std::vector<SkeletonSequence> load_jsonl(const std::string& path);
void save_jsonl(const std::string& path, const std::vector<SkeletonSequence>& sequences);

DatasetManifest load_manifest(const std::string& path);
void save_manifest(const std::string& path, const DatasetManifest& manifest);

struct AugmentOptions {
    bool temporal = false;
    int temporal_range = 5;
    double noise_sigma = 0.0;
    bool rotation = false;

    bool any() const { return temporal || noise_sigma > 0.0 || rotation; }
};

/// Integer frame shift drawn uniformly from [-range, range], applied with
/// edge replication; the frame count is preserved.
transforms::JointFrames augment_temporal(const transforms::JointFrames& seq, std::mt19937_64& rng,
                                         int range = 5);

/// I.i.d. Gaussian noise per coordinate; sigma = 0 returns the input.
transforms::JointFrames augment_noise(const transforms::JointFrames& seq, std::mt19937_64& rng,
                                      double sigma = 0.001);

/// Rigid rotation of every joint by the given Euler angles, x applied
/// first, then y, then z.
transforms::JointFrames rotate_coords(const transforms::JointFrames& seq, double angle_x,
                                      double angle_y, double angle_z);

/// One random rigid rotation per clip, angles uniform in [-pi/36, pi/36] x
/// [-pi/18, pi/18] x [-pi/36, pi/36], applied in x-then-y-then-z order.
/// No-op (with a one-time warning) unless dim == 3.
transforms::JointFrames augment_rotation(const transforms::JointFrames& seq,
                                         std::mt19937_64& rng);

/// temporal -> rotation -> noise, each gated by its option.
transforms::JointFrames apply_augmentations(const transforms::JointFrames& seq,
                                            const AugmentOptions& opts, std::mt19937_64& rng);

/// Schedule-independent per-sequence stream: mixes (seed, epoch, index).
std::mt19937_64 augment_rng(std::uint64_t seed, std::uint64_t epoch, std::uint64_t index);

}  // namespace sigstream::data

#endif

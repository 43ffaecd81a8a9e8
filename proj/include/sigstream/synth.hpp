#ifndef SIGSTREAM_SYNTH_HPP
#define SIGSTREAM_SYNTH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "sigstream/data.hpp"

namespace sigstream::synth {

inline constexpr int kMaxClasses = 8;

const std::vector<std::string>& class_names();

struct SynthDataset {
    std::vector<data::SkeletonSequence> sequences;
    data::DatasetManifest manifest;
};

/// Deterministic 10-joint upper-body gesture clips. Classes are parametric
/// right-hand trajectories (circle, horizontal/vertical swipe, push, wave,
/// figure-eight, two held poses) with per-sample random amplitude (+-20%),
/// speed (+-30%), start-time jitter (uniform +-5 frames) and coordinate
/// noise. Split sizes are per class; ids are stable and the whole dataset
/// is a pure function of the seed.
SynthDataset synth_generate(int n_classes, int train_per_class, int val_per_class,
                            int test_per_class, std::uint64_t seed);

/// Convenience overload: all sequences in the train split.
SynthDataset synth_generate(int n_classes, int n_per_class, std::uint64_t seed);

}  // namespace sigstream::synth

#endif

#ifndef SIGSTREAM_TRAIN_HPP
#define SIGSTREAM_TRAIN_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "sigstream/data.hpp"
#include "sigstream/features.hpp"
#include "sigstream/net.hpp"

namespace sigstream::net {

struct TrainConfig {
    int batch = 56;
    double dropout = 0.5;
    double momentum = 0.7;
    double alpha0 = 0.01;
    double lambda = 0.001;
    int epochs = 200;
    std::uint64_t seed = 1;

    void validate() const;
};

/// Training/evaluation unit: labelled sequences, optionally with
/// precomputed feature bundles (required unless sequences are present).
struct TrainDataset {
    std::vector<transforms::JointFrames> sequences;
    std::vector<features::FeatureBundle> bundles;
    std::vector<int> labels;

    std::size_t size() const { return labels.size(); }
};

struct TrainOptions {
    TrainConfig cfg;
    data::AugmentOptions augment;
    features::FeatureConfig fcfg;
    bool verbose = false;
};

struct EpochMetrics {
    int epoch = 0;
    double loss = 0.0;       // mean per-sample cross entropy, train mode
    double train_acc = 0.0;  // argmax accuracy of the train-mode forward
    double val_acc = -1.0;   // -1 when no validation set
    double lr = 0.0;         // lr_at(cumulative batches) at the epoch boundary
    double mean_abs_delta = 0.0;
};

struct TrainResult {
    std::vector<EpochMetrics> history;
};

/// SGD with classical momentum over shuffled mini-batches. Augmentations
/// are resampled every epoch from schedule-independent per-sequence
/// streams; when the net recomputes PS features behind its temporal shift,
/// those features are refreshed per step from the shifted frames (no
/// gradient flows through the extraction). Deterministic per seed.
TrainResult train(MultiStreamNet& net, const TrainDataset& train_set, const TrainDataset* val_set,
                  const TrainOptions& opts);

struct EvalResult {
    double accuracy = 0.0;
    std::vector<std::vector<int>> confusion;  // [true][predicted]
    double mean_abs_delta = 0.0;
};

EvalResult evaluate(const MultiStreamNet& net, const TrainDataset& set,
                    const features::FeatureConfig& fcfg);

/// Feature bundles for a dataset, honoring the net's enabled kinds and its
/// TTM placement (recomputing PS features from shifted frames when so
/// configured). Used by both the trainer and evaluation.
std::vector<features::FeatureBundle> prepare_bundles(const MultiStreamNet& net,
                                                     const std::vector<transforms::JointFrames>& seqs,
                                                     const features::FeatureConfig& fcfg);

}  // namespace sigstream::net

#endif

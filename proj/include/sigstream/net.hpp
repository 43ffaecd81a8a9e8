#ifndef SIGSTREAM_NET_HPP
#define SIGSTREAM_NET_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "sigstream/features.hpp"
#include "sigstream/mat.hpp"
#include "sigstream/ttm.hpp"

namespace sigstream::net {

enum class Activation { kRelu, kSoftmax };

struct DenseLayer {
    mat::Mat w;              // in x out
    std::vector<double> b;   // out
    Activation act = Activation::kRelu;

    int in_dim() const { return w.rows; }
    int out_dim() const { return w.cols; }
};

/// One classification stream: hidden FC (ReLU + dropout) into a softmax FC.
struct Stream {
    DenseLayer fc1;
    DenseLayer fc2;
    double dropout = 0.5;
};

enum class Variant { kOneStream = 1, kTwoStream = 2, kThreeStream = 3 };

const char* variant_name(Variant v);
Variant variant_from_name(const std::string& name);

struct NetConfig {
    Variant variant = Variant::kOneStream;
    bool use_ttm = false;
    // place the shift between AOH and the PS extractors: signature features
    // are recomputed from the shifted frames (straight-through, no gradient
    // via the extraction) rather than taken from the raw frames
    bool ttm_recompute_ps = true;
    int classes = 0;
    int hidden = 64;
    int ln_hidden = 64;
    double dropout = 0.5;
    std::vector<features::FeatureKind> enabled = {
        features::FeatureKind::kRc, features::FeatureKind::kSPs, features::FeatureKind::kTPs,
        features::FeatureKind::kTSPs};
    features::FeatureDims dims;
    int rc_rows = 0;    // d * N_J
    int rc_frames = 0;  // F

    std::int64_t dim_of(features::FeatureKind kind) const;
    bool has(features::FeatureKind kind) const;
    void validate() const;
};

/// Feature kinds feeding each stream, derived from variant and the enabled
/// set: 1s takes one concatenated stream, 2s splits RC from the signature
/// features, 3s splits RC / spatial / temporal.
std::vector<std::vector<features::FeatureKind>> stream_specs(const NetConfig& cfg);

struct MultiStreamNet {
    NetConfig cfg;
    std::vector<std::vector<features::FeatureKind>> specs;
    std::vector<Stream> streams;
    DenseLayer fusion;  // (streams * classes) x classes, softmax
    std::optional<ttm::LocalizationNet> localization;

    int stream_input_dim(std::size_t stream) const;
};

MultiStreamNet build_net(const NetConfig& cfg, std::mt19937_64& rng);

struct BatchCache {
    bool train_mode = false;
    std::vector<mat::Mat> stream_x;     // inputs per stream
    std::vector<mat::Mat> stream_h;     // fc1 output after relu and dropout
    std::vector<mat::Mat> stream_mask;  // dropout keep masks (train mode)
    std::vector<mat::Mat> stream_s;     // stream softmax outputs
    mat::Mat concat_s;
    mat::Mat probs;
    std::vector<ttm::ForwardCache> ttm_caches;  // one per sample when TTM is on
};

enum class Mode { kTrain, kEval };

/// Batched forward pass; rows of the result sum to 1. In train mode
/// dropout uses inverted scaling and draws masks from rng.
mat::Mat forward_batch(const MultiStreamNet& net, std::span<const features::FeatureBundle* const> batch,
                       Mode mode, std::mt19937_64* rng, BatchCache* cache);

/// Single-sample convenience forward.
std::vector<double> forward(const MultiStreamNet& net, const features::FeatureBundle& bundle,
                            Mode mode, std::mt19937_64* rng = nullptr);

/// Cross-entropy of one probability row: -log(max(probs[label], 1e-12)).
double loss(std::span<const double> probs, int label);

struct LayerGrads {
    mat::Mat w;
    std::vector<double> b;
};

struct Gradients {
    std::vector<LayerGrads> fc1;
    std::vector<LayerGrads> fc2;
    LayerGrads fusion;
    std::optional<ttm::LocalizationGrads> localization;

    static Gradients zeros(const MultiStreamNet& net);
    void scale(double factor);
};

/// Backward pass for the summed cross-entropy of a batch; returns the sum
/// of per-sample gradients for every parameter group (streams, fusion, and
/// the TTM localization net when present).
Gradients backward_batch(const MultiStreamNet& net, const BatchCache& cache,
                         std::span<const int> labels);

/// Visit every parameter array as (name, values); gradients visit in the
/// same order, which fixes the checkpoint layout and the gradcheck walk.
void for_each_param(MultiStreamNet& net,
                    const std::function<void(const std::string&, std::span<double>)>& fn);
void for_each_param(const MultiStreamNet& net,
                    const std::function<void(const std::string&, std::span<const double>)>& fn);
void for_each_grad(Gradients& grads,
                   const std::function<void(const std::string&, std::span<double>)>& fn);

/// Learning rate after n cumulative mini-batches: alpha0 * exp(-lambda*n).
double lr_at(std::int64_t n, double alpha0, double lambda);

/// Classical momentum update: v <- mu*v - lr*g; theta <- theta + v.
void sgd_momentum_step(std::span<double> params, std::span<const double> grads,
                       std::span<double> velocity, double lr, double momentum);

struct OpCountReport {
    std::vector<std::pair<std::string, std::int64_t>> layers;
    std::int64_t network_total = 0;
    std::int64_t ps_extraction = 0;
};

/// Multiply-add count of one forward pass: in*out per dense layer plus the
/// localization net, with the signature-extraction cost reported
/// separately. Signature costs count one multiply-add per coefficient
/// product: 2*d^k per segment level k>=2 (increment multiply plus 1/k
/// scale) and (n-1)*d^n per Chen level n.
OpCountReport count_multadds(const MultiStreamNet& net, const features::FeatureConfig& fcfg,
                             int frames);

std::int64_t segment_signature_multadds(int d, int m);
std::int64_t chen_combine_multadds(int d, int m);
std::int64_t path_signature_multadds(int d, int m, int vertices);
std::int64_t ps_extraction_multadds(const features::FeatureConfig& fcfg, int frames);

/// First-layer weight matrix of one stream as CSV (rows = hidden units,
/// columns = input dims in feature order), full round-trip precision.
void dump_first_layer(const MultiStreamNet& net, std::size_t stream, std::ostream& out);

struct Checkpoint {
    MultiStreamNet net;
    std::string feature_hash;
    std::string run_config_json;
};

/// Self-describing checkpoint: text header (format version, architecture
/// descriptor, feature-config hash, resolved run config) followed by all
/// parameter arrays in declared order as little-endian float64.
void save_checkpoint(const std::string& path, const MultiStreamNet& net,
                     const std::string& feature_hash, const std::string& run_config_json);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace sigstream::net

#endif

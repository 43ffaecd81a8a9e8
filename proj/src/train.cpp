#include "sigstream/train.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <stdexcept>

namespace sigstream::net {

namespace {

using features::FeatureBundle;
using features::FeatureKind;
using features::FeatureSelection;
using transforms::JointFrames;

bool uses_ps(const MultiStreamNet& net) {
    for (FeatureKind kind : net.cfg.enabled) {
        if (kind != FeatureKind::kRc) return true;
    }
    return false;
}

bool recompute_active(const MultiStreamNet& net) {
    return net.cfg.use_ttm && net.cfg.ttm_recompute_ps && uses_ps(net);
}

// shift a clip's frame axis by the localization output for its RC vector
// and re-extract the signature features from the shifted frames; the RC
// part stays raw (the net shifts it inside the differentiable graph)
FeatureBundle recompute_shifted(const MultiStreamNet& net, const JointFrames& seq,
                                const FeatureBundle& base, const features::FeatureConfig& fcfg) {
    const double delta = ttm::ln_forward(*net.localization, base.rc);
    JointFrames shifted = seq;
    shifted.coords = ttm::temporal_shift(seq.coords, seq.joints * seq.dim, seq.frames, delta);
    FeatureSelection sel = FeatureSelection::from_kinds(net.cfg.enabled);
    sel.rc = false;
    FeatureBundle out = features::assemble_features(shifted, fcfg, sel);
    out.rc = base.rc;
    out.dims.rc = static_cast<std::int64_t>(out.rc.size());
    return out;
}

struct ParamRef {
    std::span<double> values;
};

std::vector<ParamRef> param_refs(MultiStreamNet& net) {
    std::vector<ParamRef> refs;
    for_each_param(net, [&refs](const std::string&, std::span<double> values) {
        refs.push_back({values});
    });
    return refs;
}

std::vector<std::span<double>> grad_refs(Gradients& grads) {
    std::vector<std::span<double>> refs;
    for_each_grad(grads, [&refs](const std::string&, std::span<double> values) {
        refs.push_back(values);
    });
    return refs;
}

}  // namespace

void TrainConfig::validate() const {
    if (batch < 1) throw std::invalid_argument("train: batch must be >= 1");
    if (dropout < 0.0 || dropout >= 1.0) throw std::invalid_argument("train: dropout in [0, 1)");
    if (momentum < 0.0 || momentum >= 1.0) throw std::invalid_argument("train: momentum in [0, 1)");
    if (alpha0 <= 0.0) throw std::invalid_argument("train: alpha0 must be positive");
    if (lambda < 0.0) throw std::invalid_argument("train: lambda must be >= 0");
    if (epochs < 1) throw std::invalid_argument("train: epochs must be >= 1");
}

std::vector<FeatureBundle> prepare_bundles(const MultiStreamNet& net,
                                           const std::vector<JointFrames>& seqs,
                                           const features::FeatureConfig& fcfg) {
    const FeatureSelection sel = FeatureSelection::from_kinds(net.cfg.enabled);
    auto bundles = features::extract_batch(seqs, fcfg, sel);
    if (recompute_active(net)) {
        for (std::size_t i = 0; i < bundles.size(); ++i) {
            bundles[i] = recompute_shifted(net, seqs[i], bundles[i], fcfg);
        }
    }
    return bundles;
}

TrainResult train(MultiStreamNet& net, const TrainDataset& train_set, const TrainDataset* val_set,
                  const TrainOptions& opts) {
    opts.cfg.validate();
    if (train_set.size() == 0) throw std::invalid_argument("train: empty dataset");
    if (!train_set.sequences.empty() && train_set.sequences.size() != train_set.size()) {
        throw std::invalid_argument("train: sequence/label count mismatch");
    }
    const bool need_sequences = opts.augment.any() || recompute_active(net);
    if (need_sequences && train_set.sequences.empty()) {
        throw std::invalid_argument("train: augmentation or shift recomputation needs sequences");
    }
    for (int label : train_set.labels) {
        if (label < 0 || label >= net.cfg.classes) {
            throw std::invalid_argument("train: label outside [0, classes)");
        }
    }

    const FeatureSelection sel = FeatureSelection::from_kinds(net.cfg.enabled);
    std::vector<FeatureBundle> base_bundles;
    if (!train_set.bundles.empty()) {
        if (train_set.bundles.size() != train_set.size()) {
            throw std::invalid_argument("train: bundle/label count mismatch");
        }
        base_bundles = train_set.bundles;
    } else {
        base_bundles = features::extract_batch(train_set.sequences, opts.fcfg, sel);
    }

    TrainDataset val_view;
    if (val_set && val_set->size() > 0) {
        val_view.labels = val_set->labels;
        val_view.sequences = val_set->sequences;
        if (!val_set->bundles.empty()) {
            val_view.bundles = val_set->bundles;
        } else if (!recompute_active(net)) {
            val_view.bundles = features::extract_batch(val_set->sequences, opts.fcfg, sel);
        }
    }

    std::mt19937_64 shuffle_rng(opts.cfg.seed);
    std::mt19937_64 dropout_rng(opts.cfg.seed ^ 0x64726f70ull);

    std::vector<ParamRef> params = param_refs(net);
    std::vector<std::vector<double>> velocity;
    velocity.reserve(params.size());
    for (const auto& p : params) velocity.emplace_back(p.values.size(), 0.0);

    const std::size_t n_samples = train_set.size();
    std::vector<std::size_t> order(n_samples);
    std::iota(order.begin(), order.end(), 0);

    TrainResult result;
    std::int64_t cumulative_batches = 0;
    for (int epoch = 0; epoch < opts.cfg.epochs; ++epoch) {
        // fresh augmentations each epoch from per-sequence streams
        std::vector<FeatureBundle> epoch_bundles;
        std::vector<JointFrames> epoch_seqs;
        const std::vector<FeatureBundle>* bundles = &base_bundles;
        const std::vector<JointFrames>* seqs = &train_set.sequences;
        if (opts.augment.any()) {
            epoch_seqs.resize(n_samples);
            for (std::size_t i = 0; i < n_samples; ++i) {
                auto rng = data::augment_rng(opts.cfg.seed, static_cast<std::uint64_t>(epoch), i);
                epoch_seqs[i] = data::apply_augmentations(train_set.sequences[i], opts.augment, rng);
            }
            epoch_bundles = features::extract_batch(epoch_seqs, opts.fcfg, sel);
            bundles = &epoch_bundles;
            seqs = &epoch_seqs;
        }

        std::shuffle(order.begin(), order.end(), shuffle_rng);

        const double epoch_lr = lr_at(cumulative_batches, opts.cfg.alpha0, opts.cfg.lambda);
        double loss_sum = 0.0;
        std::size_t correct = 0;
        double abs_delta_sum = 0.0;

        for (std::size_t start = 0; start < n_samples; start += opts.cfg.batch) {
            const std::size_t end = std::min(n_samples, start + opts.cfg.batch);
            const int b = static_cast<int>(end - start);

            std::vector<FeatureBundle> shifted_storage;
            std::vector<const FeatureBundle*> batch(b);
            std::vector<int> labels(b);
            if (recompute_active(net)) {
                shifted_storage.reserve(b);
                for (int i = 0; i < b; ++i) {
                    const std::size_t idx = order[start + i];
                    shifted_storage.push_back(recompute_shifted(net, (*seqs)[idx],
                                                                (*bundles)[idx], opts.fcfg));
                }
                for (int i = 0; i < b; ++i) batch[i] = &shifted_storage[i];
            } else {
                for (int i = 0; i < b; ++i) batch[i] = &(*bundles)[order[start + i]];
            }
            for (int i = 0; i < b; ++i) labels[i] = train_set.labels[order[start + i]];

            BatchCache cache;
            mat::Mat probs = forward_batch(net, batch, Mode::kTrain, &dropout_rng, &cache);
            for (int i = 0; i < b; ++i) {
                auto row = probs.row(i);
                loss_sum += loss(row, labels[i]);
                const auto mx = std::max_element(row.begin(), row.end());
                if (static_cast<int>(mx - row.begin()) == labels[i]) ++correct;
                if (net.cfg.use_ttm) abs_delta_sum += std::abs(cache.ttm_caches[i].shift.delta);
            }

            Gradients grads = backward_batch(net, cache, labels);
            grads.scale(1.0 / b);
            const double lr = lr_at(cumulative_batches, opts.cfg.alpha0, opts.cfg.lambda);
            auto grefs = grad_refs(grads);
            for (std::size_t g = 0; g < params.size(); ++g) {
                sgd_momentum_step(params[g].values, grefs[g], velocity[g], lr, opts.cfg.momentum);
            }
            ++cumulative_batches;
        }

        EpochMetrics m;
        m.epoch = epoch + 1;
        m.loss = loss_sum / static_cast<double>(n_samples);
        m.train_acc = static_cast<double>(correct) / static_cast<double>(n_samples);
        m.lr = epoch_lr;
        m.mean_abs_delta = net.cfg.use_ttm ? abs_delta_sum / static_cast<double>(n_samples) : 0.0;
        if (val_view.size() > 0) m.val_acc = evaluate(net, val_view, opts.fcfg).accuracy;
        result.history.push_back(m);
        if (opts.verbose) {
            std::cerr << "epoch " << m.epoch << " loss " << m.loss << " acc " << m.train_acc
                      << " lr " << m.lr << " mean|delta| " << m.mean_abs_delta << "\n";
        }
    }
    return result;
}

EvalResult evaluate(const MultiStreamNet& net, const TrainDataset& set,
                    const features::FeatureConfig& fcfg) {
    if (set.size() == 0) throw std::invalid_argument("evaluate: empty dataset");
    std::vector<FeatureBundle> local;
    const std::vector<FeatureBundle>* bundles = &set.bundles;
    if (recompute_active(net)) {
        if (set.sequences.empty()) {
            throw std::invalid_argument("evaluate: shifted feature recomputation needs sequences");
        }
        local = prepare_bundles(net, set.sequences, fcfg);
        bundles = &local;
    } else if (set.bundles.empty()) {
        if (set.sequences.empty()) throw std::invalid_argument("evaluate: no features available");
        local = prepare_bundles(net, set.sequences, fcfg);
        bundles = &local;
    }

    EvalResult result;
    result.confusion.assign(net.cfg.classes, std::vector<int>(net.cfg.classes, 0));
    double abs_delta_sum = 0.0;
    std::size_t correct = 0;
    constexpr std::size_t kChunk = 64;
    for (std::size_t start = 0; start < set.size(); start += kChunk) {
        const std::size_t end = std::min(set.size(), start + kChunk);
        std::vector<const FeatureBundle*> batch;
        batch.reserve(end - start);
        for (std::size_t i = start; i < end; ++i) batch.push_back(&(*bundles)[i]);
        BatchCache cache;
        mat::Mat probs = forward_batch(net, batch, Mode::kEval, nullptr, &cache);
        for (std::size_t i = start; i < end; ++i) {
            auto row = probs.row(static_cast<int>(i - start));
            const int pred = static_cast<int>(std::max_element(row.begin(), row.end()) -
                                              row.begin());
            const int truth = set.labels[i];
            if (truth < 0 || truth >= net.cfg.classes) {
                throw std::invalid_argument("evaluate: label outside [0, classes)");
            }
            result.confusion[truth][pred] += 1;
            if (pred == truth) ++correct;
            if (net.cfg.use_ttm) {
                abs_delta_sum += std::abs(cache.ttm_caches[i - start].shift.delta);
            }
        }
    }
    result.accuracy = static_cast<double>(correct) / static_cast<double>(set.size());
    result.mean_abs_delta = net.cfg.use_ttm ? abs_delta_sum / static_cast<double>(set.size()) : 0.0;
    return result;
}

}  // namespace sigstream::net

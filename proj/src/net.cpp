#include "sigstream/net.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace sigstream::net {

namespace {

using features::FeatureBundle;
using features::FeatureKind;

constexpr double kProbFloor = 1e-12;
constexpr const char* kCheckpointMagic = "sigstream-checkpoint v1";

const std::vector<FeatureKind> kCanonicalOrder = {FeatureKind::kRc, FeatureKind::kSPs,
                                                  FeatureKind::kTPs, FeatureKind::kTSPs};

void glorot_init(DenseLayer& layer, std::mt19937_64& rng) {
    const double limit = std::sqrt(6.0 / (layer.w.rows + layer.w.cols));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (double& v : layer.w.v) v = dist(rng);
    std::fill(layer.b.begin(), layer.b.end(), 0.0);
}

void softmax_rows(mat::Mat& m) {
    for (int r = 0; r < m.rows; ++r) {
        auto row = m.row(r);
        double mx = row[0];
        for (double v : row) mx = std::max(mx, v);
        double sum = 0.0;
        for (double& v : row) {
            v = std::exp(v - mx);
            sum += v;
        }
        for (double& v : row) v /= sum;
    }
}

void relu_rows(mat::Mat& m) {
    for (double& v : m.v) {
        if (v < 0.0) v = 0.0;
    }
}

}  // namespace

const char* variant_name(Variant v) {
    switch (v) {
        case Variant::kOneStream: return "1s";
        case Variant::kTwoStream: return "2s";
        case Variant::kThreeStream: return "3s";
    }
    return "?";
}

Variant variant_from_name(const std::string& name) {
    if (name == "1s") return Variant::kOneStream;
    if (name == "2s") return Variant::kTwoStream;
    if (name == "3s") return Variant::kThreeStream;
    throw std::invalid_argument("unknown architecture variant: " + name);
}

std::int64_t NetConfig::dim_of(FeatureKind kind) const {
    switch (kind) {
        case FeatureKind::kRc: return dims.rc;
        case FeatureKind::kSPs: return dims.s_ps;
        case FeatureKind::kTPs: return dims.t_ps;
        case FeatureKind::kTSPs: return dims.t_s_ps;
    }
    return 0;
}

bool NetConfig::has(FeatureKind kind) const {
    return std::find(enabled.begin(), enabled.end(), kind) != enabled.end();
}

void NetConfig::validate() const {
    if (classes < 2) throw std::invalid_argument("net: need at least 2 classes");
    if (hidden < 1) throw std::invalid_argument("net: hidden width must be >= 1");
    if (dropout < 0.0 || dropout >= 1.0) throw std::invalid_argument("net: dropout must be in [0, 1)");
    if (enabled.empty()) throw std::invalid_argument("net: no features enabled");
    for (FeatureKind kind : enabled) {
        if (dim_of(kind) <= 0) {
            throw std::invalid_argument(std::string("net: enabled feature has zero dim: ") +
                                        features::feature_kind_name(kind));
        }
    }
    if (use_ttm) {
        if (!has(FeatureKind::kRc)) throw std::invalid_argument("net: TTM requires the RC feature");
        if (ln_hidden < 1) throw std::invalid_argument("net: localization hidden must be >= 1");
        if (static_cast<std::int64_t>(rc_rows) * rc_frames != dims.rc || rc_frames < 2) {
            throw std::invalid_argument("net: rc_rows*rc_frames must match the RC dimension");
        }
    }
}

std::vector<std::vector<FeatureKind>> stream_specs(const NetConfig& cfg) {
    // canonical part order: rc, s_ps, t_ps, t_s_ps
    std::vector<FeatureKind> enabled;
    for (FeatureKind kind : kCanonicalOrder) {
        if (cfg.has(kind)) enabled.push_back(kind);
    }
    switch (cfg.variant) {
        case Variant::kOneStream: return {enabled};
        case Variant::kTwoStream: {
            std::vector<FeatureKind> ps;
            for (FeatureKind kind : enabled) {
                if (kind != FeatureKind::kRc) ps.push_back(kind);
            }
            if (!cfg.has(FeatureKind::kRc) || ps.empty()) {
                throw std::invalid_argument("2s net needs RC plus at least one PS feature");
            }
            return {{FeatureKind::kRc}, ps};
        }
        case Variant::kThreeStream: {
            std::vector<FeatureKind> temporal;
            if (cfg.has(FeatureKind::kTPs)) temporal.push_back(FeatureKind::kTPs);
            if (cfg.has(FeatureKind::kTSPs)) temporal.push_back(FeatureKind::kTSPs);
            if (!cfg.has(FeatureKind::kRc) || !cfg.has(FeatureKind::kSPs) || temporal.empty()) {
                throw std::invalid_argument(
                    "3s net needs RC, S_PS and at least one temporal feature");
            }
            return {{FeatureKind::kRc}, {FeatureKind::kSPs}, temporal};
        }
    }
    throw std::invalid_argument("unknown variant");
}

int MultiStreamNet::stream_input_dim(std::size_t stream) const {
    std::int64_t dim = 0;
    for (FeatureKind kind : specs[stream]) dim += cfg.dim_of(kind);
    return static_cast<int>(dim);
}

MultiStreamNet build_net(const NetConfig& cfg, std::mt19937_64& rng) {
    cfg.validate();
    MultiStreamNet net;
    net.cfg = cfg;
    net.specs = stream_specs(cfg);

    for (std::size_t s = 0; s < net.specs.size(); ++s) {
        Stream stream;
        stream.dropout = cfg.dropout;
        stream.fc1.w = mat::Mat(net.stream_input_dim(s), cfg.hidden);
        stream.fc1.b.assign(cfg.hidden, 0.0);
        stream.fc1.act = Activation::kRelu;
        stream.fc2.w = mat::Mat(cfg.hidden, cfg.classes);
        stream.fc2.b.assign(cfg.classes, 0.0);
        stream.fc2.act = Activation::kSoftmax;
        glorot_init(stream.fc1, rng);
        glorot_init(stream.fc2, rng);
        net.streams.push_back(std::move(stream));
    }
    net.fusion.w = mat::Mat(static_cast<int>(net.streams.size()) * cfg.classes, cfg.classes);
    net.fusion.b.assign(cfg.classes, 0.0);
    net.fusion.act = Activation::kSoftmax;
    glorot_init(net.fusion, rng);

    if (cfg.use_ttm) {
        net.localization = ttm::LocalizationNet::init(static_cast<int>(cfg.dims.rc),
                                                      cfg.ln_hidden, rng);
    }
    return net;
}

mat::Mat forward_batch(const MultiStreamNet& net, std::span<const FeatureBundle* const> batch,
                       Mode mode, std::mt19937_64* rng, BatchCache* cache) {
    const int b = static_cast<int>(batch.size());
    if (b == 0) throw std::invalid_argument("forward_batch: empty batch");
    const bool train = mode == Mode::kTrain;
    if (train && net.cfg.dropout > 0.0 && rng == nullptr) {
        throw std::invalid_argument("forward_batch: train mode with dropout needs an rng");
    }

    // TTM shifts the RC vector per sample; shifted RC replaces the raw RC
    // everywhere it feeds a stream.
    std::vector<std::vector<double>> shifted_rc;
    std::vector<ttm::ForwardCache> ttm_caches;
    if (net.cfg.use_ttm) {
        shifted_rc.resize(b);
        ttm_caches.resize(b);
        for (int r = 0; r < b; ++r) {
            const auto& rc = batch[r]->rc;
            if (static_cast<std::int64_t>(rc.size()) != net.cfg.dims.rc) {
                throw std::invalid_argument("forward_batch: RC dim mismatch");
            }
            shifted_rc[r] = ttm::ttm_forward(rc, net.cfg.rc_rows, net.cfg.rc_frames,
                                             *net.localization, &ttm_caches[r]);
        }
    }

    BatchCache local;
    BatchCache& c = cache ? *cache : local;
    c.train_mode = train;
    c.stream_x.assign(net.streams.size(), {});
    c.stream_h.assign(net.streams.size(), {});
    c.stream_mask.assign(net.streams.size(), {});
    c.stream_s.assign(net.streams.size(), {});
    c.ttm_caches = std::move(ttm_caches);

    const int classes = net.cfg.classes;
    c.concat_s = mat::Mat(b, static_cast<int>(net.streams.size()) * classes);

    for (std::size_t s = 0; s < net.streams.size(); ++s) {
        const Stream& stream = net.streams[s];
        mat::Mat& x = c.stream_x[s];
        x = mat::Mat(b, net.stream_input_dim(s));
        for (int r = 0; r < b; ++r) {
            auto row = x.row(r);
            std::size_t offset = 0;
            for (FeatureKind kind : net.specs[s]) {
                const std::vector<double>& part = (kind == FeatureKind::kRc && net.cfg.use_ttm)
                                                      ? shifted_rc[r]
                                                      : batch[r]->part(kind);
                if (static_cast<std::int64_t>(part.size()) != net.cfg.dim_of(kind)) {
                    throw std::invalid_argument(
                        std::string("forward_batch: bundle dim mismatch for ") +
                        features::feature_kind_name(kind));
                }
                std::copy(part.begin(), part.end(), row.begin() + offset);
                offset += part.size();
            }
        }

        mat::Mat& h = c.stream_h[s];
        mat::linear_forward(x, stream.fc1.w, stream.fc1.b, h);
        relu_rows(h);
        if (train && stream.dropout > 0.0) {
            mat::Mat& mask = c.stream_mask[s];
            mask = mat::Mat(h.rows, h.cols);
            std::bernoulli_distribution keep(1.0 - stream.dropout);
            const double scale = 1.0 / (1.0 - stream.dropout);
            for (std::size_t i = 0; i < h.v.size(); ++i) {
                mask.v[i] = keep(*rng) ? 1.0 : 0.0;
                h.v[i] *= mask.v[i] * scale;
            }
        }

        mat::Mat& sm = c.stream_s[s];
        mat::linear_forward(h, stream.fc2.w, stream.fc2.b, sm);
        softmax_rows(sm);
        for (int r = 0; r < b; ++r) {
            std::copy(sm.row(r).begin(), sm.row(r).end(),
                      c.concat_s.row(r).begin() + s * classes);
        }
    }

    mat::linear_forward(c.concat_s, net.fusion.w, net.fusion.b, c.probs);
    softmax_rows(c.probs);
    return c.probs;
}

std::vector<double> forward(const MultiStreamNet& net, const FeatureBundle& bundle, Mode mode,
                            std::mt19937_64* rng) {
    const FeatureBundle* ptr = &bundle;
    mat::Mat probs = forward_batch(net, {&ptr, 1}, mode, rng, nullptr);
    return {probs.row(0).begin(), probs.row(0).end()};
}

double loss(std::span<const double> probs, int label) {
    if (label < 0 || label >= static_cast<int>(probs.size())) {
        throw std::invalid_argument("loss: label out of range");
    }
    return -std::log(std::max(probs[label], kProbFloor));
}

Gradients Gradients::zeros(const MultiStreamNet& net) {
    Gradients g;
    for (const Stream& s : net.streams) {
        g.fc1.push_back({mat::Mat(s.fc1.w.rows, s.fc1.w.cols),
                         std::vector<double>(s.fc1.b.size(), 0.0)});
        g.fc2.push_back({mat::Mat(s.fc2.w.rows, s.fc2.w.cols),
                         std::vector<double>(s.fc2.b.size(), 0.0)});
    }
    g.fusion = {mat::Mat(net.fusion.w.rows, net.fusion.w.cols),
                std::vector<double>(net.fusion.b.size(), 0.0)};
    if (net.localization) g.localization = ttm::LocalizationGrads::zeros(*net.localization);
    return g;
}

void Gradients::scale(double factor) {
    auto scale_layer = [factor](LayerGrads& lg) {
        for (double& v : lg.w.v) v *= factor;
        for (double& v : lg.b) v *= factor;
    };
    for (auto& lg : fc1) scale_layer(lg);
    for (auto& lg : fc2) scale_layer(lg);
    scale_layer(fusion);
    if (localization) localization->scale(factor);
}

Gradients backward_batch(const MultiStreamNet& net, const BatchCache& cache,
                         std::span<const int> labels) {
    const int b = cache.probs.rows;
    if (b == 0 || cache.stream_x.size() != net.streams.size()) {
        throw std::invalid_argument("backward_batch: cache does not match net (stale cache?)");
    }
    if (static_cast<int>(labels.size()) != b) {
        throw std::invalid_argument("backward_batch: label count mismatch");
    }
    const int classes = net.cfg.classes;
    Gradients grads = Gradients::zeros(net);

    // fused softmax + cross entropy: dz = p - onehot
    mat::Mat dz_fused = cache.probs;
    for (int r = 0; r < b; ++r) {
        if (labels[r] < 0 || labels[r] >= classes) {
            throw std::invalid_argument("backward_batch: label out of range");
        }
        dz_fused.at(r, labels[r]) -= 1.0;
    }
    mat::linear_grad_params(cache.concat_s, dz_fused, grads.fusion.w, grads.fusion.b);
    mat::Mat dconcat;
    mat::linear_grad_input(dz_fused, net.fusion.w, dconcat);

    for (std::size_t s = 0; s < net.streams.size(); ++s) {
        const Stream& stream = net.streams[s];
        const mat::Mat& sm = cache.stream_s[s];

        // stream softmax jacobian: dz2 = s .* (g - <g, s>)
        mat::Mat dz2(b, classes);
        for (int r = 0; r < b; ++r) {
            auto gr = dconcat.row(r).subspan(s * classes, classes);
            auto sr = sm.row(r);
            double dot = 0.0;
            for (int j = 0; j < classes; ++j) dot += gr[j] * sr[j];
            auto dr = dz2.row(r);
            for (int j = 0; j < classes; ++j) dr[j] = sr[j] * (gr[j] - dot);
        }
        mat::linear_grad_params(cache.stream_h[s], dz2, grads.fc2[s].w, grads.fc2[s].b);

        mat::Mat dh;
        mat::linear_grad_input(dz2, stream.fc2.w, dh);
        const mat::Mat& h = cache.stream_h[s];
        if (cache.train_mode && stream.dropout > 0.0) {
            const mat::Mat& mask = cache.stream_mask[s];
            const double scale = 1.0 / (1.0 - stream.dropout);
            for (std::size_t i = 0; i < dh.v.size(); ++i) {
                dh.v[i] = (h.v[i] > 0.0) ? dh.v[i] * mask.v[i] * scale : 0.0;
            }
        } else {
            for (std::size_t i = 0; i < dh.v.size(); ++i) {
                if (h.v[i] <= 0.0) dh.v[i] = 0.0;
            }
        }
        mat::linear_grad_params(cache.stream_x[s], dh, grads.fc1[s].w, grads.fc1[s].b);

        // TTM pathway: route the gradient of the shifted RC slice back
        // through the interpolation and localization chains.
        if (net.cfg.use_ttm && net.specs[s].front() == FeatureKind::kRc) {
            mat::Mat dx;
            mat::linear_grad_input(dh, stream.fc1.w, dx);
            const std::size_t rc_len = static_cast<std::size_t>(net.cfg.dims.rc);
            for (int r = 0; r < b; ++r) {
                auto grad_rc = dx.row(r).subspan(0, rc_len);
                ttm::ttm_backward(grad_rc, cache.ttm_caches[r], *net.localization,
                                  *grads.localization);
            }
        }
    }
    return grads;
}

namespace {

template <typename Net, typename Fn>
void visit_params_impl(Net& net, const Fn& fn) {
    for (std::size_t s = 0; s < net.streams.size(); ++s) {
        const std::string prefix = "stream" + std::to_string(s);
        fn(prefix + ".fc1.w", std::span(net.streams[s].fc1.w.v));
        fn(prefix + ".fc1.b", std::span(net.streams[s].fc1.b));
        fn(prefix + ".fc2.w", std::span(net.streams[s].fc2.w.v));
        fn(prefix + ".fc2.b", std::span(net.streams[s].fc2.b));
    }
    fn("fusion.w", std::span(net.fusion.w.v));
    fn("fusion.b", std::span(net.fusion.b));
    if (net.localization) {
        fn("ttm.w1", std::span(net.localization->w1.v));
        fn("ttm.b1", std::span(net.localization->b1));
        fn("ttm.w2", std::span(net.localization->w2));
        fn("ttm.b2", std::span(&net.localization->b2, 1));
    }
}

}  // namespace

void for_each_param(MultiStreamNet& net,
                    const std::function<void(const std::string&, std::span<double>)>& fn) {
    visit_params_impl(net, fn);
}

void for_each_param(const MultiStreamNet& net,
                    const std::function<void(const std::string&, std::span<const double>)>& fn) {
    visit_params_impl(net, fn);
}

void for_each_grad(Gradients& grads,
                   const std::function<void(const std::string&, std::span<double>)>& fn) {
    for (std::size_t s = 0; s < grads.fc1.size(); ++s) {
        const std::string prefix = "stream" + std::to_string(s);
        fn(prefix + ".fc1.w", std::span(grads.fc1[s].w.v));
        fn(prefix + ".fc1.b", std::span(grads.fc1[s].b));
        fn(prefix + ".fc2.w", std::span(grads.fc2[s].w.v));
        fn(prefix + ".fc2.b", std::span(grads.fc2[s].b));
    }
    fn("fusion.w", std::span(grads.fusion.w.v));
    fn("fusion.b", std::span(grads.fusion.b));
    if (grads.localization) {
        fn("ttm.w1", std::span(grads.localization->w1.v));
        fn("ttm.b1", std::span(grads.localization->b1));
        fn("ttm.w2", std::span(grads.localization->w2));
        fn("ttm.b2", std::span(&grads.localization->b2, 1));
    }
}

double lr_at(std::int64_t n, double alpha0, double lambda) {
    if (n < 0) throw std::invalid_argument("lr_at: n must be >= 0");
    return alpha0 * std::exp(-lambda * static_cast<double>(n));
}

void sgd_momentum_step(std::span<double> params, std::span<const double> grads,
                       std::span<double> velocity, double lr, double momentum) {
    if (params.size() != grads.size() || params.size() != velocity.size()) {
        throw std::invalid_argument("sgd_momentum_step: shape mismatch");
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        velocity[i] = momentum * velocity[i] - lr * grads[i];
        params[i] += velocity[i];
    }
}

std::int64_t segment_signature_multadds(int d, int m) {
    std::int64_t total = 0;
    std::int64_t level = d;
    for (int k = 2; k <= m; ++k) {
        level *= d;
        total += 2 * level;
    }
    return total;
}

std::int64_t chen_combine_multadds(int d, int m) {
    std::int64_t total = 0;
    std::int64_t level = d;
    for (int n = 2; n <= m; ++n) {
        level *= d;
        total += static_cast<std::int64_t>(n - 1) * level;
    }
    return total;
}

std::int64_t path_signature_multadds(int d, int m, int vertices) {
    if (vertices < 2) return 0;
    return (vertices - 1) * segment_signature_multadds(d, m) +
           (vertices - 2) * chen_combine_multadds(d, m);
}

std::int64_t ps_extraction_multadds(const features::FeatureConfig& fcfg, int frames) {
    const int d = fcfg.aoh.dim;
    const std::int64_t pairs = fcfg.aoh.pair_count();
    std::int64_t total = static_cast<std::int64_t>(frames) * pairs *
                         segment_signature_multadds(d, fcfg.depths.m_s);
    for (const auto& iv : transforms::dyadic_subpaths(frames, fcfg.dyadic_t_ps)) {
        total += fcfg.aoh.single_count() *
                 path_signature_multadds(d + 1, fcfg.depths.m_t, iv.end - iv.begin + 1);
    }
    // T_S_PS source: per-frame pair signatures at level 2
    total += static_cast<std::int64_t>(frames) * pairs * segment_signature_multadds(d, 2);
    const std::int64_t series = pairs * sig::sig_dimension(d, 2);
    for (const auto& iv : transforms::dyadic_subpaths(2 * frames - 1, fcfg.dyadic_t_s_ps)) {
        total += series * path_signature_multadds(2, fcfg.depths.m_t_s, iv.end - iv.begin + 1);
    }
    return total;
}

OpCountReport count_multadds(const MultiStreamNet& net, const features::FeatureConfig& fcfg,
                             int frames) {
    OpCountReport report;
    for (std::size_t s = 0; s < net.streams.size(); ++s) {
        const std::string prefix = "stream" + std::to_string(s);
        const auto& fc1 = net.streams[s].fc1;
        const auto& fc2 = net.streams[s].fc2;
        report.layers.emplace_back(prefix + ".fc1",
                                   static_cast<std::int64_t>(fc1.w.rows) * fc1.w.cols);
        report.layers.emplace_back(prefix + ".fc2",
                                   static_cast<std::int64_t>(fc2.w.rows) * fc2.w.cols);
    }
    report.layers.emplace_back("fusion",
                               static_cast<std::int64_t>(net.fusion.w.rows) * net.fusion.w.cols);
    if (net.localization) {
        report.layers.emplace_back(
            "ttm.ln", static_cast<std::int64_t>(net.localization->w1.rows) *
                              net.localization->w1.cols +
                          net.localization->hidden_dim());
    }
    for (const auto& [name, count] : report.layers) report.network_total += count;
    report.ps_extraction = ps_extraction_multadds(fcfg, frames);
    return report;
}

void dump_first_layer(const MultiStreamNet& net, std::size_t stream, std::ostream& out) {
    if (stream >= net.streams.size()) throw std::invalid_argument("dump_first_layer: bad stream");
    const mat::Mat& w = net.streams[stream].fc1.w;
    char buf[32];
    // rows = neurons, columns = input dims in chronological feature order
    for (int j = 0; j < w.cols; ++j) {
        for (int i = 0; i < w.rows; ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g", w.at(i, j));
            out << buf;
            out << (i + 1 < w.rows ? ',' : '\n');
        }
    }
}

namespace {

std::vector<FeatureKind> kinds_from_names(const std::vector<std::string>& names) {
    std::vector<FeatureKind> kinds;
    for (const auto& name : names) {
        bool found = false;
        for (FeatureKind kind : kCanonicalOrder) {
            if (name == features::feature_kind_name(kind)) {
                kinds.push_back(kind);
                found = true;
                break;
            }
        }
        if (!found) throw std::runtime_error("checkpoint: unknown feature kind " + name);
    }
    return kinds;
}

void write_doubles_le(std::ostream& out, std::span<const double> values) {
    static_assert(sizeof(double) == 8);
    if constexpr (std::endian::native == std::endian::little) {
        out.write(reinterpret_cast<const char*>(values.data()),
                  static_cast<std::streamsize>(values.size() * 8));
    } else {
        for (double v : values) {
            std::uint64_t bits;
            std::memcpy(&bits, &v, 8);
            char bytes[8];
            for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
            out.write(bytes, 8);
        }
    }
}

void read_doubles_le(std::istream& in, std::span<double> values) {
    if constexpr (std::endian::native == std::endian::little) {
        in.read(reinterpret_cast<char*>(values.data()),
                static_cast<std::streamsize>(values.size() * 8));
    } else {
        for (double& v : values) {
            char bytes[8];
            in.read(bytes, 8);
            std::uint64_t bits = 0;
            for (int i = 0; i < 8; ++i) {
                bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[i])) << (8 * i);
            }
            std::memcpy(&v, &bits, 8);
        }
    }
    if (!in) throw std::runtime_error("checkpoint: truncated parameter data");
}

}  // namespace

void save_checkpoint(const std::string& path, const MultiStreamNet& net,
                     const std::string& feature_hash, const std::string& run_config_json) {
    nlohmann::json header;
    header["format"] = 1;
    header["variant"] = variant_name(net.cfg.variant);
    header["use_ttm"] = net.cfg.use_ttm;
    header["ttm_recompute_ps"] = net.cfg.ttm_recompute_ps;
    header["classes"] = net.cfg.classes;
    header["hidden"] = net.cfg.hidden;
    header["ln_hidden"] = net.cfg.ln_hidden;
    header["dropout"] = net.cfg.dropout;
    std::vector<std::string> enabled;
    for (FeatureKind kind : net.cfg.enabled) enabled.emplace_back(features::feature_kind_name(kind));
    header["enabled"] = enabled;
    header["dims"] = {{"rc", net.cfg.dims.rc},
                      {"s_ps", net.cfg.dims.s_ps},
                      {"t_ps", net.cfg.dims.t_ps},
                      {"t_s_ps", net.cfg.dims.t_s_ps}};
    header["rc_rows"] = net.cfg.rc_rows;
    header["rc_frames"] = net.cfg.rc_frames;
    header["feature_hash"] = feature_hash;
    header["run_config"] = run_config_json;
    nlohmann::json manifest = nlohmann::json::array();
    for_each_param(net, [&manifest](const std::string& name, std::span<const double> values) {
        manifest.push_back({{"name", name}, {"count", values.size()}});
    });
    header["params"] = manifest;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
    out << kCheckpointMagic << "\n" << header.dump() << "\n";
    for_each_param(net, [&out](const std::string&, std::span<const double> values) {
        write_doubles_le(out, values);
    });
    if (!out) throw std::runtime_error("failed writing checkpoint: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
    std::string magic, header_line;
    std::getline(in, magic);
    if (magic != kCheckpointMagic) throw std::runtime_error("not a sigstream checkpoint: " + path);
    std::getline(in, header_line);
    nlohmann::json header = nlohmann::json::parse(header_line);

    NetConfig cfg;
    cfg.variant = variant_from_name(header.at("variant").get<std::string>());
    cfg.use_ttm = header.at("use_ttm").get<bool>();
    cfg.ttm_recompute_ps = header.at("ttm_recompute_ps").get<bool>();
    cfg.classes = header.at("classes").get<int>();
    cfg.hidden = header.at("hidden").get<int>();
    cfg.ln_hidden = header.at("ln_hidden").get<int>();
    cfg.dropout = header.at("dropout").get<double>();
    cfg.enabled = kinds_from_names(header.at("enabled").get<std::vector<std::string>>());
    cfg.dims.rc = header.at("dims").at("rc").get<std::int64_t>();
    cfg.dims.s_ps = header.at("dims").at("s_ps").get<std::int64_t>();
    cfg.dims.t_ps = header.at("dims").at("t_ps").get<std::int64_t>();
    cfg.dims.t_s_ps = header.at("dims").at("t_s_ps").get<std::int64_t>();
    cfg.rc_rows = header.at("rc_rows").get<int>();
    cfg.rc_frames = header.at("rc_frames").get<int>();

    std::mt19937_64 rng(0);
    Checkpoint ckpt;
    ckpt.net = build_net(cfg, rng);
    ckpt.feature_hash = header.at("feature_hash").get<std::string>();
    ckpt.run_config_json = header.at("run_config").get<std::string>();

    const auto manifest = header.at("params");
    std::size_t idx = 0;
    for_each_param(ckpt.net, [&](const std::string& name, std::span<double> values) {
        if (idx >= manifest.size() || manifest[idx].at("name") != name ||
            manifest[idx].at("count").get<std::size_t>() != values.size()) {
            throw std::runtime_error("checkpoint: parameter manifest mismatch at " + name);
        }
        read_doubles_le(in, values);
        ++idx;
    });
    if (idx != manifest.size()) throw std::runtime_error("checkpoint: unused parameter entries");
    return ckpt;
}

}  // namespace sigstream::net

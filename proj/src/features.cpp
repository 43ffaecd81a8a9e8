#include "sigstream/features.hpp"

#include <algorithm>
#include <atomic>
#include <future>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace sigstream::features {

namespace {

using transforms::JointFrames;

sig::PiecewiseLinearPath subpath(const sig::PiecewiseLinearPath& path,
                                 const transforms::IndexInterval& iv) {
    sig::PiecewiseLinearPath out;
    out.dim = path.dim;
    out.points.assign(path.points.begin() + static_cast<std::ptrdiff_t>(iv.begin) * path.dim,
                      path.points.begin() + static_cast<std::ptrdiff_t>(iv.end + 1) * path.dim);
    return out;
}

void append_signature(const sig::TruncatedSignature& s, std::vector<double>& out) {
    for (const auto& level : s.levels) out.insert(out.end(), level.begin(), level.end());
}

std::vector<double> joint_series(const JointFrames& seq, int joint, int axis_count) {
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(seq.frames) * axis_count);
    for (int f = 0; f < seq.frames; ++f) {
        for (int a = 0; a < axis_count; ++a) values.push_back(seq.at(f, joint, a));
    }
    return values;
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

std::vector<std::pair<std::string, int>> upper_body_layout() {
    return {{"head", joint::kHead},           {"neck", joint::kNeck},
            {"shoulder_l", joint::kShoulderL}, {"shoulder_r", joint::kShoulderR},
            {"elbow_l", joint::kElbowL},       {"wrist_l", joint::kWristL},
            {"hand_l", joint::kHandL},         {"elbow_r", joint::kElbowR},
            {"wrist_r", joint::kWristR},       {"hand_r", joint::kHandR}};
}

AohConfig AohConfig::default_upper_body() {
    using namespace joint;
    AohConfig cfg;
    cfg.dim = 3;
    cfg.single_joints = {kElbowL, kWristL, kHandL, kElbowR, kWristR, kHandR};
    cfg.pairs_within_hand = {{kElbowL, kWristL}, {kWristL, kHandL}, {kElbowL, kHandL},
                             {kElbowR, kWristR}, {kWristR, kHandR}, {kElbowR, kHandR}};
    cfg.pairs_cross_hands = {{kElbowL, kElbowR}, {kWristL, kWristR}, {kHandL, kHandR}};
    cfg.pairs_hand_body = {{kHandL, kHead}, {kHandL, kNeck}, {kHandR, kHead}, {kHandR, kNeck}};
    return cfg;
}

std::vector<JointPair> AohConfig::all_pairs() const {
    std::vector<JointPair> pairs;
    pairs.reserve(pair_count());
    pairs.insert(pairs.end(), pairs_within_hand.begin(), pairs_within_hand.end());
    pairs.insert(pairs.end(), pairs_cross_hands.begin(), pairs_cross_hands.end());
    pairs.insert(pairs.end(), pairs_hand_body.begin(), pairs_hand_body.end());
    return pairs;
}

void AohConfig::validate(int joint_count) const {
    if (dim < 1) throw std::invalid_argument("aoh: dim must be >= 1");
    if (single_joints.empty()) throw std::invalid_argument("aoh: no single joints selected");
    std::set<int> singles;
    for (int j : single_joints) {
        if (j < 0 || j >= joint_count) throw std::invalid_argument("aoh: joint index out of range");
        if (!singles.insert(j).second) throw std::invalid_argument("aoh: repeated single joint");
    }
    std::set<std::pair<int, int>> seen;
    for (const auto& p : all_pairs()) {
        if (p[0] < 0 || p[0] >= joint_count || p[1] < 0 || p[1] >= joint_count) {
            throw std::invalid_argument("aoh: pair joint index out of range");
        }
        if (p[0] == p[1]) throw std::invalid_argument("aoh: pair members must be distinct");
        auto key = std::minmax(p[0], p[1]);
        if (!seen.insert(key).second) throw std::invalid_argument("aoh: repeated joint pair");
    }
}

void FeatureConfig::validate(int joint_count) const {
    aoh.validate(joint_count);
    depths.validate();
    transforms::DyadicConfig{dyadic_t_ps}.validate();
    transforms::DyadicConfig{dyadic_t_s_ps}.validate();
}

FeatureDims feature_dims(const FeatureConfig& cfg, int frames) {
    const int d = cfg.aoh.dim;
    const std::int64_t n_j = cfg.aoh.single_count();
    const std::int64_t pairs = cfg.aoh.pair_count();
    FeatureDims dims;
    dims.rc = static_cast<std::int64_t>(d) * n_j * frames;
    dims.s_ps = pairs * sig::sig_dimension(d, cfg.depths.m_s) * frames;
    dims.t_ps = n_j * ((std::int64_t{2} << cfg.dyadic_t_ps) - 1) *
                sig::sig_dimension(d + 1, cfg.depths.m_t);
    dims.t_s_ps = pairs * sig::sig_dimension(d, 2) * ((std::int64_t{2} << cfg.dyadic_t_s_ps) - 1) *
                  sig::sig_dimension(2, cfg.depths.m_t_s);
    return dims;
}

const char* feature_kind_name(FeatureKind kind) {
    switch (kind) {
        case FeatureKind::kRc: return "rc";
        case FeatureKind::kSPs: return "s_ps";
        case FeatureKind::kTPs: return "t_ps";
        case FeatureKind::kTSPs: return "t_s_ps";
    }
    return "?";
}

const std::vector<double>& FeatureBundle::part(FeatureKind kind) const {
    switch (kind) {
        case FeatureKind::kRc: return rc;
        case FeatureKind::kSPs: return s_ps;
        case FeatureKind::kTPs: return t_ps;
        case FeatureKind::kTSPs: return t_s_ps;
    }
    throw std::invalid_argument("unknown feature kind");
}

std::vector<double> build_rc(const JointFrames& seq, const AohConfig& cfg) {
    seq.validate();
    cfg.validate(seq.joints);
    if (seq.dim != cfg.dim) throw std::invalid_argument("rc: config dim does not match sequence");
    if (seq.frames < 2) throw std::invalid_argument("rc: need at least 2 frames");

    std::vector<double> rc;
    rc.reserve(static_cast<std::size_t>(seq.frames) * cfg.single_count() * seq.dim);
    for (int f = 0; f < seq.frames; ++f) {
        for (int j : cfg.single_joints) {
            for (int a = 0; a < seq.dim; ++a) rc.push_back(seq.at(f, j, a));
        }
    }
    return rc;
}

std::vector<double> s_ps_features(const JointFrames& seq, const AohConfig& cfg, int m_s) {
    seq.validate();
    cfg.validate(seq.joints);
    const auto pairs = cfg.all_pairs();
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(seq.frames) * pairs.size() *
                static_cast<std::size_t>(sig::sig_dimension(seq.dim, m_s)));
    std::vector<double> start(seq.dim), end(seq.dim);
    for (int f = 0; f < seq.frames; ++f) {
        for (const auto& p : pairs) {
            for (int a = 0; a < seq.dim; ++a) {
                start[a] = seq.at(f, p[0], a);
                end[a] = seq.at(f, p[1], a);
            }
            append_signature(sig::segment_signature(start, end, m_s), out);
        }
    }
    return out;
}

std::vector<double> t_ps_features(const JointFrames& seq, const AohConfig& cfg, int m_t,
                                  int dyadic_level) {
    seq.validate();
    cfg.validate(seq.joints);
    const auto intervals = transforms::dyadic_subpaths(seq.frames, dyadic_level);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(cfg.single_count()) * intervals.size() *
                static_cast<std::size_t>(sig::sig_dimension(seq.dim + 1, m_t)));
    for (int j : cfg.single_joints) {
        sig::PiecewiseLinearPath trajectory{seq.dim, joint_series(seq, j, seq.dim)};
        const auto augmented = sig::time_augment(trajectory);
        for (const auto& iv : intervals) {
            append_signature(sig::path_signature(subpath(augmented, iv), m_t), out);
        }
    }
    return out;
}

std::vector<double> t_s_ps_features(const JointFrames& seq, const AohConfig& cfg, int m_t_s,
                                    int dyadic_level) {
    // source spatial signatures are always truncated at level 2
    if (cfg.pair_count() == 0) return {};
    const auto source = s_ps_features(seq, cfg, 2);
    const std::size_t series_count =
        static_cast<std::size_t>(cfg.pair_count()) *
        static_cast<std::size_t>(sig::sig_dimension(cfg.dim, 2));
    const std::size_t frames = source.size() / series_count;
    const auto intervals =
        transforms::dyadic_subpaths(2 * static_cast<int>(frames) - 1, dyadic_level);

    std::vector<double> out;
    out.reserve(series_count * intervals.size() *
                static_cast<std::size_t>(sig::sig_dimension(2, m_t_s)));
    std::vector<double> series(frames);
    for (std::size_t q = 0; q < series_count; ++q) {
        for (std::size_t f = 0; f < frames; ++f) series[f] = source[f * series_count + q];
        const auto lifted = transforms::lead_lag(series);
        for (const auto& iv : intervals) {
            append_signature(sig::path_signature(subpath(lifted, iv), m_t_s), out);
        }
    }
    return out;
}

FeatureSelection FeatureSelection::from_kinds(std::span<const FeatureKind> kinds) {
    FeatureSelection sel{false, false, false, false};
    for (FeatureKind kind : kinds) {
        switch (kind) {
            case FeatureKind::kRc: sel.rc = true; break;
            case FeatureKind::kSPs: sel.s_ps = true; break;
            case FeatureKind::kTPs: sel.t_ps = true; break;
            case FeatureKind::kTSPs: sel.t_s_ps = true; break;
        }
    }
    return sel;
}

FeatureBundle assemble_features(const JointFrames& seq, const FeatureConfig& cfg) {
    return assemble_features(seq, cfg, FeatureSelection::all());
}

FeatureBundle assemble_features(const JointFrames& seq, const FeatureConfig& cfg,
                                const FeatureSelection& sel) {
    seq.validate();
    cfg.validate(seq.joints);
    FeatureBundle bundle;
    if (sel.rc) bundle.rc = build_rc(seq, cfg.aoh);
    if (sel.s_ps) bundle.s_ps = s_ps_features(seq, cfg.aoh, cfg.depths.m_s);
    if (sel.t_ps) bundle.t_ps = t_ps_features(seq, cfg.aoh, cfg.depths.m_t, cfg.dyadic_t_ps);
    if (sel.t_s_ps) {
        bundle.t_s_ps = t_s_ps_features(seq, cfg.aoh, cfg.depths.m_t_s, cfg.dyadic_t_s_ps);
    }
    bundle.dims = {static_cast<std::int64_t>(bundle.rc.size()),
                   static_cast<std::int64_t>(bundle.s_ps.size()),
                   static_cast<std::int64_t>(bundle.t_ps.size()),
                   static_cast<std::int64_t>(bundle.t_s_ps.size())};
    return bundle;
}

std::vector<FeatureBundle> extract_batch(const std::vector<JointFrames>& seqs,
                                         const FeatureConfig& cfg, const FeatureSelection& sel) {
    std::vector<FeatureBundle> bundles(seqs.size());
    const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    if (workers == 1 || seqs.size() < 2) {
        for (std::size_t i = 0; i < seqs.size(); ++i) {
            bundles[i] = assemble_features(seqs[i], cfg, sel);
        }
        return bundles;
    }
    std::vector<std::future<void>> tasks;
    std::atomic<std::size_t> next{0};
    for (unsigned w = 0; w < workers; ++w) {
        tasks.push_back(std::async(std::launch::async, [&] {
            for (std::size_t i = next.fetch_add(1); i < seqs.size(); i = next.fetch_add(1)) {
                bundles[i] = assemble_features(seqs[i], cfg, sel);
            }
        }));
    }
    for (auto& t : tasks) t.get();
    return bundles;
}

std::string config_hash(const FeatureConfig& cfg, int frames) {
    std::ostringstream canon;
    canon << "d=" << cfg.aoh.dim << ";frames=" << frames << ";singles=";
    for (int j : cfg.aoh.single_joints) canon << j << ",";
    canon << ";pairs=";
    for (const auto& p : cfg.aoh.all_pairs()) canon << p[0] << "-" << p[1] << ",";
    canon << ";m_s=" << cfg.depths.m_s << ";m_t=" << cfg.depths.m_t
          << ";m_t_s=" << cfg.depths.m_t_s << ";l_t=" << cfg.dyadic_t_ps
          << ";l_ts=" << cfg.dyadic_t_s_ps;
    std::ostringstream hex;
    hex << std::hex << fnv1a(canon.str());
    return hex.str();
}

}  // namespace sigstream::features

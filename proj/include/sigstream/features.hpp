#ifndef SIGSTREAM_FEATURES_HPP
#define SIGSTREAM_FEATURES_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "sigstream/sig.hpp"
#include "sigstream/transforms.hpp"

namespace sigstream::features {

/// Canonical 10-joint upper-body layout used by the synthetic generator
/// and the default AOH selection.
namespace joint {
inline constexpr int kHead = 0;
inline constexpr int kNeck = 1;
inline constexpr int kShoulderL = 2;
inline constexpr int kShoulderR = 3;
inline constexpr int kElbowL = 4;
inline constexpr int kWristL = 5;
inline constexpr int kHandL = 6;
inline constexpr int kElbowR = 7;
inline constexpr int kWristR = 8;
inline constexpr int kHandR = 9;
inline constexpr int kCount = 10;
}  // namespace joint

std::vector<std::pair<std::string, int>> upper_body_layout();

using JointPair = std::array<int, 2>;

/// Attention-on-hand joint selection: the six hand-part joints plus three
/// kinds of joint pairs (within one hand part, across the two hand parts,
/// hand to body). Pair segments run first -> second in listed order.
struct AohConfig {
    int dim = 3;
    std::vector<int> single_joints;
    std::vector<JointPair> pairs_within_hand;
    std::vector<JointPair> pairs_cross_hands;
    std::vector<JointPair> pairs_hand_body;

    static AohConfig default_upper_body();

    std::vector<JointPair> all_pairs() const;
    int single_count() const { return static_cast<int>(single_joints.size()); }
    int pair_count() const {
        return static_cast<int>(pairs_within_hand.size() + pairs_cross_hands.size() +
                                pairs_hand_body.size());
    }
    void validate(int joint_count) const;
};

/// Full feature-extraction configuration: joint selection, truncation
/// depths, and the dyadic levels for the two temporal families.
struct FeatureConfig {
    AohConfig aoh = AohConfig::default_upper_body();
    sig::SigDepthConfig depths;
    int dyadic_t_ps = 3;
    int dyadic_t_s_ps = 2;

    void validate(int joint_count) const;
};

struct FeatureDims {
    std::int64_t rc = 0;
    std::int64_t s_ps = 0;
    std::int64_t t_ps = 0;
    std::int64_t t_s_ps = 0;

    std::int64_t total() const { return rc + s_ps + t_ps + t_s_ps; }
    bool operator==(const FeatureDims&) const = default;
};

/// Closed-form dimensionalities for a given configuration and frame count.
FeatureDims feature_dims(const FeatureConfig& cfg, int frames);

enum class FeatureKind { kRc, kSPs, kTPs, kTSPs };

const char* feature_kind_name(FeatureKind kind);

/// The four per-sequence feature vectors with their recorded dimensions.
struct FeatureBundle {
    std::vector<double> rc;
    std::vector<double> s_ps;
    std::vector<double> t_ps;
    std::vector<double> t_s_ps;
    FeatureDims dims;

    const std::vector<double>& part(FeatureKind kind) const;
};

/// Raw coordinates of the selected single joints, frame-major.
std::vector<double> build_rc(const transforms::JointFrames& seq, const AohConfig& cfg);

/// Per-frame segment signatures of every configured joint pair, truncated
/// at m_s; frame-major, pairs in config order within each frame.
std::vector<double> s_ps_features(const transforms::JointFrames& seq, const AohConfig& cfg,
                                  int m_s);

/// Per-joint temporal trajectories, time-augmented and dyadically split;
/// depth-m_t signature of every subpath, joint-major then subpath-major.
std::vector<double> t_ps_features(const transforms::JointFrames& seq, const AohConfig& cfg,
                                  int m_t, int dyadic_level);

/// Evolution of each S_PS dimension over time (source signatures always
/// truncated at level 2), lead-lag lifted and dyadically split; depth-m_t_s
/// signature of every subpath, dimension-major then subpath-major.
std::vector<double> t_s_ps_features(const transforms::JointFrames& seq, const AohConfig& cfg,
                                    int m_t_s, int dyadic_level);

/// Which feature families to extract; skipped parts stay empty.
struct FeatureSelection {
    bool rc = true;
    bool s_ps = true;
    bool t_ps = true;
    bool t_s_ps = true;

    static FeatureSelection from_kinds(std::span<const FeatureKind> kinds);
    static FeatureSelection all() { return {}; }
};

/// All four feature vectors for one normalized, resampled sequence.
FeatureBundle assemble_features(const transforms::JointFrames& seq, const FeatureConfig& cfg);
FeatureBundle assemble_features(const transforms::JointFrames& seq, const FeatureConfig& cfg,
                                const FeatureSelection& sel);

/// Batch extraction across sequences; output order matches input order.
std::vector<FeatureBundle> extract_batch(const std::vector<transforms::JointFrames>& seqs,
                                         const FeatureConfig& cfg,
                                         const FeatureSelection& sel = {});

/// Stable hash of the resolved feature configuration (plus frame count);
/// artifacts produced under different configurations refuse to mix.
std::string config_hash(const FeatureConfig& cfg, int frames);

}  // namespace sigstream::features

#endif

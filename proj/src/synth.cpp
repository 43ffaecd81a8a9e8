#include "sigstream/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "sigstream/features.hpp"

namespace sigstream::synth {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Vec3 {
    double x = 0, y = 0, z = 0;
};

Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }

// rest pose, meters-ish, origin at chest height
const Vec3 kRest[features::joint::kCount] = {
    {0.00, 0.25, 0.00},    // head
    {0.00, 0.10, 0.00},    // neck
    {-0.18, 0.05, 0.00},   // shoulder_l
    {0.18, 0.05, 0.00},    // shoulder_r
    {-0.26, -0.12, 0.02},  // elbow_l
    {-0.30, -0.26, 0.05},  // wrist_l
    {-0.32, -0.32, 0.07},  // hand_l
    {0.26, -0.12, 0.02},   // elbow_r
    {0.30, -0.26, 0.05},   // wrist_r
    {0.32, -0.32, 0.07},   // hand_r
};

double smoothstep(double u) { return u * u * (3.0 - 2.0 * u); }

// hand offset from rest at gesture phase u in [0, 1]
Vec3 gesture_offset(int cls, double u, double amp) {
    const double a = 0.16 * amp;
    switch (cls) {
        case 0:  // circle, closed loop in the x-y plane
            return {0.5 * a * (std::cos(2 * kPi * u) - 1.0), 0.5 * a * std::sin(2 * kPi * u), 0.0};
        case 1:  // horizontal swipe
            return {1.5 * a * smoothstep(u), 0.0, 0.0};
        case 2:  // vertical swipe
            return {0.0, 1.5 * a * smoothstep(u), 0.0};
        case 3:  // push, out and back along z
            return {0.0, 0.0, 1.5 * a * std::sin(kPi * u)};
        case 4:  // wave, lateral oscillation with a slight raise
            return {0.6 * a * std::sin(4 * kPi * u), 0.5 * a * std::sin(kPi * u), 0.0};
        case 5:  // figure eight, closed Lissajous
            return {0.6 * a * std::sin(2 * kPi * u), 0.6 * a * std::sin(4 * kPi * u), 0.0};
        case 6:  // static pose A: hand raised and held
            return {0.3 * a, 2.0 * a * std::min(1.0, u / 0.15), 0.2 * a};
        case 7:  // static pose B: hand forward and held
            return {-0.5 * a * std::min(1.0, u / 0.15), 0.4 * a, 1.6 * a * std::min(1.0, u / 0.15)};
    }
    throw std::invalid_argument("unknown gesture class");
}

}  // namespace

const std::vector<std::string>& class_names() {
    static const std::vector<std::string> names = {"circle", "swipe_h", "swipe_v", "push",
                                                   "wave",   "figure8", "pose_a",  "pose_b"};
    return names;
}

SynthDataset synth_generate(int n_classes, int train_per_class, int val_per_class,
                            int test_per_class, std::uint64_t seed) {
    if (n_classes < 2 || n_classes > kMaxClasses) {
        throw std::invalid_argument("synth: class count must be in [2, " +
                                    std::to_string(kMaxClasses) + "]");
    }
    if (train_per_class < 0 || val_per_class < 0 || test_per_class < 0 ||
        train_per_class + val_per_class + test_per_class < 1) {
        throw std::invalid_argument("synth: need at least one sequence per class");
    }

    SynthDataset out;
    out.manifest.classes.assign(class_names().begin(), class_names().begin() + n_classes);
    out.manifest.layout = features::upper_body_layout();

    const int per_class = train_per_class + val_per_class + test_per_class;
    for (int cls = 0; cls < n_classes; ++cls) {
        for (int i = 0; i < per_class; ++i) {
            // salted so generator streams never collide with augmentation streams
            auto rng = data::augment_rng(seed ^ 0x73796e7468ull, static_cast<std::uint64_t>(cls),
                                         static_cast<std::uint64_t>(i));
            std::uniform_real_distribution<double> unit(0.0, 1.0);

            const double amp = 0.8 + 0.4 * unit(rng);          // +-20%
            const double speed = 0.7 + 0.6 * unit(rng);        // +-30%
            const double jitter = -5.0 + 10.0 * unit(rng);     // start-time jitter, frames
            const int f_gen = static_cast<int>(std::lround(50.0 / speed));
            const double start = 6.0 + jitter;
            const double duration = f_gen - 14.0;
            std::normal_distribution<double> noise(0.0, 0.004);

            transforms::JointFrames jf;
            jf.frames = f_gen;
            jf.joints = features::joint::kCount;
            jf.dim = 3;
            jf.coords.resize(static_cast<std::size_t>(f_gen) * jf.joints * 3);
            for (int f = 0; f < f_gen; ++f) {
                double u = (f - start) / duration;
                u = std::min(1.0, std::max(0.0, u));
                const Vec3 hand_off = gesture_offset(cls, u, amp);
                // the right arm leads the gesture; wrist and elbow follow
                // the hand with reduced amplitude, the left arm idles
                const double sway = 0.01 * std::sin(2 * kPi * f / f_gen);
                for (int j = 0; j < jf.joints; ++j) {
                    Vec3 p = kRest[j];
                    if (j == features::joint::kHandR) {
                        p = p + hand_off;
                    } else if (j == features::joint::kWristR) {
                        p = p + 0.75 * hand_off;
                    } else if (j == features::joint::kElbowR) {
                        p = p + 0.4 * hand_off;
                    } else if (j == features::joint::kHandL || j == features::joint::kWristL) {
                        p = p + Vec3{sway, 0.0, 0.0};
                    }
                    jf.at(f, j, 0) = p.x + noise(rng);
                    jf.at(f, j, 1) = p.y + noise(rng);
                    jf.at(f, j, 2) = p.z + noise(rng);
                }
            }

            data::SkeletonSequence seq;
            char idbuf[64];
            std::snprintf(idbuf, sizeof(idbuf), "%s_%04d", out.manifest.classes[cls].c_str(), i);
            seq.id = idbuf;
            seq.label = cls;
            seq.fps = 30.0;
            seq.source = "synth";
            seq.frames = std::move(jf);

            if (i < train_per_class) {
                out.manifest.train_ids.push_back(seq.id);
            } else if (i < train_per_class + val_per_class) {
                out.manifest.val_ids.push_back(seq.id);
            } else {
                out.manifest.test_ids.push_back(seq.id);
            }
            out.sequences.push_back(std::move(seq));
        }
    }
    return out;
}

SynthDataset synth_generate(int n_classes, int n_per_class, std::uint64_t seed) {
    return synth_generate(n_classes, n_per_class, 0, 0, seed);
}

}  // namespace sigstream::synth

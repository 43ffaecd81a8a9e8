#include "sigstream/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace sigstream::data {

namespace {

using nlohmann::json;
using transforms::JointFrames;

[[noreturn]] void line_error(const std::string& path, std::size_t line, const std::string& what) {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

void DatasetManifest::validate(const std::vector<SkeletonSequence>& sequences) const {
    std::set<std::string> known;
    for (const auto& s : sequences) known.insert(s.id);
    std::set<std::string> seen;
    for (const auto* ids : {&train_ids, &val_ids, &test_ids}) {
        for (const auto& id : *ids) {
            if (!known.count(id)) throw std::runtime_error("manifest references unknown id " + id);
            if (!seen.insert(id).second) {
                throw std::runtime_error("manifest splits overlap on id " + id);
            }
        }
    }
}

std::vector<SkeletonSequence> load_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<SkeletonSequence> sequences;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json rec = json::parse(line, nullptr, false);
        if (rec.is_discarded()) line_error(path, line_no, "invalid JSON");
        if (!rec.is_object() || !rec.contains("id") || !rec.contains("frames")) {
            line_error(path, line_no, "record needs id and frames");
        }
        SkeletonSequence seq;
        seq.id = rec.at("id").get<std::string>();
        if (rec.contains("label") && !rec.at("label").is_null()) {
            seq.label = rec.at("label").get<int>();
        }
        if (rec.contains("fps") && !rec.at("fps").is_null()) {
            seq.fps = rec.at("fps").get<double>();
        }
        if (rec.contains("source") && !rec.at("source").is_null()) {
            seq.source = rec.at("source").get<std::string>();
        }

        const json& frames = rec.at("frames");
        if (!frames.is_array() || frames.empty()) line_error(path, line_no, "frames must be a nonempty array");
        JointFrames jf;
        jf.frames = static_cast<int>(frames.size());
        for (const auto& frame : frames) {
            if (!frame.is_array() || frame.empty()) line_error(path, line_no, "frame must be a nonempty array");
            if (jf.joints == 0) {
                jf.joints = static_cast<int>(frame.size());
            } else if (jf.joints != static_cast<int>(frame.size())) {
                line_error(path, line_no, "ragged frames: joint count varies");
            }
            for (const auto& joint : frame) {
                if (!joint.is_array() || joint.empty()) line_error(path, line_no, "joint must be a coordinate array");
                if (jf.dim == 0) {
                    jf.dim = static_cast<int>(joint.size());
                } else if (jf.dim != static_cast<int>(joint.size())) {
                    line_error(path, line_no, "ragged frames: coordinate count varies");
                }
                for (const auto& v : joint) {
                    if (!v.is_number()) line_error(path, line_no, "coordinate is not a number");
                    const double x = v.get<double>();
                    if (!std::isfinite(x)) line_error(path, line_no, "non-finite coordinate");
                    jf.coords.push_back(x);
                }
            }
        }
        seq.frames = std::move(jf);
        sequences.push_back(std::move(seq));
    }
    return sequences;
}

void save_jsonl(const std::string& path, const std::vector<SkeletonSequence>& sequences) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (const auto& seq : sequences) {
        json rec;
        rec["id"] = seq.id;
        rec["label"] = seq.label ? json(*seq.label) : json(nullptr);
        rec["fps"] = seq.fps ? json(*seq.fps) : json(nullptr);
        if (!seq.source.empty()) rec["source"] = seq.source;
        json frames = json::array();
        const auto& jf = seq.frames;
        for (int f = 0; f < jf.frames; ++f) {
            json frame = json::array();
            for (int j = 0; j < jf.joints; ++j) {
                json joint = json::array();
                for (int a = 0; a < jf.dim; ++a) joint.push_back(jf.at(f, j, a));
                frame.push_back(std::move(joint));
            }
            frames.push_back(std::move(frame));
        }
        rec["frames"] = std::move(frames);
        out << rec.dump() << "\n";
    }
    if (!out) throw std::runtime_error("failed writing " + path);
}

DatasetManifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json doc = json::parse(in);
    DatasetManifest m;
    m.classes = doc.at("classes").get<std::vector<std::string>>();
    for (const auto& [name, idx] : doc.at("layout").items()) {
        m.layout.emplace_back(name, idx.get<int>());
    }
    std::sort(m.layout.begin(), m.layout.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    m.train_ids = doc.at("splits").at("train").get<std::vector<std::string>>();
    m.val_ids = doc.at("splits").at("val").get<std::vector<std::string>>();
    m.test_ids = doc.at("splits").at("test").get<std::vector<std::string>>();
    return m;
}

void save_manifest(const std::string& path, const DatasetManifest& manifest) {
    json doc;
    doc["classes"] = manifest.classes;
    json layout = json::object();
    for (const auto& [name, idx] : manifest.layout) layout[name] = idx;
    doc["layout"] = std::move(layout);
    doc["splits"] = {{"train", manifest.train_ids},
                     {"val", manifest.val_ids},
                     {"test", manifest.test_ids}};
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << doc.dump(2) << "\n";
}

JointFrames augment_temporal(const JointFrames& seq, std::mt19937_64& rng, int range) {
    seq.validate();
    std::uniform_int_distribution<int> dist(-range, range);
    const int k = dist(rng);
    if (k == 0) return seq;
    JointFrames out = seq;
    const int width = seq.joints * seq.dim;
    for (int f = 0; f < seq.frames; ++f) {
        const int src = std::clamp(f - k, 0, seq.frames - 1);
        for (int w = 0; w < width; ++w) {
            out.coords[static_cast<std::size_t>(f) * width + w] =
                seq.coords[static_cast<std::size_t>(src) * width + w];
        }
    }
    return out;
}

JointFrames augment_noise(const JointFrames& seq, std::mt19937_64& rng, double sigma) {
    if (sigma == 0.0) return seq;
    std::normal_distribution<double> dist(0.0, sigma);
    JointFrames out = seq;
    for (double& v : out.coords) v += dist(rng);
    return out;
}

JointFrames rotate_coords(const JointFrames& seq, double angle_x, double angle_y,
                          double angle_z) {
    if (seq.dim != 3) throw std::invalid_argument("rotate_coords requires dim == 3");
    const double cx = std::cos(angle_x), sx = std::sin(angle_x);
    const double cy = std::cos(angle_y), sy = std::sin(angle_y);
    const double cz = std::cos(angle_z), sz = std::sin(angle_z);
    // R = Rz * Ry * Rx (x applied first)
    const double r[3][3] = {
        {cz * cy, cz * sy * sx - sz * cx, cz * sy * cx + sz * sx},
        {sz * cy, sz * sy * sx + cz * cx, sz * sy * cx - cz * sx},
        {-sy, cy * sx, cy * cx},
    };
    JointFrames out = seq;
    const std::size_t n = out.coords.size() / 3;
    for (std::size_t i = 0; i < n; ++i) {
        double* p = out.coords.data() + i * 3;
        const double x = p[0], y = p[1], z = p[2];
        p[0] = r[0][0] * x + r[0][1] * y + r[0][2] * z;
        p[1] = r[1][0] * x + r[1][1] * y + r[1][2] * z;
        p[2] = r[2][0] * x + r[2][1] * y + r[2][2] * z;
    }
    return out;
}

JointFrames augment_rotation(const JointFrames& seq, std::mt19937_64& rng) {
    if (seq.dim != 3) {
        static bool warned = false;
        if (!warned) {
            std::cerr << "warning: rotation augmentation skipped for dim != 3\n";
            warned = true;
        }
        return seq;
    }
    constexpr double kPi = 3.14159265358979323846;
    std::uniform_real_distribution<double> ax(-kPi / 36, kPi / 36);
    std::uniform_real_distribution<double> ay(-kPi / 18, kPi / 18);
    std::uniform_real_distribution<double> az(-kPi / 36, kPi / 36);
    const double tx = ax(rng), ty = ay(rng), tz = az(rng);
    return rotate_coords(seq, tx, ty, tz);
}

JointFrames apply_augmentations(const JointFrames& seq, const AugmentOptions& opts,
                                std::mt19937_64& rng) {
    JointFrames out = seq;
    if (opts.temporal) out = augment_temporal(out, rng, opts.temporal_range);
    if (opts.rotation) out = augment_rotation(out, rng);
    if (opts.noise_sigma > 0.0) out = augment_noise(out, rng, opts.noise_sigma);
    return out;
}

std::mt19937_64 augment_rng(std::uint64_t seed, std::uint64_t epoch, std::uint64_t index) {
    // splitmix64 finalizer over the mixed identity
    std::uint64_t x = seed * 0x9e3779b97f4a7c15ull + epoch * 0xbf58476d1ce4e5b9ull +
                      index * 0x94d049bb133111ebull + 0x2545f4914f6cdd1dull;
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ull;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebull;
    x ^= x >> 31;
    return std::mt19937_64(x);
}

}  // namespace sigstream::data

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "sigstream/data.hpp"
#include "sigstream/features.hpp"
#include "sigstream/synth.hpp"
#include "sigstream/transforms.hpp"

using namespace sigstream;

namespace {

data::SkeletonSequence make_seq(std::mt19937_64& rng, const std::string& id, int frames,
                                int joints, std::optional<int> label) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    data::SkeletonSequence seq;
    seq.id = id;
    seq.label = label;
    seq.fps = 30.0;
    seq.source = "test";
    seq.frames.frames = frames;
    seq.frames.joints = joints;
    seq.frames.dim = 3;
    seq.frames.coords.resize(static_cast<std::size_t>(frames) * joints * 3);
    for (double& v : seq.frames.coords) v = dist(rng);
    return seq;
}

}  // namespace

TEST_CASE("jsonl round-trips sequences exactly") {
    std::mt19937_64 rng(1);
    std::vector<data::SkeletonSequence> seqs;
    seqs.push_back(make_seq(rng, "a", 4, 3, 2));
    seqs.push_back(make_seq(rng, "b", 2, 3, std::nullopt));
    const std::string path = "/tmp/sigstream_test_roundtrip.jsonl";
    data::save_jsonl(path, seqs);
    auto loaded = data::load_jsonl(path);
    REQUIRE(loaded.size() == 2);
    CHECK(loaded[0].id == "a");
    CHECK(loaded[0].label == 2);
    CHECK(loaded[0].fps == 30.0);
    CHECK(loaded[0].frames.coords == seqs[0].frames.coords);
    CHECK(!loaded[1].label.has_value());
    CHECK(loaded[1].frames.coords == seqs[1].frames.coords);
}

TEST_CASE("jsonl parse errors carry line numbers") {
    const std::string path = "/tmp/sigstream_test_bad.jsonl";
    {
        std::ofstream out(path);
        out << R"({"id":"ok","label":0,"fps":null,"frames":[[[0,0,0]],[[1,1,1]]]})" << "\n";
        out << R"({"id":"ragged","label":0,"fps":null,"frames":[[[0,0,0]],[[1,1,1],[2,2,2]]]})"
            << "\n";
    }
    try {
        data::load_jsonl(path);
        FAIL("expected a parse error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find(":2:") != std::string::npos);
        CHECK(std::string(e.what()).find("ragged") != std::string::npos);
    }

    {
        std::ofstream out(path);
        out << "not json at all\n";
    }
    try {
        data::load_jsonl(path);
        FAIL("expected a parse error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find(":1:") != std::string::npos);
    }
}

TEST_CASE("manifest round-trip and split validation") {
    std::mt19937_64 rng(2);
    std::vector<data::SkeletonSequence> seqs;
    seqs.push_back(make_seq(rng, "x", 3, 2, 0));
    seqs.push_back(make_seq(rng, "y", 3, 2, 1));

    data::DatasetManifest m;
    m.classes = {"one", "two"};
    m.layout = {{"head", 0}, {"neck", 1}};
    m.train_ids = {"x"};
    m.test_ids = {"y"};
    CHECK_NOTHROW(m.validate(seqs));

    const std::string path = "/tmp/sigstream_test_manifest.json";
    data::save_manifest(path, m);
    auto loaded = data::load_manifest(path);
    CHECK(loaded.classes == m.classes);
    CHECK(loaded.layout == m.layout);
    CHECK(loaded.train_ids == m.train_ids);
    CHECK(loaded.test_ids == m.test_ids);

    data::DatasetManifest overlapping = m;
    overlapping.test_ids = {"x"};
    CHECK_THROWS_AS(overlapping.validate(seqs), std::runtime_error);
    data::DatasetManifest dangling = m;
    dangling.val_ids = {"missing"};
    CHECK_THROWS_AS(dangling.validate(seqs), std::runtime_error);
}

TEST_CASE("temporal augmentation shifts with edge replication") {
    // ramp content exposes the drawn shift
    transforms::JointFrames clip;
    clip.frames = 39;
    clip.joints = 1;
    clip.dim = 1;
    clip.coords.resize(39);
    for (int f = 0; f < 39; ++f) clip.coords[f] = f;

    std::mt19937_64 probe(77);
    const int k = std::uniform_int_distribution<int>(-5, 5)(probe);
    std::mt19937_64 rng(77);
    auto out = data::augment_temporal(clip, rng, 5);
    REQUIRE(out.frames == 39);
    for (int f = 0; f < 39; ++f) {
        CHECK(out.coords[f] == clip.coords[std::clamp(f - k, 0, 38)]);
    }

    // range 0 forces the identity
    std::mt19937_64 rng0(1);
    auto same = data::augment_temporal(clip, rng0, 0);
    CHECK(same.coords == clip.coords);
}

TEST_CASE("temporal augmentation draws shifts uniformly") {
    transforms::JointFrames clip;
    clip.frames = 20;
    clip.joints = 1;
    clip.dim = 1;
    clip.coords.resize(20);
    for (int f = 0; f < 20; ++f) clip.coords[f] = f;

    std::mt19937_64 rng(123);
    std::vector<int> counts(11, 0);
    for (int draw = 0; draw < 11000; ++draw) {
        auto out = data::augment_temporal(clip, rng, 5);
        int k;
        if (out.coords[0] != 0.0) {
            k = -static_cast<int>(out.coords[0]);
        } else {
            k = 19 - static_cast<int>(out.coords[19]);
        }
        REQUIRE(k >= -5);
        REQUIRE(k <= 5);
        counts[k + 5] += 1;
    }
    for (int c : counts) {
        CHECK(c >= 900);
        CHECK(c <= 1100);
    }
}

TEST_CASE("noise augmentation has the configured moments") {
    transforms::JointFrames clip;
    clip.frames = 33334;
    clip.joints = 10;
    clip.dim = 3;
    clip.coords.assign(static_cast<std::size_t>(33334) * 10 * 3, 0.25);

    std::mt19937_64 rng(42);
    auto out = data::augment_noise(clip, rng, 0.001);
    const std::size_t n = out.coords.size();
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += out.coords[i] - clip.coords[i];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = out.coords[i] - clip.coords[i] - mean;
        var += d * d;
    }
    var /= static_cast<double>(n - 1);
    const double stddev = std::sqrt(var);
    CHECK(std::abs(mean) < 1e-5);
    CHECK(stddev >= 0.00097);
    CHECK(stddev <= 0.00103);

    auto same = data::augment_noise(clip, rng, 0.0);
    CHECK(same.coords == clip.coords);
}

TEST_CASE("rotation is rigid and matches the axis convention") {
    transforms::JointFrames clip;
    clip.frames = 1;
    clip.joints = 1;
    clip.dim = 3;
    clip.coords = {1.0, 0.0, 0.0};

    auto id = data::rotate_coords(clip, 0.0, 0.0, 0.0);
    CHECK(id.coords == clip.coords);

    constexpr double kPi = 3.14159265358979323846;
    auto rot = data::rotate_coords(clip, 0.0, kPi / 18, 0.0);
    CHECK(rot.coords[0] == doctest::Approx(std::cos(kPi / 18)).epsilon(1e-15));
    CHECK(rot.coords[1] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(rot.coords[2] == doctest::Approx(-std::sin(kPi / 18)).epsilon(1e-15));

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    transforms::JointFrames many;
    many.frames = 5;
    many.joints = 6;
    many.dim = 3;
    many.coords.resize(5 * 6 * 3);
    for (double& v : many.coords) v = dist(rng);
    auto rotated = data::augment_rotation(many, rng);
    for (int f = 0; f < 5; ++f) {
        for (int a = 0; a < 6; ++a) {
            for (int b = a + 1; b < 6; ++b) {
                double d0 = 0.0, d1 = 0.0;
                for (int ax = 0; ax < 3; ++ax) {
                    d0 += std::pow(many.at(f, a, ax) - many.at(f, b, ax), 2);
                    d1 += std::pow(rotated.at(f, a, ax) - rotated.at(f, b, ax), 2);
                }
                CHECK(std::abs(std::sqrt(d0) - std::sqrt(d1)) <= 1e-12);
            }
        }
    }
}

TEST_CASE("augmentations preserve the clip shape") {
    std::mt19937_64 rng(8);
    auto seq = make_seq(rng, "s", 12, 10, 1);
    data::AugmentOptions opts;
    opts.temporal = true;
    opts.noise_sigma = 0.001;
    opts.rotation = true;
    auto out = data::apply_augmentations(seq.frames, opts, rng);
    CHECK(out.frames == 12);
    CHECK(out.joints == 10);
    CHECK(out.dim == 3);
}

TEST_CASE("synth generates balanced, deterministic datasets") {
    auto a = synth::synth_generate(5, 100, 1);
    CHECK(a.sequences.size() == 500);
    CHECK(a.manifest.train_ids.size() == 500);
    CHECK(a.manifest.classes.size() == 5);
    std::vector<int> counts(5, 0);
    for (const auto& s : a.sequences) counts[*s.label] += 1;
    for (int c : counts) CHECK(c == 100);

    auto b = synth::synth_generate(5, 100, 1);
    REQUIRE(b.sequences.size() == a.sequences.size());
    for (std::size_t i = 0; i < a.sequences.size(); ++i) {
        CHECK(a.sequences[i].id == b.sequences[i].id);
        CHECK(a.sequences[i].frames.coords == b.sequences[i].frames.coords);
    }

    auto c = synth::synth_generate(5, 100, 2);
    CHECK(c.sequences[0].frames.coords != a.sequences[0].frames.coords);

    CHECK_THROWS_AS(synth::synth_generate(9, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(synth::synth_generate(1, 10, 1), std::invalid_argument);
}

TEST_CASE("synth splits are sized per class and disjoint") {
    auto ds = synth::synth_generate(3, 10, 4, 6, 9);
    CHECK(ds.sequences.size() == 60);
    CHECK(ds.manifest.train_ids.size() == 30);
    CHECK(ds.manifest.val_ids.size() == 12);
    CHECK(ds.manifest.test_ids.size() == 18);
    CHECK_NOTHROW(ds.manifest.validate(ds.sequences));
}

TEST_CASE("circle gestures trace a closed loop after normalization") {
    auto ds = synth::synth_generate(2, 20, 11);
    int checked = 0;
    for (const auto& seq : ds.sequences) {
        if (ds.manifest.classes[*seq.label] != "circle") continue;
        auto norm = transforms::normalize_skeleton(seq.frames);
        const int hand = features::joint::kHandR;
        double dist = 0.0;
        for (int a = 0; a < 3; ++a) {
            const double d = norm.at(0, hand, a) - norm.at(norm.frames - 1, hand, a);
            dist += d * d;
        }
        CHECK(std::sqrt(dist) <= 0.05);
        ++checked;
    }
    CHECK(checked == 20);
}

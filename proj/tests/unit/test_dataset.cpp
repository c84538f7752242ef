#include <doctest.h>

#include <map>

#include "robulink/dataset/distorted_set.hpp"
#include "robulink/dataset/gate.hpp"
#include "robulink/dataset/manifest.hpp"
#include "robulink/imgcore/filter.hpp"
#include "robulink/imgcore/image_io.hpp"
#include "support.hpp"

using namespace robulink;

namespace {

const char* kThreeTasks =
    R"({"id":"m1","task":"MCQ","image_path":"img/a.png","question":"What is shown?","choices":[{"label":"A","text":"a cat"},{"label":"B","text":"a dog"}],"gt_answer":"B"})"
    "\n"
    R"({"id":"v1","task":"VQA","image_path":"img/b.png","question":"What color is the car?","gt_answer":"red"})"
    "\n"
    R"({"id":"c1","task":"CAP","image_path":"img/c.png","question":"Describe the image.","gt_answer":"A red car parked near a tree on a sunny street.","score_points":["red car","tree"]})"
    "\n";

std::vector<Sample> write_samples(const testing::ScratchDir& dir, int n) {
    std::vector<Sample> samples;
    for (int i = 0; i < n; ++i) {
        Sample s;
        s.id = "s" + std::to_string(i);
        s.task = Task::VQA;
        s.image_path = "ref/" + s.id + ".png";
        s.question = "q";
        s.gt_answer = "a";
        s.image_file = dir / s.image_path;
        write_image(testing::corpus()[i % 20], s.image_file);
        samples.push_back(s);
    }
    return samples;
}

}  // namespace

TEST_SUITE("dataset") {

TEST_CASE("manifest parsing") {
    CHECK(parse_manifest("").empty());
    testing::ScratchDir dir("manifest");
    testing::write_text(dir / "empty.jsonl", "");
    CHECK(load_manifest(dir / "empty.jsonl").empty());

    const auto samples = parse_manifest(kThreeTasks, "/data");
    REQUIRE(samples.size() == 3);
    const TaskBalance b = task_balance(samples);
    CHECK(b.count(Task::MCQ) == 1);
    CHECK(b.count(Task::VQA) == 1);
    CHECK(b.count(Task::CAP) == 1);
    CHECK_FALSE(b.unbalanced);
    CHECK(samples[0].choices.size() == 2);
    CHECK(samples[0].image_file == std::filesystem::path("/data/img/a.png"));
    CHECK(samples[2].score_points.size() == 2);
    CHECK(find_choice(samples[0], "b") == 1u);

    // serialization round trip
    std::string text;
    for (const auto& s : samples) text += sample_to_json_line(s) + "\n";
    CHECK(parse_manifest(text) == samples);
}

TEST_CASE("manifest validation errors carry the line and field") {
    const std::string bad_gt =
        R"({"id":"m1","task":"MCQ","image_path":"a.png","question":"q","choices":[{"label":"A","text":"x"},{"label":"B","text":"y"}],"gt_answer":"C"})";
    try {
        parse_manifest("\n" + bad_gt);
        FAIL("expected ManifestError");
    } catch (const ManifestError& e) {
        CHECK(e.line() == 2);
        CHECK(e.field() == "gt_answer");
    }
    CHECK_THROWS_AS(parse_manifest(R"({"id":"m","task":"MCQ","image_path":"a","question":"q","choices":["only"],"gt_answer":"A"})"),
                    ManifestError);
    CHECK_THROWS_AS(parse_manifest(R"({"id":"v","task":"VQA","image_path":"a","question":"q","gt_answer":"one two three four five six seven eight nine ten eleven"})"),
                    ManifestError);
    CHECK_THROWS_AS(parse_manifest("{not json"), ManifestError);
    CHECK_THROWS_AS(parse_manifest(R"({"id":"v","task":"XYZ","image_path":"a","question":"q","gt_answer":"a"})"), ManifestError);
    const std::string dup = R"({"id":"v","task":"VQA","image_path":"a","question":"q","gt_answer":"a"})";
    CHECK_THROWS_AS(parse_manifest(dup + "\n" + dup), ManifestError);
    // plain-string choices are labelled A, B, ...
    const auto s = parse_manifest(R"({"id":"m","task":"MCQ","image_path":"a","question":"q","choices":["x","y","z"],"gt_answer":"C"})");
    CHECK(s[0].choices[2] == Choice{"C", "z"});
}

TEST_CASE("distorted set cardinality and determinism") {
    testing::ScratchDir dir("dset");
    const auto samples = write_samples(dir, 2);
    const std::vector<Strength> all = {Strength::Low, Strength::Mid, Strength::High};
    const DistortedSet a = build_distorted_set(samples, {9}, all, 11, dir / "a");
    const DistortedSet b = build_distorted_set(samples, {9}, all, 11, dir / "b");
    CHECK(a.records.size() == 6);
    CHECK(a.failures.empty());
    CHECK(a.records == b.records);
    for (const auto& r : a.records) {
        CHECK(read_file_bytes(dir / "a" / r.image_path) == read_file_bytes(dir / "b" / r.image_path));
        CHECK(verify_record(r, read_image(samples[r.sample_id == "s0" ? 0 : 1].image_file), dir / "a"));
    }
    save_distorted_records(a.records, dir / "records.jsonl");
    CHECK(load_distorted_records(dir / "records.jsonl") == a.records);
    const DistortedSet c = build_distorted_set(samples, {9}, all, 12, dir / "c");
    CHECK(c.records != a.records);
}

TEST_CASE("missing reference images become per-record failures") {
    testing::ScratchDir dir("dset-missing");
    auto samples = write_samples(dir, 2);
    samples[1].image_file = dir / "nope.png";
    const DistortedSet set = build_distorted_set(samples, {9, 16}, {Strength::Low}, 1, dir / "out");
    CHECK(set.planned == 4);
    CHECK(set.records.size() == 2);
    CHECK(set.failures.size() == 2);
}

TEST_CASE("round-robin plan over 495 samples and 33 dimensions") {
    std::vector<Sample> samples(495);
    for (std::size_t i = 0; i < samples.size(); ++i) samples[i].id = "id" + std::to_string(i);
    std::vector<int> dims;
    for (int d = 1; d <= 33; ++d) dims.push_back(d);
    const auto plan = plan_distorted_set(samples, dims, {Strength::Low, Strength::Mid, Strength::High}, 3,
                                         StrengthPlan::RoundRobin);
    CHECK(plan.size() == 16335);
    std::map<Strength, int> per;
    for (const auto& r : plan) ++per[r.strength];
    CHECK(per[Strength::Low] == 5445);
    CHECK(per[Strength::Mid] == 5445);
    CHECK(per[Strength::High] == 5445);
    const auto full = plan_distorted_set(samples, {1, 2}, {Strength::Low, Strength::High}, 3, StrengthPlan::Full);
    CHECK(full.size() == 495 * 4);
}

TEST_CASE("record json round trip and duplicates") {
    DistortedRecord r{"x", 16, Strength::High, 0xFFFFFFFFFFFFFFFFull, "images/x/16-jpeg_high.png", false};
    CHECK(record_from_json_line(record_to_json_line(r)) == r);
    CHECK(record_image_path("x", 16, Strength::High) == "images/x/16-jpeg_high.png");
    testing::ScratchDir dir("records");
    testing::write_text(dir / "r.jsonl", record_to_json_line(r) + "\n" + record_to_json_line(r) + "\n");
    CHECK_THROWS(load_distorted_records(dir / "r.jsonl"));
}

TEST_CASE("quality gates") {
    ImageBuffer gray(64, 64);
    for (auto& v : gray.data()) v = 128;
    const GateVerdict v = gate_image(gray, default_gate_config());
    CHECK_FALSE(v.pass);
    CHECK(v.failed_gate == "proxy");
    CHECK(blur_score(gray) == 0.0);
    CHECK(exposure_score(gray) == 1.0);

    QualityGateConfig open;
    open.gates.push_back({std::make_shared<ProxyGate>(), 0.0});
    open.gates.push_back({std::make_shared<BlurGate>(), 0.0});
    open.gates.push_back({std::make_shared<ExposureGate>(), 0.0});
    for (const auto& img : testing::corpus()) CHECK(gate_image(img, open).pass);
    CHECK(gate_image(gray, open).pass);

    const ImageBuffer texture = testing::noise_image(64, 64, 6);
    const ImageBuffer blurred = convolve(texture, Kernel::gaussian(6.0));
    CHECK(blur_score(texture) > blur_score(blurred));
    CHECK(ProxyGate().score(texture) > ProxyGate().score(blurred));

    CHECK_THROWS_AS(gate_image(gray, QualityGateConfig{}), GateError);
}

TEST_CASE("gate config from json and external scorers") {
    const auto cfg = gate_config_from_json(nlohmann::json::parse(
        R"({"gates":[{"type":"blur","threshold":0.1},{"type":"command","name":"fixed","command":"test -f {in} && echo 0.75","threshold":0.7}]})"));
    REQUIRE(cfg.gates.size() == 2);
    const auto v = gate_image(testing::corpus()[0], cfg);
    REQUIRE(v.scores.size() == 2);
    CHECK(v.scores[1].gate == "fixed");
    CHECK(v.scores[1].score == doctest::Approx(0.75));

    QualityGateConfig broken;
    broken.gates.push_back({std::make_shared<CommandGate>("bad", "exit 3 # {in}"), 0.5});
    const auto bv = gate_image(testing::corpus()[0], broken);
    CHECK_FALSE(bv.pass);
    CHECK(bv.failed_gate == "bad");
    CHECK_THROWS(gate_config_from_json(nlohmann::json::parse(R"({"gates":[{"type":"mystery"}]})")));
}

}

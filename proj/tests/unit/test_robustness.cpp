#include <doctest.h>

#include <algorithm>
#include <random>

#include "oracle.hpp"
#include "robulink/robustness/evaluate.hpp"
#include "robulink/robustness/report.hpp"
#include "support.hpp"
#include "published_rows.hpp"

using namespace robulink;

namespace {

ScoreValue sv(double v) { return {v, ScoreMethod::OfflineFallback, 0, ""}; }

EvalRecord rec(const std::string& model, Task task, Strength s, std::optional<double> ref_gt,
               std::optional<double> dist_gt, std::optional<double> ref_dist, int dim = 1) {
    EvalRecord r;
    r.model = model;
    r.sample_id = "x";
    r.task = task;
    r.strength = s;
    r.dimension = dim;
    if (ref_gt) r.ref_vs_gt = sv(*ref_gt);
    if (dist_gt) r.dist_vs_gt = sv(*dist_gt);
    if (ref_dist) r.ref_vs_dist = sv(*ref_dist);
    return r;
}

}  // namespace

TEST_SUITE("robustness") {

TEST_CASE("absolute and relative robustness") {
    CHECK(absolute(rec("m", Task::VQA, Strength::Low, {}, 0.5, {})) == 0.5);
    CHECK(absolute(rec("m", Task::VQA, Strength::Low, {}, 1.0, {})) == 1.0);
    CHECK(absolute(rec("m", Task::MCQ, Strength::Low, {}, 1.0, {})) == 1.0);
    CHECK_FALSE(absolute(rec("m", Task::VQA, Strength::Low, 1.0, {}, 1.0)));
    CHECK(relative(rec("m", Task::VQA, Strength::Low, 1.0, {}, 0.6)) == doctest::Approx(0.6));
    CHECK(relative(rec("m", Task::VQA, Strength::Low, 0.0, {}, 1.0)) == 0.0);
    CHECK(relative(rec("m", Task::VQA, Strength::Low, 0.8, {}, 0.5)) == doctest::Approx(0.4));
    CHECK_FALSE(relative(rec("m", Task::VQA, Strength::Low, 0.8, {}, {})));
}

TEST_CASE("relative never exceeds reference correctness") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 10000; ++i) {
        const double a = u(gen), c = u(gen);
        REQUIRE(*relative(rec("m", Task::CAP, Strength::Mid, a, {}, c)) <= a);
    }
}

TEST_CASE("aggregation cells") {
    std::vector<EvalRecord> all_one;
    for (Task t : kAllTasks)
        for (Strength s : kCalibratedStrengths)
            for (int d = 1; d <= 33; ++d) all_one.push_back(rec("m", t, s, 1.0, 1.0, 1.0, d));
    const RobustnessReport r = aggregate(all_one);
    const ModelReport& m = r.models.at(0);
    for (Measure meas : {Measure::Absolute, Measure::Relative}) {
        const MeasureCells& c = m.cells(meas);
        for (Task t : kAllTasks)
            for (Strength s : kCalibratedStrengths) CHECK(c.at(t, s).value == 1.0);
        for (const auto& cell : c.step) CHECK(cell.value == 1.0);
        for (const auto& cell : c.group) CHECK(cell.value == 1.0);
        for (const auto& cell : c.dimension) CHECK(cell.value == 1.0);
        CHECK(c.overall.value == 1.0);
        CHECK(c.overall.ci == Interval{1.0, 1.0});
    }

    const RobustnessReport two = aggregate({rec("m", Task::VQA, Strength::Low, {}, 0.2, {}), rec("m", Task::VQA, Strength::Low, {}, 0.8, {})});
    const Cell& cell = two.models[0].absolute.at(Task::VQA, Strength::Low);
    CHECK(cell.value == doctest::Approx(0.5));
    CHECK(cell.count == 2);
    CHECK_FALSE(two.models[0].absolute.at(Task::MCQ, Strength::Low).value);
    CHECK(two.models[0].missing_relative == 2);
}

TEST_CASE("aggregation ignores record order") {
    auto records = testing::records_for(testing::published_rows()[0], 3);
    const RobustnessReport a = aggregate(records);
    std::reverse(records.begin(), records.end());
    const RobustnessReport b = aggregate(records);
    CHECK(report_to_json(a) == report_to_json(b));
}

TEST_CASE("published rows reconcile") {
    for (const auto& row : testing::published_rows()) {
        const RobustnessReport r = aggregate(testing::records_for(row), {false});
        const double overall = *r.models.at(0).cells(row.measure).overall.value;
        const double naive = oracle::naive_mean(std::vector<double>(row.cells.begin(), row.cells.end()));
        CHECK(overall == doctest::Approx(naive).epsilon(1e-12));
        CHECK(std::abs(overall - row.overall) <= 0.001);
    }
    const RobustnessReport gpt = aggregate(testing::records_for(testing::published_rows()[0]), {false});
    CHECK(std::abs(*gpt.models[0].absolute.overall.value - 0.6346) < 5e-5);
    CHECK(std::abs(*gpt.models[0].absolute.overall.value - 0.6348) <= 0.0005);
}

TEST_CASE("ranking") {
    const RobustnessReport single = aggregate({rec("only", Task::VQA, Strength::Low, 1.0, 0.5, 0.5)});
    REQUIRE(single.ranking.size() == 1);
    CHECK(single.ranking[0].model == "only");

    const RobustnessReport tie = aggregate({rec("first", Task::VQA, Strength::Low, 1.0, 0.6, 0.4),
                                            rec("second", Task::VQA, Strength::Low, 1.0, 0.5, 0.5)});
    REQUIRE(tie.ranking.size() == 2);
    CHECK(tie.ranking[0].model == "second");
    CHECK(*tie.ranking[0].score == doctest::Approx(*tie.ranking[1].score));

    std::vector<EvalRecord> all;
    for (int i = 0; i < 3; ++i) {
        const auto part = testing::records_for(testing::published_rows()[i]);
        all.insert(all.end(), part.begin(), part.end());
    }
    const RobustnessReport top = aggregate(all, {false});
    std::vector<const ModelReport*> by_abs;
    for (const auto& m : top.models) by_abs.push_back(&m);
    std::sort(by_abs.begin(), by_abs.end(),
              [](auto* a, auto* b) { return *a->absolute.overall.value > *b->absolute.overall.value; });
    CHECK(by_abs[0]->model == "GPT4o");
    CHECK(by_abs[1]->model == "GPT4Turbo");
    CHECK(by_abs[2]->model == "GeminiPro");
}

TEST_CASE("bootstrap intervals") {
    const std::vector<double> same(30, 0.37);
    CHECK(bootstrap_ci(same, 0.9, 1000, 3) == Interval{0.37, 0.37});
    CHECK_FALSE(bootstrap_ci(std::vector<double>{0.5}));
    std::vector<double> coin;
    for (int i = 0; i < 50; ++i) coin.insert(coin.end(), {0.0, 1.0});
    const auto ci = bootstrap_ci(coin, 0.90, 1000, 7);
    REQUIRE(ci);
    CHECK(ci->first == 0.42);
    CHECK(ci->second == 0.58);
    CHECK(bootstrap_ci(coin, 0.90, 1000, 7) == ci);

    std::mt19937_64 gen(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 20; ++t) {
        std::vector<double> v(15);
        for (auto& x : v) x = u(gen);
        const auto c = bootstrap_ci(v, 0.9, 500, t);
        const double m = *mean(v);
        CHECK(c->first <= m);
        CHECK(m <= c->second);
    }
}

TEST_CASE("score serialization and report rendering") {
    EvalRecord r = rec("m", Task::CAP, Strength::High, 0.9, 0.25, 0.5, 31);
    r.dist_vs_gt->method = ScoreMethod::Judge;
    r.dist_vs_gt->repeats = 5;
    r.dist_vs_gt->template_hash = "abc";
    const EvalRecord back = eval_record_from_json_line(eval_record_to_json_line(r));
    CHECK(back.dist_vs_gt == r.dist_vs_gt);
    CHECK(back.ref_vs_dist == r.ref_vs_dist);
    CHECK(back.dimension == 31);

    const RobustnessReport report = aggregate({r}, {false});
    const std::string text = render_task_table_text(report, Measure::Absolute);
    CHECK(text.find("0.2500") != std::string::npos);
    const std::string csv = render_task_table_csv(report, Measure::Relative);
    CHECK(csv.find("0.4500") != std::string::npos);
    CHECK(format_value(std::nullopt) == "-");
    CHECK(render_axis_table_csv(report, Measure::Absolute, Axis::Dimension).find("cnn_denoise") != std::string::npos);
    CHECK(render_ranking_text(report).find("m") != std::string::npos);
}

TEST_CASE("scoring exchanges into records") {
    Sample s;
    s.id = "q1";
    s.task = Task::MCQ;
    s.choices = {{"A", "cat"}, {"B", "dog"}};
    s.gt_answer = "A";
    const std::vector<DistortedRecord> records = {{"q1", 9, Strength::Low, 1, "p1", false},
                                                  {"q1", 16, Strength::High, 1, "p2", false}};
    std::vector<Exchange> ex = {{"m", "q1", "reference", "p", "", "A", "", 1},
                                {"m", "q1", records[0].corruption_key(), "p", "", "A", "", 1},
                                {"m", "q1", records[1].corruption_key(), "p", "", "B", "", 1}};
    ScoringRun run = score_exchanges({s}, records, ex, nullptr);
    REQUIRE(run.records.size() == 2);
    CHECK(*absolute(run.records[0]) == 1.0);
    CHECK(*relative(run.records[0]) == 1.0);
    CHECK(*absolute(run.records[1]) == 0.0);
    CHECK(*relative(run.records[1]) == 0.0);

    ex.pop_back();
    run = score_exchanges({s}, records, ex, nullptr);
    CHECK(run.missing_distorted == 1);
    CHECK_FALSE(run.records[1].dist_vs_gt);
}

}

#include "robulink/robustness/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "robulink/rng.hpp"

namespace robulink {

std::optional<double> absolute(const EvalRecord& r) {
    if (!r.dist_vs_gt) {
        return std::nullopt;
    }
    return r.dist_vs_gt->value;
}

std::optional<double> relative(const EvalRecord& r) {
    if (!r.ref_vs_gt || !r.ref_vs_dist) {
        return std::nullopt;
    }
    return r.ref_vs_gt->value * r.ref_vs_dist->value;
}

std::optional<double> mean(std::span<const double> values) {
    if (values.empty()) {
        return std::nullopt;
    }
    double sum = 0.0;
    double comp = 0.0;
    for (double v : values) {
        const double t = sum + v;
        comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
        sum = t;
    }
    return (sum + comp) / static_cast<double>(values.size());
}

namespace {

double quantile_sorted(const std::vector<double>& v, double q) {
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

constexpr std::uint64_t kBootstrapDomain = 0x626f6f74ULL;

}  // namespace

std::optional<Interval> bootstrap_ci(std::span<const double> values, double level, int resamples,
                                     std::uint64_t seed) {
    if (values.size() < 2) {
        return std::nullopt;
    }
    if (!(level > 0.0 && level < 1.0) || resamples < 1) {
        throw std::invalid_argument("bootstrap_ci: level must lie in (0,1) and resamples be positive");
    }
    if (std::all_of(values.begin(), values.end(), [&](double v) { return v == values[0]; })) {
        return Interval{values[0], values[0]};
    }
    SubStream rng(derive_key({seed, kBootstrapDomain, values.size()}));
    std::vector<double> means(static_cast<std::size_t>(resamples));
    std::vector<double> draw(values.size());
    for (auto& m : means) {
        for (auto& d : draw) {
            d = values[rng.below(values.size())];
        }
        m = *mean(draw);
    }
    std::sort(means.begin(), means.end());
    const double tail = (1.0 - level) / 2.0;
    return Interval{quantile_sorted(means, tail), quantile_sorted(means, 1.0 - tail)};
}

const ModelReport* RobustnessReport::find(const std::string& model) const {
    for (const auto& m : models) {
        if (m.model == model) {
            return &m;
        }
    }
    return nullptr;
}

namespace {

struct Buckets {
    std::array<std::array<std::vector<double>, 3>, 3> task_strength;
    std::array<std::vector<double>, 7> step;
    std::array<std::vector<double>, 7> group;
    std::array<std::vector<double>, kDimensionCount> dimension;
    std::vector<double> overall;

    void add(const EvalRecord& r, double v) {
        const auto& info = dimension_info(r.dimension);
        task_strength[static_cast<std::size_t>(r.task)][static_cast<std::size_t>(r.strength) - 1].push_back(v);
        step[static_cast<std::size_t>(info.step)].push_back(v);
        group[static_cast<std::size_t>(info.group)].push_back(v);
        dimension[static_cast<std::size_t>(r.dimension - 1)].push_back(v);
        overall.push_back(v);
    }
};

Cell make_cell(const std::vector<double>& values, const AggregateOptions& opt, std::uint64_t cell_id) {
    Cell c;
    c.count = values.size();
    c.value = mean(values);
    if (opt.with_ci) {
        c.ci = bootstrap_ci(values, opt.level, opt.resamples, derive_key({opt.seed, cell_id}));
    }
    return c;
}

MeasureCells fill(Buckets& b, const AggregateOptions& opt, std::uint64_t model_key, std::uint64_t measure) {
    // Values are sorted first so the result does not depend on record order.
    const auto cell = [&](std::vector<double>& v, std::uint64_t a, std::uint64_t i) {
        std::sort(v.begin(), v.end());
        return make_cell(v, opt, derive_key({model_key, measure, a, i}));
    };
    MeasureCells m;
    for (std::size_t t = 0; t < 3; ++t)
        for (std::size_t s = 0; s < 3; ++s) m.task_strength[t][s] = cell(b.task_strength[t][s], 1, t * 3 + s);
    for (std::size_t i = 0; i < 7; ++i) m.step[i] = cell(b.step[i], 2, i);
    for (std::size_t i = 0; i < 7; ++i) m.group[i] = cell(b.group[i], 3, i);
    for (std::size_t i = 0; i < m.dimension.size(); ++i) m.dimension[i] = cell(b.dimension[i], 4, i);
    m.overall = cell(b.overall, 5, 0);
    return m;
}

bool close(double a, double b) { return std::abs(a - b) <= 1e-12; }

}  // namespace

RobustnessReport aggregate(const std::vector<EvalRecord>& records, const AggregateOptions& options) {
    struct PerModel {
        Buckets abs, rel;
        std::size_t records = 0, miss_abs = 0, miss_rel = 0;
    };
    std::map<std::string, PerModel> by_model;
    for (const auto& r : records) {
        auto& m = by_model[r.model];
        ++m.records;
        if (r.strength == Strength::None) {
            continue;
        }
        if (const auto a = absolute(r)) {
            m.abs.add(r, *a);
        } else {
            ++m.miss_abs;
        }
        if (const auto v = relative(r)) {
            m.rel.add(r, *v);
        } else {
            ++m.miss_rel;
        }
    }
    RobustnessReport report;
    report.ci_level = options.level;
    for (auto& [name, m] : by_model) {
        ModelReport mr;
        mr.model = name;
        mr.records = m.records;
        mr.missing_absolute = m.miss_abs;
        mr.missing_relative = m.miss_rel;
        mr.absolute = fill(m.abs, options, fnv1a64(name), 0);
        mr.relative = fill(m.rel, options, fnv1a64(name), 1);
        report.models.push_back(std::move(mr));
    }
    report.ranking = rank(report.models);
    return report;
}

std::vector<RankEntry> rank(const std::vector<ModelReport>& models) {
    std::vector<RankEntry> out;
    for (const auto& m : models) {
        RankEntry e{m.model, m.absolute.overall.value, m.relative.overall.value, std::nullopt};
        if (e.absolute && e.relative) {
            e.score = (*e.absolute + *e.relative) / 2.0;
        }
        out.push_back(std::move(e));
    }
    std::sort(out.begin(), out.end(), [](const RankEntry& a, const RankEntry& b) {
        if (a.score.has_value() != b.score.has_value()) return a.score.has_value();
        if (a.score && !close(*a.score, *b.score)) return *a.score > *b.score;
        const double ra = a.relative.value_or(-1.0);
        const double rb = b.relative.value_or(-1.0);
        if (!close(ra, rb)) return ra > rb;
        return a.model < b.model;
    });
    return out;
}

}  // namespace robulink

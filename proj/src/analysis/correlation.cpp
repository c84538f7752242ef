#include "robulink/analysis/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace robulink {

bool PerfMatrix::row_complete(std::size_t r) const {
    return std::all_of(values[r].begin(), values[r].end(), [](const auto& v) { return v.has_value(); });
}

std::vector<double> PerfMatrix::row(std::size_t r) const {
    std::vector<double> out;
    for (const auto& v : values[r]) {
        if (!v) throw std::invalid_argument("row '" + rows[r] + "' has absent entries");
        out.push_back(*v);
    }
    return out;
}

PerfMatrix perf_matrix(const RobustnessReport& report, Measure measure, Axis axis) {
    PerfMatrix p;
    for (const auto& m : report.models) p.columns.push_back(m.model);
    const auto add_row = [&](std::string label, auto cell_of) {
        p.rows.push_back(std::move(label));
        std::vector<std::optional<double>> row;
        for (const auto& m : report.models) row.push_back(cell_of(m.cells(measure)).value);
        p.values.push_back(std::move(row));
    };
    if (axis == Axis::Step) {
        for (Step s : kAllSteps)
            add_row(std::string(to_string(s)), [s](const MeasureCells& c) { return c.step[static_cast<std::size_t>(s)]; });
    } else if (axis == Axis::Group) {
        for (Group g : kAllGroups)
            add_row(std::string(to_string(g)), [g](const MeasureCells& c) { return c.group[static_cast<std::size_t>(g)]; });
    } else {
        for (const auto& d : all_dimensions())
            add_row(std::to_string(d.id) + "-" + std::string(d.slug),
                    [id = d.id](const MeasureCells& c) { return c.dimension[static_cast<std::size_t>(id - 1)]; });
    }
    return p;
}

std::vector<double> average_ranks(std::span<const double> v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
        const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = r;
        i = j + 1;
    }
    return ranks;
}

std::optional<double> srocc(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("srocc: inputs differ in length");
    if (x.size() < 3) throw std::invalid_argument("srocc: need at least 3 values");
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    const double n = static_cast<double>(rx.size());
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return std::nullopt;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

CorrelationMatrix correlation_matrix(const PerfMatrix& perf) {
    if (perf.column_count() < 3) throw std::invalid_argument("correlation matrix needs at least 3 models");
    const std::size_t n = perf.row_count();
    CorrelationMatrix m{perf.rows, std::vector<std::vector<std::optional<double>>>(n, std::vector<std::optional<double>>(n))};
    std::vector<std::optional<std::vector<double>>> rows(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (perf.row_complete(i)) rows[i] = perf.row(i);
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            if (!rows[i] || !rows[j]) continue;
            std::optional<double> v = srocc(*rows[i], *rows[j]);
            if (i == j && v) v = 1.0;
            m.values[i][j] = m.values[j][i] = v;
        }
    }
    return m;
}

namespace {

std::string fmt(const std::optional<double>& v) {
    if (!v) return "";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", *v);
    return buf;
}

}  // namespace

std::string correlation_matrix_csv(const CorrelationMatrix& m) {
    std::string out = "unit";
    for (const auto& l : m.labels) out += "," + l;
    out += "\n";
    for (std::size_t i = 0; i < m.labels.size(); ++i) {
        out += m.labels[i];
        for (const auto& v : m.values[i]) out += "," + fmt(v);
        out += "\n";
    }
    return out;
}

std::string perf_matrix_csv(const PerfMatrix& m) {
    std::string out = "unit";
    for (const auto& c : m.columns) out += "," + c;
    out += "\n";
    for (std::size_t i = 0; i < m.rows.size(); ++i) {
        out += m.rows[i];
        for (const auto& v : m.values[i]) out += "," + fmt(v);
        out += "\n";
    }
    return out;
}

}  // namespace robulink

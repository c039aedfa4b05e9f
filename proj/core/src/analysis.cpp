// Copyright 2026 The hrlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "hrlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "hrlab/error.hpp"

namespace hrlab {

EnergyTrace trace_from_run(const RunResult& result, std::string label) {
    if (result.trace.empty()) {
        throw ComparisonError("run has an empty trace");
    }
    EnergyTrace trace{std::move(label), {}};
    trace.rows.reserve(result.trace.size());
    for (const auto& record : result.trace) {
        trace.rows.push_back({record.step, record.latent_energy});
    }
    return trace;
}

EnergyTrace mean_trace(std::span<const EnergyTrace> traces, std::string label) {
    if (traces.empty()) {
        throw ComparisonError("mean_trace of no traces");
    }
    EnergyTrace out{std::move(label), traces.front().rows};
    for (std::size_t t = 1; t < traces.size(); ++t) {
        const auto& rows = traces[t].rows;
        if (rows.size() != out.rows.size()) {
            throw ComparisonError("mean_trace: traces have different lengths");
        }
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].step != out.rows[i].step) {
                throw ComparisonError("mean_trace: step sets differ");
            }
            out.rows[i].energy += rows[i].energy;
        }
    }
    for (auto& row : out.rows) {
        row.energy /= static_cast<double>(traces.size());
    }
    return out;
}

double window_mean(const EnergyTrace& trace, int first, int last) {
    double sum = 0.0;
    int count = 0;
    for (const auto& row : trace.rows) {
        if (row.step >= first && row.step < last) {
            sum += row.energy;
            ++count;
        }
    }
    if (count == 0) {
        throw ComparisonError("trace '" + trace.label + "' has no rows in [" + std::to_string(first) + ", " +
                              std::to_string(last) + ")");
    }
    return sum / count;
}

CurveComparison compare_traces(const EnergyTrace& reference, const EnergyTrace& candidate, int window_start) {
    const auto window = [window_start](const EnergyTrace& trace) {
        std::vector<EnergyRow> rows;
        for (const auto& row : trace.rows) {
            if (row.step >= window_start) {
                rows.push_back(row);
            }
        }
        return rows;
    };
    const auto ref = window(reference);
    const auto cand = window(candidate);
    if (ref.empty() || cand.empty()) {
        throw ComparisonError("traces '" + reference.label + "' and '" + candidate.label + "' do not both cover step " +
                              std::to_string(window_start));
    }
    if (ref.size() != cand.size() ||
        !std::equal(ref.begin(), ref.end(), cand.begin(), [](const EnergyRow& a, const EnergyRow& b) {
            return a.step == b.step;
        })) {
        throw ComparisonError("traces '" + reference.label + "' and '" + candidate.label +
                              "' have different steps after " + std::to_string(window_start));
    }

    CurveComparison out{reference.label, candidate.label, {}, window_start, 0.0};
    double sum = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        const double gap = ref[i].energy - cand[i].energy;
        out.per_step_gap.push_back({ref[i].step, gap});
        sum += gap;
    }
    out.mean_gap_after = sum / static_cast<double>(ref.size());
    return out;
}

std::vector<std::vector<MseRow>> p_x0_mse_series(std::span<const Snapshot> snapshots) {
    if (snapshots.size() < 2) {
        throw StatisticError("p_x0_mse_series needs at least two snapshots");
    }
    std::vector<std::vector<MseRow>> segments(1);
    for (std::size_t i = 1; i < snapshots.size(); ++i) {
        const auto& prev = snapshots[i - 1];
        const auto& cur = snapshots[i];
        if (prev.p_x0.shape() != cur.p_x0.shape()) {
            if (!segments.back().empty()) {
                segments.emplace_back();
            }
            continue;
        }
        segments.back().push_back({cur.step, mean_squared_difference(prev.p_x0, cur.p_x0)});
    }
    if (segments.back().empty()) {
        segments.pop_back();
    }
    return segments;
}

double monotonicity_stat(std::span<const std::pair<double, double>> pairs) {
    std::set<double> distinct;
    for (const auto& p : pairs) {
        distinct.insert(p.first);
    }
    if (distinct.size() < 3) {
        throw StatisticError("monotonicity_stat needs at least 3 distinct omega values, got " +
                             std::to_string(distinct.size()));
    }
    long concordant = 0;
    long discordant = 0;
    long tied_x = 0;
    long tied_y = 0;
    long total = 0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        for (std::size_t j = i + 1; j < pairs.size(); ++j) {
            const double dx = pairs[j].first - pairs[i].first;
            const double dy = pairs[j].second - pairs[i].second;
            ++total;
            if (dx == 0.0) ++tied_x;
            if (dy == 0.0) ++tied_y;
            if (dx == 0.0 || dy == 0.0) continue;
            if ((dx > 0.0) == (dy > 0.0)) {
                ++concordant;
            } else {
                ++discordant;
            }
        }
    }
    const double denom = std::sqrt(static_cast<double>(total - tied_x) * static_cast<double>(total - tied_y));
    if (denom == 0.0) {
        throw StatisticError("monotonicity_stat: one coordinate is constant");
    }
    return static_cast<double>(concordant - discordant) / denom;
}

ZTest z_test_mean_var(std::span<const double> samples, double expected_mean, double expected_var) {
    if (samples.size() < kMinZTestSamples) {
        throw StatisticError("z_test_mean_var needs at least " + std::to_string(kMinZTestSamples) + " samples, got " +
                             std::to_string(samples.size()));
    }
    if (!(expected_var > 0.0)) {
        throw StatisticError("expected variance must be positive");
    }
    const double n = static_cast<double>(samples.size());
    // Accumulate deviations from the expected mean so exact samples give exactly zero.
    double offset = 0.0;
    for (double v : samples) {
        offset += v - expected_mean;
    }
    offset /= n;
    double ss = 0.0;
    for (double v : samples) {
        const double d = (v - expected_mean) - offset;
        ss += d * d;
    }
    return {offset / std::sqrt(expected_var / n), (ss / (n - 1.0)) / expected_var};
}

}  // namespace hrlab

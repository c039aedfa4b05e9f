// Copyright 2026 The hrlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "hrlab/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "hrlab/cli/verify.hpp"
#include "hrlab/error.hpp"
#include "hrlab/tensor_file.hpp"

namespace hrlab::cli {

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    return out;
}

void prepare_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw Error("cannot create " + dir.string() + ": " + ec.message());
    }
}

/// Calls job(i) for i in [0, count) on up to `jobs` threads; rethrows the first failure.
template <typename Job>
void parallel_for(int count, int jobs, Job job) {
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const auto worker = [&] {
        for (int i = next++; i < count; i = next++) {
            try {
                job(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next = count;
            }
        }
    };
    const int threads = std::clamp(jobs, 1, std::max(count, 1));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

RunOptions run_options(const Experiment& experiment, Variant variant, std::uint64_t seed) {
    RunOptions options;
    options.variant = variant;
    options.channels = experiment.config.run.channels;
    options.condition = experiment.condition_for_seed(seed);
    options.seed = seed;
    options.snapshot_steps = experiment.config.run.snapshot_steps;
    options.resize_method = experiment.config.codec.resize;
    return options;
}

void write_trace(const std::filesystem::path& path, const RunResult& result) {
    auto out = open_output(path);
    out << "step,train_t,omega,latent_energy,p_x0_energy,refreshed\n";
    for (const auto& r : result.trace) {
        out << r.step << ',' << r.train_t << ',' << format_real(r.omega) << ',' << format_real(r.latent_energy) << ','
            << format_real(r.p_x0_energy) << ',' << (r.refreshed ? 1 : 0) << '\n';
    }
}

void write_mse(const std::filesystem::path& path, const std::vector<std::vector<MseRow>>& segments) {
    auto out = open_output(path);
    out << "segment,step,mse\n";
    for (std::size_t k = 0; k < segments.size(); ++k) {
        for (const auto& row : segments[k]) {
            out << k << ',' << row.step << ',' << format_real(row.mse) << '\n';
        }
    }
}

void write_pgm(const std::filesystem::path& path, int width, int height, const std::vector<std::uint8_t>& pixels) {
    auto out = open_output(path);
    out << "P5\n" << width << ' ' << height << "\n255\n";
    out.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
}

}  // namespace

std::string format_real(double value) { return fmt::format("{:.9g}", value); }

void cmd_ladder(const ExperimentConfig& config, std::ostream& out) {
    const Experiment experiment = build_experiment(config);
    const auto steps = select_refresh_steps(config.ladder.config);
    const auto omegas = select_omegas(config.ladder.config);
    out << fmt::format("refresh steps: [{}]\n", fmt::join(steps, ", "));
    out << fmt::format("omegas: [{}]\n", fmt::join(omegas, ", "));
    out << fmt::format("{:>5}  {:>10}  {:>9}  {:>10}  {:>9}\n", "stage", "first_step", "last_step", "resolution",
                       "omega");

    prepare_dir(config.run.output_dir);
    auto csv = open_output(config.run.output_dir / "ladder.csv");
    csv << "stage,first_step,last_step,height,width,omega\n";
    for (std::size_t i = 0; i < experiment.plan.stages.size(); ++i) {
        const Stage& s = experiment.plan.stages[i];
        out << fmt::format("{:>5}  {:>10}  {:>9}  {:>10}  {:>9.6g}\n", i, s.first_step, s.last_step,
                           s.resolution.to_string(), s.omega);
        csv << i << ',' << s.first_step << ',' << s.last_step << ',' << s.resolution.height << ','
            << s.resolution.width << ',' << format_real(s.omega) << '\n';
    }
}

void cmd_sample(const ExperimentConfig& config, std::ostream& out) {
    const Experiment experiment = build_experiment(config);
    const auto& dir = config.run.output_dir;
    prepare_dir(dir);

    parallel_for(config.run.run_count, config.run.jobs, [&](int r) {
        const std::uint64_t seed = config.run.seed + static_cast<std::uint64_t>(r);
        const RunResult result = run(experiment.plan, experiment.timeline, *experiment.denoiser, *experiment.codec,
                                     run_options(experiment, config.run.variant, seed));
        write_trace(dir / fmt::format("trace_{}.csv", seed), result);
        write_grid(dir / fmt::format("final_{}.rhrt", seed), result.final_p_x0);
        for (const auto& snapshot : result.snapshots) {
            write_grid(dir / fmt::format("snapshot_{}_{}.rhrt", seed, snapshot.step), snapshot.p_x0);
        }
        if (result.snapshots.size() >= 2) {
            write_mse(dir / fmt::format("p_x0_mse_{}.csv", seed), p_x0_mse_series(result.snapshots));
        }
    });
    out << fmt::format("{} run(s) of {} written to {}\n", config.run.run_count, to_string(config.run.variant),
                       dir.string());
}

std::vector<EnergyTrace> energy_curves(const ExperimentConfig& config) {
    const Experiment experiment = build_experiment(config);
    std::vector<Variant> variants = config.energy.variants;
    if (variants.empty()) {
        variants.push_back(config.run.variant);
    }

    struct Curve {
        Variant variant;
        std::optional<double> omega;
        std::string label;
    };
    std::vector<Curve> curves;
    for (Variant v : variants) {
        if (config.energy.omegas.empty()) {
            curves.push_back({v, std::nullopt, std::string(to_string(v))});
        }
        for (double w : config.energy.omegas) {
            curves.push_back({v, w, fmt::format("{}@omega={}", to_string(v), format_real(w))});
        }
    }

    const int runs = config.run.run_count;
    std::vector<EnergyTrace> traces(curves.size() * static_cast<std::size_t>(runs));
    parallel_for(static_cast<int>(traces.size()), config.run.jobs, [&](int job) {
        const Curve& curve = curves[static_cast<std::size_t>(job / runs)];
        const std::uint64_t seed = config.run.seed + static_cast<std::uint64_t>(job % runs);
        RefreshPlan plan = experiment.plan;
        if (curve.omega) {
            for (auto& stage : plan.stages) {
                stage.omega = *curve.omega;
            }
        }
        RunOptions options = run_options(experiment, curve.variant, seed);
        options.snapshot_steps.clear();
        const RunResult result = run(plan, experiment.timeline, *experiment.denoiser, *experiment.codec, options);
        traces[static_cast<std::size_t>(job)] = trace_from_run(result, curve.label);
    });

    std::vector<EnergyTrace> means;
    for (std::size_t c = 0; c < curves.size(); ++c) {
        const auto first = traces.begin() + static_cast<std::ptrdiff_t>(c * static_cast<std::size_t>(runs));
        means.push_back(mean_trace(std::span<const EnergyTrace>(&*first, static_cast<std::size_t>(runs)),
                                   curves[c].label));
    }
    return means;
}

void cmd_energy_curve(const ExperimentConfig& config, std::ostream& out) {
    const auto curves = energy_curves(config);
    prepare_dir(config.run.output_dir);
    auto csv = open_output(config.run.output_dir / "energy_curves.csv");
    csv << "label,step,mean_energy\n";
    for (const auto& curve : curves) {
        for (const auto& row : curve.rows) {
            csv << curve.label << ',' << row.step << ',' << format_real(row.energy) << '\n';
        }
        const auto& last = curve.rows.back();
        out << fmt::format("{:<32}  final energy {:.6g}\n", curve.label, last.energy);
    }
}

bool cmd_verify(std::uint64_t seed, std::ostream& out) {
    VerifyOptions options;
    options.seed = seed;
    return print_report(run_checks(options), out);
}

std::vector<std::uint8_t> to_gray(std::span<const double> plane) {
    const auto [lo, hi] = std::minmax_element(plane.begin(), plane.end());
    std::vector<std::uint8_t> pixels(plane.size(), 128);
    if (plane.empty() || *lo == *hi) {
        return pixels;
    }
    const double span = *hi - *lo;
    for (std::size_t i = 0; i < plane.size(); ++i) {
        pixels[i] = static_cast<std::uint8_t>(std::lround((plane[i] - *lo) / span * 255.0));
    }
    return pixels;
}

std::vector<std::filesystem::path> cmd_dump_grid(const std::filesystem::path& input,
                                                 const std::filesystem::path& output) {
    const LatentGrid grid = read_grid(input);
    std::vector<std::filesystem::path> written;
    for (int c = 0; c < grid.channels(); ++c) {
        std::filesystem::path path = output;
        if (grid.channels() > 1) {
            path.replace_filename(fmt::format("{}_c{}{}", output.stem().string(), c, output.extension().string()));
        }
        write_pgm(path, grid.width(), grid.height(), to_gray(grid.plane(c)));
        written.push_back(path);
    }
    return written;
}

}  // namespace hrlab::cli

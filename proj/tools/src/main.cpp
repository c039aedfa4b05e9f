// Copyright 2026 The hrlab Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hrlab/cli/commands.hpp"
#include "hrlab/cli/config.hpp"
#include "hrlab/error.hpp"

namespace {

struct GlobalFlags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<int> jobs;
};

hrlab::cli::ExperimentConfig load(const GlobalFlags& flags) {
    if (flags.config.empty()) {
        throw hrlab::ConfigError("this command needs --config <path>", "--config");
    }
    auto config = hrlab::cli::load_config(flags.config);
    if (flags.seed) config.run.seed = *flags.seed;
    if (flags.out) config.run.output_dir = *flags.out;
    if (flags.jobs) {
        if (*flags.jobs < 1) {
            throw hrlab::ConfigError("must be a positive integer", "--jobs");
        }
        config.run.jobs = *flags.jobs;
    }
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Progressive-resolution diffusion sampling experiments"};
    app.require_subcommand(1);

    GlobalFlags flags;
    app.add_option("--config", flags.config, "Experiment config file")->check(CLI::ExistingFile);
    app.add_option("--seed", flags.seed, "Base seed, overrides [run] seed");
    app.add_option("--out", flags.out, "Output directory, overrides [run] output_dir");
    app.add_option("--jobs", flags.jobs, "Concurrent runs, overrides [run] jobs");

    auto* ladder = app.add_subcommand("ladder", "Print the refresh ladder and write ladder.csv");
    auto* sample = app.add_subcommand("sample", "Run sampling and write traces and final grids");
    auto* energy = app.add_subcommand("energy-curve", "Write mean energy curves per variant and omega");
    auto* verify = app.add_subcommand("verify", "Run the property and oracle checks");
    auto* dump = app.add_subcommand("dump-grid", "Write each channel of an RHRT grid as a PGM image");
    std::string dump_input;
    std::string dump_output;
    dump->add_option("input", dump_input, "RHRT file with ndim = 3")->required();
    dump->add_option("output", dump_output, "PGM path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (ladder->parsed()) {
            hrlab::cli::cmd_ladder(load(flags), std::cout);
        } else if (sample->parsed()) {
            hrlab::cli::cmd_sample(load(flags), std::cout);
        } else if (energy->parsed()) {
            hrlab::cli::cmd_energy_curve(load(flags), std::cout);
        } else if (verify->parsed()) {
            return hrlab::cli::cmd_verify(flags.seed.value_or(0), std::cout) ? 0 : 1;
        } else if (dump->parsed()) {
            for (const auto& path : hrlab::cli::cmd_dump_grid(dump_input, dump_output)) {
                std::cout << path.string() << '\n';
            }
        }
    } catch (const hrlab::ConfigError& e) {
        std::cerr << "hrlab: config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "hrlab: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

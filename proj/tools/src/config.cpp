// Copyright 2026 The hrlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "hrlab/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "hrlab/error.hpp"
#include "hrlab/tensor_file.hpp"

namespace hrlab::cli {

namespace {

namespace pt = boost::property_tree;

std::string trim(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = text.find_last_not_of(" \t\r\n");
    return std::string(text.substr(first, last - first + 1));
}

std::vector<std::string> split_list(std::string_view text) {
    std::vector<std::string> items;
    std::string current;
    for (char c : text) {
        if (c == ',') {
            items.push_back(trim(current));
            current.clear();
        } else {
            current += c;
        }
    }
    if (!trim(current).empty() || !items.empty()) {
        items.push_back(trim(current));
    }
    return items;
}

template <typename T>
T parse_number(const std::string& text, const std::string& field) {
    T value{};
    const std::string clean = trim(text);
    const char* begin = clean.data();
    const char* end = begin + clean.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (clean.empty() || ec != std::errc() || ptr != end) {
        throw ConfigError("expected a number, got '" + text + "'", field);
    }
    return value;
}

bool parse_bool(const std::string& text, const std::string& field) {
    const std::string clean = trim(text);
    if (clean == "true" || clean == "1" || clean == "yes") return true;
    if (clean == "false" || clean == "0" || clean == "no") return false;
    throw ConfigError("expected true or false, got '" + text + "'", field);
}

Resolution parse_resolution(const std::string& text, const std::string& field) {
    const std::string clean = trim(text);
    const auto x = clean.find('x');
    if (x == std::string::npos) {
        throw ConfigError("expected HEIGHTxWIDTH, got '" + text + "'", field);
    }
    return {parse_number<int>(clean.substr(0, x), field), parse_number<int>(clean.substr(x + 1), field)};
}

/// Typed access to one INI section that remembers which keys were read.
class Section {
public:
    Section(const pt::ptree* tree, std::string name) : tree_(tree), name_(std::move(name)) {}

    bool has(const std::string& key) const { return tree_ && tree_->get_child_optional(key); }

    std::string field(const std::string& key) const { return name_ + "." + key; }

    std::optional<std::string> raw(const std::string& key) {
        used_.insert(key);
        if (!has(key)) {
            return std::nullopt;
        }
        return trim(tree_->get<std::string>(key));
    }

    std::string text(const std::string& key, std::string fallback) {
        auto value = raw(key);
        return value ? *value : fallback;
    }

    template <typename T>
    T number(const std::string& key, T fallback) {
        auto value = raw(key);
        return value ? parse_number<T>(*value, field(key)) : fallback;
    }

    template <typename T>
    T required_number(const std::string& key) {
        auto value = raw(key);
        if (!value) {
            throw ConfigError("missing required key", field(key));
        }
        return parse_number<T>(*value, field(key));
    }

    bool boolean(const std::string& key, bool fallback) {
        auto value = raw(key);
        return value ? parse_bool(*value, field(key)) : fallback;
    }

    void reject_unknown() const {
        if (!tree_) {
            return;
        }
        for (const auto& [key, child] : *tree_) {
            if (!used_.count(key)) {
                throw ConfigError("unknown key", field(key));
            }
        }
    }

private:
    const pt::ptree* tree_;
    std::string name_;
    std::set<std::string> used_;
};

Section section(const pt::ptree& root, const std::string& name) {
    auto child = root.get_child_optional(name);
    return Section(child ? &*child : nullptr, name);
}

void parse_schedule(Section& s, ScheduleBlock& out) {
    if (auto kind = s.raw("kind")) {
        out.kind = parse_schedule_kind(*kind);
    }
    out.beta_start = s.number("beta_start", out.beta_start);
    out.beta_end = s.number("beta_end", out.beta_end);
    out.train_steps = s.number("train_steps", out.train_steps);
    out.num_steps = s.number("num_steps", out.num_steps);
    if (!(out.beta_start > 0.0 && out.beta_start <= out.beta_end && out.beta_end < 1.0)) {
        throw ConfigError("need 0 < beta_start <= beta_end < 1", s.field("beta_start"));
    }
    if (out.train_steps < 1) {
        throw ConfigError("must be at least 1", s.field("train_steps"));
    }
    if (out.num_steps < 1 || out.num_steps > out.train_steps) {
        throw ConfigError("must lie in [1, train_steps]", s.field("num_steps"));
    }
}

void parse_ladder(Section& s, LadderBlock& out) {
    static const char* kExplicit[] = {"t_min", "t_max", "n_stages", "m_t", "omega_min", "omega_max", "m_omega",
                                      "resolutions"};
    const Resolution base{s.number("base_height", 16), s.number("base_width", 16)};
    if (auto preset = s.raw("preset")) {
        for (const char* key : kExplicit) {
            if (s.has(key)) {
                throw ConfigError("preset and explicit ladder keys are mutually exclusive", s.field(key));
            }
        }
        out.preset = *preset;
        out.config = ladder_preset(*preset, base);
        return;
    }
    LadderConfig& c = out.config;
    c.n_stages = s.number("n_stages", 1);
    c.t_min = s.number("t_min", 0);
    c.t_max = s.number("t_max", 1);
    c.m_t = s.number("m_t", 1.0);
    c.omega_min = s.number("omega_min", 5.0);
    c.omega_max = s.number("omega_max", c.omega_min);
    c.m_omega = s.number("m_omega", 1.0);
    if (auto list = s.raw("resolutions")) {
        for (const auto& item : split_list(*list)) {
            c.resolutions.push_back(parse_resolution(item, s.field("resolutions")));
        }
    } else if (c.n_stages == 1) {
        c.resolutions = {base};
    } else {
        throw ConfigError("required when n_stages > 1", s.field("resolutions"));
    }
}

void parse_denoiser(Section& s, DenoiserBlock& out) {
    const std::string kind = s.text("kind", "toy");
    if (kind == "gaussian") {
        out.kind = DenoiserKind::Gaussian;
        out.mean_value = s.number("mean_value", 0.0);
        out.variance = s.number("variance", 1.0);
        if (!(out.variance > 0.0)) {
            throw ConfigError("must be positive", s.field("variance"));
        }
    } else if (kind == "dataset") {
        out.kind = DenoiserKind::Dataset;
        auto path = s.raw("path");
        if (!path) {
            throw ConfigError("missing required key", s.field("path"));
        }
        out.path = *path;
        out.labels_path = s.text("labels_path", "");
        out.conditional = s.boolean("conditional", false);
    } else if (kind == "toy") {
        out.kind = DenoiserKind::Toy;
        out.toy.height = s.number("height", out.toy.height);
        out.toy.width = s.number("width", out.toy.width);
        out.toy.shapes = s.number("shapes", out.toy.shapes);
        out.toy.classes = s.number("classes", out.toy.classes);
        out.toy.coarse = s.number("coarse", out.toy.coarse);
        out.toy.detail_amplitude = s.number("detail_amplitude", out.toy.detail_amplitude);
        out.toy.seed = s.number<std::uint64_t>("data_seed", out.toy.seed);
        out.conditional = s.boolean("conditional", true);
    } else if (kind == "zero") {
        out.kind = DenoiserKind::Zero;
    } else {
        throw ConfigError("unknown denoiser kind '" + kind + "' (expected gaussian, dataset, toy or zero)",
                          s.field("kind"));
    }
}

void parse_codec(Section& s, CodecBlock& out) {
    const std::string kind = s.text("kind", "identity");
    if (kind == "identity") {
        out.kind = CodecKind::Identity;
    } else if (kind == "external") {
        out.kind = CodecKind::External;
        auto command = s.raw("command");
        if (!command || command->empty()) {
            throw ConfigError("missing required key", s.field("command"));
        }
        out.command = *command;
        out.workdir = s.text("workdir", "codec_work");
        out.granularity = s.number("granularity", 1);
        if (out.granularity < 1) {
            throw ConfigError("must be a positive integer", s.field("granularity"));
        }
    } else {
        throw ConfigError("unknown codec kind '" + kind + "' (expected identity or external)", s.field("kind"));
    }
    if (auto method = s.raw("resize")) {
        try {
            out.resize = parse_resize_method(*method);
        } catch (const ConfigError&) {
            throw ConfigError("unknown resize method '" + *method + "'", s.field("resize"));
        }
    }
}

void parse_run(Section& s, RunBlock& out, int num_steps) {
    if (auto variant = s.raw("variant")) {
        out.variant = parse_variant(*variant);
    }
    out.seed = s.number<std::uint64_t>("seed", out.seed);
    out.run_count = s.number("run_count", out.run_count);
    if (out.run_count < 1) {
        throw ConfigError("must be at least 1", s.field("run_count"));
    }
    out.channels = s.number("channels", out.channels);
    if (out.channels < 1) {
        throw ConfigError("must be a positive integer", s.field("channels"));
    }
    out.jobs = s.number("jobs", out.jobs);
    if (out.jobs < 1) {
        throw ConfigError("must be a positive integer", s.field("jobs"));
    }
    if (auto steps = s.raw("snapshot_steps")) {
        if (*steps == "all") {
            for (int i = 0; i < num_steps; ++i) {
                out.snapshot_steps.push_back(i);
            }
        } else if (!steps->empty()) {
            for (const auto& item : split_list(*steps)) {
                const int step = parse_number<int>(item, s.field("snapshot_steps"));
                if (step < 0 || step >= num_steps) {
                    throw ConfigError("step " + item + " outside [0, num_steps)", s.field("snapshot_steps"));
                }
                out.snapshot_steps.push_back(step);
            }
        }
    }
    if (auto label = s.raw("label")) {
        if (*label == "cycle") {
            out.label.reset();
        } else {
            out.label = parse_number<int>(*label, s.field("label"));
        }
    }
    out.output_dir = s.text("output_dir", out.output_dir.string());
}

void parse_energy(Section& s, EnergyBlock& out) {
    if (auto variants = s.raw("variants")) {
        for (const auto& item : split_list(*variants)) {
            try {
                out.variants.push_back(parse_variant(item));
            } catch (const ConfigError&) {
                throw ConfigError("unknown variant '" + item + "'", s.field("variants"));
            }
        }
    }
    if (auto omegas = s.raw("omegas")) {
        for (const auto& item : split_list(*omegas)) {
            out.omegas.push_back(parse_number<double>(item, s.field("omegas")));
        }
    }
}

std::vector<int> read_labels(const std::filesystem::path& path, std::size_t count) {
    if (path.empty()) {
        return std::vector<int>(count, 0);
    }
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open " + path.string(), "denoiser.labels_path");
    }
    std::vector<int> labels;
    std::string token;
    while (in >> token) {
        labels.push_back(parse_number<int>(token, "denoiser.labels_path"));
    }
    return labels;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
    pt::ptree root;
    try {
        std::istringstream in{std::string(text)};
        pt::ini_parser::read_ini(in, root);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    static const std::set<std::string> kSections = {"schedule", "ladder", "denoiser", "codec", "run", "energy"};
    for (const auto& [name, child] : root) {
        if (!kSections.count(name)) {
            throw ConfigError(child.empty() ? "keys must live inside a section" : "unknown section", name);
        }
    }

    ExperimentConfig config;
    auto schedule = section(root, "schedule");
    parse_schedule(schedule, config.schedule);
    schedule.reject_unknown();

    auto ladder = section(root, "ladder");
    parse_ladder(ladder, config.ladder);
    ladder.reject_unknown();

    auto denoiser = section(root, "denoiser");
    parse_denoiser(denoiser, config.denoiser);
    denoiser.reject_unknown();

    auto codec = section(root, "codec");
    parse_codec(codec, config.codec);
    codec.reject_unknown();

    auto run = section(root, "run");
    parse_run(run, config.run, config.schedule.num_steps);
    run.reject_unknown();

    auto energy = section(root, "energy");
    parse_energy(energy, config.energy);
    energy.reject_unknown();

    validate_ladder(config.ladder.config, config.schedule.num_steps, config.codec.granularity);
    return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file " + path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

DatasetPrior load_dataset(const std::filesystem::path& points_path, const std::filesystem::path& labels_path) {
    const Tensor tensor = read_tensor(points_path);
    if (tensor.dims.size() != 4) {
        throw ConfigError("dataset file must have ndim = 4 (N, C, H, W)", "denoiser.path");
    }
    const Shape shape{static_cast<int>(tensor.dims[1]), static_cast<int>(tensor.dims[2]),
                      static_cast<int>(tensor.dims[3])};
    std::vector<LatentGrid> points;
    for (std::uint32_t i = 0; i < tensor.dims[0]; ++i) {
        const auto begin = tensor.values.begin() + static_cast<std::ptrdiff_t>(i * shape.size());
        points.emplace_back(shape, std::vector<double>(begin, begin + static_cast<std::ptrdiff_t>(shape.size())));
    }
    auto labels = read_labels(labels_path, points.size());
    return DatasetPrior(std::move(points), std::move(labels));
}

Condition Experiment::condition_for_seed(std::uint64_t seed) const {
    if (classes.empty()) {
        return Condition::unconditional();
    }
    if (config.run.label) {
        return Condition::of_class(*config.run.label);
    }
    return Condition::of_class(classes[static_cast<std::size_t>(seed % classes.size())]);
}

Experiment build_experiment(const ExperimentConfig& config) {
    Experiment experiment;
    experiment.config = config;
    experiment.schedule =
        build_schedule(config.schedule.kind, config.schedule.beta_start, config.schedule.beta_end,
                       config.schedule.train_steps);
    experiment.timeline = build_timeline(experiment.schedule, config.schedule.num_steps);
    experiment.plan = build_plan(config.ladder.config, experiment.timeline);

    const Resolution base = experiment.plan.stages.front().resolution;
    const DenoiserBlock& d = config.denoiser;
    bool conditional = false;
    switch (d.kind) {
        case DenoiserKind::Gaussian:
            experiment.denoiser = std::make_unique<GaussianPrior>(
                LatentGrid::filled({config.run.channels, base.height, base.width}, d.mean_value), d.variance);
            break;
        case DenoiserKind::Dataset:
            experiment.denoiser = std::make_unique<DatasetPrior>(load_dataset(d.path, d.labels_path));
            conditional = d.conditional;
            break;
        case DenoiserKind::Toy: {
            ToyDatasetOptions options = d.toy;
            options.channels = config.run.channels;
            experiment.denoiser = std::make_unique<DatasetPrior>(make_toy_dataset(options));
            conditional = d.conditional;
            break;
        }
        case DenoiserKind::Zero:
            experiment.denoiser = std::make_unique<ZeroDenoiser>();
            break;
    }
    if (conditional) {
        const auto& prior = static_cast<const DatasetPrior&>(*experiment.denoiser);
        std::set<int> distinct(prior.labels().begin(), prior.labels().end());
        experiment.classes.assign(distinct.begin(), distinct.end());
        if (config.run.label && !distinct.count(*config.run.label)) {
            throw ConfigError("label " + std::to_string(*config.run.label) + " is not in the dataset", "run.label");
        }
    }

    if (config.codec.kind == CodecKind::Identity) {
        experiment.codec = std::make_unique<IdentityCodec>();
    } else {
        std::filesystem::path workdir = config.codec.workdir;
        if (workdir.is_relative()) {
            workdir = config.run.output_dir / workdir;
        }
        experiment.codec = std::make_unique<ExternalCodec>(config.codec.command, workdir, config.codec.granularity);
    }
    return experiment;
}

}  // namespace hrlab::cli

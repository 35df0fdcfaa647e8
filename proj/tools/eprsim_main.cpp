// eprsim: sequential and paired spin-measurement experiments from the
// command line. Each subcommand is deterministic given its flags and seed;
// the thread count never changes the output bytes.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "eprsim/experiments.hpp"
#include "eprsim/report_io.hpp"

namespace {

using namespace eprsim;

constexpr std::uint64_t kDefaultSeed = 1;
constexpr std::uint64_t kDefaultTrials = 100000;

double to_radians(double degrees) { return degrees * std::numbers::pi / 180.0; }

struct CommonFlags {
    std::uint64_t trials = kDefaultTrials;
    std::uint64_t seed = kDefaultSeed;
    std::string format;
    std::string out;
    bool allow_small = false;
    unsigned threads = 0;
};

// --threads is deliberately left out of the config echo: results are
// byte-identical for any thread count, so it is not part of the run's
// identity.
void add_common_flags(CLI::App& cmd, CommonFlags& flags,
                      const std::string& default_format) {
    flags.format = default_format;
    cmd.add_option("--trials", flags.trials, "Number of trials")
        ->capture_default_str();
    cmd.add_option("--seed", flags.seed, "Master seed")
        ->envname("EPRSIM_SEED")
        ->capture_default_str();
    cmd.add_option("--format", flags.format, "Output format: table, csv, json")
        ->check(CLI::IsMember({"table", "csv", "json"}))
        ->capture_default_str();
    cmd.add_option("--out", flags.out, "Output path (default: stdout)");
    cmd.add_flag("--allow-small", flags.allow_small,
                 "Permit fewer than 10000 trials");
    cmd.add_option("--threads", flags.threads,
                   "Worker threads (0 = hardware count; never affects output)");
}

RunOptions run_options(const CommonFlags& flags) {
    RunOptions options;
    options.trials = flags.trials;
    options.seed = flags.seed;
    options.threads = flags.threads;
    options.allow_small = flags.allow_small;
    return options;
}

ConfigEcho base_config(const std::string& experiment, const CommonFlags& flags) {
    ConfigEcho config;
    config["experiment"] = experiment;
    config["trials"] = flags.trials;
    config["seed"] = flags.seed;
    config["format"] = flags.format;
    config["allow_small"] = flags.allow_small;
    return config;
}

ModelSpec spec_for(const std::string& name) {
    switch (parse_model(name)) {
        case ModelKind::Quantum:
            return ModelSpec::quantum();
        case ModelKind::DefiniteAligned:
            // The CLI always uses the vertical axis with Alice carrying +.
            return ModelSpec::definite_aligned(Direction(0.0, 0.0, 1.0),
                                               Assignment::PlusMinus);
        case ModelKind::IsotropicOpposite:
            return ModelSpec::isotropic_opposite();
        case ModelKind::NonlocalAligning:
            return ModelSpec::nonlocal_aligning();
        case ModelKind::DeterministicSign:
            return ModelSpec::deterministic_sign();
    }
    throw std::invalid_argument("unknown model: " + name);
}

void validate_degrees(double degrees, const std::string& flag) {
    if (!(degrees >= 0.0 && degrees < 360.0)) {
        throw std::invalid_argument(flag + ": angle must lie in [0, 360) degrees");
    }
}

// Accepts "start:stop:step" (inclusive endpoints) or a comma list, degrees.
std::vector<double> parse_angle_grid(const std::string& text) {
    std::vector<double> degrees;
    const auto colon = text.find(':');
    if (colon != std::string::npos) {
        double start = 0.0, stop = 0.0, step = 0.0;
        if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &start, &stop, &step) != 3 ||
            step <= 0.0 || stop < start) {
            throw std::invalid_argument("--angles: expected start:stop:step");
        }
        for (double d = start; d <= stop + 1e-9; d += step) degrees.push_back(d);
    } else {
        std::string item;
        std::istringstream in(text);
        while (std::getline(in, item, ',')) {
            if (item.empty()) continue;
            degrees.push_back(std::stod(item));
        }
    }
    if (degrees.empty()) {
        throw std::invalid_argument("--angles: empty grid");
    }
    for (double d : degrees) validate_degrees(d, "--angles");
    return degrees;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open output file: " + out_path);
    }
    out << text;
}

int run(int argc, char** argv) {
    CLI::App app{"EPR-B spin measurement experiments"};
    app.require_subcommand(1);

    // inequality
    CommonFlags ineq_flags;
    ineq_flags.trials = 1000000;
    std::string ineq_assignment = "+-";
    double ineq_a_deg = 45.0;
    double ineq_b_deg = 315.0;
    CLI::App* ineq = app.add_subcommand(
        "inequality", "Local definite-aligned model at orthogonal 45-degree settings");
    add_common_flags(*ineq, ineq_flags, "json");
    ineq->add_option("--assignment", ineq_assignment, "Predetermined values: +- or -+")
        ->check(CLI::IsMember({"+-", "-+"}))
        ->capture_default_str();
    ineq->add_option("--a", ineq_a_deg, "Alice setting, degrees from vertical")
        ->capture_default_str();
    ineq->add_option("--b", ineq_b_deg, "Bob setting, degrees from vertical")
        ->capture_default_str();

    // sweep
    CommonFlags sweep_flags;
    std::string sweep_model = "quantum";
    std::string sweep_angles = "0:180:15";
    CLI::App* sweep = app.add_subcommand(
        "sweep", "Correlation versus angle for one model, with closed forms");
    add_common_flags(*sweep, sweep_flags, "csv");
    sweep->add_option("--model", sweep_model,
                      "quantum, definite, isotropic, nonlocal, sign")
        ->check(CLI::IsMember({"quantum", "definite", "isotropic", "nonlocal", "sign"}))
        ->capture_default_str();
    sweep->add_option("--angles", sweep_angles,
                      "Degrees: start:stop:step or comma list")
        ->capture_default_str();

    // frame
    CommonFlags frame_flags;
    double frame_a_deg = 0.0;
    double frame_b_deg = 60.0;
    CLI::App* frame = app.add_subcommand(
        "frame", "Measurement-ordering comparison for the nonlocal model");
    add_common_flags(*frame, frame_flags, "json");
    frame->add_option("--a", frame_a_deg, "Alice setting, degrees")
        ->capture_default_str();
    frame->add_option("--b", frame_b_deg, "Bob setting, degrees")
        ->capture_default_str();

    // nonsignal
    CommonFlags ns_flags;
    std::string ns_model = "quantum";
    std::string ns_ordering = "alice-first";
    double ns_a_deg = 0.0;
    double ns_b1_deg = 60.0;
    double ns_b2_deg = 120.0;
    CLI::App* nonsignal = app.add_subcommand(
        "nonsignal", "Alice's marginal under two remote settings");
    add_common_flags(*nonsignal, ns_flags, "json");
    nonsignal->add_option("--model", ns_model,
                          "quantum, definite, isotropic, nonlocal, sign")
        ->check(CLI::IsMember({"quantum", "definite", "isotropic", "nonlocal", "sign"}))
        ->capture_default_str();
    nonsignal->add_option("--ordering", ns_ordering, "alice-first or bob-first")
        ->check(CLI::IsMember({"alice-first", "bob-first"}))
        ->capture_default_str();
    nonsignal->add_option("--a", ns_a_deg, "Alice setting, degrees")
        ->capture_default_str();
    nonsignal->add_option("--b1", ns_b1_deg, "First remote setting, degrees")
        ->capture_default_str();
    nonsignal->add_option("--b2", ns_b2_deg, "Second remote setting, degrees")
        ->capture_default_str();

    // contrast
    CommonFlags contrast_flags;
    double contrast_a_deg = 45.0;
    double contrast_b_deg = 315.0;
    CLI::App* contrast = app.add_subcommand(
        "contrast", "Singlet vs classical mixture of definite assignments");
    add_common_flags(*contrast, contrast_flags, "json");
    contrast->add_option("--a", contrast_a_deg, "Alice setting, degrees")
        ->capture_default_str();
    contrast->add_option("--b", contrast_b_deg, "Bob setting, degrees")
        ->capture_default_str();

    // kink
    CommonFlags kink_flags;
    std::string kink_model = "sign";
    double kink_epsilon_deg = 0.5729577951308232;  // 0.01 rad
    CLI::App* kink = app.add_subcommand(
        "kink", "Correlation slope at aligned settings (closed form)");
    add_common_flags(*kink, kink_flags, "json");
    kink->add_option("--model", kink_model,
                     "quantum, definite, isotropic, nonlocal, sign")
        ->check(CLI::IsMember({"quantum", "definite", "isotropic", "nonlocal", "sign"}))
        ->capture_default_str();
    kink->add_option("--epsilon", kink_epsilon_deg, "Offset angle, degrees")
        ->capture_default_str();

    // Map every parse problem (unknown flag, failed check, missing
    // subcommand) to exit code 2; --help stays 0.
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (ineq->parsed()) {
        validate_degrees(ineq_a_deg, "--a");
        validate_degrees(ineq_b_deg, "--b");
        ConfigEcho config = base_config("inequality", ineq_flags);
        config["assignment"] = ineq_assignment;
        config["a_deg"] = ineq_a_deg;
        config["b_deg"] = ineq_b_deg;
        const InequalityReport report = run_inequality(
            run_options(ineq_flags), parse_assignment(ineq_assignment),
            Direction::planar(to_radians(ineq_a_deg)),
            Direction::planar(to_radians(ineq_b_deg)));
        emit(render_inequality(report, parse_format(ineq_flags.format), config),
             ineq_flags.out);
    } else if (sweep->parsed()) {
        const std::vector<double> grid_deg = parse_angle_grid(sweep_angles);
        std::vector<double> grid_rad;
        grid_rad.reserve(grid_deg.size());
        for (double d : grid_deg) grid_rad.push_back(to_radians(d));
        ConfigEcho config = base_config("sweep", sweep_flags);
        config["model"] = sweep_model;
        config["angles_deg"] = grid_deg;
        const SweepReport report = run_correlation_sweep(
            spec_for(sweep_model), grid_rad, run_options(sweep_flags));
        emit(render_sweep(report, parse_format(sweep_flags.format), config),
             sweep_flags.out);
    } else if (frame->parsed()) {
        validate_degrees(frame_a_deg, "--a");
        validate_degrees(frame_b_deg, "--b");
        ConfigEcho config = base_config("frame", frame_flags);
        config["a_deg"] = frame_a_deg;
        config["b_deg"] = frame_b_deg;
        const FrameReport report = run_frame_ordering(
            Direction::planar(to_radians(frame_a_deg)),
            Direction::planar(to_radians(frame_b_deg)), run_options(frame_flags));
        emit(render_frame(report, parse_format(frame_flags.format), config),
             frame_flags.out);
    } else if (nonsignal->parsed()) {
        validate_degrees(ns_a_deg, "--a");
        validate_degrees(ns_b1_deg, "--b1");
        validate_degrees(ns_b2_deg, "--b2");
        ConfigEcho config = base_config("nonsignal", ns_flags);
        config["model"] = ns_model;
        config["ordering"] = ns_ordering;
        config["a_deg"] = ns_a_deg;
        config["b1_deg"] = ns_b1_deg;
        config["b2_deg"] = ns_b2_deg;
        const NonsignalingReport report = run_nonsignaling_check(
            spec_for(ns_model), Direction::planar(to_radians(ns_a_deg)),
            Direction::planar(to_radians(ns_b1_deg)),
            Direction::planar(to_radians(ns_b2_deg)), parse_ordering(ns_ordering),
            run_options(ns_flags));
        emit(render_nonsignaling(report, parse_format(ns_flags.format), config),
             ns_flags.out);
    } else if (contrast->parsed()) {
        validate_degrees(contrast_a_deg, "--a");
        validate_degrees(contrast_b_deg, "--b");
        ConfigEcho config = base_config("contrast", contrast_flags);
        config["a_deg"] = contrast_a_deg;
        config["b_deg"] = contrast_b_deg;
        const ContrastReport report = run_superposition_contrast(
            run_options(contrast_flags),
            Direction::planar(to_radians(contrast_a_deg)),
            Direction::planar(to_radians(contrast_b_deg)));
        emit(render_contrast(report, parse_format(contrast_flags.format), config),
             contrast_flags.out);
    } else if (kink->parsed()) {
        const double epsilon = to_radians(kink_epsilon_deg);
        ConfigEcho config = base_config("kink", kink_flags);
        config["model"] = kink_model;
        config["epsilon_deg"] = kink_epsilon_deg;
        const ModelSpec spec = spec_for(kink_model);
        const double slope = kink_slope(spec, epsilon);
        const double quantum_slope = kink_slope(ModelSpec::quantum(), epsilon);
        emit(render_kink(spec.kind, epsilon, slope, quantum_slope,
                         parse_format(kink_flags.format), config),
             kink_flags.out);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
}

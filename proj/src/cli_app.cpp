#include "hawkes/cli_app.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hawkes/fit.hpp"
#include "hawkes/ingest.hpp"
#include "hawkes/io.hpp"
#include "hawkes/likelihood.hpp"
#include "hawkes/model.hpp"
#include "hawkes/naive.hpp"
#include "hawkes/simulate.hpp"
#include "hawkes/version.hpp"

namespace fs = std::filesystem;

namespace hawkes::cli {
namespace {

struct BandSpec {
    PercentileBand band;
    std::string label;
};

BandSpec parse_band(const std::string& text) {
    const std::size_t colon = text.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("band '" + text + "' must look like LOWER:UPPER, e.g. 0.9:1.0");
    BandSpec spec;
    try {
        spec.band.lower = std::stod(text.substr(0, colon));
        spec.band.upper = std::stod(text.substr(colon + 1));
    } catch (const std::exception&) {
        throw std::invalid_argument("band '" + text + "' has non-numeric endpoints");
    }
    validate(spec.band);
    spec.label = text.substr(0, colon) + "-" + text.substr(colon + 1);
    return spec;
}

void apply_bounds(OptimizerConfig& config, const std::string& text) {
    const std::size_t colon = text.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("bounds '" + text + "' must look like LO:HI, e.g. 1e-12:10");
    try {
        config.lower_bound = std::stod(text.substr(0, colon));
        config.upper_bound = std::stod(text.substr(colon + 1));
    } catch (const std::exception&) {
        throw std::invalid_argument("bounds '" + text + "' have non-numeric endpoints");
    }
}

std::optional<std::uint64_t> env_seed() {
    if (const char* env = std::getenv("HAWKES_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string("HAWKES_SEED is not an integer: '") + env + "'");
        }
    }
    return std::nullopt;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    return env_seed().value_or(0);
}

std::string sanitize(const std::string& label) {
    std::string out;
    for (char c : label)
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '_')
                   ? c
                   : '_';
    return out.empty() ? std::string("unnamed") : out;
}

std::vector<OhlcBar> load_bars(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    try {
        return parse_ohlc_csv(in);
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

std::vector<double> load_magnitude_column(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line_no == 1 && line.find_first_not_of("0123456789.+-eE") != std::string::npos)
            continue;  // header row
        try {
            values.push_back(std::stod(line));
        } catch (const std::exception&) {
            throw std::runtime_error(path.string() + ": line " + std::to_string(line_no) +
                                     ": bad magnitude '" + line + "'");
        }
    }
    if (values.empty()) throw std::runtime_error(path.string() + ": empty input, no magnitudes");
    return values;
}

void write_manifest(const fs::path& out_dir, const std::string& command,
                    const std::vector<std::string>& inputs, const std::vector<std::string>& outputs,
                    json parameters) {
    const json manifest{{"command", command},
                        {"inputs", inputs},
                        {"outputs", outputs},
                        {"parameters", std::move(parameters)},
                        {"version", kVersion}};
    write_file_atomic(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

fs::path prepare_out_dir(const std::string& out_dir) {
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    return dir;
}

int cmd_extract(const std::vector<std::string>& inputs, const std::vector<std::string>& band_texts,
                const std::string& denominator_name, const std::string& threshold_source,
                const std::string& out_dir) {
    std::vector<BandSpec> bands;
    for (const auto& text : band_texts) bands.push_back(parse_band(text));
    if (bands.empty()) bands.push_back(parse_band("0.9:1.0"));
    const Denominator denominator = denominator_from_string(denominator_name);

    std::optional<std::vector<double>> external_population;
    if (!threshold_source.empty()) external_population = load_magnitude_column(threshold_source);

    struct Series {
        std::vector<JumpEvent> jumps;
        double duration_hours;
    };
    std::vector<Series> series;
    for (const auto& input : inputs) {
        const auto bars = load_bars(input);
        if (bars.empty()) throw std::runtime_error(input + ": empty input, no data rows");
        auto jumps = jump_magnitudes(bars, denominator);
        const double duration =
            static_cast<double>(bars.back().timestamp - bars.front().timestamp) / 60.0;
        if (!(duration > 0.0))
            throw std::runtime_error(input + ": series spans zero minutes, cannot form a horizon");
        series.push_back(Series{std::move(jumps), duration});
    }
    double horizon = 0.0;
    for (const Series& s : series) horizon = std::max(horizon, s.duration_hours);

    const fs::path dir = prepare_out_dir(out_dir);
    std::vector<std::string> outputs;
    for (const BandSpec& spec : bands) {
        EventSequence<double> events;
        events.horizon = horizon;
        for (std::size_t d = 0; d < series.size(); ++d) {
            std::vector<JumpEvent> selected;
            if (external_population)
                selected = select_jumps(series[d].jumps, spec.band, *external_population);
            else
                selected = select_jumps(series[d].jumps, spec.band);
            std::vector<double> times;
            for (const JumpEvent& jump : selected) times.push_back(jump.time_hours);
            events.arrivals.push_back(std::move(times));

            const std::string csv_name =
                "events_" + sanitize(spec.label) + "_dim" + std::to_string(d) + ".csv";
            write_file_atomic(dir / csv_name, render_jump_csv(selected));
            outputs.push_back(csv_name);
        }
        const std::string json_name = "events_" + sanitize(spec.label) + ".json";
        write_file_atomic(dir / json_name, to_json(events, spec.label).dump(2) + "\n");
        outputs.push_back(json_name);
    }

    json band_labels = json::array();
    for (const BandSpec& spec : bands) band_labels.push_back(spec.label);
    write_manifest(dir, "extract", inputs, outputs,
                   json{{"bands", std::move(band_labels)},
                        {"denominator", denominator_name},
                        {"threshold_source",
                         threshold_source.empty() ? json(nullptr) : json(threshold_source)}});
    return 0;
}

int cmd_fit(const std::vector<std::string>& inputs, const OptimizerConfig& config,
            const std::string& out_dir) {
    const fs::path dir = prepare_out_dir(out_dir);
    std::vector<std::string> outputs;
    std::vector<LabeledFit> fits;
    std::vector<std::string> skipped;
    for (const auto& input : inputs) {
        const json doc = read_json_file(input);
        std::string label = events_label_from_json(doc);
        if (label.empty()) label = fs::path(input).stem().string();
        EventSequence<double> events;
        try {
            events = events_from_json(doc);
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error(input + ": " + e.what());
        }
        bool empty_dimension = false;
        for (const auto& a : events.arrivals) empty_dimension |= a.empty();
        if (empty_dimension) {
            std::cerr << "skipping '" << label << "': a dimension has no events\n";
            skipped.push_back(label);
            continue;
        }
        const FitResult<double> result = fit(events, config);
        const std::string fit_name = "fit_" + sanitize(label) + ".json";
        write_file_atomic(dir / fit_name, to_json(result).dump(2) + "\n");
        outputs.push_back(fit_name);
        fits.push_back(LabeledFit{label, result});
    }
    if (fits.empty()) throw std::runtime_error("fit: no band produced a usable event set");

    write_file_atomic(dir / "fit_table.txt", render_fit_table(fits, config));
    outputs.push_back("fit_table.txt");
    write_manifest(dir, "fit", inputs, outputs,
                   json{{"optimizer", to_json(config)}, {"skipped", skipped}});
    return 0;
}

int cmd_simulate(const std::string& model_path, double horizon, std::uint64_t seed,
                 const std::string& out_dir) {
    SimulationConfig<double> config;
    config.model = model_from_json(read_json_file(model_path));
    config.horizon = horizon;
    config.seed = seed;
    const EventSequence<double> events = simulate(config);

    const fs::path dir = prepare_out_dir(out_dir);
    write_file_atomic(dir / "events.json", to_json(events).dump(2) + "\n");
    write_file_atomic(dir / "events.csv", render_events_csv(events));
    write_manifest(dir, "simulate", {model_path}, {"events.json", "events.csv"},
                   json{{"horizon", horizon}, {"seed", seed}});
    return 0;
}

int cmd_intensity(const std::string& model_path, const std::string& events_path, double step,
                  const std::string& out_dir) {
    if (!(step > 0.0)) throw std::invalid_argument("intensity: grid step must be > 0");
    const HawkesModel<double> model = model_from_json(read_json_file(model_path));
    const EventSequence<double> events = events_from_json(read_json_file(events_path));
    if (model.dim() != events.dim())
        throw std::invalid_argument("intensity: model and events dimension mismatch");

    std::ostringstream out;
    out << "t_hours";
    for (Eigen::Index j = 0; j < model.dim(); ++j) out << ",lambda_" << (j + 1);
    out << '\n';
    for (std::size_t i = 0;; ++i) {
        const double t = static_cast<double>(i) * step;
        if (t > events.horizon) break;
        out << detail::format_full(t);
        for (Eigen::Index j = 0; j < model.dim(); ++j)
            out << ',' << detail::format_full(intensity(model, events, j, t));
        out << '\n';
    }

    const fs::path dir = prepare_out_dir(out_dir);
    write_file_atomic(dir / "intensity.csv", out.str());
    write_manifest(dir, "intensity", {model_path, events_path}, {"intensity.csv"},
                   json{{"step", step}});
    return 0;
}

int cmd_ll(const std::string& model_path, const std::string& events_path, bool with_naive) {
    const HawkesModel<double> model = model_from_json(read_json_file(model_path));
    const EventSequence<double> events = events_from_json(read_json_file(events_path));
    if (model.dim() != events.dim())
        throw std::invalid_argument("ll: model and events dimension mismatch");
    std::cout << "log_likelihood " << detail::format_full(log_likelihood(model, events)) << '\n';
    if (with_naive)
        std::cout << "naive_log_likelihood " << detail::format_full(naive_log_likelihood(model, events))
                  << '\n';
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"Multivariate exponential-kernel Hawkes process toolkit (time unit: hours)"};
    app.require_subcommand(1);

    // extract
    auto* extract = app.add_subcommand(
        "extract", "Extract percentile-band jump events from one-minute OHLC CSVs");
    std::vector<std::string> extract_inputs;
    std::vector<std::string> extract_bands;
    std::string denominator_name = "open";
    std::string threshold_source;
    std::string extract_out;
    extract->add_option("--input", extract_inputs, "OHLC CSV, one per dimension (repeatable)")
        ->required()
        ->check(CLI::ExistingFile);
    extract->add_option("--band", extract_bands, "percentile band LOWER:UPPER (repeatable, default 0.9:1.0)");
    extract->add_option("--denominator", denominator_name, "magnitude denominator: open|low|close");
    extract->add_option("--threshold-source", threshold_source,
                        "single-column CSV of magnitudes used for the band thresholds");
    extract->add_option("--out-dir", extract_out, "output directory")->required();

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "Fit a model to event files by maximum likelihood");
    std::vector<std::string> fit_inputs;
    std::string config_path, bounds_text, fit_out;
    std::optional<int> max_iters, restarts;
    std::optional<std::uint64_t> fit_seed;
    fit_cmd->add_option("--input", fit_inputs, "events JSON (repeatable, one fit per file)")
        ->required()
        ->check(CLI::ExistingFile);
    fit_cmd->add_option("--config", config_path, "optimizer config JSON")->check(CLI::ExistingFile);
    fit_cmd->add_option("--bounds", bounds_text, "box constraints LO:HI (default 1e-12:10)");
    fit_cmd->add_option("--max-iters", max_iters, "iteration cap (default 10000)");
    fit_cmd->add_option("--restarts", restarts, "extra optimizer starts (default 4)");
    fit_cmd->add_option("--seed", fit_seed, "start-point seed (fallback: HAWKES_SEED, then 0)");
    fit_cmd->add_option("--out-dir", fit_out, "output directory")->required();

    // simulate
    auto* simulate_cmd = app.add_subcommand("simulate", "Simulate a model by Ogata thinning");
    std::string sim_model, sim_out;
    double sim_horizon = 0.0;
    std::optional<std::uint64_t> sim_seed;
    simulate_cmd->add_option("--model", sim_model, "model JSON")->required()->check(CLI::ExistingFile);
    simulate_cmd->add_option("--horizon", sim_horizon, "horizon in hours")->required();
    simulate_cmd->add_option("--seed", sim_seed, "RNG seed (fallback: HAWKES_SEED, then 0)");
    simulate_cmd->add_option("--out-dir", sim_out, "output directory")->required();

    // intensity
    auto* intensity_cmd =
        app.add_subcommand("intensity", "Sample the conditional intensities on a uniform grid");
    std::string int_model, int_events, int_out;
    double int_step = 0.0;
    intensity_cmd->add_option("--model", int_model, "model JSON")->required()->check(CLI::ExistingFile);
    intensity_cmd->add_option("--events", int_events, "events JSON")
        ->required()
        ->check(CLI::ExistingFile);
    intensity_cmd->add_option("--step", int_step, "grid step in hours")->required();
    intensity_cmd->add_option("--out-dir", int_out, "output directory")->required();

    // ll
    auto* ll_cmd = app.add_subcommand("ll", "Print the log-likelihood of events under a model");
    std::string ll_model, ll_events;
    bool ll_naive = false;
    ll_cmd->add_option("--model", ll_model, "model JSON")->required()->check(CLI::ExistingFile);
    ll_cmd->add_option("--events", ll_events, "events JSON")->required()->check(CLI::ExistingFile);
    ll_cmd->add_flag("--naive", ll_naive, "also print the quadratic-time reference evaluation");

    std::vector<const char*> argv;
    argv.push_back("hawkes");
    for (const auto& arg : args) argv.push_back(arg.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*extract)
            return cmd_extract(extract_inputs, extract_bands, denominator_name, threshold_source,
                               extract_out);
        if (*fit_cmd) {
            OptimizerConfig config;
            if (!config_path.empty()) config = optimizer_config_from_json(read_json_file(config_path));
            if (!bounds_text.empty()) apply_bounds(config, bounds_text);
            if (max_iters) config.max_iterations = *max_iters;
            if (restarts) config.restarts = *restarts;
            // precedence: --seed flag, then HAWKES_SEED, then config file / default
            if (fit_seed)
                config.seed = *fit_seed;
            else if (const auto env = env_seed())
                config.seed = *env;
            validate(config);
            return cmd_fit(fit_inputs, config, fit_out);
        }
        if (*simulate_cmd) return cmd_simulate(sim_model, sim_horizon, resolve_seed(sim_seed), sim_out);
        if (*intensity_cmd) return cmd_intensity(int_model, int_events, int_step, int_out);
        if (*ll_cmd) return cmd_ll(ll_model, ll_events, ll_naive);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

}  // namespace hawkes::cli

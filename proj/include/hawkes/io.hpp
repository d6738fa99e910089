#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hawkes/fit.hpp"
#include "hawkes/ingest.hpp"
#include "hawkes/likelihood.hpp"
#include "hawkes/model.hpp"
#include "hawkes/nelder_mead.hpp"

namespace hawkes {

using json = nlohmann::json;

inline json to_json(const HawkesModel<double>& model) {
    const Eigen::Index m = model.dim();
    json alpha = json::array(), beta = json::array(), mu = json::array();
    for (Eigen::Index j = 0; j < m; ++j) {
        json arow = json::array(), brow = json::array();
        for (Eigen::Index k = 0; k < m; ++k) {
            arow.push_back(model.alpha(j, k));
            brow.push_back(model.beta(j, k));
        }
        alpha.push_back(std::move(arow));
        beta.push_back(std::move(brow));
        mu.push_back(model.mu[j]);
    }
    return json{{"dim", m}, {"mu", mu}, {"alpha", alpha}, {"beta", beta}};
}

inline HawkesModel<double> model_from_json(const json& doc) {
    if (!doc.is_object() || !doc.contains("dim") || !doc.contains("mu") || !doc.contains("alpha") ||
        !doc.contains("beta"))
        throw std::invalid_argument("model JSON requires keys dim, mu, alpha, beta");
    const Eigen::Index m = doc.at("dim").get<Eigen::Index>();
    if (m < 1) throw std::invalid_argument("model JSON: dim must be positive");
    HawkesModel<double> model;
    model.mu.resize(m);
    model.alpha.resize(m, m);
    model.beta.resize(m, m);
    const auto& mu = doc.at("mu");
    const auto& alpha = doc.at("alpha");
    const auto& beta = doc.at("beta");
    if (mu.size() != static_cast<std::size_t>(m) || alpha.size() != static_cast<std::size_t>(m) ||
        beta.size() != static_cast<std::size_t>(m))
        throw std::invalid_argument("model JSON: mu/alpha/beta sizes disagree with dim");
    for (Eigen::Index j = 0; j < m; ++j) {
        model.mu[j] = mu.at(j).get<double>();
        const auto& arow = alpha.at(j);
        const auto& brow = beta.at(j);
        if (arow.size() != static_cast<std::size_t>(m) || brow.size() != static_cast<std::size_t>(m))
            throw std::invalid_argument("model JSON: alpha/beta rows must have length dim");
        for (Eigen::Index k = 0; k < m; ++k) {
            model.alpha(j, k) = arow.at(k).get<double>();
            model.beta(j, k) = brow.at(k).get<double>();
        }
    }
    validate(model);
    return model;
}

/// Events serialize as {"horizon": T, "arrivals": [[...], ...]} with an
/// optional "label" carried through to fit tables.
inline json to_json(const EventSequence<double>& events, const std::string& label = "") {
    json arrivals = json::array();
    for (const auto& a : events.arrivals) arrivals.push_back(a);
    json doc{{"horizon", events.horizon}, {"arrivals", std::move(arrivals)}};
    if (!label.empty()) doc["label"] = label;
    return doc;
}

inline EventSequence<double> events_from_json(const json& doc) {
    if (!doc.is_object() || !doc.contains("horizon") || !doc.contains("arrivals"))
        throw std::invalid_argument("events JSON requires keys horizon, arrivals");
    EventSequence<double> events;
    events.horizon = doc.at("horizon").get<double>();
    for (const auto& row : doc.at("arrivals")) events.arrivals.push_back(row.get<std::vector<double>>());
    validate(events);
    return events;
}

inline std::string events_label_from_json(const json& doc) {
    return doc.contains("label") ? doc.at("label").get<std::string>() : std::string{};
}

inline json to_json(const OptimizerConfig& config) {
    return json{{"lower_bound", config.lower_bound},
                {"upper_bound", config.upper_bound},
                {"max_iterations", config.max_iterations},
                {"x_tolerance", config.x_tolerance},
                {"f_tolerance", config.f_tolerance},
                {"restarts", config.restarts},
                {"seed", config.seed},
                {"reflection", config.reflection},
                {"expansion", config.expansion},
                {"contraction", config.contraction},
                {"shrink", config.shrink}};
}

inline OptimizerConfig optimizer_config_from_json(const json& doc) {
    OptimizerConfig config;
    const auto load = [&doc](const char* key, auto& field) {
        if (doc.contains(key)) field = doc.at(key).get<std::decay_t<decltype(field)>>();
    };
    load("lower_bound", config.lower_bound);
    load("upper_bound", config.upper_bound);
    load("max_iterations", config.max_iterations);
    load("x_tolerance", config.x_tolerance);
    load("f_tolerance", config.f_tolerance);
    load("restarts", config.restarts);
    load("seed", config.seed);
    load("reflection", config.reflection);
    load("expansion", config.expansion);
    load("contraction", config.contraction);
    load("shrink", config.shrink);
    validate(config);
    return config;
}

inline json to_json(const FitResult<double>& result) {
    json hits = json::array();
    for (BoundHit hit : result.bound_hits) hits.push_back(to_string(hit));
    return json{{"model", to_json(result.model)},
                {"log_likelihood", result.log_likelihood},
                {"neg_log_likelihood", result.neg_log_likelihood},
                {"iterations", result.iterations},
                {"converged", result.converged},
                {"bound_hits", std::move(hits)},
                {"restarts_used", result.restarts_used}};
}

/// Writes via a sibling temp file and an atomic rename, so readers never see
/// partial contents and concurrent runs in distinct directories cannot
/// interfere.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        out << content;
        if (!out.flush()) throw std::runtime_error("write failed for '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

inline json read_json_file(const std::filesystem::path& path) {
    try {
        return json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw std::runtime_error("'" + path.string() + "': " + e.what());
    }
}

namespace detail {

inline std::string format_double(double value, int precision) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.*f", precision, value);
    return buffer;
}

inline std::string format_full(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

}  // namespace detail

struct LabeledFit {
    std::string label;  // e.g. "0.9-1.0"
    FitResult<double> result;
};

/// Plain-text summary table: one row per fit with the band label, the
/// log-likelihood and the estimates in alpha, beta, mu order. For two
/// dimensions the columns use the s/sc/cs/c naming; estimates that sit on
/// the upper box bound render as the bound with a trailing "+" (e.g.
/// "10.0+").
inline std::string render_fit_table(const std::vector<LabeledFit>& fits,
                                    const OptimizerConfig& config) {
    if (fits.empty()) throw std::invalid_argument("render_fit_table: no fits");
    const Eigen::Index m = fits.front().result.model.dim();
    for (const LabeledFit& fit : fits)
        if (fit.result.model.dim() != m)
            throw std::invalid_argument("render_fit_table: mixed dimensions");

    const auto pair_suffix = [m](Eigen::Index j, Eigen::Index k) -> std::string {
        if (m == 2) {
            static const char* names[2][2] = {{"s", "sc"}, {"cs", "c"}};
            return names[j][k];
        }
        return std::to_string(j + 1) + std::to_string(k + 1);
    };
    const auto dim_suffix = [m](Eigen::Index j) -> std::string {
        if (m == 2) return j == 0 ? "s" : "c";
        return std::to_string(j + 1);
    };

    std::vector<std::string> header{"percentile_range", "log_likelihood"};
    for (Eigen::Index j = 0; j < m; ++j)
        for (Eigen::Index k = 0; k < m; ++k) header.push_back("alpha_" + pair_suffix(j, k));
    for (Eigen::Index j = 0; j < m; ++j)
        for (Eigen::Index k = 0; k < m; ++k) header.push_back("beta_" + pair_suffix(j, k));
    for (Eigen::Index j = 0; j < m; ++j) header.push_back("mu_" + dim_suffix(j));

    const auto format_estimate = [&config](double value, BoundHit hit) {
        if (hit == BoundHit::at_upper) {
            std::string rendered = detail::format_double(config.upper_bound, 1);
            rendered += '+';
            return rendered;
        }
        return detail::format_double(value, 3);
    };

    std::vector<std::vector<std::string>> rows;
    for (const LabeledFit& fit : fits) {
        const VectorX<double> theta = to_param_vector(fit.result.model);
        std::vector<std::string> row{fit.label,
                                     detail::format_double(fit.result.log_likelihood, 2)};
        for (Eigen::Index p = 0; p < theta.size(); ++p)
            row.push_back(format_estimate(theta[p], fit.result.bound_hits[static_cast<std::size_t>(p)]));
        rows.push_back(std::move(row));
    }

    std::vector<std::size_t> widths(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) {
        widths[c] = header[c].size();
        for (const auto& row : rows) widths[c] = std::max(widths[c], row[c].size());
    }
    std::ostringstream out;
    const auto emit_row = [&](const std::vector<std::string>& row) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out << "  ";
            out << std::left << std::setw(static_cast<int>(widths[c])) << row[c];
        }
        out << '\n';
    };
    emit_row(header);
    for (const auto& row : rows) emit_row(row);
    return out.str();
}

/// Events CSV used by the extract command: one arrival per row.
inline std::string render_jump_csv(const std::vector<JumpEvent>& jumps) {
    std::ostringstream out;
    out << "time_hours,magnitude_pct\n";
    for (const JumpEvent& jump : jumps)
        out << detail::format_full(jump.time_hours) << ',' << detail::format_full(jump.magnitude_pct)
            << '\n';
    return out.str();
}

/// Flat CSV for a whole sequence: dimension index plus arrival time.
inline std::string render_events_csv(const EventSequence<double>& events) {
    std::ostringstream out;
    out << "dimension,time_hours\n";
    for (std::size_t k = 0; k < events.arrivals.size(); ++k)
        for (double t : events.arrivals[k]) out << k << ',' << detail::format_full(t) << '\n';
    return out.str();
}

}  // namespace hawkes

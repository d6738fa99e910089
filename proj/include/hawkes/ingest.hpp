#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hawkes {

/// One-minute market bar. Timestamps are whole minutes since the Unix epoch;
/// files carry them as ISO-8601 ("2018-01-19T00:01:00" or "...T00:01").
struct OhlcBar {
    std::int64_t timestamp;  // minutes since epoch
    double open;
    double high;
    double low;
    double close;
};

struct JumpEvent {
    double time_hours;     // since the first bar of the series
    double magnitude_pct;  // 100 * (high - low) / denominator
};

/// Half-open slice [q(lower), q(upper)) of the empirical magnitude
/// distribution; the top band (upper == 1) is closed above so the ten
/// decile bands partition the data.
struct PercentileBand {
    double lower;
    double upper;
};

inline void validate(const PercentileBand& band) {
    if (!(band.lower >= 0.0) || !(band.lower < 1.0) || !(band.upper > 0.0) || !(band.upper <= 1.0) ||
        !(band.lower < band.upper))
        throw std::invalid_argument("PercentileBand: requires 0 <= lower < upper <= 1");
}

enum class Denominator { open, low, close };

inline Denominator denominator_from_string(const std::string& name) {
    if (name == "open") return Denominator::open;
    if (name == "low") return Denominator::low;
    if (name == "close") return Denominator::close;
    throw std::invalid_argument("denominator must be one of open|low|close, got '" + name + "'");
}

namespace detail {

inline std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

inline bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

/// "YYYY-MM-DD[T ]HH:MM[:SS][Z]" -> minutes since epoch. Bars are minute
/// resolution, so a nonzero seconds field is rejected.
inline std::int64_t parse_iso8601_minutes(std::string text) {
    if (!text.empty() && text.back() == 'Z') text.pop_back();
    const auto fail = [&]() -> std::int64_t {
        throw std::invalid_argument("bad ISO-8601 timestamp '" + text + "'");
    };
    if (text.size() < 16 || text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != ' ') ||
        text[13] != ':')
        return fail();
    const std::string ys = text.substr(0, 4), mos = text.substr(5, 2), ds = text.substr(8, 2),
                      hs = text.substr(11, 2), mins = text.substr(14, 2);
    if (!all_digits(ys) || !all_digits(mos) || !all_digits(ds) || !all_digits(hs) || !all_digits(mins))
        return fail();
    int seconds = 0;
    if (text.size() > 16) {
        if (text.size() != 19 || text[16] != ':' || !all_digits(text.substr(17, 2))) return fail();
        seconds = std::stoi(text.substr(17, 2));
    }
    const std::int64_t year = std::stoll(ys);
    const unsigned month = static_cast<unsigned>(std::stoi(mos));
    const unsigned day = static_cast<unsigned>(std::stoi(ds));
    const int hour = std::stoi(hs);
    const int minute = std::stoi(mins);
    static constexpr unsigned kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
    const unsigned month_days = month == 2 && leap ? 29u : (month >= 1 && month <= 12 ? kDays[month - 1] : 0u);
    if (month < 1 || month > 12 || day < 1 || day > month_days || hour > 23 || minute > 59 ||
        seconds > 59)
        return fail();
    if (seconds != 0)
        throw std::invalid_argument("sub-minute timestamp '" + text + "' (one-minute bars expected)");
    return days_from_civil(year, month, day) * 1440 + hour * 60 + minute;
}

inline double parse_price(const std::string& field, const char* name, std::size_t line) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(field, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != field.size() || !std::isfinite(value))
        throw std::invalid_argument("line " + std::to_string(line) + ": bad " + name + " value '" +
                                    field + "'");
    return value;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

inline std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

}  // namespace detail

/// Reads "timestamp,open,high,low,close" rows. Enforces strictly increasing
/// timestamps, positive prices and low <= min(open, close) <= max(open, close)
/// <= high; failures report the 1-based line number.
inline std::vector<OhlcBar> parse_ohlc_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty input: missing header row");
    if (detail::strip_cr(line) != "timestamp,open,high,low,close")
        throw std::invalid_argument("bad header row: expected 'timestamp,open,high,low,close'");

    std::vector<OhlcBar> bars;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = detail::strip_cr(line);
        if (line.empty()) continue;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != 5)
            throw std::invalid_argument("line " + std::to_string(line_no) + ": expected 5 fields, got " +
                                        std::to_string(fields.size()));
        OhlcBar bar;
        try {
            bar.timestamp = detail::parse_iso8601_minutes(fields[0]);
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("line " + std::to_string(line_no) + ": " + e.what());
        }
        bar.open = detail::parse_price(fields[1], "open", line_no);
        bar.high = detail::parse_price(fields[2], "high", line_no);
        bar.low = detail::parse_price(fields[3], "low", line_no);
        bar.close = detail::parse_price(fields[4], "close", line_no);

        if (!(bar.open > 0.0) || !(bar.high > 0.0) || !(bar.low > 0.0) || !(bar.close > 0.0))
            throw std::invalid_argument("line " + std::to_string(line_no) + ": nonpositive price");
        if (bar.low > std::min(bar.open, bar.close) || bar.high < std::max(bar.open, bar.close))
            throw std::invalid_argument("line " + std::to_string(line_no) +
                                        ": violated low <= open,close <= high ordering");
        if (!bars.empty()) {
            if (bar.timestamp == bars.back().timestamp)
                throw std::invalid_argument("line " + std::to_string(line_no) + ": duplicate timestamp");
            if (bar.timestamp < bars.back().timestamp)
                throw std::invalid_argument("line " + std::to_string(line_no) +
                                            ": timestamps not increasing");
        }
        bars.push_back(bar);
    }
    return bars;
}

/// Intrabar range of every bar as a percentage of the chosen denominator,
/// stamped with hours since the first bar.
inline std::vector<JumpEvent> jump_magnitudes(const std::vector<OhlcBar>& bars,
                                              Denominator denominator = Denominator::open) {
    if (bars.empty()) throw std::invalid_argument("jump_magnitudes: empty input");
    std::vector<JumpEvent> events;
    events.reserve(bars.size());
    const std::int64_t origin = bars.front().timestamp;
    for (const OhlcBar& bar : bars) {
        double base = bar.open;
        if (denominator == Denominator::low) base = bar.low;
        if (denominator == Denominator::close) base = bar.close;
        events.push_back(JumpEvent{static_cast<double>(bar.timestamp - origin) / 60.0,
                                   100.0 * (bar.high - bar.low) / base});
    }
    return events;
}

/// Empirical quantile with linear interpolation between the closest order
/// statistics: position p*(n-1) in the sorted sample, so q(0) is the minimum
/// and q(1) the maximum.
inline double quantile(std::vector<double> values, double p) {
    if (values.empty()) throw std::invalid_argument("quantile: empty sample");
    if (!(p >= 0.0) || !(p <= 1.0)) throw std::invalid_argument("quantile: p must lie in [0, 1]");
    std::sort(values.begin(), values.end());
    const double position = p * static_cast<double>(values.size() - 1);
    const std::size_t below = static_cast<std::size_t>(position);
    if (below + 1 >= values.size()) return values.back();
    const double weight = position - static_cast<double>(below);
    return values[below] + weight * (values[below + 1] - values[below]);
}

namespace detail {

inline bool in_band(double magnitude, double lo_q, double hi_q, bool top_closed) {
    if (magnitude < lo_q) return false;
    return top_closed ? magnitude <= hi_q : magnitude < hi_q;
}

}  // namespace detail

/// Jumps whose magnitude falls in the band, with band edges taken from the
/// given threshold population (for example a longer reference window).
/// Zero-magnitude bars (high == low) are never jump events, whatever the
/// band; constant-price stretches therefore contribute nothing.
inline std::vector<JumpEvent> select_jumps(const std::vector<JumpEvent>& jumps,
                                           const PercentileBand& band,
                                           const std::vector<double>& threshold_population) {
    validate(band);
    if (threshold_population.empty())
        throw std::invalid_argument("select_jumps: empty threshold population");
    const double lo_q = quantile(threshold_population, band.lower);
    const double hi_q = quantile(threshold_population, band.upper);
    const bool top_closed = band.upper == 1.0;
    std::vector<JumpEvent> selected;
    for (const JumpEvent& jump : jumps)
        if (jump.magnitude_pct > 0.0 && detail::in_band(jump.magnitude_pct, lo_q, hi_q, top_closed))
            selected.push_back(jump);
    return selected;
}

inline std::vector<JumpEvent> select_jumps(const std::vector<JumpEvent>& jumps,
                                           const PercentileBand& band) {
    std::vector<double> magnitudes;
    magnitudes.reserve(jumps.size());
    for (const JumpEvent& jump : jumps) magnitudes.push_back(jump.magnitude_pct);
    return select_jumps(jumps, band, magnitudes);
}

/// Arrival times (hours) of the in-band jumps.
inline std::vector<double> extract_events(const std::vector<JumpEvent>& jumps,
                                          const PercentileBand& band,
                                          const std::vector<double>& threshold_population) {
    std::vector<double> times;
    for (const JumpEvent& jump : select_jumps(jumps, band, threshold_population))
        times.push_back(jump.time_hours);
    return times;
}

/// Self-thresholding variant: band edges come from the series' own magnitudes.
inline std::vector<double> extract_events(const std::vector<JumpEvent>& jumps,
                                          const PercentileBand& band) {
    std::vector<double> magnitudes;
    magnitudes.reserve(jumps.size());
    for (const JumpEvent& jump : jumps) magnitudes.push_back(jump.magnitude_pct);
    return extract_events(jumps, band, magnitudes);
}

inline std::vector<double> extract_events(const std::vector<OhlcBar>& bars, const PercentileBand& band,
                                          Denominator denominator = Denominator::open) {
    return extract_events(jump_magnitudes(bars, denominator), band);
}

inline std::vector<double> extract_events(const std::vector<OhlcBar>& bars, const PercentileBand& band,
                                          const std::vector<double>& threshold_population,
                                          Denominator denominator = Denominator::open) {
    return extract_events(jump_magnitudes(bars, denominator), band, threshold_population);
}

}  // namespace hawkes

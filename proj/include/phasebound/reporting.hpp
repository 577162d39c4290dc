#ifndef PHASEBOUND_REPORTING_HPP
#define PHASEBOUND_REPORTING_HPP

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "asymptotic_limit.hpp"
#include "bound_kernel.hpp"
#include "canonical_povm.hpp"
#include "errors.hpp"
#include "oracle.hpp"
#include "state_space.hpp"

namespace phasebound::reporting
{

/// 17 significant digits: enough for every double to re-parse to itself.
inline std::string format_double(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string trim(const std::string& s)
{
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return s.substr(b, e - b);
}

/// Worker count: PHASEBOUND_THREADS if set and positive, else the hardware count.
inline unsigned thread_count()
{
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("PHASEBOUND_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0)
            n = static_cast<unsigned>(v);
    }
    return n;
}

/// Runs job(i) for i in [0, count) on up to `threads` workers. The first
/// exception thrown by any job is rethrown after all workers join.
template <class Job>
void parallel_for(std::size_t count, unsigned threads, Job job)
{
    threads = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), std::max<std::size_t>(count, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count || failed.load())
                    return;
                try {
                    job(i);
                } catch (...) {
                    bool expected = false;
                    if (failed.compare_exchange_strong(expected, true))
                        failure = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool)
        th.join();
    if (failure)
        std::rethrow_exception(failure);
}

// ---------------------------------------------------------------------------
// Curves

struct DkEntry
{
    bool infinite = false;
    long long value = 0;

    std::string label() const { return infinite ? "inf" : std::to_string(value); }
    friend bool operator==(const DkEntry&, const DkEntry&) = default;
};

/// Parses "0,1,2,3,inf".
inline std::vector<DkEntry> parse_dk_list(const std::string& text)
{
    std::vector<DkEntry> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty())
            continue;
        if (item == "inf" || item == "Inf" || item == "INF") {
            out.push_back({true, 0});
            continue;
        }
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(item, &used);
        } catch (const std::exception&) {
            throw DomainError("bad dk entry '" + item + "'");
        }
        if (used != item.size())
            throw DomainError("bad dk entry '" + item + "'");
        if (v < 0)
            throw DomainError("dk entries must be >= 0, got " + item);
        out.push_back({false, v});
    }
    if (out.empty())
        throw DomainError("dk list is empty");
    return out;
}

enum class OutputFormat
{
    csv,
    json
};

enum class XAxis
{
    xi,
    dalpha
};

struct CurveSpec
{
    std::vector<DkEntry> dks = parse_dk_list("0,1,2,3,inf");
    double xi_start = 0.0;
    double xi_stop = 4.0;
    double xi_step = 0.05;
    OutputFormat format = OutputFormat::csv;
    XAxis x_axis = XAxis::xi;

    void validate() const
    {
        if (dks.empty())
            throw DomainError("curve needs at least one dk entry");
        for (const auto& d : dks)
            if (!d.infinite && d.value < 0)
                throw DomainError("dk entries must be >= 0");
        if (!(xi_start >= 0.0 && xi_start < xi_stop && std::isfinite(xi_stop)))
            throw DomainError("curve grid needs 0 <= start < stop");
        if (!(xi_step > 0.0))
            throw DomainError("curve grid needs step > 0");
    }

    /// start + i step for every i with the point not beyond stop (1e-9 step slack).
    std::vector<double> xi_grid() const
    {
        validate();
        const auto count = static_cast<std::size_t>(std::floor((xi_stop - xi_start) / xi_step + 1e-9)) + 1;
        std::vector<double> grid(count);
        for (std::size_t i = 0; i < count; ++i)
            grid[i] = xi_start + static_cast<double>(i) * xi_step;
        return grid;
    }
};

struct CurveRow
{
    double xi = 0.0;
    DkEntry dk;
    std::optional<double> dalpha;
    std::optional<double> lambda0;
    double cauchy_bound = 0.0;
    std::optional<double> error_estimate;
    /// "ok", or "out_of_domain" when xi > dk + 1 (phase precision above 2pi).
    std::string status = "ok";
};

inline CurveRow curve_point(double xi_value, const DkEntry& dk)
{
    CurveRow row;
    row.xi = xi_value;
    row.dk = dk;
    row.cauchy_bound = std::min(1.0, xi_value);
    if (dk.infinite) {
        const auto limit = lambda0_asymptotic(xi_value);
        row.lambda0 = limit.value;
        row.error_estimate = limit.error_estimate;
        return row;
    }
    const double count = static_cast<double>(dk.value + 1);
    if (xi_value > count * (1.0 + 1e-12)) {
        row.status = "out_of_domain";
        return row;
    }
    const auto kernel = ConcentrationKernel::from_xi(xi_value, dk.value);
    row.dalpha = kernel.dalpha();
    row.lambda0 = least_upper_bound_at_xi(xi_value, dk.value).lambda0;
    return row;
}

/// Rows in (dk, xi) order, dk entries in the order given.
inline std::vector<CurveRow> compute_curve(const CurveSpec& spec, unsigned threads = thread_count())
{
    const auto grid = spec.xi_grid();
    std::vector<CurveRow> rows(grid.size() * spec.dks.size());
    parallel_for(rows.size(), threads, [&](std::size_t i) {
        rows[i] = curve_point(grid[i % grid.size()], spec.dks[i / grid.size()]);
    });
    return rows;
}

inline std::string optional_field(const std::optional<double>& v)
{
    return v ? format_double(*v) : std::string();
}

inline std::string curve_csv(const std::vector<CurveRow>& rows, XAxis axis = XAxis::xi)
{
    std::string out = axis == XAxis::xi ? "xi,dk,dalpha,lambda0,cauchy_bound,error_estimate,status\n"
                                        : "dalpha,dk,xi,lambda0,cauchy_bound,error_estimate,status\n";
    for (const auto& r : rows) {
        if (axis == XAxis::xi)
            out += format_double(r.xi) + "," + r.dk.label() + "," + optional_field(r.dalpha);
        else
            out += optional_field(r.dalpha) + "," + r.dk.label() + "," + format_double(r.xi);
        out += "," + optional_field(r.lambda0) + "," + format_double(r.cauchy_bound) + ","
               + optional_field(r.error_estimate) + "," + r.status + "\n";
    }
    return out;
}

inline nlohmann::json curve_json(const std::vector<CurveRow>& rows, XAxis axis = XAxis::xi)
{
    auto opt = [](const std::optional<double>& v) -> nlohmann::json {
        return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
    };
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
        arr.push_back({{"xi", r.xi},
                       {"dk", r.dk.infinite ? nlohmann::json("inf") : nlohmann::json(r.dk.value)},
                       {"dalpha", opt(r.dalpha)},
                       {"lambda0", opt(r.lambda0)},
                       {"cauchy_bound", r.cauchy_bound},
                       {"error_estimate", opt(r.error_estimate)},
                       {"status", r.status}});
    }
    return {{"x_axis", axis == XAxis::xi ? "xi" : "dalpha"}, {"rows", arr}};
}

/// Gnuplot script plotting one line per dk from a curve CSV.
inline std::string gnuplot_script(const std::string& csv_path, const CurveSpec& spec)
{
    const bool by_xi = spec.x_axis == XAxis::xi;
    std::string s;
    s += "set datafile separator ','\n";
    s += "set key top left\n";
    s += std::string("set xlabel '") + (by_xi ? "xi" : "dalpha") + "'\n";
    s += "set ylabel 'lambda0'\n";
    s += "set yrange [0:1.05]\n";
    s += "plot \\\n";
    for (std::size_t i = 0; i < spec.dks.size(); ++i) {
        const auto label = spec.dks[i].label();
        s += "  '" + csv_path + "' using 1:(strcol(2) eq '" + label + "' ? $4 : 1/0) with lines title 'dk=" + label
             + "'";
        s += i + 1 < spec.dks.size() ? ", \\\n" : "\n";
    }
    return s;
}

// ---------------------------------------------------------------------------
// Config files: "key = value" lines, '#' starts a comment.

inline std::map<std::string, std::string> parse_config(const std::string& text)
{
    std::map<std::string, std::string> out;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw DomainError("config line " + std::to_string(lineno) + ": expected key = value");
        auto key = trim(line.substr(0, eq));
        auto value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
            value = value.substr(1, value.size() - 2);
        if (key.empty())
            throw DomainError("config line " + std::to_string(lineno) + ": empty key");
        out[key] = value;
    }
    return out;
}

inline double parse_number(const std::string& key, const std::string& value)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &used);
    } catch (const std::exception&) {
        throw DomainError("'" + key + "' expects a number, got '" + value + "'");
    }
    if (used != value.size())
        throw DomainError("'" + key + "' expects a number, got '" + value + "'");
    return v;
}

/// Applies recognized curve keys (dk, xi_start, xi_stop, xi_step, format, x_axis).
/// Returns the keys it did not recognize.
inline std::vector<std::string> apply_curve_config(CurveSpec& spec, const std::map<std::string, std::string>& cfg)
{
    std::vector<std::string> unknown;
    for (const auto& [key, value] : cfg) {
        if (key == "dk")
            spec.dks = parse_dk_list(value);
        else if (key == "xi_start")
            spec.xi_start = parse_number(key, value);
        else if (key == "xi_stop")
            spec.xi_stop = parse_number(key, value);
        else if (key == "xi_step")
            spec.xi_step = parse_number(key, value);
        else if (key == "format") {
            if (value == "csv")
                spec.format = OutputFormat::csv;
            else if (value == "json")
                spec.format = OutputFormat::json;
            else
                throw DomainError("format must be csv or json");
        } else if (key == "x_axis") {
            if (value == "xi")
                spec.x_axis = XAxis::xi;
            else if (value == "dalpha")
                spec.x_axis = XAxis::dalpha;
            else
                throw DomainError("x_axis must be xi or dalpha");
        } else
            unknown.push_back(key);
    }
    return unknown;
}

// ---------------------------------------------------------------------------
// Bound reports

struct BoundVerification
{
    std::optional<double> power_lambda0;
    std::string power_status = "skipped";
    int power_iterations = 0;
    double power_difference = 0.0;
    double attainment_probability = 0.0;
    double attainment_error = 0.0;
    double max_residual = 0.0;
    double orthogonality_defect = 0.0;
    double spectral_gap = 0.0;
};

struct BoundReport
{
    double dalpha = 0.0;
    long long dk = 0;
    double xi = 0.0;
    double lambda0 = 0.0;
    double cauchy_bound = 0.0;
    FockState optimal_state;
    std::optional<BoundVerification> verification;
};

inline BoundReport make_bound_report(double dalpha, long long dk, bool verify, const oracle::OracleConfig& cfg = {})
{
    BoundReport r;
    r.dalpha = dalpha;
    r.dk = dk;
    r.xi = xi(dalpha, dk);
    r.cauchy_bound = cauchy_bound(dalpha, dk);
    const auto best = least_upper_bound(dalpha, dk);
    r.lambda0 = best.lambda0;
    r.optimal_state = best.state;
    if (!verify)
        return r;

    BoundVerification v;
    const auto kernel = build_kernel(dalpha, dk);
    const auto spectrum = eigensystem(kernel);
    v.max_residual = spectrum.max_residual;
    v.orthogonality_defect = spectrum.orthogonality_defect;
    v.spectral_gap = spectrum.spectral_gap;
    if (dalpha > 0.0) {
        const auto power = oracle::power_iteration(kernel, cfg);
        v.power_lambda0 = power.eigenvalue;
        v.power_status = oracle::to_string(power.status);
        v.power_iterations = power.iterations;
        v.power_difference = std::abs(power.eigenvalue - r.lambda0);
    }
    v.attainment_probability = conditional_probability(r.optimal_state, PhaseWindow(0.0, dalpha), NumberWindow(0, dk));
    v.attainment_error = std::abs(v.attainment_probability - r.lambda0);
    r.verification = v;
    return r;
}

inline std::string bound_text(const BoundReport& r)
{
    std::string s;
    auto line = [&s](const std::string& key, const std::string& value) { s += key + " = " + value + "\n"; };
    line("dalpha", format_double(r.dalpha));
    line("dk", std::to_string(r.dk));
    line("xi", format_double(r.xi));
    line("lambda0", format_double(r.lambda0));
    line("cauchy_bound", format_double(r.cauchy_bound));
    std::string amps;
    for (const auto& a : r.optimal_state.amplitudes()) {
        if (!amps.empty())
            amps += ",";
        amps += format_double(a.real());
    }
    line("optimal_state", amps);
    if (r.verification) {
        const auto& v = *r.verification;
        line("power_lambda0", v.power_lambda0 ? format_double(*v.power_lambda0) : "n/a");
        line("power_status", v.power_status);
        line("power_iterations", std::to_string(v.power_iterations));
        line("power_difference", format_double(v.power_difference));
        line("attainment_probability", format_double(v.attainment_probability));
        line("attainment_error", format_double(v.attainment_error));
        line("max_residual", format_double(v.max_residual));
        line("orthogonality_defect", format_double(v.orthogonality_defect));
        line("spectral_gap", format_double(v.spectral_gap));
    }
    return s;
}

inline nlohmann::json bound_json(const BoundReport& r)
{
    nlohmann::json amps = nlohmann::json::array();
    for (const auto& a : r.optimal_state.amplitudes())
        amps.push_back(a.real());
    nlohmann::json j = {{"dalpha", r.dalpha},     {"dk", r.dk},
                        {"xi", r.xi},             {"lambda0", r.lambda0},
                        {"cauchy_bound", r.cauchy_bound}, {"optimal_state", amps}};
    if (r.verification) {
        const auto& v = *r.verification;
        j["verification"] = {
            {"power_lambda0", v.power_lambda0 ? nlohmann::json(*v.power_lambda0) : nlohmann::json(nullptr)},
            {"power_status", v.power_status},
            {"power_iterations", v.power_iterations},
            {"power_difference", v.power_difference},
            {"attainment_probability", v.attainment_probability},
            {"attainment_error", v.attainment_error},
            {"max_residual", v.max_residual},
            {"orthogonality_defect", v.orthogonality_defect},
            {"spectral_gap", std::isfinite(v.spectral_gap) ? nlohmann::json(v.spectral_gap) : nlohmann::json(nullptr)}};
    }
    return j;
}

// ---------------------------------------------------------------------------
// Spectra and distributions

inline std::string discrete_spectrum_csv(double dalpha, long long dk)
{
    const auto spectrum = eigensystem(build_kernel(dalpha, dk));
    std::string out = "index,eigenvalue\n";
    for (std::size_t s = 0; s < spectrum.eigenvalues.size(); ++s)
        out += std::to_string(s) + "," + format_double(spectrum.eigenvalues[s]) + "\n";
    return out;
}

inline std::string continuum_spectrum_csv(double xi_value, std::size_t nodes)
{
    const auto spectrum = nystrom_spectrum(AsymptoticProblem(xi_value, nodes));
    std::string out = "index,eigenvalue,nodes\n";
    const auto n = std::to_string(nodes);
    for (std::size_t s = 0; s < spectrum.eigenvalues.size(); ++s)
        out += std::to_string(s) + "," + format_double(spectrum.eigenvalues[s]) + "," + n + "\n";
    return out;
}

/// Canonical phase density at points -pi + 2pi j / points, j = 0..points-1.
inline std::string distribution_csv(const FockState& state, std::size_t points)
{
    if (points == 0)
        throw DomainError("distribution needs at least one point");
    const auto unit = normalize(state);
    const auto canonical = PhaseMatrix::canonical();
    std::string out = "phi,density\n";
    for (std::size_t j = 0; j < points; ++j) {
        const double phi = -pi + two_pi * static_cast<double>(j) / static_cast<double>(points);
        out += format_double(phi) + "," + format_double(phase_density(unit, canonical, phi)) + "\n";
    }
    return out;
}

/// Window probability for the distribution sidecar; conditional when a number
/// window is supplied.
inline nlohmann::json window_probability_json(const FockState& state, const PhaseWindow& window,
                                              const std::optional<NumberWindow>& number)
{
    nlohmann::json j = {{"alpha", window.center()}, {"dalpha", window.width()}};
    if (number) {
        j["k"] = number->base();
        j["dk"] = number->precision();
        j["probability"] = conditional_probability(state, window, *number);
    } else {
        j["probability"] = interval_probability(state, window);
    }
    return j;
}

} // namespace phasebound::reporting

#endif // PHASEBOUND_REPORTING_HPP

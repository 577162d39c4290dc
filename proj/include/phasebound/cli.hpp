#ifndef PHASEBOUND_CLI_HPP
#define PHASEBOUND_CLI_HPP

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "errors.hpp"
#include "reporting.hpp"
#include "state_json.hpp"

namespace phasebound::cli
{

enum ExitCode : int
{
    exit_ok = 0,
    exit_input = 2,
    exit_numerical = 3,
};

class IoError : public DomainError
{
public:
    using DomainError::DomainError;
};

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Writes to `path`, or to `out` when path is empty or "-".
inline void write_output(const std::string& path, const std::string& content, std::ostream& out)
{
    if (path.empty() || path == "-") {
        out << content;
        return;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file)
        throw IoError("cannot write '" + path + "'");
    file << content;
    if (!file)
        throw IoError("write to '" + path + "' failed");
}

inline double to_radians(double value, bool degrees)
{
    return degrees ? value * pi / 180.0 : value;
}

/// Entry point shared by the executable and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Least upper bounds for successful quantum phase measurements"};
    app.require_subcommand(1);

    // bound
    auto* bound = app.add_subcommand("bound", "lambda0, xi, Cauchy bound and the optimal state");
    double b_dalpha = 0.0;
    long long b_dk = 0;
    bool b_verify = false;
    bool b_degrees = false;
    std::string b_format = "text";
    std::uint64_t b_seed = 42;
    bound->add_option("--dalpha", b_dalpha, "phase precision (radians)")->required();
    bound->add_option("--dk", b_dk, "number precision")->required();
    bound->add_flag("--verify", b_verify, "cross-check with power iteration and the POVM path");
    bound->add_flag("--degrees", b_degrees, "read --dalpha in degrees");
    bound->add_option("--format", b_format, "text or json")->check(CLI::IsMember({"text", "json"}));
    bound->add_option("--seed", b_seed, "power-iteration start seed");

    // curve
    auto* curve = app.add_subcommand("curve", "lambda0 against xi for several dk (figure data)");
    std::string c_dk = "0,1,2,3,inf";
    double c_start = 0.0;
    double c_stop = 4.0;
    double c_step = 0.05;
    std::string c_format = "csv";
    std::string c_axis = "xi";
    std::string c_output;
    std::string c_gnuplot;
    std::string c_config;
    unsigned c_threads = 0;
    auto* o_dk = curve->add_option("--dk", c_dk, "comma separated dk list, 'inf' for the limit");
    auto* o_start = curve->add_option("--xi-start", c_start, "first xi");
    auto* o_stop = curve->add_option("--xi-stop", c_stop, "last xi (inclusive)");
    auto* o_step = curve->add_option("--xi-step", c_step, "xi increment");
    auto* o_format = curve->add_option("--format", c_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    auto* o_axis =
        curve->add_option("--x-axis", c_axis, "key rows by xi or dalpha")->check(CLI::IsMember({"xi", "dalpha"}));
    curve->add_option("--output,-o", c_output, "output file (default stdout)");
    curve->add_option("--gnuplot", c_gnuplot, "also write a gnuplot script here");
    curve->add_option("--config", c_config, "key = value file presetting the grid");
    curve->add_option("--threads", c_threads, "worker threads (default PHASEBOUND_THREADS or all cores)");

    // distribution
    auto* dist = app.add_subcommand("distribution", "canonical phase density of a state");
    std::string d_state;
    double d_alpha = 0.0;
    double d_dalpha = 0.0;
    std::optional<long long> d_k;
    std::optional<long long> d_dk;
    std::size_t d_points = 512;
    std::string d_output;
    std::string d_sidecar;
    bool d_degrees = false;
    dist->add_option("--state", d_state, "state JSON file")->required();
    dist->add_option("--alpha", d_alpha, "window center (radians)");
    dist->add_option("--dalpha", d_dalpha, "window width (radians)")->required();
    dist->add_option("--k", d_k, "number window base (conditional probability)");
    dist->add_option("--dk", d_dk, "number window precision (conditional probability)");
    dist->add_option("--points", d_points, "grid points over [-pi, pi)");
    dist->add_option("--output,-o", d_output, "CSV output (default stdout)");
    dist->add_option("--sidecar", d_sidecar, "window probability JSON (default <output>.window.json)");
    dist->add_flag("--degrees", d_degrees, "read --alpha and --dalpha in degrees");

    // spectrum
    auto* spec = app.add_subcommand("spectrum", "full discrete or continuum spectrum");
    double s_dalpha = 0.0;
    long long s_dk = 0;
    double s_xi = 0.0;
    std::size_t s_nodes = 64;
    std::string s_output;
    bool s_degrees = false;
    auto* os_dalpha = spec->add_option("--dalpha", s_dalpha, "phase precision (radians)");
    auto* os_dk = spec->add_option("--dk", s_dk, "number precision");
    auto* os_xi = spec->add_option("--xi", s_xi, "concentration parameter of the limit operator");
    auto* os_nodes = spec->add_option("--nodes", s_nodes, "Gauss-Legendre nodes");
    spec->add_option("--output,-o", s_output, "CSV output (default stdout)");
    spec->add_flag("--degrees", s_degrees, "read --dalpha in degrees");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        // Subcommand help requests surface as ParseError with exit code 0.
        if (e.get_exit_code() == 0) {
            for (auto* sub : app.get_subcommands())
                out << sub->help();
            if (app.get_subcommands().empty())
                out << app.help();
            return exit_ok;
        }
        err << "error: " << e.what() << "\n";
        return exit_input;
    }

    try {
        if (bound->parsed()) {
            oracle::OracleConfig cfg;
            cfg.seed = b_seed;
            const auto report = reporting::make_bound_report(to_radians(b_dalpha, b_degrees), b_dk, b_verify, cfg);
            if (b_format == "json")
                out << reporting::bound_json(report).dump(2) << "\n";
            else
                out << reporting::bound_text(report);
            return exit_ok;
        }

        if (curve->parsed()) {
            reporting::CurveSpec cs;
            if (!c_config.empty()) {
                const auto unknown = reporting::apply_curve_config(cs, reporting::parse_config(read_file(c_config)));
                for (const auto& key : unknown)
                    err << "warning: unknown config key '" << key << "'\n";
            }
            if (o_dk->count() > 0)
                cs.dks = reporting::parse_dk_list(c_dk);
            if (o_start->count() > 0)
                cs.xi_start = c_start;
            if (o_stop->count() > 0)
                cs.xi_stop = c_stop;
            if (o_step->count() > 0)
                cs.xi_step = c_step;
            if (o_format->count() > 0)
                cs.format = c_format == "json" ? reporting::OutputFormat::json : reporting::OutputFormat::csv;
            if (o_axis->count() > 0)
                cs.x_axis = c_axis == "dalpha" ? reporting::XAxis::dalpha : reporting::XAxis::xi;
            cs.validate();

            const unsigned threads = c_threads > 0 ? c_threads : reporting::thread_count();
            const auto rows = reporting::compute_curve(cs, threads);

            std::map<std::string, int> skipped;
            for (const auto& r : rows)
                if (r.status != "ok")
                    ++skipped[r.dk.label()];
            for (const auto& [label, count] : skipped)
                err << "warning: dk=" << label << ": " << count
                    << " rows flagged out_of_domain (phase precision above 2pi)\n";

            const std::string body = cs.format == reporting::OutputFormat::json
                                         ? reporting::curve_json(rows, cs.x_axis).dump(2) + "\n"
                                         : reporting::curve_csv(rows, cs.x_axis);
            write_output(c_output, body, out);
            if (!c_gnuplot.empty()) {
                if (cs.format != reporting::OutputFormat::csv || c_output.empty() || c_output == "-")
                    err << "warning: --gnuplot needs CSV written to a file; script references '"
                        << (c_output.empty() ? std::string("curve.csv") : c_output) << "'\n";
                write_output(c_gnuplot,
                             reporting::gnuplot_script(c_output.empty() || c_output == "-" ? "curve.csv" : c_output, cs),
                             out);
            }
            return exit_ok;
        }

        if (dist->parsed()) {
            const auto state = parse_state(read_file(d_state));
            const auto unit = normalize(state);
            if (d_k.has_value() != d_dk.has_value())
                throw DomainError("--k and --dk must be given together");
            const PhaseWindow window(to_radians(d_alpha, d_degrees), to_radians(d_dalpha, d_degrees));
            std::optional<NumberWindow> number;
            if (d_k)
                number = NumberWindow(*d_k, *d_dk);
            const auto sidecar = reporting::window_probability_json(unit, window, number);
            write_output(d_output, reporting::distribution_csv(unit, d_points), out);
            std::string sidecar_path = d_sidecar;
            if (sidecar_path.empty() && !d_output.empty() && d_output != "-")
                sidecar_path = d_output + ".window.json";
            if (!sidecar_path.empty())
                write_output(sidecar_path, sidecar.dump() + "\n", out);
            return exit_ok;
        }

        if (spec->parsed()) {
            const bool discrete = os_dalpha->count() > 0 || os_dk->count() > 0;
            const bool continuum = os_xi->count() > 0 || os_nodes->count() > 0;
            if (discrete == continuum)
                throw DomainError("give exactly one of (--dalpha, --dk) or (--xi [--nodes])");
            std::string body;
            if (discrete) {
                if (os_dalpha->count() == 0 || os_dk->count() == 0)
                    throw DomainError("the discrete form needs both --dalpha and --dk");
                body = reporting::discrete_spectrum_csv(to_radians(s_dalpha, s_degrees), s_dk);
            } else {
                if (os_xi->count() == 0)
                    throw DomainError("the continuum form needs --xi");
                body = reporting::continuum_spectrum_csv(s_xi, s_nodes);
            }
            write_output(s_output, body, out);
            return exit_ok;
        }
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return exit_input;
    } catch (const NumericalError& e) {
        err << "error: " << e.what() << "\n";
        return exit_numerical;
    }
    return exit_input;
}

} // namespace phasebound::cli

#endif // PHASEBOUND_CLI_HPP

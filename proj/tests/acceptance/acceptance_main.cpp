// Acceptance suite: one pass/fail line per criterion, non-zero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <phasebound/asymptotic_limit.hpp>
#include <phasebound/bound_kernel.hpp>
#include <phasebound/canonical_povm.hpp>
#include <phasebound/cli.hpp>
#include <phasebound/oracle.hpp>
#include <phasebound/reporting.hpp>

namespace pb = phasebound;

namespace
{

struct Outcome
{
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok && pass) {
            pass = false;
            detail = what;
        }
    }
};

std::string sci(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

const std::vector<double> grid_dalpha{0.1, 0.5, 1.0, 2.0, 3.0, 5.0, 6.2};
constexpr long long grid_max_dk = 16;

pb::FockState random_state(std::mt19937_64& rng, std::size_t size, std::size_t offset)
{
    std::normal_distribution<double> gauss;
    std::vector<pb::complex> amps(size);
    for (auto& a : amps)
        a = pb::complex(gauss(rng), gauss(rng));
    return pb::normalize(pb::FockState(offset, std::move(amps)));
}

// 1. lambda0(dalpha, 0) = dalpha/2pi and lambda0(dalpha, 1) = dalpha/2pi + sin(dalpha/2)/pi.
Outcome closed_form_anchors()
{
    Outcome o;
    double worst0 = 0.0;
    double worst1 = 0.0;
    double worst_power = 0.0;
    int power_checked = 0;
    for (int i = 1; i <= 50; ++i) {
        const double dalpha = pb::two_pi * i / 50.0;
        const double one = dalpha / pb::two_pi;
        const double two = dalpha / pb::two_pi + std::sin(0.5 * dalpha) / pb::pi;
        worst0 = std::max(worst0, std::abs(pb::least_upper_bound(dalpha, 0).lambda0 - one));
        worst1 = std::max(worst1, std::abs(pb::least_upper_bound(dalpha, 1).lambda0 - two));
        const auto power = pb::oracle::power_iteration(pb::build_kernel(dalpha, 1));
        if (power.status == pb::oracle::PowerStatus::converged) {
            worst_power = std::max(worst_power, std::abs(power.eigenvalue - two));
            ++power_checked;
        }
    }
    o.require(worst0 < 1e-13, "dk=0 error " + sci(worst0));
    o.require(worst1 < 1e-11, "dk=1 error " + sci(worst1));
    o.require(worst_power < 1e-11, "power-iteration error " + sci(worst_power));
    o.require(power_checked >= 49, "power iteration converged on only " + std::to_string(power_checked) + "/50");
    if (o.pass)
        o.detail = "dk=0 err " + sci(worst0) + ", dk=1 err " + sci(worst1) + ", power err " + sci(worst_power) + " ("
                   + std::to_string(power_checked) + "/50)";
    return o;
}

// 2. lambda0 <= min(1, xi) + 1e-12 on the 7x17 grid.
Outcome cauchy_bound_holds()
{
    Outcome o;
    double worst = -1.0;
    for (double dalpha : grid_dalpha)
        for (long long dk = 0; dk <= grid_max_dk; ++dk) {
            const double excess = pb::least_upper_bound(dalpha, dk).lambda0 - pb::cauchy_bound(dalpha, dk);
            worst = std::max(worst, excess);
            o.require(excess <= 1e-12, "excess " + sci(excess) + " at dalpha=" + std::to_string(dalpha)
                                           + " dk=" + std::to_string(dk));
        }
    if (o.pass)
        o.detail = "max lambda0 - bound = " + sci(worst);
    return o;
}

// 3. Sum of eigenvalues = xi for discrete kernels and Nystrom matrices (64, 128 nodes).
Outcome trace_identity()
{
    Outcome o;
    double worst_discrete = 0.0;
    double worst_nystrom = 0.0;
    for (double dalpha : grid_dalpha)
        for (long long dk = 0; dk <= grid_max_dk; ++dk) {
            const double xi = pb::xi(dalpha, dk);
            const auto s = pb::eigensystem(pb::build_kernel(dalpha, dk));
            worst_discrete = std::max(
                worst_discrete, std::abs(std::accumulate(s.eigenvalues.begin(), s.eigenvalues.end(), 0.0) - xi));
            for (std::size_t nodes : {64u, 128u}) {
                const auto n = pb::nystrom_spectrum(pb::AsymptoticProblem(xi, nodes));
                worst_nystrom = std::max(
                    worst_nystrom, std::abs(std::accumulate(n.eigenvalues.begin(), n.eigenvalues.end(), 0.0) - xi));
            }
        }
    o.require(worst_discrete <= 1e-10, "discrete trace error " + sci(worst_discrete));
    o.require(worst_nystrom <= 1e-10, "Nystrom trace error " + sci(worst_nystrom));
    if (o.pass)
        o.detail = "discrete err " + sci(worst_discrete) + ", Nystrom err " + sci(worst_nystrom);
    return o;
}

// 4. The optimal state reproduces lambda0 through the conditional-probability path.
Outcome attainment()
{
    Outcome o;
    double worst = 0.0;
    for (double dalpha : grid_dalpha)
        for (long long dk = 0; dk <= grid_max_dk; ++dk) {
            const auto best = pb::least_upper_bound(dalpha, dk);
            const double p =
                pb::conditional_probability(best.state, pb::PhaseWindow(0.0, dalpha), pb::NumberWindow(0, dk));
            worst = std::max(worst, std::abs(p - best.lambda0));
        }
    o.require(worst <= 1e-10, "attainment error " + sci(worst));
    if (o.pass)
        o.detail = "max |P(optimal) - lambda0| = " + sci(worst);
    return o;
}

// 5. 1000 seeded random states per grid point never beat lambda0.
Outcome supremum_soundness()
{
    Outcome o;
    double worst = -1.0;
    std::uint64_t seed = 5000;
    for (double dalpha : grid_dalpha)
        for (long long dk = 0; dk <= grid_max_dk; ++dk) {
            pb::oracle::OracleConfig cfg;
            cfg.random_trials = 1000;
            cfg.seed = seed;
            ++seed;
            const auto found = pb::oracle::random_state_search(dalpha, dk, cfg);
            const double excess = found.best - pb::least_upper_bound(dalpha, dk).lambda0;
            worst = std::max(worst, excess);
        }
    o.require(worst <= 1e-12, "random state exceeded lambda0 by " + sci(worst));
    if (o.pass)
        o.detail = "max(best random - lambda0) = " + sci(worst);
    return o;
}

// 6. Discrete bound converges to the limit at xi = 1.
Outcome discrete_to_asymptotic()
{
    Outcome o;
    std::vector<double> diffs;
    for (long long dk : {10LL, 50LL, 200LL})
        diffs.push_back(std::abs(pb::discrete_to_asymptotic_check(1.0, dk).difference));
    const double direct = std::abs(pb::least_upper_bound(pb::two_pi / 201.0, 200).lambda0
                                   - pb::lambda0_asymptotic(1.0).value);
    o.require(direct < 1e-3, "|lambda0(2pi/201, 200) - limit| = " + sci(direct));
    o.require(diffs[0] > diffs[1] && diffs[1] > diffs[2],
              "differences not decreasing: " + sci(diffs[0]) + ", " + sci(diffs[1]) + ", " + sci(diffs[2]));
    if (o.pass)
        o.detail = "|diff| at dk=10,50,200: " + sci(diffs[0]) + ", " + sci(diffs[1]) + ", " + sci(diffs[2]);
    return o;
}

// 7. Limit eigenvalue increases, ~xi for small xi, near 1 at xi = 4.
Outcome asymptotic_anchors()
{
    Outcome o;
    auto at = [](double xi, std::size_t nodes) {
        return pb::nystrom_spectrum(pb::AsymptoticProblem(xi, nodes)).eigenvalues.front();
    };
    double previous = -1.0;
    double worst_resolution = 0.0;
    for (int i = 1; i <= 16; ++i) {
        const double xi = 0.25 * i;
        const double v = pb::lambda0_asymptotic(xi).value;
        o.require(v > previous, "not increasing at xi=" + std::to_string(xi));
        previous = v;
        worst_resolution = std::max(worst_resolution, std::abs(at(xi, 64) - at(xi, 128)));
    }
    const double small = pb::lambda0_asymptotic(0.1).value;
    const double large = pb::lambda0_asymptotic(4.0).value;
    const double small_res = std::abs(at(0.1, 64) - at(0.1, 128));
    const double large_res = std::abs(at(4.0, 64) - at(4.0, 128));
    o.require(small / 0.1 >= 0.99, "lambda0(0.1)/0.1 = " + std::to_string(small / 0.1));
    o.require(large > 0.999, "lambda0(4) = " + std::to_string(large));
    o.require(small_res < 1e-10 && large_res < 1e-10 && worst_resolution < 1e-10,
              "resolutions disagree by " + sci(std::max({small_res, large_res, worst_resolution})));
    if (o.pass) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "lambda0(0.1)/0.1 = %.6f, lambda0(4) = %.9f, 64 vs 128 nodes %s", small / 0.1,
                      large, sci(std::max({small_res, large_res, worst_resolution})).c_str());
        o.detail = buf;
    }
    return o;
}

// 8. Phase density normalization, phase covariance, number-shift invariance.
Outcome povm_properties()
{
    Outcome o;
    std::mt19937_64 rng(8008);
    std::uniform_real_distribution<double> angle(-pb::pi, pb::pi);
    std::uniform_real_distribution<double> width(0.0, pb::two_pi);
    const auto canonical = pb::PhaseMatrix::canonical();
    double worst_norm = 0.0;
    double worst_cov = 0.0;
    double worst_shift = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t size = 1 + static_cast<std::size_t>(trial % 12);
        const std::size_t offset = static_cast<std::size_t>(trial % 5);
        const auto s = random_state(rng, size, offset);

        // Midpoint rule over a full period is exact for these trigonometric polynomials.
        constexpr int points = 512;
        double integral = 0.0;
        for (int j = 0; j < points; ++j)
            integral += pb::phase_density(s, canonical, -pb::pi + pb::two_pi * (j + 0.5) / points);
        integral *= pb::two_pi / points;
        worst_norm = std::max(worst_norm, std::abs(integral - 1.0));

        const double theta = angle(rng);
        const double alpha = angle(rng);
        const double w = width(rng);
        worst_cov = std::max(worst_cov, std::abs(pb::interval_probability(pb::phase_shift(s, theta),
                                                                          pb::PhaseWindow(alpha + theta, w))
                                                 - pb::interval_probability(s, pb::PhaseWindow(alpha, w))));

        const long long k = static_cast<long long>(offset);
        const long long dk = trial % 7;
        const long long m = trial % 9 - static_cast<long long>(offset);
        const pb::PhaseWindow pw(alpha, w);
        worst_shift = std::max(worst_shift,
                               std::abs(pb::conditional_probability(pb::number_shift(s, m), pw, pb::NumberWindow(k + m, dk))
                                        - pb::conditional_probability(s, pw, pb::NumberWindow(k, dk))));
    }
    o.require(worst_norm <= 1e-10, "normalization error " + sci(worst_norm));
    o.require(worst_cov <= 1e-12, "phase covariance error " + sci(worst_cov));
    o.require(worst_shift <= 1e-12, "number-shift error " + sci(worst_shift));
    if (o.pass)
        o.detail = "norm " + sci(worst_norm) + ", covariance " + sci(worst_cov) + ", number shift " + sci(worst_shift);
    return o;
}

// 9. Figure data: runtime, byte determinism, curve ordering at fixed xi.
Outcome figure_reproduction()
{
    Outcome o;
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "phasebound_acceptance";
    fs::create_directories(dir);
    const std::string first = (dir / "curve_a.csv").string();
    const std::string second = (dir / "curve_b.csv").string();

    auto invoke = [](const std::string& out, const char* threads) {
        const char* argv[] = {"phasebound", "curve",     "--dk",      "0,1,2,3,inf", "--xi-start", "0",
                              "--xi-stop",  "4",         "--xi-step", "0.05",        "--output",   out.c_str(),
                              "--threads",  threads};
        std::ostringstream sink;
        return pb::cli::run(static_cast<int>(std::size(argv)), argv, sink, sink);
    };

    const auto start = std::chrono::steady_clock::now();
    const int code_a = invoke(first, "1");
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const int code_b = invoke(second, "8");
    o.require(code_a == 0 && code_b == 0, "curve command failed");
    o.require(seconds < 60.0, "curve took " + std::to_string(seconds) + " s");

    auto slurp = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const std::string a = slurp(first);
    const std::string b = slurp(second);
    o.require(!a.empty() && a == b, "outputs differ between runs");

    // xi -> (dk label -> lambda0), for rows inside the domain.
    std::map<std::string, std::map<std::string, double>> table;
    std::stringstream ss(a);
    std::string line;
    std::getline(ss, line);
    o.require(line == "xi,dk,dalpha,lambda0,cauchy_bound,error_estimate,status", "unexpected header " + line);
    std::size_t rows = 0;
    while (std::getline(ss, line)) {
        ++rows;
        std::vector<std::string> f;
        std::stringstream ls(line);
        std::string item;
        while (std::getline(ls, item, ','))
            f.push_back(item);
        if (f.size() == 7 && f[6] == "ok")
            table[f[0]][f[1]] = std::strtod(f[3].c_str(), nullptr);
    }
    o.require(rows == 81 * 5, "expected 405 rows, got " + std::to_string(rows));

    int ordered_points = 0;
    for (const auto& [xi, curves] : table) {
        std::vector<std::pair<std::string, double>> chain;
        for (const char* label : {"0", "1", "2", "3", "inf"})
            if (auto it = curves.find(label); it != curves.end())
                chain.emplace_back(label, it->second);
        for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
            const double slack = chain[i + 1].first == "inf" ? 1e-9 : 0.0;
            o.require(chain[i].second >= chain[i + 1].second - slack,
                      "at xi=" + xi + ": dk=" + chain[i].first + " below dk=" + chain[i + 1].first);
        }
        ++ordered_points;
    }
    fs::remove_all(dir);
    if (o.pass) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%zu rows in %.2f s, byte-identical across runs, ordering holds at %d xi values",
                      rows, seconds, ordered_points);
        o.detail = buf;
    }
    return o;
}

struct Criterion
{
    const char* id;
    const char* name;
    std::function<Outcome()> run;
    double time_limit; ///< seconds; <= 0 for none
};

} // namespace

int main()
{
    const std::vector<Criterion> criteria{
        {"AC1", "closed-form anchors for dk = 0, 1", closed_form_anchors, 1.0},
        {"AC2", "Cauchy-Schwarz bound on the 7x17 grid", cauchy_bound_holds, 5.0},
        {"AC3", "trace identity (discrete and Nystrom)", trace_identity, 0.0},
        {"AC4", "attainment through the conditional probability", attainment, 0.0},
        {"AC5", "supremum soundness against random states", supremum_soundness, 0.0},
        {"AC6", "discrete to asymptotic convergence at xi = 1", discrete_to_asymptotic, 30.0},
        {"AC7", "asymptotic eigenvalue anchors", asymptotic_anchors, 0.0},
        {"AC8", "POVM layer properties", povm_properties, 0.0},
        {"AC9", "figure curves: runtime, determinism, ordering", figure_reproduction, 60.0},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.time_limit > 0.0 && seconds >= c.time_limit && o.pass) {
            o.pass = false;
            o.detail = "runtime " + std::to_string(seconds) + " s exceeds " + std::to_string(c.time_limit) + " s";
        }
        if (!o.pass)
            ++failed;
        std::printf("[%s] %s %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), seconds);
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
    return failed == 0 ? 0 : 1;
}

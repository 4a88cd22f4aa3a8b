// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "test_support.hpp"

#include "tqd/cli.hpp"
#include "tqd/discord.hpp"
#include "tqd/format.hpp"
#include "tqd/spinmodel.hpp"
#include "tqd/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <tuple>

using namespace tqd;
using namespace tqd::testing;

namespace {

class Gate {
public:
    void record(int id, const std::string& title, bool ok, const std::string& detail)
    {
        const double seconds = std::chrono::duration<double>(Clock::now() - started_).count();
        std::cout << (ok ? "PASS" : "FAIL") << " [" << id << "] " << title << ": " << detail << " ("
                  << format_seconds(seconds) << ")" << std::endl;
        failures_ += ok ? 0 : 1;
        started_ = Clock::now();
    }

    static void info(const std::string& text) { std::cout << "INFO " << text << std::endl; }

    int failures() const { return failures_; }

private:
    using Clock = std::chrono::steady_clock;

    static std::string format_seconds(double s)
    {
        std::ostringstream out;
        out.precision(3);
        out << s << " s";
        return out.str();
    }

    Clock::time_point started_ = Clock::now();
    int failures_ = 0;
};

std::string num(double x) { return format_number(x); }

double max_spectrum_deviation(const ModelSpec& model)
{
    const auto numeric = eigvalsh(build_hamiltonian(model));
    const auto analytic = analytic_spectrum(model);
    double worst = 0.0;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        worst = std::max(worst, std::abs(numeric[i] - analytic[i]));
    }
    return worst;
}

void spectrum_agreement(Gate& gate)
{
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> coupling(-10.0, 10.0);
    double worst_spin = 0.0;
    double worst_magnetic = 0.0;
    for (int draw = 0; draw < 200; ++draw) {
        worst_spin = std::max(worst_spin, max_spectrum_deviation(SpinImpurityParams{coupling(rng), coupling(rng)}));
        worst_magnetic =
            std::max(worst_magnetic, max_spectrum_deviation(MagneticImpurityParams{coupling(rng), coupling(rng)}));
    }
    const bool ok = worst_spin <= 1e-9 && worst_magnetic <= 1e-9;
    gate.record(1, "spectrum agreement", ok,
                "200 draws per model, max |numeric - closed form| spin " + num(worst_spin) + ", magnetic " +
                    num(worst_magnetic) + " (tol 1e-9)");
}

void ground_plateaus(Gate& gate)
{
    struct Case {
        double j;
        double j1;
        Bipartition bip;
        double expected;
    };
    const Case cases[] = {
        {1.0, -3.0, Bipartition::pair_12, 1.0 / 3.0},
        {1.0, 0.0, Bipartition::pair_12, 0.0},
        {1.0, 2.0, Bipartition::pair_12, 0.4425},
        {1.0, 0.0, Bipartition::pair_23, 1.0},
        {1.0, 2.0, Bipartition::pair_23, 1.0 / 3.0},
        {1.0, 2.0, Bipartition::one_vs_rest_1_23, 0.9183},
        {1.0, -3.0, Bipartition::one_vs_rest_1_23, 0.4591},
        {1.0, 0.0, Bipartition::one_vs_rest_1_23, 0.0},
        {-1.0, 1.0, Bipartition::pair_12, 0.4425},
        {-1.0, 1.0, Bipartition::one_vs_rest_1_23, 0.9183},
        {-1.0, -1.0, Bipartition::pair_12, 1.0 / 3.0},
        {-1.0, -1.0, Bipartition::one_vs_rest_1_23, 0.4591},
    };
    double worst = 0.0;
    std::string worst_case;
    for (const auto& c : cases) {
        const double d = zero_temperature_discord(SpinImpurityParams{c.j1, c.j}, c.bip);
        const double err = std::abs(d - c.expected);
        if (err >= worst) {
            worst = err;
            worst_case = std::string(to_string(c.bip)) + " at J=" + num(c.j) + ", J1=" + num(c.j1) + " gives " + num(d);
        }
    }
    gate.record(2, "ground-state plateaus", worst <= 1e-3,
                "12 values, max error " + num(worst) + " [" + worst_case + "] (tol 1e-3)");
}

void finite_temperature_asymptotes(Gate& gate)
{
    double worst = 0.0;
    for (double j : {1.0, -1.0}) {
        for (double t : {0.5, 1.5}) {
            for (double j1 : {1e4, -1e4}) {
                const auto rho = thermal_state(SpinImpurityParams{j1, j}, Temperature(t));
                const double d12 = discord(rho, Bipartition::pair_12).discord;
                const double d23 = discord(rho, Bipartition::pair_23).discord;
                worst = std::max(worst, std::abs(d12 - (j1 > 0 ? 0.4425 : 1.0 / 3.0)));
                worst = std::max(worst, std::abs(d23 - 1.0 / 3.0));
            }
        }
    }
    gate.record(3, "finite-T asymptotes at J1 = +-1e4", worst <= 1e-3,
                "J in {1, -1}, T in {0.5, 1.5}, max error " + num(worst) + " (tol 1e-3)");
}

void critical_lines(Gate& gate)
{
    struct Expected {
        double j;
        Bipartition bip;
        Branch branch;
        double slope;
        double intercept;
    };
    const Expected cases[] = {
        {1.0, Bipartition::pair_12, Branch::j1_positive, 3.401, 1.001},
        {1.0, Bipartition::pair_12, Branch::j1_negative, -7.450, -2.001},
        {-1.0, Bipartition::pair_12, Branch::j1_positive, 3.401, -0.9846},
        {-1.0, Bipartition::pair_12, Branch::j1_negative, -7.45, 1.999},
        {1.0, Bipartition::pair_23, Branch::j1_positive, 4.245, 1.001},
        {1.0, Bipartition::pair_23, Branch::j1_negative, -8.144, -2.001},
        {-1.0, Bipartition::pair_23, Branch::j1_positive, 4.245, -0.9992},
        {-1.0, Bipartition::pair_23, Branch::j1_negative, -8.144, 1.999},
    };
    const auto temps = default_fit_temperatures();
    bool ok = true;
    double worst_slope = 0.0;
    double worst_intercept = 0.0;
    for (const auto& c : cases) {
        CriticalSearchOptions options;
        options.bipartition = c.bip;
        const auto fit = fit_critical_line(c.j, c.branch, temps, options);
        const double slope_rel = std::abs(fit.slope - c.slope) / std::abs(c.slope);
        const double intercept_abs = std::abs(fit.intercept - c.intercept);
        const bool case_ok = slope_rel <= 0.02 && intercept_abs <= 0.05;
        ok = ok && case_ok;
        worst_slope = std::max(worst_slope, slope_rel);
        worst_intercept = std::max(worst_intercept, intercept_abs);
        Gate::info("critical line J=" + num(c.j) + " " + std::string(to_string(c.bip)) + " " +
                   std::string(to_string(c.branch)) + ": " + num(fit.slope) + " T + " + num(fit.intercept) +
                   " (expected " + num(c.slope) + " T + " + num(c.intercept) + ", rms " + num(fit.rms_residual) +
                   (fit.gap_monotone ? "" : ", gap not monotone") + ")" + (case_ok ? "" : " OUT OF TOLERANCE"));
    }
    gate.record(4, "critical-coupling lines", ok,
                "8 fits over 19 temperatures in [1, 10], plateau gap reference, worst slope error " +
                    num(100.0 * worst_slope) + "% (tol 2%), worst intercept error " + num(worst_intercept) +
                    " (tol 0.05)");
}

void magnetic_asymptote(Gate& gate)
{
    const auto rows = run_sweep(cli::figure_spec(4, 0));
    std::vector<double> b;
    std::vector<double> d12;
    std::vector<double> d23;
    for (const auto& row : rows) {
        if (row.bipartition == Bipartition::pair_12) {
            b.push_back(row.parameter);
            d12.push_back(row.result.discord);
        } else {
            d23.push_back(row.result.discord);
        }
    }
    double worst_drop = 0.0;
    for (std::size_t i = 1; i < b.size(); ++i) {
        if (b[i - 1] >= 5.0) {
            worst_drop = std::max(worst_drop, d23[i - 1] - d23[i]);
        }
    }
    const bool monotone = worst_drop <= 1e-9;
    const bool high = d23.back() > 0.95;
    const bool falls = d12.back() < d12.front();
    gate.record(5, "magnetic-impurity asymptote", monotone && high && falls,
                "J=1, T=0.25, 401 points on B in [0, 20]: largest D23 decrease for B >= 5 " + num(worst_drop) +
                    " (slack 1e-9), D23(20) = " + num(d23.back()) + " (> 0.95), D12(0) = " + num(d12.front()) +
                    ", D12(20) = " + num(d12.back()));
}

void xstate_equivalence(Gate& gate)
{
    std::mt19937_64 rng(8675309);
    double worst_random = 0.0;
    for (int k = 0; k < 500; ++k) {
        const auto rho = random_symmetric_x_state(rng);
        worst_random = std::max(worst_random, std::abs(xstate_discord(rho).discord -
                                                       discord(rho, DiscordPolicy::force_numeric).discord));
    }

    double worst_thermal = 0.0;
    std::size_t thermal_cases = 0;
    for (double j : {1.0, -1.0}) {
        for (double j1 : linspace(-12.0, 8.0, 10)) {
            for (double t : linspace(0.1, 3.0, 10)) {
                const auto rho3 = thermal_state(SpinImpurityParams{j1, j}, Temperature(t));
                for (auto bip : {Bipartition::pair_12, Bipartition::pair_23, Bipartition::pair_13}) {
                    const auto ab = bipartite_state(rho3, bip);
                    worst_thermal = std::max(worst_thermal, std::abs(xstate_discord(ab).discord -
                                                                     discord(ab, DiscordPolicy::force_numeric).discord));
                    ++thermal_cases;
                }
            }
        }
    }
    const bool ok = worst_random <= 1e-6 && worst_thermal <= 1e-6;
    gate.record(6, "X-state closed form vs numerical optimiser", ok,
                "500 random X states max |diff| " + num(worst_random) + "; " + std::to_string(thermal_cases) +
                    " thermal pair states on a 10x10 (J1, T) grid max |diff| " + num(worst_thermal) + " (tol 1e-6)");
}

void property_suite(Gate& gate)
{
    // Range, ordering and pair symmetry over the J1 sweeps used for the pair-12 and 1|23 plots.
    double lowest = 0.0;
    double highest = 0.0;
    double worst_order = 0.0;
    double worst_symmetry = 0.0;
    std::size_t states = 0;
    for (char panel : {'a', 'b'}) {
        auto spec = cli::figure_spec(1, panel);
        spec.bipartitions = {Bipartition::pair_12, Bipartition::pair_13, Bipartition::one_vs_rest_1_23};
        const auto rows = run_sweep(spec);
        for (std::size_t i = 0; i + 2 < rows.size(); i += 3) {
            const double d12 = rows[i].result.discord;
            const double d13 = rows[i + 1].result.discord;
            const double d123 = rows[i + 2].result.discord;
            for (double d : {d12, d13, d123}) {
                lowest = std::min(lowest, d);
                highest = std::max(highest, d);
            }
            worst_order = std::max(worst_order, d12 - d123);
            worst_symmetry = std::max(worst_symmetry, std::abs(d12 - d13));
            ++states;
        }
    }
    const bool range_ok = lowest >= -1e-9 && highest <= 1.0 + 1e-9;
    const bool order_ok = worst_order <= 1e-6;
    const bool symmetry_ok = worst_symmetry <= 1e-9;

    // Local-unitary invariance: 50 dense random states and 50 thermal pair states.
    std::mt19937_64 rng(424242);
    std::uniform_real_distribution<double> coupling(-6.0, 6.0);
    std::uniform_real_distribution<double> temperature(0.1, 3.0);
    double worst_unitary = 0.0;
    for (int k = 0; k < 100; ++k) {
        DensityMatrix rho = k < 50 ? DensityMatrix(random_density(rng, 4), {2, 2})
                                   : bipartite_state(thermal_state(SpinImpurityParams{coupling(rng), coupling(rng)},
                                                                   Temperature(temperature(rng))),
                                                     Bipartition::pair_12);
        const auto u = kron(random_qubit_unitary(rng), random_qubit_unitary(rng));
        const DensityMatrix turned(u * rho.matrix() * u.adjoint(), {2, 2});
        worst_unitary = std::max(worst_unitary, std::abs(discord(rho).discord - discord(turned).discord));
    }
    const bool unitary_ok = worst_unitary <= 1e-6;

    // Gibbs states of random models.
    double worst_trace = 0.0;
    double lowest_eigen = 0.0;
    double worst_commutator = 0.0;
    for (int k = 0; k < 100; ++k) {
        const ModelSpec model = k % 2 == 0 ? ModelSpec{SpinImpurityParams{coupling(rng), coupling(rng)}}
                                           : ModelSpec{MagneticImpurityParams{coupling(rng), coupling(rng)}};
        const auto h = build_hamiltonian(model);
        const double t = k % 10 == 0 ? 0.0 : temperature(rng);
        const auto rho = gibbs_state(h, Temperature(t)).matrix();
        worst_trace = std::max(worst_trace, std::abs(rho.trace() - 1.0));
        lowest_eigen = std::min(lowest_eigen, eigvalsh(rho, 1e-10).front());
        worst_commutator = std::max(worst_commutator, max_abs_diff(rho * h, h * rho));
    }
    const bool gibbs_ok = worst_trace <= 1e-10 && lowest_eigen >= -1e-10 && worst_commutator <= 1e-9;

    std::ostringstream detail;
    detail << states << " sweep states: D range [" << num(lowest) << ", " << num(highest)
           << "] (within [-1e-9, 1+1e-9]: " << (range_ok ? "yes" : "no") << "), max D12 - D1|23 " << num(worst_order)
           << " (tol 1e-6), max |D12 - D13| " << num(worst_symmetry) << " (tol 1e-9); 100 local-unitary cases max |dD| "
           << num(worst_unitary) << " (tol 1e-6); 100 Gibbs states: max |tr - 1| " << num(worst_trace)
           << ", min eigenvalue " << num(lowest_eigen) << ", max |[rho, H]| " << num(worst_commutator);
    gate.record(7, "property suite", range_ok && order_ok && symmetry_ok && unitary_ok && gibbs_ok, detail.str());
}

void reentrance(Gate& gate)
{
    const SpinImpurityParams decoupled{0.0, 1.0};
    const double cold = zero_temperature_discord(decoupled, Bipartition::pair_12);
    const double warm = discord(thermal_state(decoupled, Temperature(1.0)), Bipartition::pair_12).discord;
    gate.record(8, "temperature-enhanced pair-12 discord at J=1, J1=0", warm - cold >= 1e-3,
                "D12(T=1) - D12(T=0) = " + num(warm) + " - " + num(cold) + " = " + num(warm - cold) +
                    " (need >= 1e-3); at J1=0 spin 1 is decoupled, so rho12 = I/4 at every T");

    for (double j1 : {0.5, -1.0}) {
        const SpinImpurityParams p{j1, 1.0};
        const double c = zero_temperature_discord(p, Bipartition::pair_12);
        const double w = discord(thermal_state(p, Temperature(1.0)), Bipartition::pair_12).discord;
        Gate::info("same check inside the window at J1=" + num(j1) + ": D12(T=1) - D12(T=0) = " + num(w - c));
    }
}

} // namespace

int main()
{
    Gate gate;
    spectrum_agreement(gate);
    ground_plateaus(gate);
    finite_temperature_asymptotes(gate);
    critical_lines(gate);
    magnetic_asymptote(gate);
    xstate_equivalence(gate);
    property_suite(gate);
    reentrance(gate);
    std::cout << (gate.failures() == 0 ? "ALL PASS" : std::to_string(gate.failures()) + " criterion(s) FAILED")
              << std::endl;
    return gate.failures() == 0 ? 0 : 1;
}

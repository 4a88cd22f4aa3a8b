#include "tqd/sweep.hpp"

#include "parallel.hpp"
#include "tqd/errors.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace tqd {

std::string_view to_string(ModelFamily family) { return family == ModelFamily::spin ? "spin" : "magnetic"; }

std::string_view to_string(SweptParameter parameter)
{
    switch (parameter) {
    case SweptParameter::j1:
        return "j1";
    case SweptParameter::j:
        return "j";
    case SweptParameter::b:
        return "b";
    }
    return "unknown";
}

std::string_view to_string(Branch branch) { return branch == Branch::j1_positive ? "j1_positive" : "j1_negative"; }

std::string_view to_string(GapReference reference)
{
    return reference == GapReference::plateau ? "plateau" : "local";
}

void validate(const SweepSpec& spec)
{
    const auto& r = spec.swept;
    if (r.points < 2) {
        throw std::invalid_argument("sweep: need at least 2 points");
    }
    if (!std::isfinite(r.from) || !std::isfinite(r.to)) {
        throw std::invalid_argument("sweep: range must be finite");
    }
    if (spec.family == ModelFamily::spin && r.parameter == SweptParameter::b) {
        throw std::invalid_argument("sweep: the spin-impurity model has no field b");
    }
    if (spec.family == ModelFamily::magnetic && r.parameter == SweptParameter::j1) {
        throw std::invalid_argument("sweep: the magnetic-impurity model has no coupling j1");
    }
    if (spec.temperatures.empty() || spec.bipartitions.empty()) {
        throw std::invalid_argument("sweep: need at least one temperature and one bipartition");
    }
    for (double t : spec.temperatures) {
        if (!(t >= 0.0)) {
            throw std::invalid_argument("sweep: temperatures must be non-negative");
        }
    }
    for (double v : {spec.j1, spec.j, spec.b}) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("sweep: fixed couplings must be finite");
        }
    }
}

ModelSpec model_at(const SweepSpec& spec, double value)
{
    double j1 = spec.j1;
    double j = spec.j;
    double b = spec.b;
    switch (spec.swept.parameter) {
    case SweptParameter::j1:
        j1 = value;
        break;
    case SweptParameter::j:
        j = value;
        break;
    case SweptParameter::b:
        b = value;
        break;
    }
    if (spec.family == ModelFamily::spin) {
        return SpinImpurityParams{j1, j};
    }
    return MagneticImpurityParams{j, b};
}

std::vector<double> linspace(double from, double to, std::size_t points)
{
    if (points < 2) {
        throw std::invalid_argument("linspace: need at least 2 points");
    }
    std::vector<double> out(points);
    const double step = (to - from) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) {
        out[i] = from + step * static_cast<double>(i);
    }
    out.back() = to;
    return out;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned workers)
{
    validate(spec);
    const auto values = linspace(spec.swept.from, spec.swept.to, spec.swept.points);
    const std::size_t per_value = spec.temperatures.size();
    const std::size_t per_temp = spec.bipartitions.size();

    std::vector<SweepRow> rows(values.size() * per_value * per_temp);
    // One task per (value, temperature): the thermal state is shared by its bipartitions.
    detail::parallel_for(values.size() * per_value, workers, [&](std::size_t task) {
        const std::size_t vi = task / per_value;
        const std::size_t ti = task % per_value;
        const auto model = model_at(spec, values[vi]);
        const double temp = spec.temperatures[ti];
        const auto rho = thermal_state(model, Temperature(temp));
        for (std::size_t bi = 0; bi < per_temp; ++bi) {
            auto& row = rows[task * per_temp + bi];
            row.model = model;
            row.parameter = values[vi];
            row.temperature = temp;
            row.bipartition = spec.bipartitions[bi];
            row.result = discord(rho, spec.bipartitions[bi]);
        }
    });
    return rows;
}

double zero_temperature_discord(const ModelSpec& model, Bipartition bip)
{
    return discord(thermal_state(model, Temperature(0.0)), bip).discord;
}

double branch_seed(double j, Branch branch)
{
    return branch == Branch::j1_positive ? std::max(j, 0.0) + 1.0 : std::min(-2.0 * j, 0.0) - 1.0;
}

CriticalCoupling find_critical_coupling(double j, Temperature t, Branch branch, const CriticalSearchOptions& options)
{
    if (t.is_zero()) {
        throw std::invalid_argument("find_critical_coupling: temperature must be positive");
    }
    const double seed = branch_seed(j, branch);
    const double direction = branch == Branch::j1_positive ? 1.0 : -1.0;
    const Bipartition bip = options.bipartition;

    CriticalCoupling out;
    out.plateau = zero_temperature_discord(SpinImpurityParams{seed, j}, bip);

    auto gap = [&](double j1) {
        const SpinImpurityParams p{j1, j};
        const double reference =
            options.reference == GapReference::plateau ? out.plateau : zero_temperature_discord(p, bip);
        return std::abs(reference - discord(thermal_state(p, t), bip).discord);
    };

    double inside = seed; // gap >= threshold here
    double previous_gap = gap(seed);
    if (previous_gap < options.threshold) {
        out.j1c = seed;
        return out;
    }

    double outside = seed;
    for (double step = 1.0;; step *= 2.0) {
        const double j1 = seed + direction * step;
        if (std::abs(j1) > options.limit) {
            std::ostringstream msg;
            msg << "critical coupling: gap stays above " << options.threshold << " up to |J1| = " << options.limit
                << " (J = " << j << ", T = " << t.value() << ", " << to_string(bip) << ")";
            throw NoConvergence(msg.str());
        }
        const double g = gap(j1);
        if (g > previous_gap + 1e-12) {
            out.gap_monotone = false;
        }
        previous_gap = g;
        if (g < options.threshold) {
            outside = j1;
            break;
        }
        inside = j1;
    }

    while (std::abs(outside - inside) > options.precision) {
        const double mid = 0.5 * (inside + outside);
        if (gap(mid) < options.threshold) {
            outside = mid;
        } else {
            inside = mid;
        }
    }
    out.j1c = 0.5 * (inside + outside);
    return out;
}

LineFit fit_line(std::span<const double> xs, std::span<const double> ys)
{
    if (xs.size() != ys.size() || xs.size() < 2) {
        throw std::invalid_argument("fit_line: need at least two (x, y) pairs");
    }
    const double n = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0) {
        throw std::invalid_argument("fit_line: x values are all equal");
    }
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (fit.slope * xs[i] + fit.intercept);
        ss += r * r;
    }
    fit.rms_residual = std::sqrt(ss / n);
    return fit;
}

std::vector<double> default_fit_temperatures() { return linspace(1.0, 10.0, 19); }

CriticalFit fit_critical_line(double j, Branch branch, std::span<const double> temperatures,
                              const CriticalSearchOptions& options, unsigned workers)
{
    if (temperatures.size() < 2) {
        throw std::invalid_argument("fit_critical_line: need at least two temperatures");
    }
    for (double t : temperatures) {
        if (!(t > 0.0) || !std::isfinite(t)) {
            throw std::invalid_argument("fit_critical_line: temperatures must be positive and finite");
        }
    }
    CriticalFit out;
    out.branch = branch;
    out.sample_temperatures.assign(temperatures.begin(), temperatures.end());
    out.critical_couplings.resize(temperatures.size());
    std::vector<char> monotone(temperatures.size(), 1);
    detail::parallel_for(temperatures.size(), workers, [&](std::size_t i) {
        const auto c = find_critical_coupling(j, Temperature(temperatures[i]), branch, options);
        out.critical_couplings[i] = c.j1c;
        monotone[i] = c.gap_monotone ? 1 : 0;
    });
    for (char m : monotone) {
        out.gap_monotone = out.gap_monotone && m != 0;
    }
    const auto line = fit_line(out.sample_temperatures, out.critical_couplings);
    out.slope = line.slope;
    out.intercept = line.intercept;
    out.rms_residual = line.rms_residual;
    return out;
}

} // namespace tqd

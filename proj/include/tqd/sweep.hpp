#pragma once

#include "tqd/discord.hpp"
#include "tqd/spinmodel.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace tqd {

enum class ModelFamily { spin, magnetic };
enum class SweptParameter { j1, j, b };

std::string_view to_string(ModelFamily family);
std::string_view to_string(SweptParameter parameter);

struct SweepRange {
    SweptParameter parameter = SweptParameter::j1;
    double from = 0.0;
    double to = 0.0;
    std::size_t points = 2;
};

/// One figure's worth of work. The fixed couplings not applicable to the
/// family are ignored, as is the fixed value of the swept parameter.
struct SweepSpec {
    ModelFamily family = ModelFamily::spin;
    SweepRange swept;
    double j1 = 0.0;
    double j = 0.0;
    double b = 0.0;
    std::vector<double> temperatures;
    std::vector<Bipartition> bipartitions;
};

/// Throws std::invalid_argument on an inconsistent spec.
void validate(const SweepSpec& spec);

/// Model at a given value of the swept parameter.
ModelSpec model_at(const SweepSpec& spec, double value);

struct SweepRow {
    ModelSpec model;
    double parameter = 0.0;
    double temperature = 0.0;
    Bipartition bipartition = Bipartition::pair_12;
    DiscordResult result;
};

/// Evenly spaced, both ends included.
std::vector<double> linspace(double from, double to, std::size_t points);

/// Rows ordered parameter-major, then temperature, then bipartition,
/// independent of `workers` (0 = hardware concurrency).
std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned workers = 0);

/// Discord of the equal-weight ground-space mixture.
double zero_temperature_discord(const ModelSpec& model, Bipartition bip);

enum class Branch { j1_positive, j1_negative };
enum class GapReference {
    plateau, ///< T = 0 discord of the branch regime (evaluated at the seed)
    local,   ///< T = 0 discord at the same J1
};

std::string_view to_string(Branch branch);
std::string_view to_string(GapReference reference);

/// First J1 inside the branch regime: max(J,0)+1 or min(-2J,0)-1.
double branch_seed(double j, Branch branch);

struct CriticalSearchOptions {
    Bipartition bipartition = Bipartition::pair_12;
    double threshold = 1e-6;
    GapReference reference = GapReference::plateau;
    double precision = 1e-4;
    double limit = 1e6;
};

struct CriticalCoupling {
    double j1c = 0.0;
    double plateau = 0.0;
    /// False when a later outward sample had a larger gap than an earlier one.
    bool gap_monotone = true;
};

/// Critical J1 for the spin-impurity ring: past it on the given branch the
/// gap |D(T=0) - D(T)| stays below the threshold. Outward doubling from the
/// branch seed, then bisection. Throws NoConvergence beyond options.limit.
CriticalCoupling find_critical_coupling(double j, Temperature t, Branch branch,
                                        const CriticalSearchOptions& options = {});

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms_residual = 0.0;
};

/// Ordinary least squares y = slope*x + intercept.
LineFit fit_line(std::span<const double> xs, std::span<const double> ys);

struct CriticalFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms_residual = 0.0;
    Branch branch = Branch::j1_positive;
    std::vector<double> sample_temperatures;
    std::vector<double> critical_couplings;
    bool gap_monotone = true;
};

/// Default temperature sample: 19 points on [1, 10].
std::vector<double> default_fit_temperatures();

CriticalFit fit_critical_line(double j, Branch branch, std::span<const double> temperatures,
                              const CriticalSearchOptions& options = {}, unsigned workers = 0);

} // namespace tqd

#pragma once

#include "tqd/spinmodel.hpp"

#include <optional>
#include <span>
#include <string_view>

namespace tqd {

/// Which pair of the 3-qubit ring is examined; the measured party A is
/// always a single qubit and is listed first.
enum class Bipartition {
    pair_12,          ///< A = qubit 1, B = qubit 2 (qubit 3 traced out)
    pair_23,          ///< A = qubit 2, B = qubit 3 (qubit 1 traced out)
    pair_13,          ///< A = qubit 1, B = qubit 3 (qubit 2 traced out)
    one_vs_rest_1_23, ///< A = qubit 1, B = qubits 2 and 3
};

std::string_view to_string(Bipartition bip);
/// Parses the names produced by to_string; nullopt otherwise.
std::optional<Bipartition> parse_bipartition(std::string_view name);

/// Projective measurement on A along cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.
struct MeasurementAngles {
    double theta = 0.0;
    double phi = 0.0;
};

enum class DiscordMethod { xstate_analytic, grid_refined };

std::string_view to_string(DiscordMethod method);

/// All quantities in bits.
struct DiscordResult {
    double discord = 0.0;
    double classical_correlation = 0.0;
    double mutual_information = 0.0;
    MeasurementAngles minimizer;
    DiscordMethod method = DiscordMethod::grid_refined;
};

/// Reduced state over `keep` (indices into rho.dims(), any order), kept
/// subsystems in their original order.
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep);

/// The A|B state for a bipartition of a 3-qubit state: dims {2, 2} or {2, 4}.
DensityMatrix bipartite_state(const DensityMatrix& rho3, Bipartition bip);

/// Exchanges the two parties of an A|B state.
DensityMatrix swap_parties(const DensityMatrix& rho_ab);

/// Von Neumann entropy in bits; eigenvalues below 1e-14 contribute nothing.
double entropy(const DensityMatrix& rho);
double entropy_of(const ComplexMatrix& rho);

/// Shannon entropy of (p, 1 - p) in bits.
double binary_entropy(double p);

// The functions below take an A|B state (two subsystems, A a qubit) or a
// 3-qubit state plus a Bipartition selecting the A|B split.

double mutual_information(const DensityMatrix& rho_ab);
double mutual_information(const DensityMatrix& rho3, Bipartition bip);

/// Sum_k p_k S(rho_{B|k}) for the two-outcome projective measurement on A.
double conditional_entropy_measured(const DensityMatrix& rho_ab, MeasurementAngles angles);
double conditional_entropy_measured(const DensityMatrix& rho3, Bipartition bip, MeasurementAngles angles);

struct ConditionalEntropyMinimum {
    double value = 0.0;
    MeasurementAngles angles;
};

/// 64x64 grid over theta in [0, pi], phi in [0, 2pi), then alternating
/// golden-section refinement of each angle from the best grid point.
ConditionalEntropyMinimum minimize_conditional_entropy(const DensityMatrix& rho_ab);

struct ClassicalCorrelation {
    double value = 0.0;
    MeasurementAngles angles;
};

ClassicalCorrelation classical_correlation(const DensityMatrix& rho_ab);
ClassicalCorrelation classical_correlation(const DensityMatrix& rho3, Bipartition bip);

/// True when rho_ab is a two-qubit X state with rho22 == rho33, the domain
/// of xstate_discord.
bool xstate_applicable(const DensityMatrix& rho_ab);

/// Closed-form discord of a two-qubit X state with rho22 == rho33.
/// Throws NotXState / ConditionViolated outside that domain.
DiscordResult xstate_discord(const DensityMatrix& rho_ab);

enum class DiscordPolicy {
    automatic,      ///< closed form when applicable, numerical otherwise
    force_numeric,  ///< always grid_refined
};

DiscordResult discord(const DensityMatrix& rho_ab, DiscordPolicy policy = DiscordPolicy::automatic);
DiscordResult discord(const DensityMatrix& rho3, Bipartition bip, DiscordPolicy policy = DiscordPolicy::automatic);

} // namespace tqd

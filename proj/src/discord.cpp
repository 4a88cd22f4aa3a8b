#include "tqd/discord.hpp"

#include "tqd/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

namespace tqd {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kZeroEigenvalue = 1e-14;
constexpr double kClipWindow = 1e-10;
constexpr double kNegligibleOutcome = 1e-14;

constexpr std::size_t kThetaPoints = 64;
constexpr std::size_t kPhiPoints = 64;
constexpr int kMaxRefineSteps = 200;
constexpr double kRefineImprovement = 1e-12;
constexpr double kGoldenTol = 1e-10;

constexpr double kXShapeTol = 1e-12;
constexpr double kPopulationTol = 1e-10;

double entropy_from_eigenvalues(std::span<const double> values, double norm)
{
    double s = 0.0;
    for (double v : values) {
        if (v < 0.0 && v >= -kClipWindow) {
            v = 0.0;
        }
        const double p = v / norm;
        if (p > kZeroEigenvalue) {
            s -= p * std::log2(p);
        }
    }
    return s;
}

// Eigenvalues of a Hermitian matrix held row-major in `entries` (clobbered);
// closed form for 2x2, Jacobi otherwise.
std::span<const double> hermitian_eigenvalues(std::span<Complex> entries, std::size_t dim,
                                              std::array<double, 16>& out)
{
    if (dim == 2) {
        const double a = entries[0].real();
        const double d = entries[3].real();
        const double mean = 0.5 * (a + d);
        const double radius = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(entries[1]));
        out[0] = mean - radius;
        out[1] = mean + radius;
        return {out.data(), 2};
    }
    std::span<double> values(out.data(), dim);
    eigvalsh_inplace(entries, dim, values);
    return values;
}

// p * S(rho/p) for an unnormalised block with trace p.
double weighted_entropy(std::span<Complex> unnormalised, std::size_t dim)
{
    double p = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        p += unnormalised[i * dim + i].real();
    }
    if (p < kNegligibleOutcome) {
        return 0.0;
    }
    std::array<double, 16> scratch{};
    return p * entropy_from_eigenvalues(hermitian_eigenvalues(unnormalised, dim, scratch), p);
}

void require_bipartite(const DensityMatrix& rho_ab, const char* where)
{
    if (rho_ab.dims().size() != 2 || rho_ab.dims()[0] != 2) {
        std::ostringstream msg;
        msg << where << ": expected an A|B state with a qubit A";
        throw InvalidSubsystem(msg.str());
    }
}

void require_three_qubits(const DensityMatrix& rho3)
{
    const auto& dims = rho3.dims();
    if (dims.size() != 3 || dims[0] != 2 || dims[1] != 2 || dims[2] != 2) {
        throw InvalidSubsystem("bipartition requires a 3-qubit state");
    }
}

// The four dB x dB blocks M_{aa'}[b][b'] = rho[(a,b),(a',b')].
class ConditionalEntropyObjective {
public:
    explicit ConditionalEntropyObjective(const DensityMatrix& rho_ab) : db_(rho_ab.dims()[1])
    {
        if (db_ > 4) {
            throw InvalidSubsystem("measured conditional entropy supports a B party of dimension at most 4");
        }
        const auto& m = rho_ab.matrix();
        for (std::size_t a = 0; a < 2; ++a) {
            for (std::size_t ap = 0; ap < 2; ++ap) {
                ComplexMatrix block(db_);
                for (std::size_t b = 0; b < db_; ++b) {
                    for (std::size_t bp = 0; bp < db_; ++bp) {
                        block(b, bp) = m(a * db_ + b, ap * db_ + bp);
                    }
                }
                blocks_[a * 2 + ap] = std::move(block);
            }
        }
        rho_b_ = blocks_[0] + blocks_[3];
    }

    double operator()(double theta, double phi) const
    {
        const double c = std::cos(0.5 * theta);
        const double s = std::sin(0.5 * theta);
        const Complex k1 = std::polar(s, phi);
        // Tr_A[(|k><k| x I) rho] = sum_{a,c} k_a conj(k_c) M_{ca}
        const Complex w01 = c * std::conj(k1); // a = 0, c = 1
        std::array<Complex, 16> first{};
        std::array<Complex, 16> second{};
        for (std::size_t i = 0; i < db_; ++i) {
            for (std::size_t j = 0; j < db_; ++j) {
                const Complex v = c * c * blocks_[0](i, j) + s * s * blocks_[3](i, j) +
                                  w01 * blocks_[2](i, j) + std::conj(w01) * blocks_[1](i, j);
                first[i * db_ + j] = v;
                second[i * db_ + j] = rho_b_(i, j) - v;
            }
        }
        const std::size_t n = db_ * db_;
        return weighted_entropy({first.data(), n}, db_) + weighted_entropy({second.data(), n}, db_);
    }

private:
    std::size_t db_;
    std::array<ComplexMatrix, 4> blocks_;
    ComplexMatrix rho_b_;
};

struct LineMinimum {
    double x;
    double value;
};

template <typename F>
LineMinimum golden_section(F&& f, double lo, double hi)
{
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    while (hi - lo > kGoldenTol) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    return f1 <= f2 ? LineMinimum{x1, f1} : LineMinimum{x2, f2};
}

double wrap_phi(double phi)
{
    phi = std::fmod(phi, 2.0 * kPi);
    if (phi < 0.0) {
        phi += 2.0 * kPi;
    }
    return phi >= 2.0 * kPi ? 0.0 : phi;
}

} // namespace

std::string_view to_string(Bipartition bip)
{
    switch (bip) {
    case Bipartition::pair_12:
        return "pair_12";
    case Bipartition::pair_23:
        return "pair_23";
    case Bipartition::pair_13:
        return "pair_13";
    case Bipartition::one_vs_rest_1_23:
        return "one_vs_rest_1_23";
    }
    return "unknown";
}

std::optional<Bipartition> parse_bipartition(std::string_view name)
{
    for (auto bip : {Bipartition::pair_12, Bipartition::pair_23, Bipartition::pair_13,
                     Bipartition::one_vs_rest_1_23}) {
        if (name == to_string(bip)) {
            return bip;
        }
    }
    return std::nullopt;
}

std::string_view to_string(DiscordMethod method)
{
    return method == DiscordMethod::xstate_analytic ? "xstate_analytic" : "grid_refined";
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep)
{
    const auto& dims = rho.dims();
    const std::size_t n = dims.size();
    if (keep.empty()) {
        throw InvalidSubsystem("partial_trace: nothing to keep");
    }
    std::vector<bool> kept(n, false);
    for (auto k : keep) {
        if (k >= n || kept[k]) {
            throw InvalidSubsystem("partial_trace: subsystem index out of range or repeated");
        }
        kept[k] = true;
    }

    std::vector<std::size_t> out_dims;
    std::size_t out_dim = 1;
    for (std::size_t k = 0; k < n; ++k) {
        if (kept[k]) {
            out_dims.push_back(dims[k]);
            out_dim *= dims[k];
        }
    }

    // Split a full index into (kept index, traced index).
    const std::size_t full = rho.dim();
    std::vector<std::size_t> kept_index(full);
    std::vector<std::size_t> traced_index(full);
    for (std::size_t idx = 0; idx < full; ++idx) {
        std::size_t rest = idx;
        std::size_t ki = 0;
        std::size_t kstride = 1;
        std::size_t ti = 0;
        std::size_t tstride = 1;
        for (std::size_t k = n; k-- > 0;) {
            const std::size_t digit = rest % dims[k];
            rest /= dims[k];
            if (kept[k]) {
                ki += digit * kstride;
                kstride *= dims[k];
            } else {
                ti += digit * tstride;
                tstride *= dims[k];
            }
        }
        kept_index[idx] = ki;
        traced_index[idx] = ti;
    }

    ComplexMatrix out(out_dim);
    const auto& m = rho.matrix();
    for (std::size_t i = 0; i < full; ++i) {
        for (std::size_t j = 0; j < full; ++j) {
            if (traced_index[i] == traced_index[j]) {
                out(kept_index[i], kept_index[j]) += m(i, j);
            }
        }
    }
    return DensityMatrix(std::move(out), std::move(out_dims));
}

DensityMatrix bipartite_state(const DensityMatrix& rho3, Bipartition bip)
{
    require_three_qubits(rho3);
    switch (bip) {
    case Bipartition::pair_12: {
        const std::array<std::size_t, 2> keep{0, 1};
        return partial_trace(rho3, keep);
    }
    case Bipartition::pair_23: {
        const std::array<std::size_t, 2> keep{1, 2};
        return partial_trace(rho3, keep);
    }
    case Bipartition::pair_13: {
        const std::array<std::size_t, 2> keep{0, 2};
        return partial_trace(rho3, keep);
    }
    case Bipartition::one_vs_rest_1_23:
        return DensityMatrix(rho3.matrix(), {2, 4});
    }
    throw InvalidSubsystem("unknown bipartition");
}

DensityMatrix swap_parties(const DensityMatrix& rho_ab)
{
    if (rho_ab.dims().size() != 2) {
        throw InvalidSubsystem("swap_parties: expected a two-party state");
    }
    const std::size_t da = rho_ab.dims()[0];
    const std::size_t db = rho_ab.dims()[1];
    const auto& m = rho_ab.matrix();
    ComplexMatrix out(m.dim());
    for (std::size_t a = 0; a < da; ++a) {
        for (std::size_t b = 0; b < db; ++b) {
            for (std::size_t ap = 0; ap < da; ++ap) {
                for (std::size_t bp = 0; bp < db; ++bp) {
                    out(b * da + a, bp * da + ap) = m(a * db + b, ap * db + bp);
                }
            }
        }
    }
    return DensityMatrix(std::move(out), {db, da});
}

double entropy_of(const ComplexMatrix& rho)
{
    if (rho.hermiticity_error() > DensityMatrix::kTolerance) {
        throw NotHermitian("entropy: matrix is not Hermitian");
    }
    std::vector<Complex> entries(rho.entries().begin(), rho.entries().end());
    std::vector<double> values(rho.dim());
    eigvalsh_inplace(entries, rho.dim(), values);
    return entropy_from_eigenvalues(values, 1.0);
}

double entropy(const DensityMatrix& rho) { return entropy_of(rho.matrix()); }

double binary_entropy(double p)
{
    if (p <= 0.0 || p >= 1.0) {
        return 0.0;
    }
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double mutual_information(const DensityMatrix& rho_ab)
{
    if (rho_ab.dims().size() != 2) {
        throw InvalidSubsystem("mutual_information: expected a two-party state");
    }
    const std::array<std::size_t, 1> a{0};
    const std::array<std::size_t, 1> b{1};
    return entropy(partial_trace(rho_ab, a)) + entropy(partial_trace(rho_ab, b)) - entropy(rho_ab);
}

double mutual_information(const DensityMatrix& rho3, Bipartition bip)
{
    return mutual_information(bipartite_state(rho3, bip));
}

double conditional_entropy_measured(const DensityMatrix& rho_ab, MeasurementAngles angles)
{
    require_bipartite(rho_ab, "conditional_entropy_measured");
    return ConditionalEntropyObjective(rho_ab)(angles.theta, angles.phi);
}

double conditional_entropy_measured(const DensityMatrix& rho3, Bipartition bip, MeasurementAngles angles)
{
    return conditional_entropy_measured(bipartite_state(rho3, bip), angles);
}

ConditionalEntropyMinimum minimize_conditional_entropy(const DensityMatrix& rho_ab)
{
    require_bipartite(rho_ab, "minimize_conditional_entropy");
    const ConditionalEntropyObjective objective(rho_ab);

    const double dtheta = kPi / static_cast<double>(kThetaPoints - 1);
    const double dphi = 2.0 * kPi / static_cast<double>(kPhiPoints);

    // Strict < keeps the first (smallest theta, then smallest phi) among ties.
    ConditionalEntropyMinimum best{objective(0.0, 0.0), {0.0, 0.0}};
    for (std::size_t i = 0; i < kThetaPoints; ++i) {
        const double theta = static_cast<double>(i) * dtheta;
        for (std::size_t j = 0; j < kPhiPoints; ++j) {
            const double phi = static_cast<double>(j) * dphi;
            const double v = objective(theta, phi);
            if (v < best.value) {
                best = {v, {theta, phi}};
            }
        }
    }

    double theta = best.angles.theta;
    double phi = best.angles.phi;
    double value = best.value;
    for (int step = 0; step < kMaxRefineSteps; ++step) {
        const double before = value;

        const auto along_theta = golden_section([&](double t) { return objective(t, phi); },
                                                std::max(0.0, theta - dtheta), std::min(kPi, theta + dtheta));
        if (along_theta.value < value) {
            theta = along_theta.x;
            value = along_theta.value;
        }
        const auto along_phi =
            golden_section([&](double p) { return objective(theta, p); }, phi - dphi, phi + dphi);
        if (along_phi.value < value) {
            phi = along_phi.x;
            value = along_phi.value;
        }

        if (before - value < kRefineImprovement) {
            break;
        }
    }
    return {value, {theta, wrap_phi(phi)}};
}

ClassicalCorrelation classical_correlation(const DensityMatrix& rho_ab)
{
    require_bipartite(rho_ab, "classical_correlation");
    const std::array<std::size_t, 1> b{1};
    const double s_b = entropy(partial_trace(rho_ab, b));
    const auto min = minimize_conditional_entropy(rho_ab);
    return {s_b - min.value, min.angles};
}

ClassicalCorrelation classical_correlation(const DensityMatrix& rho3, Bipartition bip)
{
    return classical_correlation(bipartite_state(rho3, bip));
}

namespace {

// Returns an empty string when applicable, otherwise the reason.
std::string xstate_violation(const DensityMatrix& rho_ab, bool& population_mismatch)
{
    population_mismatch = false;
    const auto& dims = rho_ab.dims();
    if (dims.size() != 2 || dims[0] != 2 || dims[1] != 2) {
        return "not a two-qubit state";
    }
    const auto& m = rho_ab.matrix();
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            const bool on_x = i == j || i + j == 3;
            if (!on_x && std::abs(m(i, j)) >= kXShapeTol) {
                std::ostringstream msg;
                msg << "entry (" << i << "," << j << ") = " << std::abs(m(i, j)) << " lies off the X pattern";
                return msg.str();
            }
        }
    }
    if (std::abs(m(1, 1).real() - m(2, 2).real()) > kPopulationTol) {
        population_mismatch = true;
        return "rho22 != rho33";
    }
    return {};
}

} // namespace

bool xstate_applicable(const DensityMatrix& rho_ab)
{
    bool mismatch = false;
    return xstate_violation(rho_ab, mismatch).empty();
}

DiscordResult xstate_discord(const DensityMatrix& rho_ab)
{
    bool mismatch = false;
    const auto why = xstate_violation(rho_ab, mismatch);
    if (!why.empty()) {
        if (mismatch) {
            throw ConditionViolated("xstate_discord: " + why);
        }
        throw NotXState("xstate_discord: " + why);
    }

    const auto& m = rho_ab.matrix();
    const double r11 = m(0, 0).real();
    const double r33 = m(2, 2).real();
    const Complex r14 = m(0, 3);
    const Complex r23 = m(1, 2);

    // Measurement in the equatorial plane, phase aligned with both coherences.
    const double coherence = std::abs(r14) + std::abs(r23);
    const double bias = 1.0 - 2.0 * (r11 + r33);
    const double tau = 0.5 * (1.0 - std::sqrt(bias * bias + 4.0 * coherence * coherence));
    const double equatorial = binary_entropy(tau);
    const double equatorial_phi = wrap_phi(-0.5 * (std::arg(r14) + std::arg(r23)));

    // sigma_z measurement: B collapses onto diagonal states.
    const double r22 = m(1, 1).real();
    const double r44 = m(3, 3).real();
    const double p0 = r11 + r22;
    const double p1 = r33 + r44;
    const double polar = (p0 > kNegligibleOutcome ? p0 * binary_entropy(r11 / p0) : 0.0) +
                         (p1 > kNegligibleOutcome ? p1 * binary_entropy(r33 / p1) : 0.0);

    DiscordResult out;
    out.method = DiscordMethod::xstate_analytic;
    double conditional = equatorial;
    out.minimizer = {kPi / 2.0, equatorial_phi};
    if (polar < equatorial) {
        conditional = polar;
        out.minimizer = {0.0, 0.0};
    }

    // The aligned phase is optimal at every theta, but for some X states the
    // best theta is interior. Scan the aligned half-plane and refine.
    const ConditionalEntropyObjective objective(rho_ab);
    const auto along = [&](double theta) { return objective(theta, equatorial_phi); };
    const double step = kPi / static_cast<double>(kThetaPoints - 1);
    std::size_t best = 0;
    double best_value = along(0.0);
    for (std::size_t i = 1; i < kThetaPoints; ++i) {
        const double v = along(static_cast<double>(i) * step);
        if (v < best_value) {
            best_value = v;
            best = i;
        }
    }
    const double centre = static_cast<double>(best) * step;
    const auto interior = golden_section(along, std::max(0.0, centre - step), std::min(kPi, centre + step));
    if (interior.value < conditional - kRefineImprovement) {
        conditional = interior.value;
        out.minimizer = {interior.x, equatorial_phi};
    }

    const std::array<std::size_t, 1> b{1};
    out.mutual_information = mutual_information(rho_ab);
    out.classical_correlation = entropy(partial_trace(rho_ab, b)) - conditional;
    out.discord = out.mutual_information - out.classical_correlation;
    return out;
}

DiscordResult discord(const DensityMatrix& rho_ab, DiscordPolicy policy)
{
    require_bipartite(rho_ab, "discord");
    if (policy == DiscordPolicy::automatic && xstate_applicable(rho_ab)) {
        return xstate_discord(rho_ab);
    }
    DiscordResult out;
    out.method = DiscordMethod::grid_refined;
    out.mutual_information = mutual_information(rho_ab);
    const auto cc = classical_correlation(rho_ab);
    out.classical_correlation = cc.value;
    out.minimizer = cc.angles;
    out.discord = out.mutual_information - out.classical_correlation;
    return out;
}

DiscordResult discord(const DensityMatrix& rho3, Bipartition bip, DiscordPolicy policy)
{
    return discord(bipartite_state(rho3, bip), policy);
}

} // namespace tqd

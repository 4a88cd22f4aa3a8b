#pragma once

#include "tqd/matcore.hpp"

#include <array>
#include <cstddef>
#include <string_view>
#include <variant>
#include <vector>

namespace tqd {

/// Ring with an impurity spin at site 1: J1 on bonds (1,2) and (3,1), J on (2,3).
struct SpinImpurityParams {
    double j1 = 0.0;
    double j = 0.0;
};

/// Uniform ring with coupling J and a z-field B on site 1 only.
struct MagneticImpurityParams {
    double j = 0.0;
    double b = 0.0;
};

using ModelSpec = std::variant<SpinImpurityParams, MagneticImpurityParams>;

/// "spin" or "magnetic".
std::string_view model_name(const ModelSpec& model);

/// Scaled temperature (k_B = 1); always finite or +inf and non-negative.
class Temperature {
public:
    explicit Temperature(double t);
    double value() const noexcept { return t_; }
    bool is_zero() const noexcept { return t_ == 0.0; }

private:
    double t_;
};

/// Unit-trace, positive semidefinite Hermitian matrix over a tensor product
/// of subsystems with the given dimensions (first subsystem most significant).
class DensityMatrix {
public:
    static constexpr double kTolerance = 1e-10;

    /// Throws InvalidState when any invariant fails.
    DensityMatrix(ComplexMatrix matrix, std::vector<std::size_t> dims);

    const ComplexMatrix& matrix() const noexcept { return matrix_; }
    const std::vector<std::size_t>& dims() const noexcept { return dims_; }
    std::size_t dim() const noexcept { return matrix_.dim(); }

private:
    ComplexMatrix matrix_;
    std::vector<std::size_t> dims_;
};

/// Single-qubit operator `op` acting on `site` (0-based, 0 leftmost) of a 3-qubit register.
ComplexMatrix embed_single(const ComplexMatrix& op, std::size_t site);

/// sigma_a . sigma_b for two sites of the 3-qubit register.
ComplexMatrix heisenberg_bond(std::size_t a, std::size_t b);

ComplexMatrix build_spin_impurity(const SpinImpurityParams& p);
ComplexMatrix build_magnetic_impurity(const MagneticImpurityParams& p);
ComplexMatrix build_hamiltonian(const ModelSpec& model);

/// Closed-form eigenvalues of the model, ascending, with multiplicity.
std::array<double, 8> analytic_spectrum(const ModelSpec& model);

/// Degeneracy window used to select the ground space at T = 0.
inline constexpr double kGroundDegeneracyTol = 1e-9;

/// exp(-h/T)/Z for T > 0 (energies shifted by the ground energy first);
/// for T = 0 the equal-weight mixture over the ground eigenspace.
DensityMatrix gibbs_state(const ComplexMatrix& h, Temperature t);

/// Convenience: gibbs_state(build_hamiltonian(model), t) with dims {2,2,2}.
DensityMatrix thermal_state(const ModelSpec& model, Temperature t);

} // namespace tqd

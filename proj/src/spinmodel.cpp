#include "tqd/spinmodel.hpp"

#include "tqd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace tqd {

std::string_view model_name(const ModelSpec& model)
{
    return std::holds_alternative<SpinImpurityParams>(model) ? "spin" : "magnetic";
}

Temperature::Temperature(double t) : t_(t)
{
    if (std::isnan(t) || t < 0.0) {
        throw std::invalid_argument("temperature must be non-negative");
    }
}

DensityMatrix::DensityMatrix(ComplexMatrix matrix, std::vector<std::size_t> dims)
    : matrix_(std::move(matrix)), dims_(std::move(dims))
{
    std::size_t product = 1;
    for (auto d : dims_) {
        product *= d;
    }
    if (dims_.empty() || product != matrix_.dim()) {
        throw InvalidState("density matrix: subsystem dimensions do not multiply to the matrix size");
    }
    const double herm = matrix_.hermiticity_error();
    if (herm > kTolerance) {
        std::ostringstream msg;
        msg << "density matrix: not Hermitian (" << herm << ")";
        throw InvalidState(msg.str());
    }
    const Complex tr = matrix_.trace();
    if (std::abs(tr - 1.0) > kTolerance) {
        std::ostringstream msg;
        msg << "density matrix: trace " << tr.real() << " != 1";
        throw InvalidState(msg.str());
    }
    const auto values = eigvalsh(matrix_, kTolerance);
    if (values.front() < -kTolerance) {
        std::ostringstream msg;
        msg << "density matrix: negative eigenvalue " << values.front();
        throw InvalidState(msg.str());
    }
}

ComplexMatrix embed_single(const ComplexMatrix& op, std::size_t site)
{
    if (site > 2 || op.dim() != 2) {
        throw std::invalid_argument("embed_single: need a 2x2 operator and site in {0,1,2}");
    }
    const auto id = ComplexMatrix::identity(2);
    const ComplexMatrix& f0 = site == 0 ? op : id;
    const ComplexMatrix& f1 = site == 1 ? op : id;
    const ComplexMatrix& f2 = site == 2 ? op : id;
    return kron(kron(f0, f1), f2);
}

ComplexMatrix heisenberg_bond(std::size_t a, std::size_t b)
{
    ComplexMatrix out(8);
    for (const auto& s : {pauli::x(), pauli::y(), pauli::z()}) {
        out += embed_single(s, a) * embed_single(s, b);
    }
    return out;
}

ComplexMatrix build_spin_impurity(const SpinImpurityParams& p)
{
    return p.j1 * (heisenberg_bond(0, 1) + heisenberg_bond(2, 0)) + p.j * heisenberg_bond(1, 2);
}

ComplexMatrix build_magnetic_impurity(const MagneticImpurityParams& p)
{
    return p.j * (heisenberg_bond(0, 1) + heisenberg_bond(1, 2) + heisenberg_bond(2, 0)) +
           p.b * embed_single(pauli::z(), 0);
}

ComplexMatrix build_hamiltonian(const ModelSpec& model)
{
    return std::visit(
        [](const auto& p) -> ComplexMatrix {
            if constexpr (std::is_same_v<std::decay_t<decltype(p)>, SpinImpurityParams>) {
                return build_spin_impurity(p);
            } else {
                return build_magnetic_impurity(p);
            }
        },
        model);
}

std::array<double, 8> analytic_spectrum(const ModelSpec& model)
{
    std::array<double, 8> e{};
    if (const auto* s = std::get_if<SpinImpurityParams>(&model)) {
        const double lowest = s->j - 4.0 * s->j1;
        const double singlet = -3.0 * s->j;
        const double quartet = s->j + 2.0 * s->j1;
        e = {lowest, lowest, singlet, singlet, quartet, quartet, quartet, quartet};
    } else {
        const auto& m = std::get<MagneticImpurityParams>(model);
        const double base = m.b * m.b + 9.0 * m.j * m.j;
        const double eta_plus = std::sqrt(std::max(0.0, base + 2.0 * m.j * m.b));
        const double eta_minus = std::sqrt(std::max(0.0, base - 2.0 * m.j * m.b));
        e = {3.0 * m.j + m.b, 3.0 * m.j - m.b, -3.0 * m.j + m.b, -3.0 * m.j - m.b,
             eta_plus,        -eta_plus,       eta_minus,         -eta_minus};
    }
    std::sort(e.begin(), e.end());
    return e;
}

DensityMatrix gibbs_state(const ComplexMatrix& h, Temperature t)
{
    const auto dec = eigh(h);
    const double ground = dec.values.front();
    std::vector<double> weights(dec.values.size());
    if (t.is_zero()) {
        std::transform(dec.values.begin(), dec.values.end(), weights.begin(),
                       [&](double e) { return e - ground <= kGroundDegeneracyTol ? 1.0 : 0.0; });
    } else {
        const double beta = 1.0 / t.value();
        std::transform(dec.values.begin(), dec.values.end(), weights.begin(),
                       [&](double e) { return std::exp(-(e - ground) * beta); });
    }
    double z = 0.0;
    for (double w : weights) {
        z += w;
    }
    for (double& w : weights) {
        w /= z;
    }
    std::vector<std::size_t> dims;
    for (std::size_t n = h.dim(); n > 1; n /= 2) {
        dims.push_back(2);
    }
    if (std::size_t{1} << dims.size() != h.dim()) {
        dims = {h.dim()};
    }
    return DensityMatrix(reassemble(dec.vectors, weights), std::move(dims));
}

DensityMatrix thermal_state(const ModelSpec& model, Temperature t)
{
    return gibbs_state(build_hamiltonian(model), t);
}

} // namespace tqd

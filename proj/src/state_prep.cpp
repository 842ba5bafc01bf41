#include "trotherm/state_prep.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace trotherm {

StateVector sample_rpps(int L, const SampleSeed& seed) {
    if (L < 2) throw std::invalid_argument("sample_rpps: L must be >= 2");
    CounterRng rng = seed.stream();
    std::vector<Complex> amps(hilbert_dim(L));
    amps[0] = 1.0;
    const double local = 1.0 / std::numbers::sqrt2;
    std::size_t filled = 1;
    for (int site = 1; site <= L; ++site) {
        const Complex up = std::polar(local, 2.0 * std::numbers::pi * rng.uniform());
        const Complex down = std::polar(local, 2.0 * std::numbers::pi * rng.uniform());
        // Upper half of the doubled block has this site's bit set (spin down).
        for (std::size_t i = 0; i < filled; ++i) {
            amps[i + filled] = amps[i] * down;
            amps[i] *= up;
        }
        filled *= 2;
    }
    return StateVector(L, std::move(amps));
}

StateVector sample_haar(int L, const SampleSeed& seed) {
    if (L < 2) throw std::invalid_argument("sample_haar: L must be >= 2");
    CounterRng rng = seed.stream();
    std::vector<Complex> amps(hilbert_dim(L));
    for (auto& a : amps) {
        const double re = rng.normal();
        a = Complex(re, rng.normal());
    }
    StateVector s(L, std::move(amps));
    s.normalize_in_place();
    s.set_log_norm_offset(0.0);
    return s;
}

std::vector<BondTerm> bond_local_hamiltonians(const HamiltonianTerms& terms) {
    if (terms.L < 2) throw std::invalid_argument("bond_local_hamiltonians: need at least one bond");
    std::vector<BondTerm> local;
    for (int i = 1; i < terms.L; ++i) local.push_back({i, Matrix4::Zero()});
    for (const auto& b : terms.bonds) local[b.site - 1].matrix += b.matrix;

    const Matrix2 id = Matrix2::Identity();
    for (const auto& f : terms.fields) {
        const int i = f.site;
        if (i > 1) {
            const double share = (i == terms.L) ? 1.0 : 0.5;
            local[i - 2].matrix += share * spin::two_site(id, f.matrix);
        }
        if (i < terms.L) {
            const double share = (i == 1) ? 1.0 : 0.5;
            local[i - 1].matrix += share * spin::two_site(f.matrix, id);
        }
    }
    return local;
}

Matrix4 unitary_exp(const Matrix4& h, double t) {
    Eigen::SelfAdjointEigenSolver<Matrix4> es(h);
    const Eigen::Vector4cd phases = (Complex(0.0, -t) * es.eigenvalues().cast<Complex>()).array().exp();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

TrotterCircuit build_trotter_circuit(const ModelSpec& trotter_spec, double tau, int n_reps) {
    if (!(tau >= 0.0) || !std::isfinite(tau)) throw std::invalid_argument("build_trotter_circuit: tau must be >= 0");
    if (n_reps < 0) throw std::invalid_argument("build_trotter_circuit: n_reps must be >= 0");
    const HamiltonianTerms terms = build_hamiltonian(trotter_spec);

    TrotterCircuit c;
    c.L = trotter_spec.L;
    c.tau = tau;
    c.n_reps = n_reps;
    for (const auto& b : bond_local_hamiltonians(terms)) {
        Gate g{b.site, unitary_exp(b.matrix, tau)};
        (b.site % 2 == 1 ? c.odd_layer : c.even_layer).push_back(std::move(g));
    }
    return c;
}

void apply_two_site(StateVector& state, int bond, const Matrix4& gate) {
    const int L = state.num_sites();
    if (bond < 1 || bond >= L) throw std::invalid_argument("apply_two_site: bond out of range");
    const int p = bond - 1;
    const std::size_t s0 = std::size_t{1} << p;
    const std::size_t s1 = s0 << 1;
    const std::size_t low_mask = s0 - 1;
    auto amps = state.amplitudes();
    const std::size_t quarter = amps.size() / 4;
    for (std::size_t k = 0; k < quarter; ++k) {
        const std::size_t base = ((k >> p) << (p + 2)) | (k & low_mask);
        const Complex v0 = amps[base];
        const Complex v1 = amps[base | s0];
        const Complex v2 = amps[base | s1];
        const Complex v3 = amps[base | s0 | s1];
        amps[base] = gate(0, 0) * v0 + gate(0, 1) * v1 + gate(0, 2) * v2 + gate(0, 3) * v3;
        amps[base | s0] = gate(1, 0) * v0 + gate(1, 1) * v1 + gate(1, 2) * v2 + gate(1, 3) * v3;
        amps[base | s1] = gate(2, 0) * v0 + gate(2, 1) * v1 + gate(2, 2) * v2 + gate(2, 3) * v3;
        amps[base | s0 | s1] = gate(3, 0) * v0 + gate(3, 1) * v1 + gate(3, 2) * v2 + gate(3, 3) * v3;
    }
}

StateVector apply_circuit(StateVector state, const TrotterCircuit& circuit) {
    if (state.num_sites() != circuit.L)
        throw std::invalid_argument("apply_circuit: state has " + std::to_string(state.num_sites()) +
                                    " sites, circuit has " + std::to_string(circuit.L));
    if (circuit.n_reps == 0) return state;
    for (int rep = 0; rep < circuit.n_reps; ++rep) {
        for (const auto& g : circuit.even_layer) apply_two_site(state, g.bond, g.unitary);
        for (const auto& g : circuit.odd_layer) apply_two_site(state, g.bond, g.unitary);
    }
    state.normalize_in_place();
    return state;
}

}  // namespace trotherm

#pragma once

#include "trotherm/hamiltonian.hpp"
#include "trotherm/hilbert.hpp"
#include "trotherm/rng.hpp"

#include <vector>

namespace trotherm {

/// Random phase product state: each site gets (e^{i a}|up> + e^{i b}|down>)/sqrt(2)
/// with a, b uniform in [0, 2pi). Consumes exactly 2L draws, site 1 first.
StateVector sample_rpps(int L, const SampleSeed& seed);

/// Haar-random unit vector from 2^L normalized complex Gaussians.
StateVector sample_haar(int L, const SampleSeed& seed);

struct Gate {
    int bond;  // acts on sites (bond, bond+1)
    Matrix4 unitary;
};

/// First-order Trotter step U(tau) = exp(-i tau H_odd) exp(-i tau H_even),
/// repeated n_reps times. odd_layer holds bonds (1,2), (3,4), ...
struct TrotterCircuit {
    int L = 0;
    std::vector<Gate> even_layer;
    std::vector<Gate> odd_layer;
    double tau = 0.0;
    int n_reps = 0;
};

/// Per-bond local Hamiltonians whose sum is `terms`. A field on an interior
/// site is split evenly between its two bonds; an end site gives its whole
/// field to its only bond.
std::vector<BondTerm> bond_local_hamiltonians(const HamiltonianTerms& terms);

/// exp(-i t h) of a 4x4 Hermitian matrix via its eigendecomposition.
Matrix4 unitary_exp(const Matrix4& h, double t);

TrotterCircuit build_trotter_circuit(const ModelSpec& trotter_spec, double tau, int n_reps);

/// Applies a 4x4 matrix to sites (bond, bond+1) in place.
void apply_two_site(StateVector& state, int bond, const Matrix4& gate);

/// Applies U(tau)^n_reps (even layer first each step) and renormalizes.
StateVector apply_circuit(StateVector state, const TrotterCircuit& circuit);

}  // namespace trotherm

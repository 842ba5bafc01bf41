#pragma once

#include "trotherm/hamiltonian.hpp"
#include "trotherm/hilbert.hpp"

#include <Eigen/Dense>

namespace trotherm::oracle {

inline constexpr int kDefaultCap = 12;

/// Dense 2^L x 2^L reference operator.
struct DenseOperator {
    Eigen::MatrixXcd matrix;
    int L = 0;
};

/// Eigenpairs of a Hermitian DenseOperator, ascending energies.
struct Spectrum {
    Eigen::VectorXd energies;
    Eigen::MatrixXcd vectors;
    int L = 0;
};

enum class EvolutionKind { RealTime, ImagTime };

DenseOperator dense_build(const HamiltonianTerms& terms, int cap = kDefaultCap);

Spectrum diagonalize(const DenseOperator& op);

/// Tr[O e^{-beta H}] / Tr e^{-beta H} by full diagonalization.
double exact_thermal(const HamiltonianTerms& terms_h, const HamiltonianTerms& terms_o, double beta,
                     int cap = kDefaultCap);
double exact_thermal(const Spectrum& h, const DenseOperator& o, double beta);

/// exp(-i theta H)|psi> or exp(-theta H)|psi>. The imaginary-time result is
/// unit-normalized with the exact log-norm folded into the offset.
StateVector exact_evolve(const DenseOperator& op, const StateVector& state, double theta, EvolutionKind kind);
StateVector exact_evolve(const Spectrum& spec, const StateVector& state, double theta, EvolutionKind kind);

/// <psi| e^{-beta H} |psi> in log form, including the state's offset.
double exact_log_quadratic(const Spectrum& spec, const StateVector& state, double beta);

Eigen::VectorXcd to_eigen(const StateVector& state);

}  // namespace trotherm::oracle

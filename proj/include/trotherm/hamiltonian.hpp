#pragma once

#include "trotherm/hilbert.hpp"

#include <Eigen/Core>

#include <string>
#include <string_view>
#include <vector>

namespace trotherm {

using Matrix2 = Eigen::Matrix2cd;
using Matrix4 = Eigen::Matrix4cd;

enum class ModelKind { Heisenberg, XXZStaggered, TransverseIsing, MixedIsing };

std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);

/// Parameters of one open spin-1/2 chain. Fields that do not apply to `kind`
/// are kept but ignored when the terms are built.
///
///   Heisenberg       J sum S_i.S_{i+1}
///   XXZStaggered     J sum (SxSx + SySy + delta SzSz) + h_stag sum (-1)^i Sz_i
///   TransverseIsing  J sum SzSz + h_x sum Sx_i
///   MixedIsing       J sum SzSz + sum (h_z Sz_i + h_x Sx_i)
struct ModelSpec {
    ModelKind kind = ModelKind::Heisenberg;
    int L = 2;
    double J = 1.0;
    double delta = 1.0;
    double h_stag = 0.0;
    double h_x = 0.0;
    double h_z = 0.0;

    bool operator==(const ModelSpec&) const = default;
};

/// Two-site term on sites (site, site+1). Local index = bit(site) + 2*bit(site+1).
struct BondTerm {
    int site;
    Matrix4 matrix;
};

struct FieldTerm {
    int site;
    Matrix2 matrix;
};

/// Sum of one- and two-site Hermitian terms on an open chain.
struct HamiltonianTerms {
    int L = 0;
    std::vector<BondTerm> bonds;
    std::vector<FieldTerm> fields;
};

namespace spin {
Matrix2 sx();
Matrix2 sy();
Matrix2 sz();
/// a (x) b on two adjacent sites, `a` acting on the lower site.
Matrix4 two_site(const Matrix2& lower, const Matrix2& upper);
}  // namespace spin

HamiltonianTerms build_hamiltonian(const ModelSpec& spec);

/// Checks site ranges and Hermiticity; throws std::invalid_argument.
void validate(const HamiltonianTerms& terms);

/// H|psi>, matrix-free. The offset of `state` is carried over unchanged.
StateVector apply_h(const HamiltonianTerms& terms, const StateVector& state);

/// out += coeff * H * in over raw amplitude arrays of length 2^L.
void accumulate_h(const HamiltonianTerms& terms, std::span<const Complex> in, std::span<Complex> out,
                  Complex coeff = 1.0);

/// Re <psi|H|psi> of the stored amplitudes.
double expectation(const HamiltonianTerms& terms, const StateVector& state);

/// Triangle-inequality bound on the spectral radius of H.
double spectral_bound(const HamiltonianTerms& terms);

/// Tr H / 2^L from local traces.
double trace_per_state(const HamiltonianTerms& terms);

}  // namespace trotherm

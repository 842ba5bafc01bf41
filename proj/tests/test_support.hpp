#pragma once

// Independent dense constructions used as oracles by the unit tests. Nothing
// here goes through the matrix-free kernels or the term lists.

#include "trotherm/hamiltonian.hpp"
#include "trotherm/hilbert.hpp"

#include <Eigen/Dense>

#include <random>

namespace trotherm::testing {

inline StateVector random_state(int L, std::uint64_t seed, bool normalized = true) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> g;
    std::vector<Complex> amps(std::size_t{1} << L);
    for (auto& a : amps) a = Complex(g(gen), g(gen));
    StateVector s(L, std::move(amps));
    if (normalized) {
        s.normalize_in_place();
        s.set_log_norm_offset(0.0);
    }
    return s;
}

inline Eigen::Matrix2cd pauli(char which) {
    Eigen::Matrix2cd m;
    switch (which) {
        case 'x': m << 0, 1, 1, 0; break;
        case 'y': m << 0, Complex(0, -1), Complex(0, 1), 0; break;
        case 'z': m << 1, 0, 0, -1; break;
        default: m.setIdentity();
    }
    return m;
}

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// Spin operator S^a = sigma^a / 2 on `site` of an L-site chain. Site L is the
/// leftmost Kronecker factor so that site 1 is the least significant bit.
inline Eigen::MatrixXcd site_op(int L, int site, char which) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
    for (int s = L; s >= 1; --s) {
        const Eigen::Matrix2cd f = s == site ? Eigen::Matrix2cd(0.5 * pauli(which)) : Eigen::Matrix2cd::Identity();
        out = kron(out, f);
    }
    return out;
}

inline Eigen::MatrixXcd reference_matrix(const ModelSpec& spec) {
    const int L = spec.L;
    const auto dim = Eigen::Index{1} << L;
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(dim, dim);
    for (int i = 1; i < L; ++i) {
        const Eigen::MatrixXcd xx = site_op(L, i, 'x') * site_op(L, i + 1, 'x');
        const Eigen::MatrixXcd yy = site_op(L, i, 'y') * site_op(L, i + 1, 'y');
        const Eigen::MatrixXcd zz = site_op(L, i, 'z') * site_op(L, i + 1, 'z');
        switch (spec.kind) {
            case ModelKind::Heisenberg: H += spec.J * (xx + yy + zz); break;
            case ModelKind::XXZStaggered: H += spec.J * (xx + yy + spec.delta * zz); break;
            default: H += spec.J * zz;
        }
    }
    for (int i = 1; i <= L; ++i) {
        switch (spec.kind) {
            case ModelKind::XXZStaggered: H += spec.h_stag * ((i % 2 == 0) ? 1.0 : -1.0) * site_op(L, i, 'z'); break;
            case ModelKind::TransverseIsing: H += spec.h_x * site_op(L, i, 'x'); break;
            case ModelKind::MixedIsing: H += spec.h_z * site_op(L, i, 'z') + spec.h_x * site_op(L, i, 'x'); break;
            default: break;
        }
    }
    return H;
}

inline Eigen::VectorXcd as_vector(const StateVector& s) {
    return Eigen::Map<const Eigen::VectorXcd>(s.amplitudes().data(), static_cast<Eigen::Index>(s.dim()));
}

/// rho_A for A = sites 1..cut by explicit summation over B.
inline Eigen::MatrixXcd reduced_density(const StateVector& s, int cut) {
    const auto dA = Eigen::Index{1} << cut;
    const auto dB = static_cast<Eigen::Index>(s.dim()) / dA;
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dA, dA);
    for (Eigen::Index a = 0; a < dA; ++a)
        for (Eigen::Index a2 = 0; a2 < dA; ++a2)
            for (Eigen::Index b = 0; b < dB; ++b) rho(a, a2) += s[a + dA * b] * std::conj(s[a2 + dA * b]);
    return rho;
}

inline StateVector from_vector(int L, const Eigen::VectorXcd& v) {
    return StateVector(L, std::vector<Complex>(v.data(), v.data() + v.size()));
}

inline std::vector<ModelSpec> catalog(int L) {
    return {
        {ModelKind::Heisenberg, L, 1.0},
        {ModelKind::XXZStaggered, L, 1.0, 5.0, 1.0},
        {ModelKind::TransverseIsing, L, 1.0, 1.0, 0.0, 1.0, 0.0},
        {ModelKind::MixedIsing, L, 1.0, 1.0, 0.0, 1.0, 1.0},
    };
}

}  // namespace trotherm::testing

#include "trotherm/oracle.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace trotherm::oracle {

namespace {

void check_cap(int L, int cap) {
    if (L > cap)
        throw std::invalid_argument("dense oracle: L = " + std::to_string(L) + " exceeds cap " + std::to_string(cap));
}

}  // namespace

Eigen::VectorXcd to_eigen(const StateVector& state) {
    return Eigen::Map<const Eigen::VectorXcd>(state.amplitudes().data(), static_cast<Eigen::Index>(state.dim()));
}

DenseOperator dense_build(const HamiltonianTerms& terms, int cap) {
    check_cap(terms.L, cap);
    const auto dim = static_cast<Eigen::Index>(hilbert_dim(terms.L));
    DenseOperator op{Eigen::MatrixXcd::Zero(dim, dim), terms.L};
    for (const auto& b : terms.bonds) {
        const int p = b.site - 1;
        const Eigen::Index mask = Eigen::Index{3} << p;
        for (Eigen::Index col = 0; col < dim; ++col) {
            const int lc = static_cast<int>((col >> p) & 3);
            for (int lr = 0; lr < 4; ++lr) op.matrix((col & ~mask) | (Eigen::Index{lr} << p), col) += b.matrix(lr, lc);
        }
    }
    for (const auto& f : terms.fields) {
        const int p = f.site - 1;
        const Eigen::Index mask = Eigen::Index{1} << p;
        for (Eigen::Index col = 0; col < dim; ++col) {
            const int lc = static_cast<int>((col >> p) & 1);
            for (int lr = 0; lr < 2; ++lr) op.matrix((col & ~mask) | (Eigen::Index{lr} << p), col) += f.matrix(lr, lc);
        }
    }
    return op;
}

Spectrum diagonalize(const DenseOperator& op) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(op.matrix);
    if (es.info() != Eigen::Success) throw std::runtime_error("dense oracle: eigensolver failed");
    return {es.eigenvalues(), es.eigenvectors(), op.L};
}

double exact_thermal(const Spectrum& h, const DenseOperator& o, double beta) {
    if (!(beta >= 0.0)) throw std::invalid_argument("exact_thermal: beta must be >= 0");
    // <k|O|k> for every eigenvector k.
    const Eigen::VectorXd diag = (h.vectors.adjoint() * o.matrix * h.vectors).diagonal().real();
    const double e0 = h.energies.minCoeff();
    const Eigen::ArrayXd boltz = (-beta * (h.energies.array() - e0)).exp();
    return (diag.array() * boltz).sum() / boltz.sum();
}

double exact_thermal(const HamiltonianTerms& terms_h, const HamiltonianTerms& terms_o, double beta, int cap) {
    const DenseOperator h = dense_build(terms_h, cap);
    const DenseOperator o = dense_build(terms_o, cap);
    return exact_thermal(diagonalize(h), o, beta);
}

StateVector exact_evolve(const Spectrum& spec, const StateVector& state, double theta, EvolutionKind kind) {
    if (state.num_sites() != spec.L) throw std::invalid_argument("exact_evolve: size mismatch");
    const Eigen::VectorXcd coeffs = spec.vectors.adjoint() * to_eigen(state);
    Eigen::VectorXcd factors(coeffs.size());
    double log_shift = 0.0;
    if (kind == EvolutionKind::RealTime) {
        for (Eigen::Index k = 0; k < coeffs.size(); ++k) factors[k] = std::polar(1.0, -theta * spec.energies[k]);
    } else {
        const double e0 = spec.energies.minCoeff();
        log_shift = -theta * e0;
        for (Eigen::Index k = 0; k < coeffs.size(); ++k) factors[k] = std::exp(-theta * (spec.energies[k] - e0));
    }
    const Eigen::VectorXcd out = spec.vectors * (factors.array() * coeffs.array()).matrix();
    StateVector result(spec.L, std::vector<Complex>(out.data(), out.data() + out.size()), state.log_norm_offset());
    if (kind == EvolutionKind::ImagTime) {
        result.add_log_norm(log_shift);
        result.normalize_in_place();
    }
    return result;
}

StateVector exact_evolve(const DenseOperator& op, const StateVector& state, double theta, EvolutionKind kind) {
    return exact_evolve(diagonalize(op), state, theta, kind);
}

double exact_log_quadratic(const Spectrum& spec, const StateVector& state, double beta) {
    const Eigen::VectorXcd coeffs = spec.vectors.adjoint() * to_eigen(state);
    const double e0 = spec.energies.minCoeff();
    double acc = 0.0;
    for (Eigen::Index k = 0; k < coeffs.size(); ++k) acc += std::norm(coeffs[k]) * std::exp(-beta * (spec.energies[k] - e0));
    return std::log(acc) - beta * e0 + 2.0 * state.log_norm_offset();
}

}  // namespace trotherm::oracle

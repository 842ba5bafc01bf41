#include "trotherm/hamiltonian.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>

namespace trotherm {

std::string_view to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::Heisenberg: return "Heisenberg";
        case ModelKind::XXZStaggered: return "XXZStaggered";
        case ModelKind::TransverseIsing: return "TransverseIsing";
        case ModelKind::MixedIsing: return "MixedIsing";
    }
    return "?";
}

ModelKind parse_model_kind(std::string_view name) {
    for (auto k : {ModelKind::Heisenberg, ModelKind::XXZStaggered, ModelKind::TransverseIsing, ModelKind::MixedIsing})
        if (name == to_string(k)) return k;
    throw std::invalid_argument("unknown model kind '" + std::string(name) + "'");
}

namespace spin {

Matrix2 sx() {
    Matrix2 m;
    m << 0.0, 0.5, 0.5, 0.0;
    return m;
}

Matrix2 sy() {
    Matrix2 m;
    m << 0.0, Complex(0.0, -0.5), Complex(0.0, 0.5), 0.0;
    return m;
}

Matrix2 sz() {
    // Row/column 0 is spin up.
    Matrix2 m;
    m << 0.5, 0.0, 0.0, -0.5;
    return m;
}

Matrix4 two_site(const Matrix2& lower, const Matrix2& upper) {
    Matrix4 m;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) m(r, c) = lower(r & 1, c & 1) * upper(r >> 1, c >> 1);
    return m;
}

}  // namespace spin

HamiltonianTerms build_hamiltonian(const ModelSpec& spec) {
    if (spec.L < 2) throw std::invalid_argument("build_hamiltonian: L must be >= 2, got " + std::to_string(spec.L));
    using namespace spin;
    const Matrix4 xx = two_site(sx(), sx());
    const Matrix4 yy = two_site(sy(), sy());
    const Matrix4 zz = two_site(sz(), sz());

    Matrix4 bond;
    switch (spec.kind) {
        case ModelKind::Heisenberg: bond = spec.J * (xx + yy + zz); break;
        case ModelKind::XXZStaggered: bond = spec.J * (xx + yy + spec.delta * zz); break;
        case ModelKind::TransverseIsing:
        case ModelKind::MixedIsing: bond = spec.J * zz; break;
    }

    HamiltonianTerms terms;
    terms.L = spec.L;
    for (int i = 1; i < spec.L; ++i) terms.bonds.push_back({i, bond});

    for (int i = 1; i <= spec.L; ++i) {
        Matrix2 f = Matrix2::Zero();
        switch (spec.kind) {
            case ModelKind::Heisenberg: continue;
            case ModelKind::XXZStaggered: f = (i % 2 == 0 ? 1.0 : -1.0) * spec.h_stag * sz(); break;
            case ModelKind::TransverseIsing: f = spec.h_x * sx(); break;
            case ModelKind::MixedIsing: f = spec.h_z * sz() + spec.h_x * sx(); break;
        }
        if (!f.isZero(0.0)) terms.fields.push_back({i, f});
    }
    return terms;
}

void validate(const HamiltonianTerms& terms) {
    for (const auto& b : terms.bonds) {
        if (b.site < 1 || b.site >= terms.L) throw std::invalid_argument("bond site out of range");
        if ((b.matrix - b.matrix.adjoint()).cwiseAbs().maxCoeff() > 1e-14)
            throw std::invalid_argument("bond term is not Hermitian");
    }
    for (const auto& f : terms.fields) {
        if (f.site < 1 || f.site > terms.L) throw std::invalid_argument("field site out of range");
        if ((f.matrix - f.matrix.adjoint()).cwiseAbs().maxCoeff() > 1e-14)
            throw std::invalid_argument("field term is not Hermitian");
    }
}

namespace {

struct Entry {
    int row;
    int col;
    Complex value;
};

template <int N, class Mat>
std::vector<Entry> nonzeros(const Mat& m) {
    std::vector<Entry> out;
    for (int r = 0; r < N; ++r)
        for (int c = 0; c < N; ++c)
            if (m(r, c) != Complex(0.0)) out.push_back({r, c, m(r, c)});
    return out;
}

// Inserts a zero bit at position `bit` of k.
inline std::size_t insert_zero(std::size_t k, int bit) {
    const std::size_t low = k & ((std::size_t{1} << bit) - 1);
    return ((k >> bit) << (bit + 1)) | low;
}

}  // namespace

void accumulate_h(const HamiltonianTerms& terms, std::span<const Complex> in, std::span<Complex> out, Complex coeff) {
    const std::size_t dim = hilbert_dim(terms.L);
    if (in.size() != dim || out.size() != dim) throw std::invalid_argument("apply_h: size mismatch");

    for (const auto& bond : terms.bonds) {
        const auto nz = nonzeros<4>(bond.matrix);
        if (nz.empty()) continue;
        const int p = bond.site - 1;
        const std::size_t s0 = std::size_t{1} << p;
        const std::size_t s1 = std::size_t{1} << (p + 1);
        const std::array<std::size_t, 4> off{0, s0, s1, s0 | s1};
        std::vector<Entry> scaled = nz;
        for (auto& e : scaled) e.value *= coeff;
        for (std::size_t k = 0; k < dim / 4; ++k) {
            const std::size_t base = insert_zero(insert_zero(k, p), p + 1);
            for (const auto& e : scaled) out[base + off[e.row]] += e.value * in[base + off[e.col]];
        }
    }
    for (const auto& field : terms.fields) {
        const int p = field.site - 1;
        const std::size_t s = std::size_t{1} << p;
        const Matrix2 m = coeff * field.matrix;
        for (std::size_t k = 0; k < dim / 2; ++k) {
            const std::size_t i0 = insert_zero(k, p);
            const std::size_t i1 = i0 | s;
            const Complex a0 = in[i0];
            const Complex a1 = in[i1];
            out[i0] += m(0, 0) * a0 + m(0, 1) * a1;
            out[i1] += m(1, 0) * a0 + m(1, 1) * a1;
        }
    }
}

StateVector apply_h(const HamiltonianTerms& terms, const StateVector& state) {
    if (state.num_sites() != terms.L)
        throw std::invalid_argument("apply_h: state has " + std::to_string(state.num_sites()) +
                                    " sites, Hamiltonian has " + std::to_string(terms.L));
    StateVector out(terms.L);
    accumulate_h(terms, state.amplitudes(), out.amplitudes());
    out.set_log_norm_offset(state.log_norm_offset());
    return out;
}

double expectation(const HamiltonianTerms& terms, const StateVector& state) {
    const StateVector h_psi = apply_h(terms, state);
    return inner(state, h_psi).real();
}

double spectral_bound(const HamiltonianTerms& terms) {
    double bound = 0.0;
    for (const auto& b : terms.bonds) {
        Eigen::SelfAdjointEigenSolver<Matrix4> es(b.matrix, Eigen::EigenvaluesOnly);
        bound += es.eigenvalues().cwiseAbs().maxCoeff();
    }
    for (const auto& f : terms.fields) {
        Eigen::SelfAdjointEigenSolver<Matrix2> es(f.matrix, Eigen::EigenvaluesOnly);
        bound += es.eigenvalues().cwiseAbs().maxCoeff();
    }
    return bound;
}

double trace_per_state(const HamiltonianTerms& terms) {
    double mu = 0.0;
    for (const auto& b : terms.bonds) mu += b.matrix.trace().real() / 4.0;
    for (const auto& f : terms.fields) mu += f.matrix.trace().real() / 2.0;
    return mu;
}

}  // namespace trotherm

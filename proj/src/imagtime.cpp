#include "trotherm/imagtime.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace trotherm {

void PropagatorConfig::validate() const {
    if (!(tolerance > 0.0 && tolerance <= 1e-6)) throw std::invalid_argument("tolerance must lie in (0, 1e-6]");
    if (max_order < 8) throw std::invalid_argument("max_order must be >= 8");
    if (!(substep_cap > 0.0)) throw std::invalid_argument("substep_cap must be > 0");
}

BetaGrid::BetaGrid(std::vector<double> checkpoints) : checkpoints_(std::move(checkpoints)) {
    if (checkpoints_.empty()) throw std::invalid_argument("beta grid is empty");
    for (std::size_t i = 0; i < checkpoints_.size(); ++i) {
        if (!(checkpoints_[i] > 0.0) || !std::isfinite(checkpoints_[i]))
            throw std::invalid_argument("beta grid values must be positive and finite");
        if (i > 0 && !(checkpoints_[i] > checkpoints_[i - 1]))
            throw std::invalid_argument("beta grid must be strictly increasing");
    }
}

BetaGrid BetaGrid::uniform(double start, double stop, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("beta grid step must be > 0");
    std::vector<double> v;
    for (long k = 0;; ++k) {
        const double b = start + static_cast<double>(k) * step;
        if (b > stop + 1e-9 * step) break;
        v.push_back(b);
    }
    return BetaGrid(std::move(v));
}

namespace {

double l2(std::span<const Complex> v) {
    double s = 0.0;
    for (const auto& a : v) s += std::norm(a);
    return std::sqrt(s);
}

// One substep: amplitudes <- exp(-dt (H - mu)) amplitudes, then renormalize.
// Returns ln of the norm before renormalization.
double taylor_substep(const HamiltonianTerms& terms, double mu, double dt, std::vector<Complex>& psi,
                      std::vector<Complex>& term, std::vector<Complex>& next, const PropagatorConfig& cfg) {
    term = psi;
    double prev_norm = l2(term);
    double residual = 0.0;
    for (int k = 1; k <= cfg.max_order; ++k) {
        // next = -(dt/k) (H - mu) term
        const double c = -dt / k;
        for (std::size_t i = 0; i < next.size(); ++i) next[i] = (-c * mu) * term[i];
        accumulate_h(terms, term, next, c);
        std::swap(term, next);
        for (std::size_t i = 0; i < psi.size(); ++i) psi[i] += term[i];

        const double term_norm = l2(term);
        const double sum_norm = l2(psi);
        residual = (term_norm + prev_norm) / sum_norm;
        // Two consecutive small terms guard against a lucky near-zero term.
        if (k >= 2 && residual <= cfg.tolerance) {
            for (auto& a : psi) a /= sum_norm;
            return std::log(sum_norm);
        }
        prev_norm = term_norm;
    }
    throw OrderExhaustedError("order exhausted: Taylor series did not converge by order " +
                                  std::to_string(cfg.max_order) + ", residual " + std::to_string(residual),
                              residual);
}

}  // namespace

StateVector evolve(StateVector state, const HamiltonianTerms& terms, double theta, const PropagatorConfig& cfg) {
    cfg.validate();
    if (!(theta >= 0.0) || !std::isfinite(theta)) throw std::invalid_argument("evolve: theta must be >= 0");
    if (state.num_sites() != terms.L)
        throw std::invalid_argument("evolve: state has " + std::to_string(state.num_sites()) +
                                    " sites, Hamiltonian has " + std::to_string(terms.L));
    if (theta == 0.0) return state;

    state.normalize_in_place();
    const double mu = trace_per_state(terms);
    // ||H - mu|| <= ||H|| + |mu|; equal to spectral_bound for traceless models.
    const double bound = spectral_bound(terms) + std::abs(mu);
    const auto substeps = std::max<long>(1, static_cast<long>(std::ceil(theta * bound / cfg.substep_cap)));
    const double dt = theta / static_cast<double>(substeps);

    std::vector<Complex> psi(state.amplitudes().begin(), state.amplitudes().end());
    std::vector<Complex> term(psi.size());
    std::vector<Complex> next(psi.size());
    double log_norm = state.log_norm_offset();
    for (long s = 0; s < substeps; ++s) log_norm += taylor_substep(terms, mu, dt, psi, term, next, cfg) - dt * mu;
    return StateVector(state.num_sites(), std::move(psi), log_norm);
}

std::vector<Checkpoint> evolve_with_checkpoints(StateVector state, const HamiltonianTerms& terms, const BetaGrid& grid,
                                                const HamiltonianTerms& observable, const PropagatorConfig& cfg) {
    std::vector<Checkpoint> out;
    out.reserve(grid.size());
    double applied = 0.0;
    for (double beta : grid.values()) {
        state = evolve(std::move(state), terms, 0.5 * (beta - applied), cfg);
        applied = beta;
        out.push_back({beta, 2.0 * state.log_norm_offset(), expectation(observable, state)});
    }
    return out;
}

}  // namespace trotherm

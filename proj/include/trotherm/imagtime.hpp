#pragma once

#include "trotherm/hamiltonian.hpp"
#include "trotherm/hilbert.hpp"

#include <stdexcept>
#include <vector>

namespace trotherm {

/// Raised when a Taylor substep has not converged by max_order.
class OrderExhaustedError : public std::runtime_error {
public:
    OrderExhaustedError(const std::string& what, double residual) : std::runtime_error(what), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

struct PropagatorConfig {
    double tolerance = 1e-12;  // relative size of the truncated tail per substep
    int max_order = 64;
    double substep_cap = 1.0;  // bound on dtheta * ||H - mu|| per substep

    void validate() const;
};

/// Ascending, strictly positive inverse temperatures.
class BetaGrid {
public:
    explicit BetaGrid(std::vector<double> checkpoints);
    /// start, start+step, ... up to and including `stop` (within 1e-9 * step).
    static BetaGrid uniform(double start, double stop, double step);

    const std::vector<double>& values() const { return checkpoints_; }
    std::size_t size() const { return checkpoints_.size(); }
    double operator[](std::size_t i) const { return checkpoints_[i]; }

    bool operator==(const BetaGrid&) const = default;

private:
    std::vector<double> checkpoints_;
};

/// exp(-theta H)|psi>. The result is unit-normalized and its log_norm_offset
/// carries the accumulated scale, so exp(offset) * amplitudes is the exact
/// (unnormalized) image.
StateVector evolve(StateVector state, const HamiltonianTerms& terms, double theta, const PropagatorConfig& cfg = {});

struct Checkpoint {
    double beta;
    double log_sq_norm;  // ln <psi|exp(-beta H)|psi> relative to the input offset convention
    double obs_value;    // <phi|O|phi>/<phi|phi>, phi = exp(-beta H/2)|psi>

    bool operator==(const Checkpoint&) const = default;
};

/// Sweeps imaginary time once, stopping at beta/2 for every checkpoint.
std::vector<Checkpoint> evolve_with_checkpoints(StateVector state, const HamiltonianTerms& terms, const BetaGrid& grid,
                                                const HamiltonianTerms& observable, const PropagatorConfig& cfg = {});

}  // namespace trotherm

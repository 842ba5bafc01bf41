#pragma once

#include "trotherm/hilbert.hpp"
#include "trotherm/imagtime.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace trotherm {

/// One sampled initial state after its imaginary-time sweep.
struct SampleRecord {
    std::uint64_t sample_index = 0;
    std::vector<Checkpoint> checkpoints;  // same beta grid for every record of a run
    double init_entropy = 0.0;            // half-chain entanglement entropy of the initial state, nats

    bool operator==(const SampleRecord&) const = default;
};

struct EfficiencyReport {
    double eta = 1.0;
    double entropy_I = 0.0;
    std::size_t M = 0;
    double bootstrap_sigma = 0.0;
    int n_resamples = 0;
};

/// Trace prefactor for unit-normalized random state classes: Tr O = 2^L * mean <psi|O|psi>.
double trace_prefactor(int L);

/// Position of `beta` on the records' shared grid; throws if absent.
std::size_t checkpoint_slot(std::span<const SampleRecord> records, double beta);

/// exp(x_m - logsumexp(x)).
std::vector<double> normalized_weights(std::span<const double> log_values);

std::vector<double> weights(std::span<const SampleRecord> records, double beta);

/// -sum w ln w with 0 ln 0 = 0.
double information_entropy(std::span<const double> weights);

/// I and eta = e^I / M. The bootstrap resamples the weights with replacement and
/// renormalizes, which is the same as recomputing from the resampled log-norms.
EfficiencyReport efficiency(std::span<const double> weights, int n_resamples, std::uint64_t seed);

/// Efficiency straight from the records' log-norms at `beta`.
EfficiencyReport efficiency(std::span<const SampleRecord> records, double beta, int n_resamples, std::uint64_t seed);

double weighted_expectation(std::span<const SampleRecord> records, double beta);
double simple_expectation(std::span<const SampleRecord> records, double beta);

/// Von Neumann entropy across the cut after site floor(L/2).
double entanglement_entropy(const StateVector& state);

/// Statistic evaluated on a resample given as indices into the original items.
using ResampleStatistic = std::function<double(std::span<const std::size_t>)>;

/// Standard deviations of several statistics over the same bootstrap resamples.
std::vector<double> bootstrap_sigmas(std::size_t n_items, std::span<const ResampleStatistic> statistics,
                                     int n_resamples, std::uint64_t seed);

double bootstrap_sigma(std::size_t n_items, const ResampleStatistic& statistic, int n_resamples, std::uint64_t seed);

/// Convenience form over plain values with a statistic on the resampled values.
double bootstrap_sigma(std::span<const double> values, const std::function<double(std::span<const double>)>& statistic,
                       int n_resamples, std::uint64_t seed);

}  // namespace trotherm

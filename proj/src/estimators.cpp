#include "trotherm/estimators.hpp"

#include "trotherm/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace trotherm {

double trace_prefactor(int L) { return std::ldexp(1.0, L); }

std::size_t checkpoint_slot(std::span<const SampleRecord> records, double beta) {
    if (records.empty()) throw std::invalid_argument("no sample records");
    const auto& cps = records.front().checkpoints;
    for (std::size_t i = 0; i < cps.size(); ++i)
        if (std::abs(cps[i].beta - beta) <= 1e-12 * std::max(1.0, std::abs(beta))) return i;
    throw std::invalid_argument("beta " + std::to_string(beta) + " is not on the checkpoint grid");
}

std::vector<double> normalized_weights(std::span<const double> log_values) {
    if (log_values.empty()) throw std::invalid_argument("normalized_weights: empty input");
    const double top = *std::max_element(log_values.begin(), log_values.end());
    if (!std::isfinite(top)) throw std::domain_error("normalized_weights: non-finite log value");
    double sum = 0.0;
    for (double x : log_values) sum += std::exp(x - top);
    const double lse = top + std::log(sum);
    std::vector<double> w(log_values.size());
    for (std::size_t m = 0; m < w.size(); ++m) w[m] = std::exp(log_values[m] - lse);
    return w;
}

namespace {

std::vector<double> log_norms_at(std::span<const SampleRecord> records, std::size_t slot) {
    std::vector<double> x(records.size());
    for (std::size_t m = 0; m < records.size(); ++m) {
        if (records[m].checkpoints.size() <= slot) throw std::invalid_argument("records do not share a beta grid");
        x[m] = records[m].checkpoints[slot].log_sq_norm;
    }
    return x;
}

double eta_of(std::span<const double> w) {
    const double M = static_cast<double>(w.size());
    const double I = std::clamp(information_entropy(w), 0.0, std::log(M));
    return std::exp(I) / M;
}

}  // namespace

std::vector<double> weights(std::span<const SampleRecord> records, double beta) {
    const std::size_t slot = checkpoint_slot(records, beta);
    const auto x = log_norms_at(records, slot);
    return normalized_weights(x);
}

double information_entropy(std::span<const double> w) {
    double I = 0.0;
    for (double x : w)
        if (x > 0.0) I -= x * std::log(x);
    return I;
}

EfficiencyReport efficiency(std::span<const double> w, int n_resamples, std::uint64_t seed) {
    if (w.empty()) throw std::invalid_argument("efficiency: no weights");
    EfficiencyReport r;
    r.M = w.size();
    r.entropy_I = std::clamp(information_entropy(w), 0.0, std::log(static_cast<double>(r.M)));
    r.eta = std::exp(r.entropy_I) / static_cast<double>(r.M);
    r.n_resamples = n_resamples;
    if (n_resamples >= 2) {
        std::vector<double> scratch(w.size());
        r.bootstrap_sigma = bootstrap_sigma(
            w.size(),
            [&](std::span<const std::size_t> idx) {
                double total = 0.0;
                for (std::size_t k = 0; k < idx.size(); ++k) total += (scratch[k] = w[idx[k]]);
                for (auto& x : scratch) x /= total;
                return eta_of(scratch);
            },
            n_resamples, seed);
    }
    return r;
}

EfficiencyReport efficiency(std::span<const SampleRecord> records, double beta, int n_resamples, std::uint64_t seed) {
    const std::size_t slot = checkpoint_slot(records, beta);
    const auto x = log_norms_at(records, slot);
    EfficiencyReport r = efficiency(normalized_weights(x), 0, seed);
    r.n_resamples = n_resamples;
    if (n_resamples >= 2) {
        std::vector<double> scratch(x.size());
        r.bootstrap_sigma = bootstrap_sigma(
            x.size(),
            [&](std::span<const std::size_t> idx) {
                for (std::size_t k = 0; k < idx.size(); ++k) scratch[k] = x[idx[k]];
                return eta_of(normalized_weights(scratch));
            },
            n_resamples, seed);
    }
    return r;
}

double weighted_expectation(std::span<const SampleRecord> records, double beta) {
    const std::size_t slot = checkpoint_slot(records, beta);
    const auto w = normalized_weights(log_norms_at(records, slot));
    double acc = 0.0;
    for (std::size_t m = 0; m < records.size(); ++m) acc += w[m] * records[m].checkpoints[slot].obs_value;
    return acc;
}

double simple_expectation(std::span<const SampleRecord> records, double beta) {
    const std::size_t slot = checkpoint_slot(records, beta);
    double acc = 0.0;
    for (const auto& r : records) acc += r.checkpoints.at(slot).obs_value;
    return acc / static_cast<double>(records.size());
}

double entanglement_entropy(const StateVector& state) {
    const auto lambda = schmidt_spectrum(state, SiteIndex(state.num_sites() / 2));
    double S = 0.0;
    for (double l : lambda)
        if (l > 0.0) S -= l * std::log(l);
    return S;
}

std::vector<double> bootstrap_sigmas(std::size_t n_items, std::span<const ResampleStatistic> statistics,
                                     int n_resamples, std::uint64_t seed) {
    if (n_items == 0) throw std::invalid_argument("bootstrap: empty record list");
    if (n_resamples < 2) throw std::invalid_argument("bootstrap: n_resamples must be >= 2");
    const std::size_t n_stats = statistics.size();
    // Welford accumulation per statistic, resamples in fixed order.
    std::vector<double> mean(n_stats, 0.0), m2(n_stats, 0.0);
    std::vector<std::size_t> idx(n_items);
    for (int r = 0; r < n_resamples; ++r) {
        CounterRng rng(derive_key(seed, static_cast<std::uint64_t>(r)));
        for (auto& i : idx) i = rng.below(n_items);
        for (std::size_t s = 0; s < n_stats; ++s) {
            const double v = statistics[s](idx);
            const double d = v - mean[s];
            mean[s] += d / (r + 1);
            m2[s] += d * (v - mean[s]);
        }
    }
    std::vector<double> sigma(n_stats);
    for (std::size_t s = 0; s < n_stats; ++s) sigma[s] = std::sqrt(std::max(0.0, m2[s] / (n_resamples - 1)));
    return sigma;
}

double bootstrap_sigma(std::size_t n_items, const ResampleStatistic& statistic, int n_resamples, std::uint64_t seed) {
    return bootstrap_sigmas(n_items, std::span(&statistic, 1), n_resamples, seed).front();
}

double bootstrap_sigma(std::span<const double> values, const std::function<double(std::span<const double>)>& statistic,
                       int n_resamples, std::uint64_t seed) {
    std::vector<double> scratch(values.size());
    return bootstrap_sigma(
        values.size(),
        [&](std::span<const std::size_t> idx) {
            for (std::size_t k = 0; k < idx.size(); ++k) scratch[k] = values[idx[k]];
            return statistic(scratch);
        },
        n_resamples, seed);
}

}  // namespace trotherm

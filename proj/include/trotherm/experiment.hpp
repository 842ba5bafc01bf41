#pragma once

#include "trotherm/config.hpp"
#include "trotherm/estimators.hpp"
#include "trotherm/state_prep.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace trotherm {

/// Per-(sampler, L) inputs shared read-only by every sample.
struct SamplePlan {
    int L = 0;
    InitClass init_class = InitClass::Haar;
    HamiltonianTerms system;
    std::optional<TrotterCircuit> circuit;
    BetaGrid grid{std::vector<double>{1.0}};
    PropagatorConfig propagator;
    std::uint64_t master_seed = 0;
};

SamplePlan make_plan(const RunConfig& cfg, const Sampler& sampler, int L);

/// initial state -> optional circuit -> entropy -> checkpointed sweep.
SampleRecord run_sample(const SamplePlan& plan, std::uint64_t sample_index);

/// Runs samples [0, M) on `threads` workers; output order is by sample index.
std::vector<SampleRecord> run_samples(const SamplePlan& plan, std::size_t M, int threads);

struct SummaryRow {
    int L = 0;
    double beta = 0.0;
    std::string init_class;  // sampler label
    double eta = 0.0;
    double eta_sigma = 0.0;
    double S_ini_mean = 0.0;
    double S_ini_sigma = 0.0;
    double energy_weighted = 0.0;
    double energy_weighted_sigma = 0.0;
    double energy_simple = 0.0;
    double energy_simple_sigma = 0.0;
    std::size_t M = 0;
    std::uint64_t master_seed = 0;
};

struct SampleSet {
    std::string label;
    int L = 0;
    std::vector<SampleRecord> records;
};

struct RunResult {
    std::vector<SummaryRow> summary;
    std::vector<SampleSet> samples;
};

/// Per-beta aggregates for one sample set. Bootstrap seeds derive from
/// (master_seed, label, L, beta slot) so the rows are reproducible.
std::vector<SummaryRow> aggregate(const std::vector<SampleRecord>& records, const std::string& label, int L,
                                  std::uint64_t master_seed, int n_resamples);

RunResult run_experiment(const RunConfig& cfg, std::ostream* log = nullptr);

inline constexpr const char* kSummaryHeader =
    "L,beta,init_class,eta,eta_sigma,S_ini_mean,S_ini_sigma,energy_weighted,energy_weighted_sigma,energy_simple,"
    "energy_simple_sigma,M,master_seed";
inline constexpr const char* kSamplesHeader = "L,sample_index,beta,log_sq_norm,obs_value,init_entropy";

std::string summary_csv(const std::vector<SummaryRow>& rows);
/// Rows of every set with the given label, ordered by (L, sample_index, beta).
std::string samples_csv(const std::vector<SampleSet>& sets, const std::string& label);

/// Writes summary.csv, samples_<label>.csv per sampler, and run.json into `dir`.
void emit_results(const RunResult& result, const RunConfig& cfg, const std::filesystem::path& dir);

}  // namespace trotherm

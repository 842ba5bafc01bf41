#include "trotherm/experiment.hpp"

#include "trotherm/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <numeric>
#include <ostream>
#include <thread>

namespace trotherm {

namespace {

std::uint64_t label_hash(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a
    for (unsigned char c : s) h = (h ^ c) * 0x100000001B3ULL;
    return h;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

SamplePlan make_plan(const RunConfig& cfg, const Sampler& sampler, int L) {
    SamplePlan plan;
    plan.L = L;
    plan.init_class = sampler.init_class;
    ModelSpec sys = cfg.system;
    sys.L = L;
    plan.system = build_hamiltonian(sys);
    if (sampler.init_class == InitClass::TrotterRPPS) {
        if (!sampler.trotter) throw ConfigError({"sampler." + sampler.label + ".trotter: required"});
        ModelSpec t = *sampler.trotter;
        t.L = L;
        plan.circuit = build_trotter_circuit(t, sampler.tau, sampler.n_reps.resolve(L));
    }
    plan.grid = cfg.grid();
    plan.propagator = cfg.propagator;
    plan.master_seed = cfg.master_seed;
    return plan;
}

SampleRecord run_sample(const SamplePlan& plan, std::uint64_t sample_index) {
    const SampleSeed seed{plan.master_seed, sample_index};
    StateVector psi = plan.init_class == InitClass::Haar ? sample_haar(plan.L, seed) : sample_rpps(plan.L, seed);
    if (plan.circuit) psi = apply_circuit(std::move(psi), *plan.circuit);
    psi.set_log_norm_offset(0.0);

    SampleRecord rec;
    rec.sample_index = sample_index;
    rec.init_entropy = entanglement_entropy(psi);
    rec.checkpoints = evolve_with_checkpoints(std::move(psi), plan.system, plan.grid, plan.system, plan.propagator);
    return rec;
}

std::vector<SampleRecord> run_samples(const SamplePlan& plan, std::size_t M, int threads) {
    std::vector<SampleRecord> out(M);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t m; (m = next.fetch_add(1)) < M;) {
            try {
                out[m] = run_sample(plan, m);
            } catch (const std::exception& e) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    try {
                        throw std::runtime_error("sample " + std::to_string(m) + " (L = " + std::to_string(plan.L) +
                                                 ") failed: " + e.what());
                    } catch (...) {
                        failure = std::current_exception();
                    }
                }
                next = M;
            }
        }
    };
    const int n = std::max(1, std::min<int>(threads, static_cast<int>(M)));
    if (n == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

std::vector<SummaryRow> aggregate(const std::vector<SampleRecord>& records, const std::string& label, int L,
                                  std::uint64_t master_seed, int n_resamples) {
    if (records.empty()) return {};
    const std::size_t M = records.size();
    const std::uint64_t base = derive_key(derive_key(master_seed, label_hash(label)), static_cast<std::uint64_t>(L));

    std::vector<double> entropy(M);
    for (std::size_t m = 0; m < M; ++m) entropy[m] = records[m].init_entropy;
    const double S_mean = std::accumulate(entropy.begin(), entropy.end(), 0.0) / static_cast<double>(M);
    double S_sigma = 0.0;
    if (n_resamples >= 2)
        S_sigma = bootstrap_sigma(
            entropy,
            [](std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); },
            n_resamples, derive_key(base, 0xE7));

    std::vector<SummaryRow> rows;
    const auto& cps = records.front().checkpoints;
    std::vector<double> logs(M), obs(M), scratch_log(M), scratch_obs(M);
    for (std::size_t slot = 0; slot < cps.size(); ++slot) {
        const double beta = cps[slot].beta;
        for (std::size_t m = 0; m < M; ++m) {
            logs[m] = records[m].checkpoints.at(slot).log_sq_norm;
            obs[m] = records[m].checkpoints.at(slot).obs_value;
        }
        SummaryRow row;
        row.L = L;
        row.beta = beta;
        row.init_class = label;
        row.M = M;
        row.master_seed = master_seed;
        row.S_ini_mean = S_mean;
        row.S_ini_sigma = S_sigma;
        const EfficiencyReport eff = efficiency(normalized_weights(logs), 0, 0);
        row.eta = eff.eta;
        row.energy_weighted = weighted_expectation(records, beta);
        row.energy_simple = simple_expectation(records, beta);

        if (n_resamples >= 2) {
            // One shared draw per resample; weights are recomputed from the resampled log-norms.
            std::vector<double> w;
            auto load = [&](std::span<const std::size_t> idx) {
                for (std::size_t k = 0; k < idx.size(); ++k) {
                    scratch_log[k] = logs[idx[k]];
                    scratch_obs[k] = obs[idx[k]];
                }
                w = normalized_weights(scratch_log);
            };
            const ResampleStatistic stats[] = {
                [&](std::span<const std::size_t> idx) {
                    load(idx);
                    return efficiency(w, 0, 0).eta;
                },
                [&](std::span<const std::size_t>) {
                    double acc = 0.0;
                    for (std::size_t k = 0; k < M; ++k) acc += w[k] * scratch_obs[k];
                    return acc;
                },
                [&](std::span<const std::size_t>) {
                    return std::accumulate(scratch_obs.begin(), scratch_obs.end(), 0.0) / static_cast<double>(M);
                },
            };
            const auto sig = bootstrap_sigmas(M, stats, n_resamples, derive_key(base, slot));
            row.eta_sigma = sig[0];
            row.energy_weighted_sigma = sig[1];
            row.energy_simple_sigma = sig[2];
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

RunResult run_experiment(const RunConfig& cfg, std::ostream* log) {
    cfg.validate();
    const int threads = resolve_threads(cfg);
    const int max_L = *std::max_element(cfg.L_list.begin(), cfg.L_list.end());
    if (log && max_L > kDeskScaleMaxL)
        *log << "warning: full-scale run up to L = " << max_L << "; expect hours of runtime and 2^" << max_L
             << " amplitudes per worker\n";

    std::vector<int> Ls = cfg.L_list;
    std::sort(Ls.begin(), Ls.end());
    Ls.erase(std::unique(Ls.begin(), Ls.end()), Ls.end());

    RunResult result;
    for (int L : Ls) {
        for (const auto& sampler : cfg.samplers) {
            if (log) *log << "L = " << L << ", " << sampler.label << ": " << cfg.M << " samples on " << threads << " thread(s)\n";
            const SamplePlan plan = make_plan(cfg, sampler, L);
            auto records = run_samples(plan, cfg.M, threads);
            auto rows = aggregate(records, sampler.label, L, cfg.master_seed, cfg.n_resamples);
            result.summary.insert(result.summary.end(), rows.begin(), rows.end());
            result.samples.push_back({sampler.label, L, std::move(records)});
        }
    }
    return result;
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
    std::string out = std::string(kSummaryHeader) + "\n";
    for (const auto& r : rows) {
        out += std::to_string(r.L) + "," + num(r.beta) + "," + r.init_class + "," + num(r.eta) + "," +
               num(r.eta_sigma) + "," + num(r.S_ini_mean) + "," + num(r.S_ini_sigma) + "," + num(r.energy_weighted) +
               "," + num(r.energy_weighted_sigma) + "," + num(r.energy_simple) + "," + num(r.energy_simple_sigma) +
               "," + std::to_string(r.M) + "," + std::to_string(r.master_seed) + "\n";
    }
    return out;
}

std::string samples_csv(const std::vector<SampleSet>& sets, const std::string& label) {
    std::vector<const SampleSet*> chosen;
    for (const auto& s : sets)
        if (s.label == label) chosen.push_back(&s);
    std::stable_sort(chosen.begin(), chosen.end(), [](auto* a, auto* b) { return a->L < b->L; });

    std::string out = std::string(kSamplesHeader) + "\n";
    for (const auto* set : chosen) {
        std::vector<const SampleRecord*> recs;
        for (const auto& r : set->records) recs.push_back(&r);
        std::stable_sort(recs.begin(), recs.end(), [](auto* a, auto* b) { return a->sample_index < b->sample_index; });
        for (const auto* r : recs)
            for (const auto& c : r->checkpoints)
                out += std::to_string(set->L) + "," + std::to_string(r->sample_index) + "," + num(c.beta) + "," +
                       num(c.log_sq_norm) + "," + num(c.obs_value) + "," + num(r->init_entropy) + "\n";
    }
    return out;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << content;
    out.close();
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace

void emit_results(const RunResult& result, const RunConfig& cfg, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory '" + dir.string() + "': " + ec.message());
    write_file(dir / "summary.csv", summary_csv(result.summary));
    for (const auto& s : cfg.samplers) write_file(dir / ("samples_" + s.label + ".csv"), samples_csv(result.samples, s.label));
    write_file(dir / "run.json", to_json(cfg));
}

}  // namespace trotherm

#pragma once

#include "trotherm/hamiltonian.hpp"
#include "trotherm/imagtime.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace trotherm {

/// Config errors, one message per offending field.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const { return problems_; }

private:
    std::vector<std::string> problems_;
};

enum class InitClass { Haar, RPPS, TrotterRPPS };

std::string_view to_string(InitClass c);
InitClass parse_init_class(std::string_view name);

/// Number of Trotter steps: 2L or a fixed count.
struct NRepsRule {
    std::optional<int> explicit_n;  // empty means 2L

    int resolve(int L) const { return explicit_n ? *explicit_n : 2 * L; }
    std::string str() const { return explicit_n ? std::to_string(*explicit_n) : "2L"; }
    static NRepsRule parse(std::string_view text);

    bool operator==(const NRepsRule&) const = default;
};

/// One initial-state class of a run. The label names its rows in the outputs.
struct Sampler {
    std::string label;
    InitClass init_class = InitClass::Haar;
    std::optional<ModelSpec> trotter;
    double tau = 10.0;
    NRepsRule n_reps;

    bool operator==(const Sampler&) const = default;
};

/// Largest L accepted without `full_scale`.
inline constexpr int kDeskScaleMaxL = 14;

struct RunConfig {
    ModelSpec system;  // system.L is replaced by each entry of L_list
    std::vector<Sampler> samplers;
    std::vector<double> beta_grid{3.0};
    std::size_t M = 1024;
    std::uint64_t master_seed = 0;
    int n_resamples = 4000;
    std::vector<int> L_list{6, 8, 10, 12};
    std::string output_path = "out";
    std::optional<int> threads;
    bool full_scale = false;
    PropagatorConfig propagator;

    bool operator==(const RunConfig&) const;

    /// Throws ConfigError listing every violated field.
    void validate() const;
    BetaGrid grid() const { return BetaGrid(beta_grid); }
};

/// Parses the flat `key = value` config format. Unknown keys are rejected.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);
std::string to_config_text(const RunConfig& cfg);

std::string to_json(const RunConfig& cfg);
RunConfig config_from_json(std::string_view json);

std::vector<std::string> preset_names();
RunConfig preset(std::string_view name);

/// Thread count from cfg, then TROTHERM_THREADS, then hardware concurrency.
int resolve_threads(const RunConfig& cfg);

}  // namespace trotherm

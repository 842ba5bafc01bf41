#include "trotherm/config.hpp"
#include "trotherm/experiment.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace trotherm;

namespace {

RunConfig small_config() {
    RunConfig cfg = preset("fig2");
    cfg.L_list = {4, 6};
    cfg.M = 12;
    cfg.n_resamples = 50;
    cfg.beta_grid = {0.5, 1.0};
    cfg.master_seed = 11;
    cfg.threads = 1;
    return cfg;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const Sampler& by_label(const RunConfig& cfg, const std::string& label) {
    for (const auto& s : cfg.samplers)
        if (s.label == label) return s;
    throw std::out_of_range(label);
}

}  // namespace

TEST(Preset, ReferenceParameters) {
    const auto fig1 = preset("fig1");
    EXPECT_EQ(fig1.system.kind, ModelKind::Heisenberg);
    EXPECT_EQ(by_label(fig1, "trotter_xxz").trotter->delta, 5.0);
    EXPECT_EQ(by_label(fig1, "trotter_xxz").trotter->h_stag, 0.0);
    EXPECT_EQ(by_label(fig1, "trotter_xxz_staggered").trotter->delta, 5.0);
    EXPECT_EQ(by_label(fig1, "trotter_xxz_staggered").trotter->h_stag, 1.0);
    EXPECT_EQ(fig1.beta_grid, std::vector<double>{3.0});
    EXPECT_EQ(fig1.M, 1024u);
    EXPECT_EQ(fig1.n_resamples, 4000);

    const auto fig2 = preset("fig2");
    for (const auto& s : fig2.samplers) {
        EXPECT_FALSE(s.n_reps.explicit_n.has_value());
        EXPECT_EQ(s.n_reps.resolve(10), 20);
        EXPECT_EQ(s.tau, 10.0);
    }
    const auto fig3 = preset("fig3");
    EXPECT_EQ(by_label(fig3, "trotter_mixed").trotter->h_x, 1.0);
    EXPECT_EQ(by_label(fig3, "trotter_mixed").trotter->h_z, 1.0);
    EXPECT_EQ(by_label(fig3, "trotter_transverse").trotter->h_x, 1.0);
    EXPECT_EQ(fig3.beta_grid.size(), 30u);

    const auto fig4 = preset("fig4");
    EXPECT_EQ(fig4.system.kind, ModelKind::Heisenberg);
    EXPECT_EQ(by_label(fig4, "trotter_mixed").trotter->kind, ModelKind::MixedIsing);
    EXPECT_EQ(fig4.L_list, (std::vector<int>{10, 12}));

    const auto ising = preset("ising");
    EXPECT_EQ(by_label(ising, "trotter_mixed").trotter->h_x, 1.5);
    EXPECT_EQ(by_label(ising, "trotter_mixed").trotter->h_z, 0.5);

    for (const auto& name : preset_names()) EXPECT_NO_THROW(preset(name).validate()) << name;
    EXPECT_THROW(preset("fig9"), ConfigError);
}

TEST(Config, TextRoundTrip) {
    for (const auto& name : preset_names()) {
        const auto cfg = preset(name);
        EXPECT_EQ(parse_config(to_config_text(cfg)), cfg) << name;
    }
}

TEST(Config, JsonRoundTrip) {
    auto cfg = small_config();
    cfg.threads = 3;
    cfg.samplers[1].n_reps.explicit_n = 7;
    EXPECT_EQ(config_from_json(to_json(cfg)), cfg);
}

TEST(Config, ParsesCommentsAndLists) {
    const auto cfg = parse_config(R"(
# Heisenberg system, one Trotter sampler
system.kind = Heisenberg
sampler.mixed.init_class = TrotterRPPS
sampler.mixed.trotter.kind = MixedIsing   # fields below
sampler.mixed.trotter.h_x = 1
sampler.mixed.trotter.h_z = 1
sampler.mixed.n_reps = 5
beta_grid = 0.5, 1.5
L_list = 4,6
M = 8
)");
    ASSERT_EQ(cfg.samplers.size(), 1u);
    EXPECT_EQ(cfg.samplers[0].n_reps.resolve(4), 5);
    EXPECT_EQ(cfg.beta_grid, (std::vector<double>{0.5, 1.5}));
    EXPECT_EQ(cfg.L_list, (std::vector<int>{4, 6}));
    EXPECT_NO_THROW(cfg.validate());
}

TEST(Config, RejectsUnknownKeysWithNames) {
    try {
        parse_config("system.kind = Heisenberg\nsystem.gamma = 2\nbogus = 1\nM = x\n");
        FAIL();
    } catch (const ConfigError& e) {
        ASSERT_EQ(e.problems().size(), 3u);
        EXPECT_NE(e.problems()[0].find("system.gamma"), std::string::npos);
        EXPECT_NE(e.problems()[1].find("bogus"), std::string::npos);
        EXPECT_NE(e.problems()[2].find("M"), std::string::npos);
    }
}

TEST(Config, ValidationNamesFields) {
    RunConfig cfg = small_config();
    cfg.samplers.push_back({"broken", InitClass::TrotterRPPS, std::nullopt, 10.0, {}});
    cfg.M = 0;
    cfg.L_list = {1, 16};
    cfg.beta_grid = {1.0, 0.5};
    try {
        cfg.validate();
        FAIL();
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        for (const char* field : {"sampler.broken.trotter", "M:", "L_list: every L", "needs full_scale", "beta_grid"})
            EXPECT_NE(msg.find(field), std::string::npos) << field << " in " << msg;
    }
    cfg = small_config();
    cfg.L_list = {16};
    cfg.full_scale = true;
    EXPECT_NO_THROW(cfg.validate());
}

TEST(RunExperiment, SingleSampleIsIdeallyEfficient) {
    RunConfig cfg = small_config();
    cfg.M = 1;
    cfg.n_resamples = 10;
    const auto result = run_experiment(cfg);
    for (const auto& row : result.summary) {
        EXPECT_EQ(row.eta, 1.0);
        EXPECT_EQ(row.energy_weighted, row.energy_simple);
    }
}

TEST(RunExperiment, RowCountAndOrdering) {
    const auto cfg = small_config();
    const auto result = run_experiment(cfg);
    EXPECT_EQ(result.summary.size(), cfg.L_list.size() * cfg.beta_grid.size() * cfg.samplers.size());
    const auto csv = summary_csv(result.summary);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), static_cast<long>(result.summary.size() + 1));
    for (const auto& row : result.summary) {
        EXPECT_GE(row.eta, 1.0 / cfg.M);
        EXPECT_LE(row.eta, 1.0);
        EXPECT_GT(row.eta_sigma, 0.0);
        if (row.init_class == "haar") EXPECT_GT(row.S_ini_mean, 0.0);
    }
}

TEST(RunExperiment, HeaderOnlyWhenEmpty) {
    EXPECT_EQ(summary_csv({}), std::string(kSummaryHeader) + "\n");
    EXPECT_EQ(samples_csv({}, "haar"), std::string(kSamplesHeader) + "\n");
}

TEST(RunExperiment, HaarPlanHasNoCircuit) {
    const auto cfg = small_config();
    EXPECT_FALSE(make_plan(cfg, by_label(cfg, "haar"), 6).circuit.has_value());
    const auto plan = make_plan(cfg, by_label(cfg, "trotter_mixed"), 6);
    ASSERT_TRUE(plan.circuit.has_value());
    EXPECT_EQ(plan.circuit->n_reps, 12);
    EXPECT_EQ(plan.circuit->tau, 10.0);
}

TEST(RunExperiment, ThreadCountDoesNotChangeOutput) {
    RunConfig one = small_config();
    RunConfig many = one;
    many.threads = 4;
    const auto a = run_experiment(one);
    const auto b = run_experiment(many);
    for (const auto& s : one.samplers) EXPECT_EQ(samples_csv(a.samples, s.label), samples_csv(b.samples, s.label));
    EXPECT_EQ(summary_csv(a.summary), summary_csv(b.summary));
}

TEST(RunExperiment, FailureNamesTheSample) {
    RunConfig cfg = small_config();
    cfg.system.J = 1e6;  // forces order exhaustion with a tiny max_order and loose cap
    cfg.propagator = {1e-12, 8, 1e3};
    try {
        run_experiment(cfg);
        FAIL();
    } catch (const std::runtime_error& e) {
        EXPECT_NE(std::string(e.what()).find("sample 0"), std::string::npos) << e.what();
        EXPECT_NE(std::string(e.what()).find("order exhausted"), std::string::npos) << e.what();
    }
}

TEST(EmitResults, WritesAllFiles) {
    const auto cfg = small_config();
    const auto dir = std::filesystem::temp_directory_path() / "trotherm_emit_test";
    std::filesystem::remove_all(dir);
    const auto result = run_experiment(cfg);
    emit_results(result, cfg, dir);
    EXPECT_EQ(slurp(dir / "summary.csv"), summary_csv(result.summary));
    for (const auto& s : cfg.samplers) {
        const auto text = slurp(dir / ("samples_" + s.label + ".csv"));
        EXPECT_EQ(text.substr(0, text.find('\n')), kSamplesHeader);
        // rows = sum over L of M * |beta grid|
        EXPECT_EQ(std::count(text.begin(), text.end(), '\n'),
                  static_cast<long>(1 + cfg.L_list.size() * cfg.M * cfg.beta_grid.size()));
    }
    EXPECT_EQ(config_from_json(slurp(dir / "run.json")), cfg);
    std::filesystem::remove_all(dir);
}

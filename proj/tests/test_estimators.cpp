#include "test_support.hpp"

#include "trotherm/estimators.hpp"
#include "trotherm/oracle.hpp"
#include "trotherm/rng.hpp"
#include "trotherm/state_prep.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

using namespace trotherm;
namespace tt = trotherm::testing;

namespace {

std::vector<SampleRecord> records_from(const std::vector<double>& logs, const std::vector<double>& obs, double beta = 1.0) {
    std::vector<SampleRecord> r(logs.size());
    for (std::size_t m = 0; m < logs.size(); ++m) {
        r[m].sample_index = m;
        r[m].checkpoints = {{beta, logs[m], obs[m]}};
    }
    return r;
}

std::vector<double> random_logs(std::size_t M, double spread, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(-spread / 2, spread / 2);
    std::vector<double> x(M);
    for (auto& v : x) v = u(gen);
    return x;
}

}  // namespace

TEST(Weights, EqualLogNormsGiveUniformWeights) {
    const auto recs = records_from({4.0, 4.0, 4.0, 4.0, 4.0}, {0, 0, 0, 0, 0});
    for (double w : weights(recs, 1.0)) EXPECT_NEAR(w, 0.2, 1e-15);
}

TEST(Weights, DirectRatio) {
    const auto w = weights(records_from({std::log(3.0), std::log(1.0)}, {0, 0}), 1.0);
    EXPECT_NEAR(w[0], 0.75, 1e-15);
    EXPECT_NEAR(w[1], 0.25, 1e-15);
}

TEST(Weights, BetaMustBeOnGrid) {
    const auto recs = records_from({0.0, 1.0}, {0, 0}, 0.5);
    EXPECT_THROW(weights(recs, 0.6), std::invalid_argument);
    EXPECT_THROW(weights(std::vector<SampleRecord>{}, 0.5), std::invalid_argument);
}

TEST(Weights, SurviveHugeSpreads) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto logs = random_logs(64, 1500.0, seed);
        logs[3] = 720.0;
        logs[5] = -720.0;
        const auto w = normalized_weights(logs);
        double total = 0.0;
        for (double x : w) {
            EXPECT_GE(x, 0.0);
            EXPECT_TRUE(std::isfinite(x));
            total += x;
        }
        EXPECT_NEAR(total, 1.0, 1e-12);
        EXPECT_GT(w[3], 0.0);
    }
}

TEST(Weights, MatchDenseQuadraticForms) {
    const int L = 6;
    const double beta = 2.0;
    const auto H = build_hamiltonian({ModelKind::Heisenberg, L, 1.0});
    const auto spec = oracle::diagonalize(oracle::dense_build(H));
    std::vector<SampleRecord> recs;
    std::vector<double> ref;
    for (std::uint64_t m = 0; m < 16; ++m) {
        const auto psi = sample_haar(L, {5, m});
        recs.push_back({m, evolve_with_checkpoints(psi, H, BetaGrid({beta}), H), 0.0});
        ref.push_back(std::exp(oracle::exact_log_quadratic(spec, psi, beta)));
    }
    const double total = std::accumulate(ref.begin(), ref.end(), 0.0);
    const auto w = weights(recs, beta);
    for (std::size_t m = 0; m < w.size(); ++m) EXPECT_NEAR(w[m], ref[m] / total, 1e-9);
}

TEST(Efficiency, UniformWeights) {
    for (std::size_t M : {1u, 2u, 7u, 1024u}) {
        const std::vector<double> w(M, 1.0 / M);
        const auto r = efficiency(w, 0, 0);
        EXPECT_NEAR(r.eta, 1.0, 1e-12);
        EXPECT_NEAR(r.entropy_I, std::log(double(M)), 1e-12);
    }
}

TEST(Efficiency, SingleDominantSample) {
    std::vector<double> w(8, 0.0);
    w[2] = 1.0;
    const auto r = efficiency(w, 100, 3);
    EXPECT_NEAR(r.eta, 1.0 / 8, 1e-15);
    EXPECT_EQ(r.entropy_I, 0.0);
}

TEST(Efficiency, BoundsAndEntropyRelation) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const std::size_t M = 2 + seed * 7;
        const auto w = normalized_weights(random_logs(M, 0.5 + seed, seed));
        const auto r = efficiency(w, 0, 0);
        EXPECT_GE(r.eta, 1.0 / M - 1e-12);
        EXPECT_LE(r.eta, 1.0 + 1e-12);
        EXPECT_NEAR(r.entropy_I, std::log(r.eta * M), 1e-12);
        EXPECT_LT(r.eta, 1.0);  // weights are not uniform
    }
}

TEST(Efficiency, RecordFormAgreesWithWeightForm) {
    const auto logs = random_logs(200, 6.0, 9);
    const auto recs = records_from(logs, std::vector<double>(200, 0.0));
    const auto from_records = efficiency(recs, 1.0, 300, 4);
    const auto from_weights = efficiency(normalized_weights(logs), 300, 4);
    EXPECT_NEAR(from_records.eta, from_weights.eta, 1e-14);
    EXPECT_NEAR(from_records.bootstrap_sigma, from_weights.bootstrap_sigma, 1e-12);
    EXPECT_GT(from_records.bootstrap_sigma, 0.0);
}

TEST(WeightedExpectation, SingleSample) {
    const auto recs = records_from({-12.0}, {0.37});
    EXPECT_EQ(weighted_expectation(recs, 1.0), 0.37);
    EXPECT_EQ(simple_expectation(recs, 1.0), 0.37);
}

TEST(WeightedExpectation, ConstantObservable) {
    const auto recs = records_from(random_logs(30, 40.0, 1), std::vector<double>(30, -2.5));
    EXPECT_NEAR(weighted_expectation(recs, 1.0), -2.5, 1e-14);
}

TEST(WeightedExpectation, InvariantUnderCommonShift) {
    auto logs = random_logs(40, 10.0, 2);
    std::vector<double> obs(40);
    std::iota(obs.begin(), obs.end(), -3.0);
    const double base = weighted_expectation(records_from(logs, obs), 1.0);
    for (auto& x : logs) x += 512.25;
    EXPECT_NEAR(weighted_expectation(records_from(logs, obs), 1.0), base, 1e-12);
}

TEST(WeightedExpectation, UniformWeightsEqualSimple) {
    std::vector<double> obs(25);
    std::iota(obs.begin(), obs.end(), 0.5);
    const auto recs = records_from(std::vector<double>(25, 3.0), obs);
    EXPECT_NEAR(weighted_expectation(recs, 1.0), simple_expectation(recs, 1.0), 1e-12);
}

TEST(WeightedExpectation, DifferenceIsFirstOrderInWeightSpread) {
    std::vector<double> obs(50);
    std::mt19937_64 gen(3);
    std::normal_distribution<double> g;
    for (auto& o : obs) o = g(gen);
    const auto direction = random_logs(50, 2.0, 4);
    double prev = 0.0;
    for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
        std::vector<double> logs(50);
        for (std::size_t m = 0; m < 50; ++m) logs[m] = eps * direction[m];
        const auto recs = records_from(logs, obs);
        const double diff = std::abs(weighted_expectation(recs, 1.0) - simple_expectation(recs, 1.0));
        if (prev > 0.0) EXPECT_NEAR(diff / prev, 0.1, 0.02);
        prev = diff;
    }
}

TEST(EntanglementEntropy, ProductAndBellStates) {
    EXPECT_NEAR(entanglement_entropy(sample_rpps(7, {1, 1})), 0.0, 1e-10);
    // L = 4, cut after site 2: singlet on sites (2, 3), sites 1 and 4 up.
    StateVector s(4);
    s[0b0010] = 1.0 / std::sqrt(2.0);
    s[0b0100] = -1.0 / std::sqrt(2.0);
    EXPECT_NEAR(entanglement_entropy(s), std::log(2.0), 1e-10);
}

TEST(Bootstrap, IdenticalRecordsHaveZeroSpread) {
    const std::vector<double> v(64, 1.25);
    const auto mean = [](std::span<const double> x) { return std::accumulate(x.begin(), x.end(), 0.0) / x.size(); };
    EXPECT_EQ(bootstrap_sigma(v, mean, 200, 1), 0.0);
}

TEST(Bootstrap, DeterministicForSeed) {
    std::vector<double> v(100);
    std::iota(v.begin(), v.end(), 0.0);
    const auto mean = [](std::span<const double> x) { return std::accumulate(x.begin(), x.end(), 0.0) / x.size(); };
    EXPECT_EQ(bootstrap_sigma(v, mean, 500, 42), bootstrap_sigma(v, mean, 500, 42));
    EXPECT_NE(bootstrap_sigma(v, mean, 500, 42), bootstrap_sigma(v, mean, 500, 43));
}

TEST(Bootstrap, MeanOfGaussiansMatchesStandardError) {
    CounterRng rng(2024);
    std::vector<double> v(1024);
    for (auto& x : v) x = rng.normal();
    const auto mean = [](std::span<const double> x) { return std::accumulate(x.begin(), x.end(), 0.0) / x.size(); };
    const double sigma = bootstrap_sigma(v, mean, 4000, 7);
    EXPECT_NEAR(sigma, 1.0 / 32.0, 0.15 / 32.0);
}

TEST(Bootstrap, Errors) {
    const auto stat = [](std::span<const std::size_t>) { return 0.0; };
    EXPECT_THROW(bootstrap_sigma(0, stat, 10, 0), std::invalid_argument);
    EXPECT_THROW(bootstrap_sigma(5, stat, 1, 0), std::invalid_argument);
}

TEST(TracePrefactor, UnitNormalizedClasses) { EXPECT_EQ(trace_prefactor(10), 1024.0); }

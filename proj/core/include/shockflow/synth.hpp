#pragma once

#include "shockflow/cascade.hpp"
#include "shockflow/series.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace shockflow::synth {

// SplitMix64 (Steele, Lea & Flood 2014): state += 0x9e3779b97f4a7c15, then the xor-shift-multiply
// finalizer. Fixed so that generated data is identical on every platform.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next();
    // Uniform integer in [0, bound) by rejection; no floating point involved.
    std::uint64_t below(std::uint64_t bound);
    // True with probability p, resolved on a 53-bit integer grid.
    bool bernoulli(double p);
    // Uniform symbol in {1, 2, 3}.
    std::uint8_t symbol() { return static_cast<std::uint8_t>(below(3) + 1); }

private:
    std::uint64_t state_;
};

struct CoupledProcessSpec {
    double coupling = 0.0;  // probability that target[i+1] copies source[i]
    std::size_t length = 0;
    std::uint64_t seed = 0;
};

struct CoupledPair {
    DiscreteSeries source;
    DiscreteSeries target;
    double analytic_te_bits = 0.0;  // T_{source -> target} at k = 1
};

// log2(3) - H(c + (1-c)/3, (1-c)/3, (1-c)/3).
double coupled_analytic_te(double coupling);

CoupledPair coupled_markov(const CoupledProcessSpec& spec);

DiscreteSeries iid_series(std::size_t length, std::uint64_t seed);

// Node i >= 1 attaches to node i-1 with probability branching_bias, otherwise to a uniformly chosen
// earlier node. Timestamps strictly increase with node index.
CascadeTree random_cascade(std::size_t n_nodes, double branching_bias, std::uint64_t seed);

// Synthetic tweets and transcript with couplings planted at known history lengths:
//  - the per-second team-A foul balance drives responsiveness: the responsiveness symbol at i+1 is
//    source[i] (+) responsiveness[i+1-dynamics_lag] (mod 3) with probability `coupling`;
//  - transcript sentiment drives the sentiment of `coupled_language` the same way at sentiment_lag.
// Everything else (follower counts, volume, virality, other languages) is generated independently.
struct PlantedScenarioSpec {
    std::size_t duration_s = 36000;
    int dynamics_lag = 7;
    int sentiment_lag = 3;
    double coupling = 1.0;
    std::vector<std::string> languages = {"en", "es", "de"};
    std::string coupled_language = "de";
    double follower_change_rate = 0.001;
    double burst_rate = 0.001;
    std::int64_t start_epoch_s = 1529245800;
    std::uint64_t seed = 0;
};

struct PlantedScenario {
    std::vector<TweetRecord> tweets;
    std::string transcript;
    std::int64_t window_start = 0;
    std::int64_t window_end = 0;
    // Pipeline settings matching the data (window, bins, k ranges, boundary, languages).
    std::map<std::string, std::string> config;
};

PlantedScenario planted_scenario(const PlantedScenarioSpec& spec);

} // namespace shockflow::synth

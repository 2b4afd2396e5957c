#ifndef RACKRS_EXPERIMENT_HPP
#define RACKRS_EXPERIMENT_HPP

#include "rackrs/schemes.hpp"

namespace rackrs {

inline constexpr const char* kVersion = "0.1.0";

struct ExperimentConfig {
    enum class HelperPolicy { All, Exhaustive, Random };

    unsigned trials = 100;
    HelperPolicy helpers = HelperPolicy::Exhaustive;
    unsigned random_helper_sets = 50;
    std::uint64_t seed = 42;
    bool timing = false;  // off by default so reports stay byte-identical
};

ExperimentConfig::HelperPolicy helper_policy_from_name(const std::string& name);
std::string helper_policy_name(ExperimentConfig::HelperPolicy policy);

/// One experiment's machine-readable outcome; the JSON document is the source
/// of truth, the CSV row a projection.
struct Report {
    std::string family;
    unsigned p0 = 0, s_base = 0, t = 0;
    std::uint64_t q = 0;
    unsigned n = 0, r = 0, u = 0, k = 0, d = 0;
    long ell = -1;
    unsigned a = 0, v = 0;  // family extras, informational
    std::pair<unsigned, unsigned> host{0, 0};

    long long bandwidth_symbols = 0;
    BitsAccount bandwidth_bits;
    Rational cutset_symbols{0};
    BitsAccount cutset_bits;
    bool optimal = false;
    unsigned trials = 0;
    unsigned failures = 0;
    std::vector<long> h_degrees;
    std::vector<std::string> subspace_basis;
    std::vector<unsigned> per_rack_b;
    std::size_t intra_rack_symbols = 0;
    long long naive_symbols = 0;  // k*t base-field symbols
    std::uint64_t seed = 0;
    std::string helper_policy;
    unsigned helper_sets = 0;
    double duration_seconds = 0.0;
    bool include_duration = false;

    std::string to_json(int indent = 2) const;
    static std::string csv_header();
    std::string csv_row() const;
};

/// Per-trial: re-encode a random message, erase the host node, repair against
/// every selected helper set, compare with ground truth and the naive
/// interpolation oracle. Trial randomness derives from (seed, trial index).
Report run_repair_experiment(const RepairScheme& scheme, const ExperimentConfig& config);

/// Deterministic per-trial generator seed.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index);

/// Sweep over a parameter grid given as JSON text; returns CSV (header +
/// one row per grid point, infeasible points marked with the violated
/// hypothesis). Byte-identical across runs with the same config.
std::string run_sweep_csv(const std::string& grid_json);

/// Smallest k accepted by validate_family_params, if any (used by sweeps with
/// "k": "auto").
std::optional<unsigned> smallest_feasible_k(FamilyParams params);

}  // namespace rackrs

#endif

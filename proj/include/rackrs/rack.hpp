#ifndef RACKRS_RACK_HPP
#define RACKRS_RACK_HPP

#include <boost/rational.hpp>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rackrs/grs.hpp"

namespace rackrs {

using Rational = boost::rational<long long>;
std::string to_string(const Rational& r);  // "9" or "15/2"

/// Exact bandwidth bookkeeping: a count of base-field symbols plus the field
/// size; bits are derived, never stored as floating point.
struct BitsAccount {
    Rational symbols{0};
    std::uint64_t base_size = 2;  // |F_p|

    double bits() const;
    /// "N" when |F_p| is a power of two, otherwise "R*log2(p0)".
    std::string bits_exact() const;
};

/// The r x u grid of distinct evaluation points; rack i is row i.
struct RackLayout {
    unsigned racks = 0;
    unsigned nodes_per_rack = 0;
    std::vector<std::vector<FieldElement>> grid;

    std::size_t size() const noexcept { return std::size_t(racks) * nodes_per_rack; }
    std::vector<FieldElement> flatten() const;  // rack-major
    static RackLayout make(std::vector<std::vector<FieldElement>> grid);
};

struct ValidationReport {
    bool degree_ok = false;
    bool host_values_ok = false;
    bool basis_ok = false;
    long max_degree = -1;
    long degree_bound = 0;
    std::vector<std::string> failures;

    bool ok() const noexcept { return degree_ok && host_values_ok && basis_ok; }
};

/// A repair scheme in the general rack-aware framework: t polynomials h_a of
/// degree at most u(d+1)-k-1 with h_a(host point) = eta_a.
struct RepairScheme {
    std::shared_ptr<const FieldTower> field;
    RackLayout layout;
    unsigned k = 1;
    std::pair<unsigned, unsigned> host{0, 0};  // (rack, node), 0-based
    unsigned d = 1;
    TraceBasis basis;
    std::vector<Poly> h_polys;

    // provenance, carried into reports
    std::string family = "manual";
    long ell = -1;
    std::vector<FieldElement> subspace_basis;
    ValidationReport validation;  // filled by the family constructors

    long degree_bound() const noexcept {
        return long(layout.nodes_per_rack) * (long(d) + 1) - long(k) - 1;
    }
    unsigned t() const noexcept { return unsigned(basis.eta.size()); }
    const FieldElement& host_point() const { return layout.grid[host.first][host.second]; }
    GrsCode code() const;  // the unit-multiplier GRS code on the flattened grid

    static RepairScheme make(std::shared_ptr<const FieldTower> field, RackLayout layout,
                             unsigned k, std::pair<unsigned, unsigned> host, unsigned d,
                             TraceBasis basis, std::vector<Poly> h_polys);
};

/// Checks the three scheme conditions and reports per-check outcomes instead
/// of throwing.
ValidationReport validate_scheme(const RepairScheme& scheme);

/// Everything precomputable for one helper-set choice: punctured dual
/// multipliers, per-rack span bases c_l of the h-evaluation vectors, and the
/// combination coefficients e_{l,i,a} over F_p.
struct DownloadPlan {
    std::vector<unsigned> helpers;  // d rack indices, ascending

    std::vector<unsigned> punct_racks;  // host first, then helpers
    std::vector<std::vector<FieldElement>> punct_multipliers;  // per punct rack, u values

    std::vector<SpanBasis> spans;  // per helper rack
    std::vector<std::vector<std::vector<FieldElement>>> combo;  // [helper][a][l] = e_{l,i,a}

    // precomputed repair weights
    std::vector<std::vector<FieldElement>> host_coeffs;     // [a][l] over l != j, scaled h evals
    std::vector<std::vector<FieldElement>> helper_weights;  // [helper][l] = v_{i,l} / v_{s,j}

    std::pair<unsigned, unsigned> host{0, 0};
    std::size_t cross_symbols = 0;  // sum of b_i
    std::vector<unsigned> b_profile;

    const FieldTower* tower = nullptr;
};

DownloadPlan build_download_plan(const RepairScheme& scheme, std::span<const unsigned> helpers);

/// The executed download with exact accounting and the rebuilt symbol.
struct RepairTranscript {
    std::size_t cross_rack_symbols = 0;
    BitsAccount cross_rack_bits;
    std::size_t intra_rack_symbols = 0;  // (u-1) * t, free per the model
    FieldElement recovered;
    std::vector<std::pair<unsigned, std::vector<FieldElement>>> per_rack_payload;
};

/// Runs the trace-based repair of the host symbol. `word` must be a codeword
/// of scheme.code(); only the host position may carry an erasure flag.
RepairTranscript execute_repair(const RepairScheme& scheme, const DownloadPlan& plan,
                                const Codeword& word);

/// Standard-model (u = 1) wrapper: helpers are node indices.
RepairTranscript repair_standard(const RepairScheme& scheme, std::span<const unsigned> helper_nodes,
                                 const Codeword& word);

struct BandwidthSummary {
    long long symbols = 0;            // sum of the d largest b_i = max over helper sets
    std::vector<unsigned> per_rack;   // b_i for every rack; 0 at the host
    BitsAccount bits;
};

/// b_i for every non-host rack via span dimensions; the worst case over
/// helper sets is the sum of the d largest.
BandwidthSummary worst_case_bandwidth(const RepairScheme& scheme);

/// Parameters of the rack-aware lower bound.
struct CutSetQuery {
    unsigned n = 0, k = 0, r = 0, d = 0;
    std::uint64_t q = 0;
    std::uint64_t base_size = 2;  // |F_p|
};

struct CutSetBound {
    Rational symbols;  // d*t / (d - m + 1) base-field symbols
    BitsAccount bits;
    unsigned m = 0;
    unsigned t = 0;
};

/// The rack-aware cut-set bound, exact rational arithmetic.
CutSetBound cutset_bound(const CutSetQuery& query);

}  // namespace rackrs

#endif

#ifndef RACKRS_SCHEMES_HPP
#define RACKRS_SCHEMES_HPP

#include <optional>

#include "rackrs/rack.hpp"

namespace rackrs {

/// A degree-u polynomial vanishing on one rack of the layout and constant
/// nonzero on every other rack.
struct GoodPolynomial {
    Poly g;
    RackLayout layout;
    unsigned host_rack = 0;
    std::vector<FieldElement> rack_constants;  // g's value per rack; zero at the host
    Subfield p_base;
    std::shared_ptr<const FieldTower> field;
};

/// Exhaustive check of the good-polynomial conditions.
bool is_good_polynomial(const Poly& g, const RackLayout& layout, unsigned host_rack);

/// Racks = cosets of the trace-zero F_{p^2}-kernel W, enumerated W first and
/// then in generator-power order; g = Tr_{F_q/F_p^2}(x) - Tr(host shift).
GoodPolynomial additive_good_poly(std::shared_ptr<const FieldTower> field, Subfield p_base,
                                  unsigned host_rack);

/// Racks = cosets of the multiplicative subgroup of order u = (p^t-1)/(p^a-1);
/// g = x^u - beta^u.
GoodPolynomial multiplicative_good_poly(std::shared_ptr<const FieldTower> field, Subfield p_base,
                                        unsigned a, unsigned host_rack);

/// Evaluation set = F_q minus the trace-zero set of Tr_{F_q/F_p^a}; racks =
/// level classes of G = Tr^v; g = G - G(beta).
GoodPolynomial combined_good_poly(std::shared_ptr<const FieldTower> field, Subfield p_base,
                                  unsigned a, unsigned v, unsigned host_rack);

/// The F_p-subspace F_{p^ell} inside F_q; requires ell | t.
SubspaceChoice subfield_subspace(const FieldTower& field, Subfield p_base, unsigned ell);

enum class SubspacePolicy { Auto, SubfieldOnly, SearchOnly };

struct SubspaceSearchConfig {
    SubspacePolicy policy = SubspacePolicy::Auto;
    std::size_t exhaustive_limit = 100000;  // enumerate all subspaces up to this count
    std::size_t random_samples = 100000;    // seeded sampling beyond it
    std::uint64_t seed = 42;
};

/// Builds the t repair polynomials h_a = L_V(g eta_a) / g reduced modulo the
/// vanishing polynomial of the full evaluation set, rescaled so that
/// h_a(host) = eta_a exactly. Throws SubspaceSearchError when the reduced
/// degrees exceed u(d+1)-k-1.
RepairScheme degree_descent_scheme(const GoodPolynomial& good, const SubspaceChoice& V,
                                   const std::vector<FieldElement>& eta, unsigned k,
                                   unsigned host_node, std::optional<unsigned> d = std::nullopt);

/// Same, but V is found by the search policy: the subfield F_{p^ell} when
/// ell | t, else exhaustive enumeration of all dimension-ell subspaces when
/// their count is within the limit, else seeded random sampling. The first
/// admissible candidate in enumeration order wins.
RepairScheme degree_descent_scheme(const GoodPolynomial& good, unsigned ell,
                                   const std::vector<FieldElement>& eta, unsigned k,
                                   unsigned host_node,
                                   const SubspaceSearchConfig& config = {},
                                   std::optional<unsigned> d = std::nullopt);

/// Full-length repair in the standard model: h_a = Tr(eta_a (x-a_j))/(x-a_j),
/// u = 1, d = q-1, per-node download one base-field symbol.
RepairScheme gw_scheme(std::shared_ptr<const FieldTower> field, Subfield p_base, unsigned k,
                       unsigned failed_index,
                       std::optional<std::vector<FieldElement>> eta = std::nullopt);

/// Two-coset standard-model scheme over F_{2^(2s)} with base F_{2^s}:
/// n/2 points in the subfield's unit group, n/2 in a primitive-shifted copy,
/// h_1 = 1 and h_2 linear.
RepairScheme two_coset_scheme(unsigned s_half, unsigned n, unsigned k, unsigned failed_index);

enum class Family { additive, multiplicative, combined, gw, two_coset };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

/// Inputs of one constructed instance; p = p0^s_base is the base field.
struct FamilyParams {
    Family family = Family::additive;
    unsigned p0 = 2;
    unsigned s_base = 1;
    unsigned t = 0;
    unsigned k = 0;
    long ell = -1;
    unsigned a = 0;       // subfield degree (multiplicative / combined)
    unsigned v = 0;       // roots-of-unity count (combined)
    unsigned n = 0;       // explicit length (two-coset only)
    unsigned host_rack = 0;
    unsigned host_node = 0;
};

struct DerivedParams {
    std::uint64_t q = 0;
    unsigned n = 0, r = 0, u = 0, m = 0, d = 0;
};

struct FamilyCheck {
    bool ok = false;
    std::vector<std::string> violations;
    DerivedParams derived;
};

/// Checks every stated divisibility, inequality and integrality hypothesis of
/// the family; d is pinned to r-1. Violations are named individually.
FamilyCheck validate_family_params(const FamilyParams& params);

/// Dispatcher: validates, builds the good polynomial and the scheme. Throws
/// HypothesisError (invalid params) or SubspaceSearchError (no admissible V).
/// `explicit_basis`, when given, pins V: serialized elements spanning it.
RepairScheme build_family_scheme(const FamilyParams& params,
                                 const SubspaceSearchConfig& config = {},
                                 const std::vector<std::string>* explicit_basis = nullptr);

}  // namespace rackrs

#endif

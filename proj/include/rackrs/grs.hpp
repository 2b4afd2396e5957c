#ifndef RACKRS_GRS_HPP
#define RACKRS_GRS_HPP

#include <memory>
#include <span>
#include <vector>

#include "rackrs/poly.hpp"

namespace rackrs {

/// Generalized Reed-Solomon code: evaluations of degree-<k polynomials at n
/// distinct points, scaled per coordinate by nonzero multipliers.
struct GrsCode {
    std::shared_ptr<const FieldTower> field;
    std::vector<FieldElement> points;
    std::vector<FieldElement> multipliers;
    unsigned k = 1;

    std::size_t length() const noexcept { return points.size(); }

    /// All-ones multipliers (a plain Reed-Solomon code).
    static GrsCode make(std::shared_ptr<const FieldTower> field,
                        std::vector<FieldElement> points, unsigned k);
    static GrsCode make(std::shared_ptr<const FieldTower> field,
                        std::vector<FieldElement> points, unsigned k,
                        std::vector<FieldElement> multipliers);
};

/// Symbols are the raw v_i f(a_i); erasures are a mask, never a sentinel.
struct Codeword {
    std::vector<FieldElement> symbols;
    std::vector<bool> erased;

    std::size_t size() const noexcept { return symbols.size(); }
};

/// symbols_i = v_i * f(a_i); requires deg(message) <= k-1.
Codeword encode(const GrsCode& code, const Poly& message);

/// u_i = prod_{j != i} (a_i - a_j)^{-1}: the column multipliers of the dual of
/// GRS_k(a, 1), certifying sum_i u_i f(a_i) g(a_i) = 0 whenever
/// deg f <= k-1 and deg g <= n-k-1.
std::vector<FieldElement> dual_multipliers(std::span<const FieldElement> points);

/// Parity check against the dual description; word must carry no erasures.
bool is_codeword(const GrsCode& code, const Codeword& word);

/// Interpolates the message from k surviving coordinates and re-evaluates
/// everywhere: the classical repair baseline costing k full symbols.
Codeword naive_recover(const GrsCode& code, const Codeword& word,
                       std::span<const std::size_t> helpers);

}  // namespace rackrs

#endif

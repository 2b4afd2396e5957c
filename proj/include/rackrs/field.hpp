#ifndef RACKRS_FIELD_HPP
#define RACKRS_FIELD_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rackrs/errors.hpp"

namespace rackrs {

/// Packed representation of a field element: base-p0 digit string of its
/// coefficient vector, low degree first. Always canonical.
using elem_idx = std::uint32_t;

class FieldTower;

/// Identifies the subfield F_{p0^s} inside a tower F_{p0^T}; requires s | T.
struct Subfield {
    unsigned degree = 1;

    friend bool operator==(const Subfield&, const Subfield&) = default;
};

/// An element of a FieldTower. Value type; arithmetic requires both operands
/// to come from the same tower.
class FieldElement {
   public:
    FieldElement() = default;
    FieldElement(const FieldTower* tower, elem_idx v) : tower_(tower), v_(v) {}

    const FieldTower& tower() const;
    elem_idx index() const noexcept { return v_; }
    bool is_zero() const noexcept { return v_ == 0; }

    /// Coefficient vector over F_{p0}, low degree first, length T.
    std::vector<unsigned> coeffs() const;
    /// Serialized form: coefficients as base-10 residues joined by commas.
    std::string str() const;

    FieldElement operator-() const;
    FieldElement inv() const;
    FieldElement pow(std::uint64_t e) const;
    /// x^(p0^times), the Frobenius of the prime field applied `times` times.
    FieldElement frobenius(unsigned times = 1) const;

    friend FieldElement operator+(const FieldElement&, const FieldElement&);
    friend FieldElement operator-(const FieldElement&, const FieldElement&);
    friend FieldElement operator*(const FieldElement&, const FieldElement&);
    friend FieldElement operator/(const FieldElement&, const FieldElement&);
    friend bool operator==(const FieldElement& a, const FieldElement& b) {
        return a.tower_ == b.tower_ && a.v_ == b.v_;
    }
    friend bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }

   private:
    const FieldTower* tower_ = nullptr;
    elem_idx v_ = 0;
};

/// A basis {eta_a} of F_q over a subfield together with its trace-dual
/// {theta_a}: Tr(eta_i * theta_j) = delta_ij.
struct TraceBasis {
    Subfield base;
    std::vector<FieldElement> eta;
    std::vector<FieldElement> theta;
};

/// Result of span_dim_over: the F_p-dimension of the span of a vector set
/// and a maximal independent subset of the original vectors, in input order.
struct SpanBasis {
    Subfield base;
    unsigned dim = 0;
    std::vector<std::vector<FieldElement>> basis;

    // echelon bookkeeping used to express further vectors in `basis`
    std::vector<std::vector<elem_idx>> echelon;            // reduced rows over F_p
    std::vector<std::vector<elem_idx>> echelon_in_basis;   // row = combination of basis vectors
    std::vector<std::size_t> pivots;
    std::size_t width = 0;
    const FieldTower* tower = nullptr;
};

/// The concrete field F_q = F_{p0^T} with its subfield lattice, traces and
/// dual bases. Immutable after construction; all operations are pure.
///
/// Element arithmetic is table driven: multiplication through discrete
/// logarithms with respect to a canonical primitive element, addition by
/// XOR in characteristic 2 and by a digit table otherwise.
class FieldTower {
   public:
    /// Builds F_{p0^T}. When no modulus is given, picks the monic irreducible
    /// of degree T whose coefficient string encodes the smallest base-p0
    /// integer (most significant digit = highest degree coefficient), which
    /// makes every downstream artifact reproducible.
    static std::shared_ptr<const FieldTower> make(
        unsigned p0, unsigned ext_degree,
        std::optional<std::vector<unsigned>> modulus = std::nullopt);

    unsigned characteristic() const noexcept { return p0_; }
    unsigned ext_degree() const noexcept { return T_; }
    std::uint64_t size() const noexcept { return q_; }
    const std::vector<unsigned>& modulus() const noexcept { return modulus_; }
    /// Canonical root of the modulus (the residue class of x).
    FieldElement generator() const { return {this, gen_}; }
    /// Smallest element (by index) of multiplicative order q-1.
    FieldElement primitive_element() const { return {this, prim_}; }
    /// Multiplicative order; 0 for the zero element.
    std::uint64_t order_of(const FieldElement& x) const;

    FieldElement zero() const { return {this, 0}; }
    FieldElement one() const { return {this, one_}; }
    FieldElement element(elem_idx v) const;
    FieldElement from_coeffs(std::span<const unsigned> coeffs) const;

    // ---- subfields ----
    std::vector<unsigned> subfield_degrees() const;  // divisors of T, ascending
    Subfield subfield(unsigned s) const;             // throws unless s | T
    unsigned relative_degree(Subfield base) const { return T_ / base.degree; }
    bool in_subfield(const FieldElement& x, Subfield base) const;
    const std::vector<elem_idx>& subfield_elements(Subfield base) const;

    /// Tr_{F_q / F_{p0^s}}(x) = sum of x^(p^i), p = p0^s, i < T/s.
    FieldElement trace_to(const FieldElement& x, Subfield base) const;

    /// Reference basis of F_q over the subfield: powers of the canonical
    /// generator. Used for coordinates; repair schemes carry their own basis.
    const std::vector<FieldElement>& reference_basis(Subfield base) const;
    /// Coordinates of x in the reference basis; entries lie in the subfield.
    std::vector<FieldElement> coords(const FieldElement& x, Subfield base) const;

    // ---- raw index arithmetic (hot paths) ----
    elem_idx add(elem_idx a, elem_idx b) const {
        if (xor_add_) return a ^ b;
        if (!add_tab_.empty()) return add_tab_[std::size_t(a) * q_ + b];
        return add_slow(a, b);
    }
    elem_idx sub(elem_idx a, elem_idx b) const { return add(a, neg_[b]); }
    elem_idx neg(elem_idx a) const { return neg_[a]; }
    elem_idx mul(elem_idx a, elem_idx b) const {
        if (a == 0 || b == 0) return 0;
        return exp_[std::size_t(log_[a]) + log_[b]];
    }
    elem_idx inv(elem_idx a) const;
    elem_idx pw(elem_idx a, std::uint64_t e) const;
    elem_idx frob(elem_idx a) const { return frob_[a]; }
    elem_idx trace_raw(Subfield base, elem_idx a) const { return sub_(base).trace_tab[a]; }

    std::string description() const;  // "p0^T/modulus=c0,c1,...,cT"

    FieldTower(const FieldTower&) = delete;
    FieldTower& operator=(const FieldTower&) = delete;

   private:
    FieldTower(unsigned p0, unsigned T, std::vector<unsigned> modulus);

    struct SubData {
        unsigned s = 1;
        std::vector<elem_idx> elems;
        std::vector<elem_idx> trace_tab;
        std::vector<FieldElement> ref_basis;
        std::vector<FieldElement> ref_dual;  // trace-dual of ref_basis
    };
    const SubData& sub_(Subfield base) const;
    elem_idx add_slow(elem_idx a, elem_idx b) const;

    unsigned p0_ = 2, T_ = 1;
    std::uint64_t q_ = 2;
    std::vector<unsigned> modulus_;
    elem_idx gen_ = 0, prim_ = 0, one_ = 1;
    bool xor_add_ = false;
    std::vector<elem_idx> exp_;   // length 2(q-1), doubled to skip the modular reduction
    std::vector<std::uint32_t> log_;
    std::vector<elem_idx> neg_;
    std::vector<elem_idx> frob_;
    std::vector<elem_idx> add_tab_;
    std::map<unsigned, SubData> subs_;
};

/// Builds F_{p0^T}; see FieldTower::make.
std::shared_ptr<const FieldTower> make_field(
    unsigned p0, unsigned ext_degree,
    std::optional<std::vector<unsigned>> modulus = std::nullopt);

/// Parses "p0^T/modulus=c0,c1,...,cT".
std::shared_ptr<const FieldTower> parse_field(const std::string& description);

/// The trace-dual basis of eta: solves the t x t system over F_p given by the
/// trace bilinear form. Throws when eta is not a basis.
TraceBasis dual_basis(Subfield base, const std::vector<FieldElement>& eta);

/// Reconstructs sum_i traces[i] * theta_i; inverse of the trace expansion
/// alpha = sum_i Tr(alpha eta_i) theta_i.
FieldElement element_from_traces(std::span<const FieldElement> traces, const TraceBasis& basis);

/// F_p-dimension of the span of `vectors` (entries in F_q expanded to T/s
/// coordinates over F_p) plus a maximal independent subset in input order.
SpanBasis span_dim_over(std::span<const std::vector<FieldElement>> vectors, Subfield base);

/// Expresses v in span.basis; coefficients are subfield elements. Throws when
/// v lies outside the span.
std::vector<FieldElement> coords_in_span(const SpanBasis& span, const std::vector<FieldElement>& v);

}  // namespace rackrs

#endif

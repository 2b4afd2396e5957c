#ifndef RACKRS_POLY_HPP
#define RACKRS_POLY_HPP

#include <span>
#include <utility>
#include <vector>

#include "rackrs/field.hpp"

namespace rackrs {

/// Dense univariate polynomial over a FieldTower, coefficients low degree
/// first. Canonical: the highest stored coefficient is nonzero; the zero
/// polynomial stores nothing and has degree -1.
class Poly {
   public:
    Poly() = default;
    explicit Poly(const FieldTower* tower) : tower_(tower) {}

    static Poly zero(const FieldTower* tower) { return Poly(tower); }
    static Poly one(const FieldTower* tower);
    static Poly x(const FieldTower* tower);
    static Poly constant(const FieldElement& c);
    static Poly from_coeffs(std::vector<FieldElement> coeffs);
    static Poly from_indices(const FieldTower* tower, std::vector<elem_idx> coeffs);
    /// c * x^e
    static Poly monomial(const FieldElement& c, std::size_t e);

    const FieldTower* tower() const noexcept { return tower_; }
    long degree() const noexcept { return long(c_.size()) - 1; }
    bool is_zero() const noexcept { return c_.empty(); }
    bool is_monic() const;
    FieldElement coeff(std::size_t i) const;
    FieldElement leading() const;
    const std::vector<elem_idx>& raw() const noexcept { return c_; }

    FieldElement eval(const FieldElement& x) const;  // Horner
    /// this(f(x)): substitution, Horner over polynomials.
    Poly compose(const Poly& f) const;
    /// coefficient-wise Frobenius plus exponent stretch: p(x)^(p0) in char p0.
    Poly frobenius_pow() const;

    Poly operator-() const;
    friend Poly operator+(const Poly&, const Poly&);
    friend Poly operator-(const Poly&, const Poly&);
    friend Poly operator*(const Poly&, const Poly&);
    friend Poly operator*(const FieldElement&, const Poly&);
    friend bool operator==(const Poly& a, const Poly& b) {
        return a.tower_ == b.tower_ && a.c_ == b.c_;
    }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    std::string str() const;  // elements joined by "; ", low degree first

   private:
    void trim();
    const FieldTower* tower_ = nullptr;
    std::vector<elem_idx> c_;
};

/// (quotient, remainder) with f = q*g + r, deg r < deg g. g must be nonzero.
std::pair<Poly, Poly> divrem(const Poly& f, const Poly& g);

/// Quotient of an exact division; throws on a nonzero remainder.
Poly exact_div(const Poly& f, const Poly& g);

/// Monic Z_E(x) = prod_{a in E} (x - a); points must be distinct.
Poly vanishing_poly(std::span<const FieldElement> points);

/// Remainder of f modulo a monic Z; agrees with f on every root of Z.
Poly reduce_mod_vanishing(const Poly& f, const Poly& Z);

/// Unique polynomial of degree < #points through all (points[i], values[i]).
Poly interpolate(std::span<const FieldElement> points, std::span<const FieldElement> values);

/// An F_p-subspace of F_q given by an independent spanning set. The tower
/// pointer is only consulted for the zero-dimensional subspace {0}.
struct SubspaceChoice {
    Subfield base;
    std::vector<FieldElement> basis_vectors;
    const FieldTower* tower = nullptr;

    unsigned ell() const noexcept { return unsigned(basis_vectors.size()); }
};

/// All |F_p|^ell subspace members, deterministic mixed-radix order over the
/// subfield element list. Throws when basis_vectors are dependent.
std::vector<FieldElement> subspace_elements(const SubspaceChoice& V);

/// L_V(x) = prod_{b in V} (x - b): monic of degree p^ell, nonzero
/// coefficients only at exponents p^i, kernel exactly V.
Poly linearized_from_subspace(const SubspaceChoice& V);

}  // namespace rackrs

#endif

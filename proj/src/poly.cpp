#include "rackrs/poly.hpp"

#include <algorithm>
#include <sstream>

namespace rackrs {

namespace {
const FieldTower* same_tower(const Poly& a, const Poly& b) {
    if (a.tower() != b.tower()) throw Error("polynomials over different fields");
    if (!a.tower()) throw Error("polynomial without a field");
    return a.tower();
}
}  // namespace

void Poly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Poly Poly::one(const FieldTower* tower) { return constant(tower->one()); }

Poly Poly::x(const FieldTower* tower) {
    Poly p(tower);
    p.c_ = {0, tower->one().index()};
    return p;
}

Poly Poly::constant(const FieldElement& c) {
    Poly p(&c.tower());
    if (!c.is_zero()) p.c_ = {c.index()};
    return p;
}

Poly Poly::monomial(const FieldElement& c, std::size_t e) {
    Poly p(&c.tower());
    if (!c.is_zero()) {
        p.c_.assign(e + 1, 0);
        p.c_[e] = c.index();
    }
    return p;
}

Poly Poly::from_coeffs(std::vector<FieldElement> coeffs) {
    if (coeffs.empty()) throw Error("from_coeffs needs at least one coefficient");
    Poly p(&coeffs.front().tower());
    p.c_.reserve(coeffs.size());
    for (const auto& c : coeffs) {
        if (&c.tower() != p.tower_) throw Error("polynomials over different fields");
        p.c_.push_back(c.index());
    }
    p.trim();
    return p;
}

Poly Poly::from_indices(const FieldTower* tower, std::vector<elem_idx> coeffs) {
    Poly p(tower);
    p.c_ = std::move(coeffs);
    p.trim();
    return p;
}

bool Poly::is_monic() const { return !c_.empty() && c_.back() == tower_->one().index(); }

FieldElement Poly::coeff(std::size_t i) const {
    return {tower_, i < c_.size() ? c_[i] : 0};
}

FieldElement Poly::leading() const {
    if (c_.empty()) throw Error("zero polynomial has no leading coefficient");
    return {tower_, c_.back()};
}

FieldElement Poly::eval(const FieldElement& x) const {
    const FieldTower& F = *tower_;
    elem_idx acc = 0;
    for (std::size_t i = c_.size(); i-- > 0;) acc = F.add(F.mul(acc, x.index()), c_[i]);
    return {tower_, acc};
}

Poly Poly::compose(const Poly& f) const {
    same_tower(*this, f);
    Poly acc = Poly::zero(tower_);
    for (std::size_t i = c_.size(); i-- > 0;)
        acc = acc * f + Poly::constant(FieldElement(tower_, c_[i]));
    return acc;
}

Poly Poly::frobenius_pow() const {
    if (c_.empty()) return *this;
    const FieldTower& F = *tower_;
    const unsigned p0 = F.characteristic();
    std::vector<elem_idx> out((c_.size() - 1) * p0 + 1, 0);
    for (std::size_t i = 0; i < c_.size(); ++i)
        if (c_[i]) out[i * p0] = F.frob(c_[i]);
    return from_indices(tower_, std::move(out));
}

Poly Poly::operator-() const {
    Poly p(tower_);
    p.c_.reserve(c_.size());
    for (elem_idx v : c_) p.c_.push_back(tower_->neg(v));
    return p;
}

Poly operator+(const Poly& a, const Poly& b) {
    const FieldTower& F = *same_tower(a, b);
    std::vector<elem_idx> out(std::max(a.c_.size(), b.c_.size()), 0);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = F.add(i < a.c_.size() ? a.c_[i] : 0, i < b.c_.size() ? b.c_[i] : 0);
    return Poly::from_indices(&F, std::move(out));
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

Poly operator*(const Poly& a, const Poly& b) {
    const FieldTower& F = *same_tower(a, b);
    if (a.c_.empty() || b.c_.empty()) return Poly::zero(&F);
    std::vector<elem_idx> out(a.c_.size() + b.c_.size() - 1, 0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
        const elem_idx ai = a.c_[i];
        if (!ai) continue;
        for (std::size_t j = 0; j < b.c_.size(); ++j)
            if (b.c_[j]) out[i + j] = F.add(out[i + j], F.mul(ai, b.c_[j]));
    }
    return Poly::from_indices(&F, std::move(out));
}

Poly operator*(const FieldElement& s, const Poly& p) {
    const FieldTower& F = s.tower();
    if (p.tower() != &F) throw Error("polynomials over different fields");
    std::vector<elem_idx> out;
    out.reserve(p.c_.size());
    for (elem_idx v : p.c_) out.push_back(F.mul(s.index(), v));
    return Poly::from_indices(&F, std::move(out));
}

std::string Poly::str() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (i) os << "; ";
        os << FieldElement(tower_, c_[i]).str();
    }
    return os.str();
}

std::pair<Poly, Poly> divrem(const Poly& f, const Poly& g) {
    const FieldTower& F = *same_tower(f, g);
    if (g.is_zero()) throw Error("division by the zero polynomial");
    std::vector<elem_idx> rem(f.raw());
    const auto& gd = g.raw();
    if (rem.size() < gd.size()) return {Poly::zero(&F), f};
    std::vector<elem_idx> quot(rem.size() - gd.size() + 1, 0);
    const elem_idx lead_inv = F.inv(gd.back());
    for (std::size_t i = rem.size(); i-- > gd.size() - 1;) {
        const elem_idx c = rem[i];
        if (!c) continue;
        const elem_idx fct = F.mul(c, lead_inv);
        const std::size_t off = i - (gd.size() - 1);
        quot[off] = fct;
        for (std::size_t j = 0; j < gd.size(); ++j)
            rem[off + j] = F.sub(rem[off + j], F.mul(fct, gd[j]));
    }
    return {Poly::from_indices(&F, std::move(quot)), Poly::from_indices(&F, std::move(rem))};
}

Poly exact_div(const Poly& f, const Poly& g) {
    auto [q, r] = divrem(f, g);
    if (!r.is_zero()) throw Error("exact_div: nonzero remainder");
    return q;
}

Poly vanishing_poly(std::span<const FieldElement> points) {
    if (points.empty()) throw Error("vanishing_poly needs at least one point");
    const FieldTower& F = points.front().tower();
    std::vector<elem_idx> seen;
    seen.reserve(points.size());
    for (const auto& a : points) {
        if (&a.tower() != &F) throw Error("points from different fields");
        seen.push_back(a.index());
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
        throw Error("repeated evaluation points");

    std::vector<elem_idx> z(points.size() + 1, 0);
    z[0] = F.one().index();
    std::size_t deg = 0;
    for (const auto& a : points) {
        // z *= (x - a), in place
        const elem_idx na = F.neg(a.index());
        z[deg + 1] = z[deg];
        for (std::size_t i = deg; i-- > 0;) z[i + 1] = F.add(z[i], F.mul(z[i + 1], na));
        z[0] = F.mul(z[0], na);
        ++deg;
    }
    return Poly::from_indices(&F, std::move(z));
}

Poly reduce_mod_vanishing(const Poly& f, const Poly& Z) {
    if (!Z.is_monic()) throw Error("reduction modulus must be monic");
    return divrem(f, Z).second;
}

Poly interpolate(std::span<const FieldElement> points, std::span<const FieldElement> values) {
    if (points.size() != values.size()) throw Error("points/values length mismatch");
    if (points.empty()) throw Error("interpolation needs at least one point");
    const FieldTower& F = points.front().tower();
    const Poly master = vanishing_poly(points);  // also rejects repeated points

    std::vector<elem_idx> acc(points.size(), 0);
    std::vector<elem_idx> li(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (values[i].is_zero()) continue;
        // synthetic division: master / (x - points[i])
        const auto& z = master.raw();
        elem_idx carry = z.back();
        for (std::size_t j = points.size(); j-- > 0;) {
            li[j] = carry;
            carry = F.add(z[j], F.mul(carry, points[i].index()));
        }
        // scale by values[i] / l_i(points[i])
        elem_idx denom = 0;
        {
            elem_idx a = 0;
            for (std::size_t j = li.size(); j-- > 0;)
                a = F.add(F.mul(a, points[i].index()), li[j]);
            denom = a;
        }
        const elem_idx s = F.mul(values[i].index(), F.inv(denom));
        for (std::size_t j = 0; j < li.size(); ++j) acc[j] = F.add(acc[j], F.mul(s, li[j]));
    }
    return Poly::from_indices(&F, std::move(acc));
}

std::vector<FieldElement> subspace_elements(const SubspaceChoice& V) {
    const FieldTower* tp =
        V.basis_vectors.empty() ? V.tower : &V.basis_vectors.front().tower();
    if (!tp) throw Error("zero-dimensional subspace needs an explicit tower");
    const FieldTower& F = *tp;
    if (V.basis_vectors.empty()) return {F.zero()};
    std::vector<std::vector<FieldElement>> singles;
    for (const auto& b : V.basis_vectors) singles.push_back({b});
    if (span_dim_over(singles, V.base).dim != V.ell())
        throw Error("dependent subspace basis_vectors");

    const auto& sub = F.subfield_elements(V.base);
    std::vector<FieldElement> out;
    std::size_t total = 1;
    for (unsigned i = 0; i < V.ell(); ++i) total *= sub.size();
    out.reserve(total);
    std::vector<std::size_t> digit(V.ell(), 0);
    while (true) {
        elem_idx acc = 0;
        for (unsigned i = 0; i < V.ell(); ++i)
            acc = F.add(acc, F.mul(sub[digit[i]], V.basis_vectors[i].index()));
        out.emplace_back(&F, acc);
        unsigned i = 0;
        while (i < V.ell() && digit[i] == sub.size() - 1) digit[i++] = 0;
        if (i == V.ell()) break;
        ++digit[i];
    }
    return out;
}

Poly linearized_from_subspace(const SubspaceChoice& V) {
    const auto members = subspace_elements(V);
    const FieldTower& F = members.front().tower();
    Poly L = Poly::one(&F);
    for (const auto& b : members) L = L * (Poly::x(&F) - Poly::constant(b));
    return L;
}

}  // namespace rackrs

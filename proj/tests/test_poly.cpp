#include <random>
#include <vector>

#include "doctest.h"
#include "rackrs/poly.hpp"

using namespace rackrs;

namespace {

Poly rand_poly(const FieldTower& F, long max_deg, std::mt19937_64& rng) {
    std::vector<FieldElement> c;
    long deg = long(rng() % (max_deg + 1));
    for (long i = 0; i <= deg; ++i) c.push_back(F.element(elem_idx(rng() % F.size())));
    c.push_back(F.one());  // keep the intended degree reachable
    return Poly::from_coeffs(c);
}

std::vector<FieldElement> all_elements(const FieldTower& F) {
    std::vector<FieldElement> out;
    for (elem_idx v = 0; v < F.size(); ++v) out.push_back(F.element(v));
    return out;
}

// greedy independent subset spanning the subfield F_{p0^s} over F_{p0^b}
SubspaceChoice subfield_as_subspace(const FieldTower& F, unsigned s, unsigned b) {
    SubspaceChoice V{F.subfield(b), {}, &F};
    for (elem_idx v : F.subfield_elements(F.subfield(s))) {
        std::vector<std::vector<FieldElement>> probe;
        for (const auto& x : V.basis_vectors) probe.push_back({x});
        probe.push_back({F.element(v)});
        if (span_dim_over(probe, V.base).dim == probe.size())
            V.basis_vectors.push_back(F.element(v));
    }
    return V;
}

}  // namespace

TEST_CASE("polynomial ring basics over F_4") {
    auto F = make_field(2, 2);
    auto w = F->generator();
    auto one = F->one();
    auto x = Poly::x(F.get());

    // (x+1)(x+w) = x^2 + w^2 x + w
    auto prod = (x + Poly::constant(one)) * (x + Poly::constant(w));
    auto expect = Poly::from_coeffs({w, w * w, one});
    CHECK(prod == expect);

    auto f = Poly::from_coeffs({w, one, w * w});
    CHECK(f * Poly::zero(F.get()) == Poly::zero(F.get()));
    CHECK(f * Poly::one(F.get()) == f);
    CHECK(Poly::zero(F.get()).degree() == -1);

    auto G = make_field(2, 2);
    CHECK_THROWS_AS((void)(f * Poly::one(G.get())), Error);
}

TEST_CASE("degree of products and evaluation") {
    auto F = make_field(2, 4);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 50; ++i) {
        auto f = rand_poly(*F, 6, rng), g = rand_poly(*F, 6, rng);
        CHECK((f * g).degree() == f.degree() + g.degree());
        auto x = F->element(elem_idx(rng() % 16));
        // Horner against the naive power sum
        auto naive = F->zero();
        for (long j = 0; j <= f.degree(); ++j) naive = naive + f.coeff(j) * x.pow(j);
        CHECK(f.eval(x) == naive);
        CHECK((f + g).eval(x) == f.eval(x) + g.eval(x));
        CHECK((f * g).eval(x) == f.eval(x) * g.eval(x));
        CHECK(f.compose(g).eval(x) == f.eval(g.eval(x)));
    }
}

TEST_CASE("evaluation examples") {
    auto F = make_field(2, 2);
    auto w = F->generator();
    auto f = Poly::from_coeffs({F->zero(), F->one(), F->one()});  // x^2 + x
    CHECK(f.eval(w) == F->one());                                  // w^2 + w = 1
    auto g = Poly::from_coeffs({w, F->one()});
    CHECK(g.eval(F->zero()) == w);  // constant term
    CHECK(Poly::zero(F.get()).eval(w) == F->zero());
}

TEST_CASE("vanishing polynomial of a field and a point") {
    auto F4 = make_field(2, 2);
    auto z4 = vanishing_poly(all_elements(*F4));
    CHECK(z4 == Poly::from_coeffs({F4->zero(), F4->one(), F4->zero(), F4->zero(), F4->one()}));
    // x^4 - x (char 2: x^4 + x)

    auto F16 = make_field(2, 4);
    auto z16 = vanishing_poly(all_elements(*F16));
    CHECK(z16.degree() == 16);
    CHECK(z16.coeff(16) == F16->one());
    CHECK(z16.coeff(1) == -F16->one());
    for (long i = 2; i < 16; ++i) CHECK(z16.coeff(i) == F16->zero());
    CHECK(z16.coeff(0) == F16->zero());

    std::vector<FieldElement> origin = {F16->zero()};
    CHECK(vanishing_poly(origin) == Poly::x(F16.get()));

    std::vector<FieldElement> repeated = {F16->one(), F16->one()};
    CHECK_THROWS_AS(vanishing_poly(repeated), Error);
}

TEST_CASE("reduction by a vanishing polynomial") {
    auto F = make_field(2, 4);
    auto Z = vanishing_poly(all_elements(*F));
    auto x16 = Poly::monomial(F->one(), 16);
    CHECK(reduce_mod_vanishing(x16, Z) == Poly::x(F.get()));

    auto f = Poly::from_coeffs({F->generator(), F->one()});
    CHECK(reduce_mod_vanishing(f, Z) == f);  // deg f < deg Z

    CHECK_THROWS_AS(reduce_mod_vanishing(f, F->generator() * Z), Error);  // non-monic
}

TEST_CASE("trace-valued polynomial collapses under reduction over F_64") {
    auto F = make_field(2, 6);
    // g = x + x^4 + x^16 + c, values in F_4
    auto c = F->element(F->subfield_elements(F->subfield(2))[2]);
    REQUIRE_FALSE(c.is_zero());
    auto g = Poly::monomial(F->one(), 1) + Poly::monomial(F->one(), 4) +
             Poly::monomial(F->one(), 16) + Poly::constant(c);
    auto g7 = Poly::one(F.get());
    for (int i = 0; i < 7; ++i) g7 = g7 * g;

    // oracle first: g^7 and g agree as functions on all of F_64
    for (elem_idx v = 0; v < 64; ++v)
        CHECK(g7.eval(F->element(v)) == g.eval(F->element(v)));

    auto Z = vanishing_poly(all_elements(*F));
    CHECK(reduce_mod_vanishing(g7, Z) == g);
    CHECK(g.degree() == 16);
}

TEST_CASE("reduction preserves evaluations on the point set") {
    std::mt19937_64 rng(17);
    for (auto [p0, T] : {std::pair<unsigned, unsigned>{2, 4}, {2, 6}}) {
        auto F = make_field(p0, T);
        auto pts = all_elements(*F);
        auto Z = vanishing_poly(pts);
        for (int i = 0; i < 25; ++i) {
            auto f = rand_poly(*F, 3 * long(F->size()), rng);
            auto r = reduce_mod_vanishing(f, Z);
            CHECK(r.degree() < Z.degree());
            for (const auto& a : pts) CHECK(r.eval(a) == f.eval(a));
        }
        // subsets too
        std::vector<FieldElement> sub(pts.begin(), pts.begin() + 5);
        auto Zs = vanishing_poly(sub);
        auto f = rand_poly(*F, 20, rng);
        auto r = reduce_mod_vanishing(f, Zs);
        for (const auto& a : sub) CHECK(r.eval(a) == f.eval(a));
    }
}

TEST_CASE("linearized polynomial of a subspace") {
    auto F4 = make_field(2, 2);
    SubspaceChoice v01{F4->subfield(1), {F4->one()}, F4.get()};  // {0,1}
    CHECK(linearized_from_subspace(v01) ==
          Poly::from_coeffs({F4->zero(), F4->one(), F4->one()}));  // x^2 + x

    SubspaceChoice vzero{F4->subfield(1), {}, F4.get()};
    CHECK(linearized_from_subspace(vzero) == Poly::x(F4.get()));

    auto F64 = make_field(2, 6);
    auto v8 = subfield_as_subspace(*F64, 3, 1);  // F_8 inside F_64
    REQUIRE(v8.ell() == 3);
    auto L8 = linearized_from_subspace(v8);
    CHECK(L8 == Poly::monomial(F64->one(), 8) + Poly::monomial(F64->one(), 1));  // x^8 - x

    SubspaceChoice dep{F64->subfield(1), {F64->one(), F64->one()}, F64.get()};
    CHECK_THROWS_AS(linearized_from_subspace(dep), Error);
}

TEST_CASE("linearized polynomials: shape, additivity, kernel, image") {
    std::mt19937_64 rng(23);
    for (auto [p0, T, s] :
         {std::tuple<unsigned, unsigned, unsigned>{2, 4, 1}, {3, 4, 1}, {2, 4, 2}, {2, 6, 2}}) {
        auto F = make_field(p0, T);
        auto base = F->subfield(s);
        const unsigned t = F->relative_degree(base);
        const std::uint64_t p = std::uint64_t(F->subfield_elements(base).size());
        for (int trial = 0; trial < 6; ++trial) {
            // random subspace with 1 <= ell <= min(3, t)
            unsigned ell = 1 + unsigned(rng() % std::min(3u, t));
            SubspaceChoice V{base, {}, F.get()};
            while (V.basis_vectors.size() < ell) {
                auto cand = F->element(elem_idx(rng() % F->size()));
                std::vector<std::vector<FieldElement>> probe;
                for (const auto& x : V.basis_vectors) probe.push_back({x});
                probe.push_back({cand});
                if (span_dim_over(probe, base).dim == probe.size()) V.basis_vectors.push_back(cand);
            }
            auto L = linearized_from_subspace(V);
            std::uint64_t psl = 1;
            for (unsigned i = 0; i < ell; ++i) psl *= p;
            CHECK(L.degree() == long(psl));
            CHECK(L.is_monic());
            // only exponents p^i may be nonzero
            for (long e = 0; e <= L.degree(); ++e) {
                if (L.coeff(std::size_t(e)).is_zero()) continue;
                std::uint64_t x = std::uint64_t(e);
                while (x > 1 && x % p == 0) x /= p;
                CHECK(x == 1);
            }
            // additive map, F_p-homogeneous
            const auto& sub = F->subfield_elements(base);
            for (int i = 0; i < 20; ++i) {
                auto a = F->element(elem_idx(rng() % F->size()));
                auto b = F->element(elem_idx(rng() % F->size()));
                CHECK(L.eval(a + b) == L.eval(a) + L.eval(b));
                auto c = F->element(sub[rng() % sub.size()]);
                CHECK(L.eval(c * a) == c * L.eval(a));
            }
            // kernel is exactly V
            auto members = subspace_elements(V);
            for (const auto& m : members) CHECK(L.eval(m) == F->zero());
            std::size_t zeros = 0;
            for (elem_idx v = 0; v < F->size(); ++v)
                if (L.eval(F->element(v)).is_zero()) ++zeros;
            CHECK(zeros == members.size());
            // image has dimension t - ell
            std::vector<std::vector<FieldElement>> image;
            for (elem_idx v = 0; v < F->size(); ++v) image.push_back({L.eval(F->element(v))});
            CHECK(span_dim_over(image, base).dim == t - ell);
        }
    }
}

TEST_CASE("exact division") {
    auto F = make_field(2, 2);
    auto x = Poly::x(F.get());
    auto f = Poly::from_coeffs({F->zero(), F->one(), F->one()});  // x^2 + x
    CHECK(exact_div(f, x) == x + Poly::one(F.get()));

    auto bad = Poly::from_coeffs({F->one(), F->zero(), F->one()});  // x^2 + 1... = (x+1)^2
    CHECK_THROWS_AS(exact_div(bad, x), Error);

    std::mt19937_64 rng(31);
    auto F16 = make_field(2, 4);
    for (int i = 0; i < 30; ++i) {
        auto q = rand_poly(*F16, 8, rng);
        auto g = rand_poly(*F16, 5, rng);
        if (g.is_zero()) continue;
        CHECK(exact_div(q * g, g) == q);
    }

    // L_V(g * eta) is always divisible by g: the linearized polynomial has no
    // constant term
    auto F64 = make_field(2, 6);
    auto V = subfield_as_subspace(*F64, 3, 1);
    auto L = linearized_from_subspace(V);
    for (int i = 0; i < 10; ++i) {
        auto g = rand_poly(*F64, 6, rng);
        if (g.is_zero()) continue;
        auto eta = F64->element(1 + elem_idx(rng() % 63));
        auto lifted = L.compose(eta * g);
        CHECK(divrem(lifted, g).second.is_zero());
    }
}

TEST_CASE("interpolation") {
    auto F = make_field(2, 2);
    std::vector<FieldElement> pts = {F->zero(), F->one()};
    std::vector<FieldElement> vals = {F->zero(), F->one()};
    CHECK(interpolate(pts, vals) == Poly::x(F.get()));

    std::vector<FieldElement> allz = {F->zero(), F->zero()};
    CHECK(interpolate(pts, allz).is_zero());

    std::vector<FieldElement> rep = {F->one(), F->one()};
    CHECK_THROWS_AS(interpolate(rep, vals), Error);
    std::vector<FieldElement> shorter = {F->one()};
    CHECK_THROWS_AS(interpolate(pts, shorter), Error);

    std::mt19937_64 rng(41);
    auto F16 = make_field(2, 4);
    auto pts16 = all_elements(*F16);
    for (int i = 0; i < 20; ++i) {
        auto f = rand_poly(*F16, 15, rng);
        std::vector<FieldElement> v;
        for (const auto& a : pts16) v.push_back(f.eval(a));
        CHECK(interpolate(pts16, v) == f);
    }
}

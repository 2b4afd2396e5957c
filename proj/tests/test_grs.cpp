#include <numeric>
#include <random>
#include <vector>

#include "doctest.h"
#include "rackrs/grs.hpp"

using namespace rackrs;

namespace {

Poly rand_message(const FieldTower& F, unsigned k, std::mt19937_64& rng) {
    std::vector<FieldElement> c;
    for (unsigned i = 0; i < k; ++i) c.push_back(F.element(elem_idx(rng() % F.size())));
    if (std::all_of(c.begin(), c.end(), [](const FieldElement& e) { return e.is_zero(); }))
        c[0] = F.one();
    return Poly::from_coeffs(c);
}

}  // namespace

TEST_CASE("encoding examples over F_4") {
    auto F = make_field(2, 2);
    auto w = F->generator();
    std::vector<FieldElement> pts = {F->zero(), F->one(), w};
    auto code = GrsCode::make(F, pts, 2);

    auto zero = encode(code, Poly::zero(F.get()));
    CHECK(zero.symbols == std::vector<FieldElement>{F->zero(), F->zero(), F->zero()});

    auto ones = encode(code, Poly::one(F.get()));
    CHECK(ones.symbols == std::vector<FieldElement>{F->one(), F->one(), F->one()});

    auto ident = encode(code, Poly::x(F.get()));
    CHECK(ident.symbols == std::vector<FieldElement>{F->zero(), F->one(), w});

    CHECK_THROWS_AS(encode(code, Poly::monomial(F->one(), 2)), Error);  // deg > k-1
}

TEST_CASE("dual multipliers") {
    auto F = make_field(2, 2);
    auto w = F->generator();
    std::vector<FieldElement> pts = {F->zero(), F->one(), w};
    auto u = dual_multipliers(pts);
    CHECK(u == std::vector<FieldElement>{w * w, w, F->one()});

    std::vector<FieldElement> two = {F->zero(), F->one()};
    CHECK(dual_multipliers(two) == std::vector<FieldElement>{F->one(), F->one()});

    std::vector<FieldElement> rep = {w, w};
    CHECK_THROWS_AS(dual_multipliers(rep), Error);
}

TEST_CASE("duality certificate on random pairs") {
    auto F = make_field(2, 4);
    std::mt19937_64 rng(57);
    std::vector<FieldElement> pts;
    for (elem_idx v = 0; v < 8; ++v) pts.push_back(F->element(v));
    const unsigned k = 3;
    auto u = dual_multipliers(pts);
    for (int trial = 0; trial < 100; ++trial) {
        auto f = rand_message(*F, k, rng);
        auto g = rand_message(*F, unsigned(pts.size()) - k, rng);
        auto acc = F->zero();
        for (std::size_t i = 0; i < pts.size(); ++i)
            acc = acc + u[i] * f.eval(pts[i]) * g.eval(pts[i]);
        CHECK(acc == F->zero());
    }
}

TEST_CASE("parity check") {
    auto F = make_field(2, 4);
    std::mt19937_64 rng(5);
    std::vector<FieldElement> pts;
    for (elem_idx v = 0; v < 6; ++v) pts.push_back(F->element(v));
    auto code = GrsCode::make(F, pts, 3);

    auto w = encode(code, rand_message(*F, 3, rng));
    CHECK(is_codeword(code, w));

    auto tampered = w;
    tampered.symbols[2] = tampered.symbols[2] + F->one();
    CHECK_FALSE(is_codeword(code, tampered));

    Codeword zero{std::vector<FieldElement>(6, F->zero()), std::vector<bool>(6, false)};
    CHECK(is_codeword(code, zero));

    auto masked = w;
    masked.erased[0] = true;
    CHECK_THROWS_AS(is_codeword(code, masked), Error);
}

TEST_CASE("naive recovery and the MDS erasure property") {
    auto F = make_field(2, 4);
    std::mt19937_64 rng(77);
    std::vector<FieldElement> pts;
    for (elem_idx v = 2; v < 8; ++v) pts.push_back(F->element(v));
    const unsigned n = 6, k = 3;
    auto code = GrsCode::make(F, pts, k);

    // exhaustive over erasure patterns of size n-k for a few codewords
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    for (int trial = 0; trial < 10; ++trial) {
        auto word = encode(code, rand_message(*F, k, rng));
        std::vector<bool> pick(n, false);
        std::fill(pick.begin(), pick.begin() + (n - k), true);
        do {
            auto eras = word;
            std::vector<std::size_t> helpers;
            for (std::size_t i = 0; i < n; ++i) {
                if (pick[i])
                    eras.erased[i] = true;
                else
                    helpers.push_back(i);
            }
            auto rec = naive_recover(code, eras, helpers);
            CHECK(rec.symbols == word.symbols);
        } while (std::prev_permutation(pick.begin(), pick.end()));
    }

    auto word = encode(code, rand_message(*F, k, rng));
    auto eras = word;
    eras.erased[4] = true;
    std::vector<std::size_t> bad = {0, 1};
    CHECK_THROWS_AS(naive_recover(code, eras, bad), Error);  // too few helpers
    std::vector<std::size_t> overlap = {4, 1, 2};
    CHECK_THROWS_AS(naive_recover(code, eras, overlap), Error);
}

TEST_CASE("encode is injective on sampled messages") {
    auto F = make_field(2, 4);
    std::mt19937_64 rng(101);
    std::vector<FieldElement> pts;
    for (elem_idx v = 0; v < 8; ++v) pts.push_back(F->element(v));
    auto code = GrsCode::make(F, pts, 4);
    for (int i = 0; i < 50; ++i) {
        auto f = rand_message(*F, 4, rng), g = rand_message(*F, 4, rng);
        if (f == g) continue;
        CHECK(encode(code, f).symbols != encode(code, g).symbols);
    }
}

TEST_CASE("code construction guards") {
    auto F = make_field(2, 2);
    auto w = F->generator();
    std::vector<FieldElement> pts = {F->zero(), F->one(), w};
    CHECK_THROWS_AS(GrsCode::make(F, pts, 3), Error);  // k = n
    std::vector<FieldElement> dup = {F->zero(), F->zero()};
    CHECK_THROWS_AS(GrsCode::make(F, dup, 1), Error);
    std::vector<FieldElement> mults = {F->one(), F->zero(), F->one()};
    CHECK_THROWS_AS(GrsCode::make(F, pts, 2, mults), Error);  // zero multiplier
}

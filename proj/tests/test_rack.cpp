#include <random>

#include "doctest.h"
#include "rackrs/experiment.hpp"
#include "rackrs/schemes.hpp"

using namespace rackrs;

namespace {

Poly rand_message(const FieldTower& F, unsigned k, std::mt19937_64& rng) {
    std::vector<FieldElement> c;
    for (unsigned i = 0; i < k; ++i) c.push_back(F.element(elem_idx(rng() % F.size())));
    return Poly::from_coeffs(c);
}

Codeword erase_host(const RepairScheme& scheme, const Codeword& word) {
    Codeword lost = word;
    const std::size_t flat =
        std::size_t(scheme.host.first) * scheme.layout.nodes_per_rack + scheme.host.second;
    lost.erased[flat] = true;
    lost.symbols[flat] = scheme.field->zero();
    return lost;
}

FieldElement true_symbol(const RepairScheme& scheme, const Codeword& word) {
    return word.symbols[std::size_t(scheme.host.first) * scheme.layout.nodes_per_rack +
                        scheme.host.second];
}

/// Standard-model toy: n = 4 points of F_4, k = 1, d = 2, h_1 = 1 and h_2
/// linear with the prescribed host value.
RepairScheme toy_standard_scheme(std::shared_ptr<const FieldTower> F, unsigned failed) {
    std::vector<std::vector<FieldElement>> grid;
    for (elem_idx v = 0; v < 4; ++v) grid.push_back({F->element(v)});
    auto base = F->subfield(1);
    std::vector<FieldElement> eta = {F->one(), F->generator()};
    auto alpha_j = F->element(failed);
    Poly h1 = Poly::one(F.get());
    Poly h2 = Poly::x(F.get()) + Poly::constant(eta[1] - alpha_j);
    return RepairScheme::make(F, RackLayout::make(grid), 1, {failed, 0}, 2,
                              dual_basis(base, eta), {h1, h2});
}

}  // namespace

TEST_CASE("bits accounting") {
    BitsAccount a{Rational(9), 2};
    CHECK(a.bits() == doctest::Approx(9.0));
    CHECK(a.bits_exact() == "9");
    BitsAccount b{Rational(7), 4};  // 7 F_4-symbols = 14 bits
    CHECK(b.bits() == doctest::Approx(14.0));
    CHECK(b.bits_exact() == "14");
    BitsAccount c{Rational(12), 3};
    CHECK(c.bits_exact() == "12*log2(3)");
    CHECK(to_string(Rational(15, 2)) == "15/2");
    CHECK(to_string(Rational(18, 2)) == "9");
}

TEST_CASE("cut-set bound") {
    auto b = cutset_bound({64, 32, 4, 3, 64, 2});
    CHECK(b.m == 2);
    CHECK(b.symbols == Rational(9));
    CHECK(b.bits.bits() == doctest::Approx(9.0));

    CHECK(cutset_bound({63, 36, 7, 6, 64, 2}).symbols == Rational(12));

    // u = 1 degenerates to the minimum-storage bound d*t/(d-k+1)
    auto msr = cutset_bound({4, 2, 4, 3, 16, 2});
    CHECK(msr.m == 2);
    CHECK(msr.symbols == Rational(3 * 4, 3 - 2 + 1));

    // d = m: exactly d*t symbols
    auto dm = cutset_bound({64, 32, 4, 2, 64, 2});
    CHECK(dm.symbols == Rational(2 * 6));

    // non-integral bound stays exact
    auto gw16 = cutset_bound({16, 8, 16, 15, 16, 2});
    CHECK(gw16.symbols == Rational(15 * 4, 8));
    CHECK(to_string(gw16.symbols) == "15/2");

    CHECK_THROWS_AS(cutset_bound({64, 32, 4, 1, 64, 2}), Error);   // d < m
    CHECK_THROWS_AS(cutset_bound({64, 32, 4, 3, 60, 2}), Error);   // q not a power
    CHECK_THROWS_AS(cutset_bound({65, 32, 4, 3, 64, 2}), Error);   // r does not divide n
}

TEST_CASE("toy standard-model scheme repairs from every helper pair") {
    auto F = make_field(2, 2);
    std::mt19937_64 rng(404);
    for (unsigned failed = 0; failed < 4; ++failed) {
        auto scheme = toy_standard_scheme(F, failed);
        CHECK(validate_scheme(scheme).ok());
        const auto code = scheme.code();
        for (int trial = 0; trial < 5; ++trial) {
            auto word = encode(code, rand_message(*F, 1, rng));
            auto lost = erase_host(scheme, word);
            for (unsigned h1 = 0; h1 < 4; ++h1)
                for (unsigned h2 = h1 + 1; h2 < 4; ++h2) {
                    if (h1 == failed || h2 == failed) continue;
                    std::vector<unsigned> helpers = {h1, h2};
                    auto tr = repair_standard(scheme, helpers, lost);
                    CHECK(tr.recovered == true_symbol(scheme, word));
                    CHECK(tr.intra_rack_symbols == 0);
                }
        }
    }
}

TEST_CASE("toy rack scheme with u = 2 and d = 1") {
    auto F = make_field(2, 3);
    // 3 racks x 2 nodes out of F_8; constant h_a work since k = 1
    std::vector<std::vector<FieldElement>> grid = {
        {F->element(0), F->element(1)}, {F->element(2), F->element(3)},
        {F->element(4), F->element(5)}};
    auto base = F->subfield(1);
    auto eta = F->reference_basis(base);
    std::vector<Poly> h;
    for (const auto& e : eta) h.push_back(Poly::constant(e));
    auto scheme = RepairScheme::make(F, RackLayout::make(grid), 1, {0, 1}, 1,
                                     dual_basis(base, eta), h);
    CHECK(validate_scheme(scheme).ok());

    auto bw = worst_case_bandwidth(scheme);
    CHECK(bw.per_rack == std::vector<unsigned>{0, 3, 3});
    CHECK(bw.symbols == 3);

    std::mt19937_64 rng(11);
    const auto code = scheme.code();
    for (int trial = 0; trial < 10; ++trial) {
        auto word = encode(code, rand_message(*F, 1, rng));
        auto lost = erase_host(scheme, word);
        for (unsigned helper : {1u, 2u}) {
            std::vector<unsigned> hs = {helper};
            auto plan = build_download_plan(scheme, hs);
            auto tr = execute_repair(scheme, plan, lost);
            CHECK(tr.recovered == true_symbol(scheme, word));
            CHECK(tr.cross_rack_symbols == 3);
            CHECK(tr.intra_rack_symbols == 3);  // (u-1)*t
        }
    }
}

TEST_CASE("a rack where every h vanishes contributes nothing") {
    auto F = make_field(2, 4);
    std::vector<std::vector<FieldElement>> grid = {
        {F->element(1), F->element(2)}, {F->element(3), F->element(4)},
        {F->element(5), F->element(6)}};
    auto layout = RackLayout::make(grid);
    auto base = F->subfield(1);
    auto eta = F->reference_basis(base);
    // h_a = eta_a * Z(x) / Z(host), Z vanishing on rack 1
    std::vector<FieldElement> rack1 = {F->element(3), F->element(4)};
    auto Z = vanishing_poly(rack1);
    auto unit = Z.eval(F->element(1)).inv();
    std::vector<Poly> h;
    for (const auto& e : eta) h.push_back(Poly::constant(e * unit) * Z);
    auto scheme = RepairScheme::make(F, layout, 1, {0, 0}, 1, dual_basis(base, eta), h);
    REQUIRE(validate_scheme(scheme).ok());

    auto bw = worst_case_bandwidth(scheme);
    CHECK(bw.per_rack[1] == 0);
    CHECK(bw.per_rack[2] == 4);

    std::mt19937_64 rng(7);
    const auto code = scheme.code();
    auto word = encode(code, rand_message(*F, 1, rng));
    auto lost = erase_host(scheme, word);
    for (unsigned helper : {1u, 2u}) {
        std::vector<unsigned> hs = {helper};
        auto plan = build_download_plan(scheme, hs);
        auto tr = execute_repair(scheme, plan, lost);
        CHECK(tr.recovered == true_symbol(scheme, word));
        CHECK(tr.cross_rack_symbols == (helper == 1 ? 0 : 4));
    }
}

TEST_CASE("validate_scheme flags tampering and degree violations") {
    FamilyParams prm;
    prm.family = Family::additive;
    prm.p0 = 2;
    prm.t = 6;
    prm.ell = 3;
    prm.k = 32;
    auto scheme = build_family_scheme(prm);
    CHECK(scheme.validation.ok());

    auto tampered = scheme;
    tampered.h_polys[0] = tampered.h_polys[0] + Poly::one(scheme.field.get());
    auto rep = validate_scheme(tampered);
    CHECK_FALSE(rep.host_values_ok);
    CHECK(rep.degree_ok);
    CHECK_FALSE(rep.ok());

    // lowering d until the bound drops below max deg h_a
    auto low_d = RepairScheme::make(scheme.field, scheme.layout, scheme.k, scheme.host, 2,
                                    scheme.basis, scheme.h_polys);
    auto rep2 = validate_scheme(low_d);
    CHECK_FALSE(rep2.degree_ok);  // bound 16*3-33 = 15 < 16
    CHECK(rep2.max_degree == 16);
    CHECK(rep2.degree_bound == 15);

    auto bad_theta = scheme;
    bad_theta.basis.theta[0] = bad_theta.basis.theta[0] + scheme.field->one();
    CHECK_FALSE(validate_scheme(bad_theta).basis_ok);
}

TEST_CASE("download plan guards") {
    FamilyParams prm;
    prm.family = Family::additive;
    prm.p0 = 2;
    prm.t = 6;
    prm.ell = 3;
    prm.k = 32;
    auto scheme = build_family_scheme(prm);

    std::vector<unsigned> wrong_count = {1, 2};
    CHECK_THROWS_AS(build_download_plan(scheme, wrong_count), Error);
    std::vector<unsigned> with_host = {0, 1, 2};
    CHECK_THROWS_AS(build_download_plan(scheme, with_host), Error);
    std::vector<unsigned> out_of_range = {1, 2, 7};
    CHECK_THROWS_AS(build_download_plan(scheme, out_of_range), Error);
    std::vector<unsigned> repeated = {1, 1, 2};
    CHECK_THROWS_AS(build_download_plan(scheme, repeated), Error);

    std::vector<unsigned> good = {1, 2, 3};
    auto plan = build_download_plan(scheme, good);
    CHECK(plan.cross_symbols == 9);
    CHECK(plan.b_profile == std::vector<unsigned>{3, 3, 3});
    for (const auto& vm : plan.punct_multipliers)
        for (const auto& v : vm) CHECK_FALSE(v.is_zero());

    // plan does not transfer to a scheme with another host
    FamilyParams other = prm;
    other.host_rack = 1;
    auto scheme2 = build_family_scheme(other);
    CHECK_THROWS_AS(execute_repair(scheme2, plan, encode(scheme2.code(), Poly::one(scheme2.field.get()))),
                    Error);
}

TEST_CASE("execute_repair on degenerate and random codewords") {
    FamilyParams prm;
    prm.family = Family::additive;
    prm.p0 = 2;
    prm.t = 6;
    prm.ell = 3;
    prm.k = 32;
    auto scheme = build_family_scheme(prm);
    const auto code = scheme.code();
    std::vector<unsigned> helpers = {1, 2, 3};
    auto plan = build_download_plan(scheme, helpers);

    auto zero = encode(code, Poly::zero(scheme.field.get()));
    auto tr0 = execute_repair(scheme, plan, zero);
    CHECK(tr0.recovered == scheme.field->zero());
    for (const auto& [rack, payload] : tr0.per_rack_payload)
        for (const auto& s : payload) CHECK(s.is_zero());

    auto ones = encode(code, Poly::one(scheme.field.get()));
    CHECK(execute_repair(scheme, plan, ones).recovered == scheme.field->one());

    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 100; ++trial) {
        auto word = encode(code, rand_message(*scheme.field, scheme.k, rng));
        auto lost = erase_host(scheme, word);
        auto tr = execute_repair(scheme, plan, lost);
        CHECK(tr.recovered == true_symbol(scheme, word));

        // agreement with the naive interpolation oracle
        std::vector<std::size_t> nh;
        const std::size_t flat = 0 * 16 + 0;
        for (std::size_t i = 0; i < word.size() && nh.size() < scheme.k; ++i)
            if (i != flat) nh.push_back(i);
        CHECK(naive_recover(code, lost, nh).symbols[flat] == true_symbol(scheme, word));
    }

    // tampered word without erasures fails the parity precondition
    auto bad = encode(code, Poly::one(scheme.field.get()));
    bad.symbols[5] = bad.symbols[5] + scheme.field->one();
    CHECK_THROWS_AS(execute_repair(scheme, plan, bad), RepairError);

    // erasures outside the host are rejected
    auto wrong_mask = encode(code, Poly::one(scheme.field.get()));
    wrong_mask.erased[20] = true;
    CHECK_THROWS_AS(execute_repair(scheme, plan, wrong_mask), Error);
}

TEST_CASE("repair_standard requires u = 1 and the right helper count") {
    auto F16 = make_field(2, 4);
    auto gw = gw_scheme(F16, F16->subfield(1), 8, 3);
    std::mt19937_64 rng(31);
    auto word = encode(gw.code(), rand_message(*F16, 8, rng));
    auto lost = erase_host(gw, word);

    std::vector<unsigned> helpers;
    for (unsigned i = 0; i < 16; ++i)
        if (i != 3) helpers.push_back(i);
    auto tr = repair_standard(gw, helpers, lost);
    CHECK(tr.recovered == true_symbol(gw, word));
    CHECK(tr.cross_rack_symbols == 15);
    CHECK(tr.cross_rack_bits.bits_exact() == "15");

    helpers.pop_back();  // d-1 helpers: the GW scheme needs all q-1
    CHECK_THROWS_AS(repair_standard(gw, helpers, lost), Error);

    FamilyParams prm;
    prm.family = Family::additive;
    prm.p0 = 2;
    prm.t = 6;
    prm.ell = 3;
    prm.k = 32;
    auto rack_scheme = build_family_scheme(prm);
    std::vector<unsigned> three = {1, 2, 3};
    auto rack_word = encode(rack_scheme.code(), Poly::one(rack_scheme.field.get()));
    CHECK_THROWS_AS(repair_standard(rack_scheme, three, rack_word), Error);
}

TEST_CASE("the sign convention of the repair identity is pinned") {
    // odd characteristic so that a global sign flip changes the result
    auto F9 = make_field(3, 2);
    auto scheme = gw_scheme(F9, F9->subfield(1), 3, 4);
    const auto code = scheme.code();
    std::mt19937_64 rng(5);

    Poly msg = rand_message(*F9, 3, rng);
    auto word = encode(code, msg);
    while (true_symbol(scheme, word).is_zero()) {
        msg = rand_message(*F9, 3, rng);
        word = encode(code, msg);
    }
    auto lost = erase_host(scheme, word);
    std::vector<unsigned> helpers;
    for (unsigned i = 0; i < 9; ++i)
        if (i != 4) helpers.push_back(i);
    auto plan = build_download_plan(scheme, helpers);
    auto tr = execute_repair(scheme, plan, lost);
    REQUIRE(tr.recovered == true_symbol(scheme, word));

    // recompute the traces with the right-hand side negated
    const FieldTower& F = *scheme.field;
    const unsigned t = scheme.t();
    std::vector<FieldElement> flipped;
    for (unsigned a = 0; a < t; ++a) {
        auto acc = F.zero();  // u = 1, so there is no host-rack sum
        for (std::size_t hi = 0; hi < plan.helpers.size(); ++hi) {
            const unsigned rk = plan.helpers[hi];
            std::vector<FieldElement> fvec;
            for (unsigned l = 0; l < 1; ++l)
                fvec.push_back(plan.helper_weights[hi][l] *
                               word.symbols[std::size_t(rk) * 1 + l]);
            for (unsigned m = 0; m < plan.b_profile[hi]; ++m) {
                auto dot = F.zero();
                for (unsigned l = 0; l < 1; ++l) dot = dot + fvec[l] * plan.spans[hi].basis[m][l];
                acc = acc + plan.combo[hi][a][m] * F.trace_to(dot, scheme.basis.base);
            }
        }
        flipped.push_back(acc);  // correct value is -acc
    }
    auto wrong = element_from_traces(flipped, scheme.basis);
    CHECK(wrong != true_symbol(scheme, word));
    CHECK(wrong == -true_symbol(scheme, word));
}

TEST_CASE("experiment runner is deterministic and self-checking") {
    FamilyParams prm;
    prm.family = Family::additive;
    prm.p0 = 2;
    prm.t = 4;
    prm.ell = 3;
    prm.k = 3;
    auto scheme = build_family_scheme(prm);

    ExperimentConfig cfg;
    cfg.trials = 10;
    auto r1 = run_repair_experiment(scheme, cfg);
    auto r2 = run_repair_experiment(scheme, cfg);
    CHECK(r1.failures == 0);
    CHECK(r1.to_json() == r2.to_json());
    CHECK(r1.bandwidth_symbols == 3);
    CHECK(to_string(r1.cutset_symbols) == "3");
    CHECK(r1.optimal);
    CHECK(r1.naive_symbols == 3 * 4);

    cfg.seed = 43;
    auto r3 = run_repair_experiment(scheme, cfg);
    CHECK(r3.failures == 0);
    CHECK(r3.to_json() != r1.to_json());  // seed is part of the report
}

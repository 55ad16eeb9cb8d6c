#include "tatesub/ring.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace tatesub;

TEST_CASE("component ring rewrites x^N -> q^k", "[rings]") {
    auto r10 = component_ring(1, 0);
    CHECK(r10->normal_form({1, 0}) == Monomial{0, 0});
    CHECK(RingElement::generator(r10, "x") == RingElement::one(r10));

    auto r21 = component_ring(2, 1);
    CHECK(r21->normal_form({3, 0}) == Monomial{1, 1});  // x^3 = q x
    auto x = RingElement::generator(r21, "x");
    auto q = RingElement::generator(r21, "q");
    CHECK(x * x == q);
    CHECK(x.pow(3) == q * x);

    auto r32 = component_ring(3, 2);
    CHECK(r32->normal_form({4, 0}) == Monomial{1, 2});   // x^4 = q^2 x
    CHECK(r32->normal_form({-1, 0}) == Monomial{2, -2});  // x^-1 = x^2 q^-2
    auto y = RingElement::generator(r32, "x");
    CHECK(y * y.inverse() == RingElement::one(r32));

    CHECK_THROWS_AS(component_ring(3, 3), std::domain_error);
    CHECK_THROWS_AS(component_ring(3, -1), std::domain_error);
}

TEST_CASE("classifying factor rewrites q'^e -> q^d", "[rings]") {
    auto s12 = sub_factor_ring(1, 2);
    CHECK(s12->normal_form({3, 0}) == Monomial{1, 1});  // q'^3 = q q'

    auto s23 = sub_factor_ring(2, 3);
    CHECK(s23->normal_form({7, 0}) == Monomial{1, 4});  // q'^7 = q^4 q'

    auto s21 = sub_factor_ring(2, 1);
    CHECK(s21->normal_form({1, 0}) == Monomial{0, 2});  // q' = q^2 outright
    CHECK(s21->normal_form({-3, 0}) == Monomial{0, -6});
}

TEST_CASE("tensor factors with three generators", "[rings]") {
    auto ss = sstar_factor_ring(2, 1, 2, 1);  // x^2 -> q, q'^2 -> q
    CHECK(ss->normal_form({2, 2, 0}) == Monomial{0, 0, 2});  // x^2 q'^2 = q^2
    CHECK(ss->normal_form({1, -1, 0}) == Monomial{1, 1, -1});  // q'^-1 = q' q^-1

    auto ts = tstar_factor_ring(2, 1, 2, 1);  // x^2 -> q', q'^2 -> Q
    CHECK(ts->normal_form({2, 0, 0}) == Monomial{0, 1, 0});
    CHECK(ts->normal_form({4, 0, 0}) == Monomial{0, 0, 1});

    // cascade: x^4 -> q'^3 -> q' Q^2 in one pass
    auto deep = tstar_factor_ring(4, 2, 2, 3);
    CHECK(deep->normal_form({4, 0, 0}) == Monomial{0, 1, 2});

    CHECK_THROWS_AS(sstar_factor_ring(4, 2, 3, 0), std::domain_error);
    CHECK_THROWS_AS(tstar_factor_ring(4, 2, 2, 4), std::domain_error);
}

TEST_CASE("normal_form is idempotent and respects products", "[rings]") {
    std::mt19937 rng(20260825);
    std::uniform_int_distribution<long> exp(-10, 10);
    std::vector<PresentationPtr> rings = {
        component_ring(5, 3), sub_factor_ring(3, 4), sstar_factor_ring(4, 2, 2, 3),
        tstar_factor_ring(6, 2, 3, 5), cyclo_q_model_ring(5)};
    for (const auto& r : rings) {
        for (int trial = 0; trial < 200; ++trial) {
            Monomial m1(r->arity()), m2(r->arity());
            for (size_t i = 0; i < r->arity(); ++i) {
                m1[i] = exp(rng);
                m2[i] = exp(rng);
            }
            Monomial n1 = r->normal_form(m1);
            CHECK(r->normal_form(n1) == n1);
            for (size_t i = 0; i < r->arity(); ++i) {
                const auto& g = r->generators()[i];
                if (g.modulus > 0) {
                    CHECK(n1[i] >= 0);
                    CHECK(n1[i] < g.modulus);
                }
            }
            Monomial sum(r->arity()), nsum(r->arity());
            Monomial n2 = r->normal_form(m2);
            for (size_t i = 0; i < r->arity(); ++i) {
                sum[i] = m1[i] + m2[i];
                nsum[i] = n1[i] + n2[i];
            }
            CHECK(r->normal_form(sum) == r->normal_form(nsum));
        }
    }
}

TEST_CASE("ranks and factor counts of the product rings", "[rings]") {
    CHECK(component_ring(5, 3)->rank() == 5);
    CHECK(sub_factor_ring(2, 3)->rank() == 3);
    CHECK(sstar_factor_ring(6, 2, 3, 4)->rank() == 18);
    for (long N = 1; N <= 12; ++N) {
        Int sigma = 0;
        long divisors = 0;
        for (long d = 1; d <= N; ++d) {
            if (N % d == 0) {
                sigma += d;
                ++divisors;
            }
        }
        CHECK(build_O_TN(N).total_rank() == Int(N) * N);
        CHECK(build_O_Sub(N).total_rank() == sigma);
        CHECK(build_O_Sub(N).factors.size() == static_cast<size_t>(divisors));
        CHECK(build_O_sStar(N).factors.size() == static_cast<size_t>(divisors) * N);
        CHECK(build_O_tStar(N).factors.size() == static_cast<size_t>(divisors) * N);
    }
    CHECK(build_O_Sub(6).factors.size() == 4);
    CHECK(build_O_sStar(6).factors.size() == 24);
}

TEST_CASE("ring elements normalize on arithmetic", "[rings]") {
    auto r = component_ring(2, 1);
    auto x = RingElement::generator(r, "x");
    auto q = RingElement::generator(r, "q");

    RingElement sq = (x + q) * (x + q);
    RingElement expect = q + RingElement::monomial(r, {1, 1}, 2) + q * q;
    CHECK(sq == expect);
    CHECK(sq.str() == "q + q^2 + 2*x*q");  // lex order: x exponent first, then q

    CHECK((x - x).is_zero());
    CHECK((Int(0) * q).is_zero());
    CHECK(-(x - q) == q - x);
    CHECK(x.pow(-2) == q.pow(-1));
    CHECK(x.pow(0) == RingElement::one(r));

    CHECK_THROWS_AS((x + q).inverse(), std::domain_error);
    CHECK_THROWS_AS(RingElement::monomial(r, {0, 1}, 2).inverse(), std::domain_error);

    // same presentation built twice: elements interoperate
    auto r2 = component_ring(2, 1);
    CHECK(RingElement::generator(r2, "x") * x == q);

    auto other = component_ring(2, 0);
    CHECK_THROWS_AS(x * RingElement::generator(other, "x"), std::invalid_argument);
}

TEST_CASE("element JSON carries all exponent slots", "[rings]") {
    auto ss = sstar_factor_ring(2, 1, 2, 1);
    RingElement el = RingElement::monomial(ss, {1, -1, 0});
    nlohmann::ordered_json j = el.to_json();
    CHECK(j["factor"] == "sStar:(d=1,e=2):k=1");
    REQUIRE(j["terms"].size() == 1);
    CHECK(j["terms"][0][0] == nlohmann::ordered_json({{"q", -1}, {"x", 1}, {"qp", 1}}));
    CHECK(j["terms"][0][1] == "1");
}

TEST_CASE("ring homs check their relations on construction", "[rings]") {
    auto r21 = component_ring(2, 1);

    // identity on T[2]:k=1
    std::map<std::string, RingElement> id_images;
    id_images.emplace("x", RingElement::generator(r21, "x"));
    id_images.emplace("q", RingElement::generator(r21, "q"));
    RingHom ident(r21, r21, id_images);
    CHECK(ident.apply(RingElement::generator(r21, "x").pow(3)) ==
          RingElement::generator(r21, "q") * RingElement::generator(r21, "x"));

    // quotient T[2]:k=0 -> Z[q+-], x -> -1 (a square root of 1)
    auto r20 = component_ring(2, 0);
    auto base = base_ring();
    std::map<std::string, RingElement> sign_images;
    sign_images.emplace("x", Int(-1) * RingElement::one(base));
    sign_images.emplace("q", RingElement::generator(base, "q"));
    RingHom sign(r20, base, sign_images);
    CHECK(sign.apply(RingElement::generator(r20, "x") * RingElement::generator(r20, "q")) ==
          Int(-1) * RingElement::generator(base, "q"));

    // q' -> q fails: q'^2 - q would map to q^2 - q != 0
    auto s12 = sub_factor_ring(1, 2);
    std::map<std::string, RingElement> bad_images;
    bad_images.emplace("qp", RingElement::generator(base, "q"));
    bad_images.emplace("q", RingElement::generator(base, "q"));
    CHECK_THROWS_AS(RingHom(s12, base, bad_images), WellDefinednessError);
    try {
        RingHom(s12, base, bad_images);
    } catch (const WellDefinednessError& err) {
        CHECK(err.relation() == "qp^2 - q");
        CHECK_FALSE(err.residual().empty());
    }

    // missing image and non-unit image for an invertible generator
    std::map<std::string, RingElement> missing;
    missing.emplace("qp", RingElement::one(base));
    CHECK_THROWS_AS(RingHom(s12, base, missing), std::invalid_argument);

    std::map<std::string, RingElement> nonunit;
    nonunit.emplace("qp", RingElement::one(base));
    nonunit.emplace("q", RingElement::one(base) + RingElement::generator(base, "q"));
    CHECK_THROWS_AS(RingHom(s12, base, nonunit), WellDefinednessError);

    // image living in the wrong ring
    std::map<std::string, RingElement> stray;
    stray.emplace("qp", RingElement::one(r21));
    stray.emplace("q", RingElement::generator(base, "q"));
    CHECK_THROWS_AS(RingHom(s12, base, stray), std::invalid_argument);
}

TEST_CASE("square roots of q live in the cyclotomic model ring", "[rings]") {
    auto s12 = sub_factor_ring(1, 2);
    auto k2 = cyclo_q_model_ring(2);

    auto u = RingElement::generator(k2, "u");
    auto z = RingElement::generator(k2, "z");
    CHECK(z * z == RingElement::one(k2));

    for (bool twist : {false, true}) {
        std::map<std::string, RingElement> images;
        images.emplace("q", u * u);
        images.emplace("qp", twist ? z * u : u);
        RingHom hom(s12, k2, images);  // q'^2 - q -> (z^j u)^2 - u^2 = 0
        CHECK(hom.apply(RingElement::generator(s12, "qp").pow(2)) == u * u);
    }

    std::map<std::string, RingElement> bad;
    bad.emplace("q", u * u);
    bad.emplace("qp", z);
    CHECK_THROWS_AS(RingHom(s12, k2, bad), WellDefinednessError);
}

TEST_CASE("composition of homs is substitution", "[rings]") {
    auto base = base_ring();
    auto s12 = sub_factor_ring(1, 2);
    auto k2 = cyclo_q_model_ring(2);
    auto u = RingElement::generator(k2, "u");
    auto z = RingElement::generator(k2, "z");

    std::map<std::string, RingElement> inc_images;
    inc_images.emplace("q", RingElement::generator(s12, "q"));
    RingHom inc(base, s12, inc_images);

    std::map<std::string, RingElement> root_images;
    root_images.emplace("q", u * u);
    root_images.emplace("qp", z * u);
    RingHom root(s12, k2, root_images);

    RingHom through = compose(root, inc);
    RingElement probe = RingElement::generator(base, "q").pow(3) +
                        Int(5) * RingElement::generator(base, "q").pow(-1);
    CHECK(through.apply(probe) == root.apply(inc.apply(probe)));

    CHECK_THROWS_AS(compose(inc, inc), std::invalid_argument);
}

TEST_CASE("presentations validate their input", "[rings]") {
    // replacement touching an earlier (or own) generator is rejected
    std::vector<GeneratorSpec> self_ref{{"a", 2, {1, 0}}, {"b", 0, {}}};
    CHECK_THROWS_AS(RingPresentation("bad", self_ref), std::invalid_argument);
    std::vector<GeneratorSpec> neg_mod{{"a", -1, {}}};
    CHECK_THROWS_AS(RingPresentation("bad", neg_mod), std::invalid_argument);
    RingPresentation ok("ok", {{"a", 2, {0, 3}}, {"b", 0, {}}});
    CHECK_THROWS_AS(ok.normal_form({1}), std::invalid_argument);
    CHECK_THROWS_AS(ok.index_of("c"), std::out_of_range);
}

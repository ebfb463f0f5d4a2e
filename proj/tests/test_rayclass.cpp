#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "koehler/rayclass.hpp"

using namespace koehler;

namespace {

Modulus modulus_one(const QuadField& K) { return Modulus{QuadIdeal::unit(K)}; }

// Independent ray-equivalence test: I ~ J iff I*conj(J) has a generator
// beta == N(J) mod m that is totally positive (real case).
bool ray_equiv(const QuadIdeal& I, const QuadIdeal& J, const Modulus& m) {
    Congruence cong{m.finite, QuadInt(m.field(), J.norm(), 0)};
    std::optional<std::pair<int, int>> signs;
    if (m.is_real()) signs = {1, 1};
    return principal_generator(I * J.conj(), cong, signs).has_value();
}

// Brute-force count of ray classes among ideals of norm <= B.
Int brute_class_count(const Modulus& m, Int B) {
    std::vector<QuadIdeal> reps;
    for (Int n = 1; n <= B; ++n)
        for (const auto& I : ideals_of_norm(m.field(), n)) {
            if (!I.coprime_to(m.finite)) continue;
            bool found = false;
            for (const auto& R : reps)
                if (ray_equiv(I, R, m)) { found = true; break; }
            if (!found) reps.push_back(I);
        }
    return (Int)reps.size();
}

// Enumerate all exponent vectors of the group (the abstract element list).
std::vector<std::vector<Int>> all_classes(const RayClassGroup& G) {
    std::vector<std::vector<Int>> out;
    std::vector<Int> e(G.invariants().size(), 0);
    while (true) {
        out.push_back(e);
        size_t i = 0;
        for (; i < e.size(); ++i) {
            size_t j = e.size() - 1 - i;
            if (++e[j] < G.invariants()[j]) break;
            e[j] = 0;
        }
        if (i == e.size()) break;
    }
    return out;
}

Int exponent_of(const CycNum& v, Int d) {
    for (Int k = 0; k < d; ++k)
        if (v == CycNum::root(d, k)) return k;
    REQUIRE(false);
    return -1;
}

}  // namespace

TEST_CASE("small groups have the expected structure") {
    auto Gi = RayClassGroup::make(modulus_one(QuadField::make(-1)));
    CHECK(Gi->trivial());
    CHECK(Gi->invariants().empty());

    auto G5 = RayClassGroup::make(modulus_one(QuadField::make(-5)));
    CHECK(G5->order() == 2);
    REQUIRE(G5->invariants() == std::vector<Int>{2});

    // narrow group of Q(sqrt(5)) is trivial: fundamental unit has norm -1
    auto Gr5 = RayClassGroup::make(modulus_one(QuadField::make(5)));
    CHECK(Gr5->trivial());

    // narrow group of Q(sqrt(3)) is C2: fundamental unit totally positive
    auto Gr12 = RayClassGroup::make(modulus_one(QuadField::make(3)));
    CHECK(Gr12->order() == 2);

    auto G23 = RayClassGroup::make(modulus_one(QuadField::make(-23)));
    CHECK(G23->order() == 3);
}

TEST_CASE("class_of basics") {
    QuadField K = QuadField::make(-5);
    auto G = RayClassGroup::make(modulus_one(K));
    QuadIdeal I = QuadIdeal::from_generators(K, {QuadInt(K, 3, 0), QuadInt(K, 11, 1)});
    CHECK(G->class_of(I) == std::vector<Int>{1});
    CHECK(G->class_of(QuadIdeal::principal(QuadInt(K, 7, 0))) == std::vector<Int>{0});
    for (size_t i = 0; i < G->generators().size(); ++i) {
        std::vector<Int> e(G->invariants().size(), 0);
        e[i] = 1;
        CHECK(G->class_of(G->generators()[i]) == e);
    }

    // principal ray ideals land in the identity class
    QuadField Ki = QuadField::make(-1);
    QuadIdeal m3 = QuadIdeal::principal(QuadInt(Ki, 3, 0));
    auto G3 = RayClassGroup::make(Modulus{m3});
    QuadInt alpha(Ki, 1, 3);  // 1 + 3*omega == 1 mod (3)
    CHECK(m3.contains(alpha + QuadInt(Ki, -1, 0)));
    std::vector<Int> zero(G3->invariants().size(), 0);
    CHECK(G3->class_of(QuadIdeal::principal(alpha)) == zero);
    CHECK_THROWS_AS(G3->class_of(m3), InputError);
}

TEST_CASE("group order matches brute-force ray classification") {
    struct Case {
        Int d;
        QuadInt (*mk)(const QuadField&);
    };
    std::vector<std::pair<Int, Int>> cases = {
        {-1, 5}, {-1, 3}, {-5, 1}, {-23, 1}, {5, 2}, {3, 1}, {-1, 1}};
    for (auto [d, mn] : cases) {
        QuadField K = QuadField::make(d);
        Modulus m{QuadIdeal::principal(QuadInt(K, mn, 0))};
        auto G = RayClassGroup::make(m);
        Int B = 40;
        Int c1 = brute_class_count(m, B);
        Int c2 = brute_class_count(m, 2 * B);
        CHECK(c1 == c2);  // stable under doubling
        CHECK(G->order() == c2);
    }
}

TEST_CASE("characters: count, orthogonality, evaluation") {
    QuadField K = QuadField::make(-1);
    Modulus m{QuadIdeal::principal(QuadInt(K, 5, 0))};
    auto G = RayClassGroup::make(m);
    CHECK(G->order() == 4);
    auto chars = characters(G);
    CHECK((Int)chars.size() == G->order());
    CHECK(chars[0].is_trivial());
    auto classes = all_classes(*G);
    for (const auto& xi : chars) {
        CycNum sum = CycNum::zero();
        for (const auto& e : classes) sum += xi.on_class(e);
        if (xi.is_trivial())
            CHECK(sum == CycNum::integer(G->order()));
        else
            CHECK(sum.is_zero());
    }
    // evaluation conventions
    for (const auto& xi : chars) {
        CHECK(evaluate(xi, QuadIdeal::unit(K)).is_one());
        CHECK(evaluate(xi, m.finite).is_zero());  // not coprime
    }
    // multiplicativity on random ideals
    std::mt19937 rng(11);
    std::uniform_int_distribution<Int> pick(1, 60);
    const auto& xi = chars[1];
    int done = 0;
    while (done < 40) {
        Int a = pick(rng), b = pick(rng);
        auto va = ideals_of_norm(K, a), vb = ideals_of_norm(K, b);
        if (va.empty() || vb.empty()) continue;
        const auto& I = va[rng() % va.size()];
        const auto& J = vb[rng() % vb.size()];
        CHECK(evaluate(xi, I * J) == evaluate(xi, I) * evaluate(xi, J));
        ++done;
    }
}

TEST_CASE("nontrivial class character of Q(sqrt(-5))") {
    QuadField K = QuadField::make(-5);
    auto G = RayClassGroup::make(modulus_one(K));
    auto chars = characters(G);
    REQUIRE(chars.size() == 2);
    QuadIdeal I = QuadIdeal::from_generators(K, {QuadInt(K, 3, 0), QuadInt(K, 11, 1)});
    CHECK(evaluate(chars[1], I) == CycNum::integer(-1));
}

TEST_CASE("conjugate character and epsilon") {
    // cubic class character of Q(sqrt(-23)): sigma inverts classes, eps = xi^2
    QuadField K = QuadField::make(-23);
    auto G = RayClassGroup::make(modulus_one(K));
    REQUIRE(G->invariants() == std::vector<Int>{3});
    HeckeChar xi = make_char(G, {1});
    HeckeChar xis = conj_char(xi);
    CHECK(xis.exponents == std::vector<Int>{2});
    auto [eps, ord] = epsilon(xi);
    CHECK(ord == 3);
    CHECK(eps.exponents == std::vector<Int>{1});

    // evaluate(xi, sigma I) == evaluate(conj xi, I) on many ideals
    for (Int n = 1; n <= 50; ++n)
        for (const auto& I : ideals_of_norm(K, n))
            CHECK(evaluate(xi, I.conj()) == evaluate(xis, I));

    // trivial and quadratic characters are self-conjugate
    auto G5 = RayClassGroup::make(modulus_one(QuadField::make(-5)));
    for (const auto& c : characters(G5)) {
        CHECK(conj_char(c) == c);
        CHECK(epsilon(c).second == 1);
    }

    // sigma-unstable modulus is rejected
    QuadField Ki = QuadField::make(-1);
    auto sp = split_prime(Ki, 5);
    auto Gp = RayClassGroup::make(Modulus{sp.primes[0]});
    CHECK_THROWS_AS(conj_char(make_char(Gp, std::vector<Int>(Gp->invariants().size(), 0))),
                    InputError);
}

TEST_CASE("infinity types") {
    // imaginary: always (0,0)
    auto Gi = RayClassGroup::make(modulus_one(QuadField::make(-1)));
    CHECK(infinity_type(characters(Gi)[0]) == std::array<int, 2>{0, 0});

    // Q(sqrt(5)) with m = (4): -1 is not a power of the fundamental unit in
    // (O/4)^x, so the two sign elements lie in distinct ray classes and some
    // character sees exactly one of them
    QuadField K = QuadField::make(5);
    QuadIdeal m = QuadIdeal::principal(QuadInt(K, 4, 0));
    auto G = RayClassGroup::make(Modulus{m});
    auto chars = characters(G);
    CHECK(infinity_type(chars[0]) == std::array<int, 2>{0, 0});
    bool one_sign = false;
    for (const auto& xi : chars) {
        auto p = infinity_type(xi);
        if (p[0] + p[1] == 1) one_sign = true;
    }
    CHECK(one_sign);
}

TEST_CASE("conductor") {
    QuadField K = QuadField::make(-1);
    QuadIdeal m5 = QuadIdeal::principal(QuadInt(K, 5, 0));
    auto G5 = RayClassGroup::make(Modulus{m5});

    // trivial character: conductor (1)
    auto [f0, t0] = conductor(characters(G5)[0]);
    CHECK(f0.is_unit_ideal());
    CHECK(t0.is_trivial());

    // nontrivial characters mod (5) are primitive: no proper quotient exists
    for (const auto& xi : characters(G5)) {
        if (xi.is_trivial()) continue;
        auto [f, prim] = conductor(xi);
        CHECK(f == m5);
        CHECK(prim == xi);
    }

    // pull a character of modulus (5) back to modulus (15); conductor must drop
    QuadIdeal m15 = QuadIdeal::principal(QuadInt(K, 15, 0));
    auto G15 = RayClassGroup::make(Modulus{m15});
    HeckeChar xi5 = characters(G5)[1];
    std::vector<Int> ks;
    for (size_t i = 0; i < G15->generators().size(); ++i)
        ks.push_back(exponent_of(evaluate(xi5, G15->generators()[i]), G15->invariants()[i]));
    HeckeChar lifted = make_char(G15, ks);
    auto [f, prim] = conductor(lifted);
    CHECK(f == m5);
    // the primitive character agrees with the lift on ideals coprime to 15
    std::mt19937 rng(3);
    int done = 0;
    while (done < 20) {
        Int n = 1 + (Int)(rng() % 80);
        for (const auto& I : ideals_of_norm(K, n)) {
            if (!I.coprime_to(m15)) continue;
            CHECK(evaluate(prim, I) == evaluate(lifted, I));
            ++done;
            break;
        }
    }
    // conductor is idempotent
    auto [f2, prim2] = conductor(prim);
    CHECK(f2 == f);
    CHECK(prim2 == prim);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "koehler/theta.hpp"

using namespace koehler;

namespace {

HeckeChar trivial_char(Int d) {
    QuadField K = QuadField::make(d);
    auto G = RayClassGroup::make(Modulus{QuadIdeal::unit(K)});
    return make_char(G, std::vector<Int>(G->invariants().size(), 0));
}

}  // namespace

TEST_CASE("gaussian integers, trivial character") {
    HeckeChar xi = trivial_char(-1);
    ThetaExpansion T = theta_oracle(xi, 100);
    CHECK(T.level == 4);
    CHECK(T.a(1).is_one());
    CHECK(T.a(3).is_zero());
    CHECK(T.a(5) == CycNum::integer(2));
    CHECK(T.a(25) == CycNum::integer(3));
    for (Int r = 1; r <= 6; ++r) CHECK(T.a(1LL << r).is_one());
    // sum-of-two-squares sanity
    CHECK(T.a(9).is_one());
    CHECK(T.a(7).is_zero());
    CHECK(T.a(65) == CycNum::integer(4));
}

TEST_CASE("prime power coefficients by case") {
    HeckeChar xi = trivial_char(-1);
    CHECK(prime_power_coeff(xi, 3, 1).is_zero());       // inert, odd power
    CHECK(prime_power_coeff(xi, 3, 2).is_one());        // inert, even power
    CHECK(prime_power_coeff(xi, 2, 5).is_one());        // ramified
    CHECK(prime_power_coeff(xi, 5, 2) == CycNum::integer(3));  // split
    HeckeChar xi5 = trivial_char(-5);
    CHECK(prime_power_coeff(xi5, 3, 1) == CycNum::integer(2));
    CHECK(prime_power_coeff(xi5, 7, 1) == CycNum::integer(2));
    ThetaExpansion T = theta_fast(xi5, 25);
    CHECK(T.a(21) == CycNum::integer(4));
}

TEST_CASE("fast engine equals the oracle") {
    std::vector<HeckeChar> suite;
    suite.push_back(trivial_char(-1));
    suite.push_back(trivial_char(-5));
    for (const auto& xi : characters(RayClassGroup::make(
             Modulus{QuadIdeal::unit(QuadField::make(-5))})))
        suite.push_back(xi);
    for (const auto& xi : characters(RayClassGroup::make(
             Modulus{QuadIdeal::unit(QuadField::make(-23))})))
        suite.push_back(xi);
    QuadField K5 = QuadField::make(5);
    for (const auto& xi : characters(RayClassGroup::make(
             Modulus{QuadIdeal::principal(QuadInt(K5, 4, 0))})))
        suite.push_back(xi);
    for (const auto& xi : suite) {
        ThetaExpansion A = theta_oracle(xi, 300), B = theta_fast(xi, 300);
        for (Int n = 1; n <= 300; ++n) CHECK(A.a(n) == B.a(n));
    }
}

TEST_CASE("multiplicativity and inert vanishing") {
    QuadField K = QuadField::make(-23);
    auto G = RayClassGroup::make(Modulus{QuadIdeal::unit(K)});
    HeckeChar xi = make_char(G, {1});
    ThetaExpansion T = theta_fast(xi, 300);
    for (Int n = 2; n <= 300; ++n)
        for (Int m = 2; n * m <= 300; ++m)
            if (std::gcd(n, m) == 1) CHECK(T.a(n * m) == T.a(n) * T.a(m));
    for (Int p : {5, 7, 11, 17, 19, 21, 37, 43}) {
        if (kronecker_symbol(-23, p) != -1) continue;
        for (Int r = 1; 1; r += 2) {
            Int pw = 1;
            bool over = false;
            for (Int i = 0; i < r; ++i) {
                pw *= p;
                if (pw > 300) { over = true; break; }
            }
            if (over) break;
            CHECK(T.a(pw).is_zero());
        }
    }
}

TEST_CASE("cuspidality") {
    CHECK(!is_cuspidal(trivial_char(-1)));
    auto G5 = RayClassGroup::make(Modulus{QuadIdeal::unit(QuadField::make(-5))});
    CHECK(!is_cuspidal(characters(G5)[1]));  // genus character
    auto G23 = RayClassGroup::make(Modulus{QuadIdeal::unit(QuadField::make(-23))});
    CHECK(is_cuspidal(make_char(G23, {1})));
    // non-cuspidal: split-prime coefficients are twice a single value
    HeckeChar genus = characters(G5)[1];
    QuadField K5m = QuadField::make(-5);
    for (Int p : {3, 7, 23, 29}) {
        auto st = split_prime(K5m, p);
        REQUIRE(st.kind == SplitKind::Split);
        CHECK(prime_power_coeff(genus, p, 1) ==
              CycNum::integer(2) * evaluate(genus, st.primes[0]));
    }
}

TEST_CASE("level and parity") {
    CHECK(level(trivial_char(-1)) == 4);
    CHECK(level(trivial_char(-23)) == 23);
    QuadField K = QuadField::make(5);
    auto G = RayClassGroup::make(Modulus{QuadIdeal::principal(QuadInt(K, 4, 0))});
    CHECK(level(characters(G)[0]) == 80);
    CHECK(parity_ok(trivial_char(-1)));
    int admissible = 0;
    for (const auto& xi : characters(G)) {
        auto p = infinity_type(xi);
        CHECK(parity_ok(xi) == (p[0] + p[1] == 1));
        if (parity_ok(xi)) ++admissible;
    }
    CHECK(admissible > 0);
    CHECK(!parity_ok(characters(G)[0]));  // trivial character is even
}

TEST_CASE("sturm bound") {
    CHECK(sturm_bound(1) == 1);
    CHECK(sturm_bound(23) == 44);
    CHECK(sturm_bound(39) == 112);
    CHECK(sturm_bound(4) == 1);
    CHECK(sturm_bound(80) == 384);  // 80^2 * (3/4) * (24/25) = 4608
}

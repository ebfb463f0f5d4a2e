#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "koehler/kohler.hpp"

using namespace koehler;

namespace {

bool is_prime(Int n) {
    if (n < 2) return false;
    for (Int d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::tuple<Int, Int, Int, Int, std::vector<Int>> key_of(const HeckeChar& xi) {
    const QuadIdeal& m = xi.group->modulus().finite;
    return {std::abs(m.disc()), m.a(), m.b(), m.c(), xi.exponents};
}

bool theta_eq(const ThetaExpansion& A, const ThetaExpansion& B) {
    if (A.bound != B.bound) return false;
    for (Int n = 1; n <= A.bound; ++n)
        if (A.a(n) != B.a(n)) return false;
    return true;
}

Triple pinned_triple() { return find_first_triple(400); }

}  // namespace

TEST_CASE("fundamental discriminant predicate") {
    for (Int d : {5, 8, 12, 13, 17, 21, -3, -4, -7, -8, -11, -15, -20})
        CHECK(is_fundamental_disc(d));
    for (Int d : {0, 1, 2, 3, 4, -1, -2, -9, -12, 9, 16, 25, 45})
        CHECK_FALSE(is_fundamental_disc(d));
}

TEST_CASE("cubic class character is blocked") {
    auto G = RayClassGroup::make(Modulus{QuadIdeal::unit(QuadField::from_disc(-23))});
    REQUIRE(G->order() == 3);
    HeckeChar xi = make_char(G, {1});
    auto rep = condition_B(xi);
    CHECK(rep.cuspidal);
    CHECK(rep.epsilon_order == 3);
    CHECK_FALSE(rep.holds);
    // a cubic character cannot satisfy the +-1 relation everywhere
    bool some_fail = false;
    for (const auto& w : rep.prime_check) some_fail = some_fail || !w.pass;
    CHECK(some_fail);
    CHECK(find_partners(xi).empty());

    HeckeChar triv = make_char(G, {0});
    auto rt = condition_B(triv);
    CHECK_FALSE(rt.cuspidal);
    CHECK_FALSE(rt.holds);
}

TEST_CASE("sigma-unstable modulus rejected") {
    QuadField K = QuadField::from_disc(-4);
    QuadIdeal p5 = split_prime(K, 5).primes[0];
    auto G = RayClassGroup::make(Modulus{p5});
    CHECK_THROWS_AS(condition_B(make_char(G, std::vector<Int>(G->invariants().size(), 0))),
                    InputError);
}

TEST_CASE("first triple: level 128 on -4, -8, 8") {
    Triple T = pinned_triple();
    CHECK(T.level == 128);
    CHECK(T.bound == sturm_bound(128));
    std::multiset<Int> discs;
    int real = 0;
    for (const auto& m : T.members) {
        discs.insert(m.group->modulus().disc());
        if (m.group->modulus().is_real()) ++real;
        CHECK(level(m) == 128);
        CHECK(conductor(m).first == m.group->modulus().finite);  // primitive
        CHECK(condition_B(m, 200).holds);
        CHECK(parity_ok(m));
    }
    CHECK(discs == std::multiset<Int>{-8, -4, 8});
    CHECK(real == 1);
    CHECK_FALSE(T.coeff_hash.empty());

    // no triple strictly below the pinned level
    CHECK_THROWS_AS(find_first_triple(T.level - 1), BoundError);
}

TEST_CASE("partner symmetry and coefficient agreement past the bound") {
    Triple T = pinned_triple();
    for (int i = 0; i < 3; ++i) {
        auto partners = find_partners(T.members[(size_t)i]);
        REQUIRE(partners.size() == 2);
        std::set<std::tuple<Int, Int, Int, Int, std::vector<Int>>> got, want;
        for (const auto& p : partners) got.insert(key_of(p));
        for (int j = 0; j < 3; ++j)
            if (j != i) want.insert(key_of(T.members[(size_t)j]));
        CHECK(got == want);
    }
    // spot-check to three times the comparison bound
    Int B3 = 3 * T.bound;
    ThetaExpansion t0 = theta_fast(T.members[0], B3);
    CHECK(theta_eq(t0, theta_fast(T.members[1], B3)));
    CHECK(theta_eq(t0, theta_fast(T.members[2], B3)));
}

TEST_CASE("nonzero a_p exactly at primes split in all three fields") {
    Triple T = pinned_triple();
    ThetaExpansion t0 = theta_fast(T.members[0], 500);
    // n = 2 for this triple (image D4): every nonzero a_p must be 2*zeta, zeta^2 = 1
    for (Int p = 2; p <= 500; ++p) {
        if (!is_prime(p) || T.level % p == 0) continue;
        bool all_split = true;
        for (int i = 0; i < 3; ++i)
            all_split = all_split && split_prime(T.field(i), p).kind == SplitKind::Split;
        CHECK(!t0.a(p).is_zero() == all_split);
        if (!t0.a(p).is_zero()) {
            CHECK((t0.a(p) == CycNum::integer(2) || t0.a(p) == CycNum::integer(-2)));
        }
    }
}

TEST_CASE("epsilon characters cut out the same splitting pattern") {
    Triple T = pinned_triple();
    ThetaExpansion t0 = theta_fast(T.members[0], 500);
    for (Int p = 2; p <= 500; ++p) {
        if (!is_prime(p) || T.level % p == 0) continue;
        for (int i = 0; i < 3; ++i) {
            SplitType st = split_prime(T.field(i), p);
            if (st.kind != SplitKind::Split) continue;
            CycNum ev = evaluate(epsilon(T.members[(size_t)i]).first, st.primes[0]);
            CHECK(ev.is_one() == !t0.a(p).is_zero());
        }
    }
}

TEST_CASE("image classification of the triple") {
    Triple T = pinned_triple();
    ImageClass ic = image_class_of_triple(T);
    CHECK(ic.line == 1);
    CHECK(ic.name == "D4");
    CHECK(ic.full_name == "D4");
    CHECK(ic.r == 1);
    CHECK(ic.m == 1);
    CHECK(ic.presentation_ok);
}

TEST_CASE("reality and oddness") {
    Triple T = pinned_triple();
    RealityReport r = reality_and_oddness(T);
    CHECK(r.ok);
    CHECK(r.real_count == 1);
    REQUIRE(r.real_index >= 0);
    CHECK(T.members[(size_t)r.real_index].group->modulus().disc() == 8);
    for (int i = 0; i < 3; ++i) {
        int s = r.infinity_types[(size_t)i][0] + r.infinity_types[(size_t)i][1];
        CHECK(s == (i == r.real_index ? 1 : 0));
    }
    CHECK(r.det_conjugation_minus_one);
}

TEST_CASE("imprimitivity counterexample") {
    Triple T = pinned_triple();
    CounterexampleReport ce = imprimitive_counterexample(T);
    CHECK(is_prime(ce.p));
    CHECK(T.level % ce.p != 0);
    CHECK(split_prime(T.field(ce.member), ce.p).kind == SplitKind::Split);
    CHECK(split_prime(T.field(ce.partner), ce.p).kind == SplitKind::Inert);
    CHECK_FALSE(ce.a_p.is_zero());
    CHECK(ce.a_p.root_order().has_value());  // a single root of unity
    CHECK(ce.a_p == prime_power_coeff(ce.xi, ce.p, 1));
    CHECK(ce.partner_ap_zero);
    // the new modulus contains one split prime, so it cannot be sigma-stable;
    // the +-1 relation itself still passes away from the modulus
    CHECK_FALSE(ce.xi.group->modulus().sigma_stable());
    CHECK_THROWS_AS(condition_B(ce.xi), InputError);
    REQUIRE_FALSE(ce.prime_check.empty());
    for (const auto& w : ce.prime_check) CHECK(w.pass);
    // the restriction agrees with the primitive character away from p
    const HeckeChar& prim = T.members[(size_t)ce.member];
    for (Int q = 2; q <= 100; ++q) {
        if (!is_prime(q) || q == ce.p || T.level % q == 0) continue;
        SplitType st = split_prime(T.field(ce.member), q);
        if (st.kind != SplitKind::Split) continue;
        CHECK(evaluate(ce.xi, st.primes[0]) == evaluate(prim, st.primes[0]));
    }
    // extension toward the remaining member is impossible: the witness prime
    // is split in exactly one field, so the half-drop hits a non-split target
    int third = 3 - ce.member - ce.partner;
    CHECK_THROWS_AS(extend_modulus(T, ce.xi, third, 300), InternalError);
}

TEST_CASE("modulus extension: all three per-prime case rules") {
    Triple T = pinned_triple();
    const HeckeChar& m0 = T.members[0];
    QuadField K0 = T.field(0);
    const QuadIdeal& f0 = m0.group->modulus().finite;

    SUBCASE("primitive input drops nothing") {
        ExtensionResult er = extend_modulus(T, m0, 2, 300);
        CHECK(er.case_unchanged == 0);
        CHECK(er.case_kill_all == 0);
        CHECK(er.case_half_split == 0);
        CHECK(er.modulus == T.members[2].group->modulus().finite);
        CHECK(er.verified);
    }
    SUBCASE("unchanged local values: re-dropped ramified prime") {
        QuadIdeal p2 = split_prime(K0, 2).primes[0];
        auto G = RayClassGroup::make(Modulus{f0 * p2});
        ExtensionResult er = extend_modulus(T, lift_character(G, m0), 1, 300);
        CHECK(er.case_unchanged == 1);
        CHECK(er.case_kill_all == 0);
        CHECK(er.case_half_split == 0);
        CHECK(er.modulus == T.members[1].group->modulus().finite);
        CHECK(er.verified);
    }
    SUBCASE("killed inert prime enters as p O_K''") {
        auto G = RayClassGroup::make(
            Modulus{f0 * QuadIdeal::principal(QuadInt(K0, 3, 0))});
        ExtensionResult er = extend_modulus(T, lift_character(G, m0), 2, 300);
        CHECK(er.case_unchanged == 0);
        CHECK(er.case_kill_all == 1);
        CHECK(er.case_half_split == 0);
        CHECK(er.modulus.norm() ==
              T.members[2].group->modulus().finite.norm() * 9);
        CHECK(er.verified);
    }
    SUBCASE("one dropped split prime above p split everywhere") {
        // 17 = 1 mod 8 is split in all three fields and a_17 = -2
        CHECK(theta_fast(m0, 17).a(17) == CycNum::integer(-2));
        QuadIdeal p17 = split_prime(K0, 17).primes[0];
        auto G = RayClassGroup::make(Modulus{f0 * p17});
        ExtensionResult er = extend_modulus(T, lift_character(G, m0), 2, 300);
        CHECK(er.case_unchanged == 0);
        CHECK(er.case_kill_all == 0);
        CHECK(er.case_half_split == 1);
        CHECK(er.modulus.norm() ==
              T.members[2].group->modulus().finite.norm() * 17);
        CHECK(er.verified);
    }
    SUBCASE("bad inputs") {
        CHECK_THROWS_AS(extend_modulus(T, m0, 0, 300), InputError);
        CHECK_THROWS_AS(extend_modulus(T, m0, 3, 300), InputError);
        auto G23 = RayClassGroup::make(
            Modulus{QuadIdeal::unit(QuadField::from_disc(-23))});
        CHECK_THROWS_AS(extend_modulus(T, make_char(G23, {1}), 0, 300), InputError);
    }
}

TEST_CASE("character lifting") {
    Triple T = pinned_triple();
    const HeckeChar& m0 = T.members[0];
    QuadIdeal p2 = split_prime(T.field(0), 2).primes[0];
    auto G = RayClassGroup::make(Modulus{m0.group->modulus().finite * p2});
    HeckeChar lifted = lift_character(G, m0);
    auto [f, prim] = conductor(lifted);
    CHECK(f == m0.group->modulus().finite);
    CHECK(prim == m0);
    CHECK(theta_eq(theta_fast(lifted, 300), theta_fast(m0, 300)));

    // modulus of xi must divide the target modulus
    auto Gsmall = RayClassGroup::make(
        Modulus{QuadIdeal::principal(QuadInt(T.field(0), 2, 0))});
    CHECK_THROWS_AS(lift_character(Gsmall, m0), InputError);
}

TEST_CASE("triple certificate cache roundtrip") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "koehler-test-cache";
    fs::remove_all(dir);
    fs::create_directories(dir);
    setenv("KOEHLER_CACHE", dir.c_str(), 1);

    Triple a = find_first_triple(400);
    fs::path file = dir / "first-triple-400.json";
    CHECK(fs::exists(file));
    Triple b = find_first_triple(400);  // served from the verified cache
    CHECK(a.to_json() == b.to_json());

    // a corrupted certificate is ignored and rebuilt
    std::ofstream(file) << "{ not json";
    Triple c = find_first_triple(400);
    CHECK(a.to_json() == c.to_json());
    CHECK(nlohmann::json::parse(std::ifstream(file)) == a.to_json());

    unsetenv("KOEHLER_CACHE");
    fs::remove_all(dir);
}

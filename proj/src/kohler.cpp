#include "koehler/kohler.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include <nlohmann/json.hpp>

namespace koehler {

namespace {

bool is_prime(Int n) {
    if (n < 2) return false;
    for (Int d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

bool squarefree(Int n) {
    n = std::abs(n);
    for (Int d = 2; d * d <= n; ++d)
        if (n % (d * d) == 0) return false;
    return true;
}

// keep one character per conjugation orbit (conjugate characters share the
// theta series)
bool conj_canonical(const HeckeChar& xi) {
    return !(conj_char(xi).exponents < xi.exponents);
}

HeckeChar canonicalize(const HeckeChar& xi) {
    HeckeChar c = conj_char(xi);
    return c.exponents < xi.exponents ? c : xi;
}

bool holds_cheap(const HeckeChar& xi) {
    return is_cuspidal(xi) && epsilon(xi).second == 2;
}

bool theta_equal(const ThetaExpansion& A, const ThetaExpansion& B) {
    if (A.bound != B.bound) return false;
    for (Int n = 1; n <= A.bound; ++n)
        if (A.a(n) != B.a(n)) return false;
    return true;
}

std::string hash_coeffs(const ThetaExpansion& T) {
    // FNV-1a over the serialized coefficients
    uint64_t h = 14695981039346656037ull;
    for (const auto& c : T.coeffs)
        for (char ch : c.to_json().dump()) {
            h ^= (uint64_t)(unsigned char)ch;
            h *= 1099511628211ull;
        }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
    return std::string(buf);
}

std::tuple<Int, Int, Int, Int, std::vector<Int>> member_key(const HeckeChar& xi) {
    const QuadIdeal& m = xi.group->modulus().finite;
    return {std::abs(m.disc()), m.a(), m.b(), m.c(), xi.exponents};
}

nlohmann::json member_json(const HeckeChar& xi) {
    const QuadIdeal& m = xi.group->modulus().finite;
    return nlohmann::json{{"disc", m.disc()},
                          {"modulus", {m.a(), m.b(), m.c()}},
                          {"exponents", xi.exponents}};
}

HeckeChar member_from_json(const nlohmann::json& j) {
    QuadField K = QuadField::from_disc(j.at("disc").get<Int>());
    auto ms = j.at("modulus");
    QuadIdeal m = QuadIdeal::from_abc(K, ms.at(0).get<Int>(), ms.at(1).get<Int>(),
                                      ms.at(2).get<Int>());
    auto G = RayClassGroup::make(Modulus{m});
    return make_char(G, j.at("exponents").get<std::vector<Int>>());
}

// all prime ideals of K above p (inert: the principal ideal (p))
std::vector<QuadIdeal> primes_above(const QuadField& K, Int p) {
    SplitType st = split_prime(K, p);
    if (st.kind == SplitKind::Inert)
        return {QuadIdeal::principal(QuadInt(K, p, 0))};
    return st.primes;
}

}  // namespace

bool is_fundamental_disc(Int D) {
    if (D == 0 || D == 1) return false;
    Int r = ((D % 4) + 4) % 4;
    if (r == 1) return squarefree(D);
    if (r != 0) return false;
    Int k = D / 4;
    Int kr = ((k % 4) + 4) % 4;
    return (kr == 2 || kr == 3) && squarefree(k);
}

ConditionBReport condition_B(const HeckeChar& xi, Int prime_bound) {
    if (!xi.group->modulus().sigma_stable())
        throw InputError("condition_B: modulus is not sigma-stable");
    ConditionBReport rep;
    rep.cuspidal = is_cuspidal(xi);
    rep.epsilon_order = epsilon(xi).second;
    rep.holds = rep.cuspidal && rep.epsilon_order == 2;
    QuadField K = xi.group->modulus().field();
    Int nm = xi.group->modulus().finite.norm();
    for (Int p = 2; p <= prime_bound; ++p) {
        if (!is_prime(p) || nm % p == 0) continue;
        SplitType st = split_prime(K, p);
        if (st.kind != SplitKind::Split) continue;
        PrimeWitness w;
        w.p = p;
        w.xi_p = evaluate(xi, st.primes[0]);
        w.xi_conj_p = evaluate(xi, st.primes[1]);
        w.pass = w.xi_p == w.xi_conj_p || w.xi_p == -w.xi_conj_p;
        rep.prime_check.push_back(std::move(w));
    }
    return rep;
}

HeckeChar lift_character(const std::shared_ptr<const RayClassGroup>& G,
                         const HeckeChar& xi) {
    if (!xi.group->modulus().finite.divides(G->modulus().finite))
        throw InputError("lift_character: modulus of xi must divide the target modulus");
    std::vector<Int> exps;
    const auto& inv = G->invariants();
    for (size_t i = 0; i < G->generators().size(); ++i) {
        CycNum target = evaluate(xi, G->generators()[i]);
        Int found = -1;
        for (Int k = 0; k < inv[i]; ++k)
            if (CycNum::root((long)inv[i], (long)k) == target) {
                found = k;
                break;
            }
        if (found < 0) throw InputError("lift_character: character does not factor");
        exps.push_back(found);
    }
    return make_char(G, std::move(exps));
}

std::vector<HeckeChar> find_partners(const HeckeChar& xi, Int bound_override) {
    auto [f, prim] = conductor(xi);
    if (f != xi.group->modulus().finite)
        throw InputError("find_partners: character must be primitive");
    if (!holds_cheap(xi) || !parity_ok(xi)) return {};

    Int N = level(xi);
    Int B = bound_override > 0 ? bound_override : sturm_bound(N);
    ThetaExpansion T0 = theta_fast(xi, B);
    Int D = xi.group->modulus().disc();

    std::vector<HeckeChar> out;
    for (Int d = 1; d <= N; ++d) {
        if (N % d != 0) continue;
        for (Int Dp : {d, -d}) {
            if (Dp == D || !is_fundamental_disc(Dp)) continue;
            QuadField Kp = QuadField::from_disc(Dp);
            for (const QuadIdeal& mp : ideals_of_norm(Kp, N / d)) {
                Modulus mod{mp};
                if (!mod.sigma_stable()) continue;
                auto G = RayClassGroup::make(mod);
                for (const HeckeChar& cand : characters(G)) {
                    if (!conj_canonical(cand)) continue;
                    if (conductor(cand).first != mp) continue;
                    if (!parity_ok(cand) || !holds_cheap(cand)) continue;
                    if (theta_equal(T0, theta_fast(cand, B))) out.push_back(cand);
                }
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const HeckeChar& a, const HeckeChar& b) {
        return member_key(a) < member_key(b);
    });
    return out;
}

nlohmann::json Triple::to_json() const {
    nlohmann::json ms = nlohmann::json::array();
    for (const auto& m : members) ms.push_back(member_json(m));
    return nlohmann::json{{"schema", 1},
                          {"level", level},
                          {"bound", bound},
                          {"coeff_hash", coeff_hash},
                          {"members", ms}};
}

namespace {

Triple assemble_triple(const HeckeChar& xi, const std::vector<HeckeChar>& partners,
                       Int bound_override) {
    if (partners.size() != 2)
        throw InputError("make_triple: expected exactly two partners");
    Triple T;
    T.members = {canonicalize(xi), partners[0], partners[1]};
    std::sort(T.members.begin(), T.members.end(),
              [](const HeckeChar& a, const HeckeChar& b) {
                  return member_key(a) < member_key(b);
              });
    T.level = level(xi);
    T.bound = bound_override > 0 ? bound_override : sturm_bound(T.level);
    T.coeff_hash = hash_coeffs(theta_fast(T.members[0], T.bound));
    // structural invariants
    std::set<Int> discs;
    int real = 0;
    for (const auto& m : T.members) {
        discs.insert(m.group->modulus().disc());
        if (m.group->modulus().is_real()) ++real;
        if (level(m) != T.level) throw InternalError("make_triple: level mismatch");
    }
    if (discs.size() != 3) throw InternalError("make_triple: discriminants not distinct");
    if (real != 1) throw InternalError("make_triple: expected exactly one real field");
    return T;
}

}  // namespace

Triple make_triple(const HeckeChar& xi, Int bound_override) {
    return assemble_triple(xi, find_partners(xi, bound_override), bound_override);
}

Triple triple_from_json(const nlohmann::json& j) {
    Triple T;
    for (int i = 0; i < 3; ++i)
        T.members[(size_t)i] = member_from_json(j.at("members").at(i));
    T.level = j.at("level").get<Int>();
    T.bound = j.at("bound").get<Int>();
    T.coeff_hash = j.at("coeff_hash").get<std::string>();
    ThetaExpansion t0 = theta_fast(T.members[0], T.bound);
    if (hash_coeffs(t0) != T.coeff_hash ||
        !theta_equal(t0, theta_fast(T.members[1], T.bound)) ||
        !theta_equal(t0, theta_fast(T.members[2], T.bound)))
        throw InputError("triple_from_json: certificate does not verify");
    return T;
}

namespace {

std::filesystem::path cache_file(Int max_level, Int bound_override) {
    const char* dir = std::getenv("KOEHLER_CACHE");
    if (!dir || !*dir) return {};
    std::string name = "first-triple-" + std::to_string(max_level);
    if (bound_override > 0) name += "-b" + std::to_string(bound_override);
    return std::filesystem::path(dir) / (name + ".json");
}

}  // namespace

Triple find_first_triple(Int max_level, Int bound_override) {
    std::filesystem::path cf = cache_file(max_level, bound_override);
    if (!cf.empty() && std::filesystem::exists(cf)) {
        try {
            nlohmann::json j = nlohmann::json::parse(std::ifstream(cf));
            Triple T;
            for (int i = 0; i < 3; ++i) T.members[(size_t)i] = member_from_json(j.at("members").at(i));
            T.level = j.at("level").get<Int>();
            T.bound = j.at("bound").get<Int>();
            T.coeff_hash = j.at("coeff_hash").get<std::string>();
            ThetaExpansion T0 = theta_fast(T.members[0], T.bound);
            if (hash_coeffs(T0) == T.coeff_hash &&
                theta_equal(T0, theta_fast(T.members[1], T.bound)) &&
                theta_equal(T0, theta_fast(T.members[2], T.bound)))
                return T;
        } catch (const std::exception&) {
            // fall through to a fresh scan
        }
    }

    for (Int N = 3; N <= max_level; ++N)
        for (Int d = 1; d <= N; ++d) {
            if (N % d != 0) continue;
            for (Int D : {d, -d}) {
                if (!is_fundamental_disc(D)) continue;
                QuadField K = QuadField::from_disc(D);
                for (const QuadIdeal& m : ideals_of_norm(K, N / d)) {
                    Modulus mod{m};
                    if (!mod.sigma_stable()) continue;
                    auto G = RayClassGroup::make(mod);
                    for (const HeckeChar& xi : characters(G)) {
                        if (!conj_canonical(xi)) continue;
                        if (conductor(xi).first != m) continue;
                        if (!parity_ok(xi) || !holds_cheap(xi)) continue;
                        auto partners = find_partners(xi, bound_override);
                        if (partners.size() != 2) continue;
                        Triple T = assemble_triple(xi, partners, bound_override);
                        if (!cf.empty()) {
                            std::filesystem::create_directories(cf.parent_path());
                            std::filesystem::path tmp = cf;
                            tmp += ".tmp";
                            std::ofstream(tmp) << T.to_json().dump(2) << "\n";
                            std::filesystem::rename(tmp, cf);
                        }
                        return T;
                    }
                }
            }
        }
    throw BoundError("find_first_triple: no triple up to the level bound");
}

ImageClass image_class_of_triple(const Triple& T) {
    const HeckeChar& xi0 = T.members[0];
    auto [eps, eps_ord] = epsilon(xi0);
    if (eps_ord != 2) throw InputError("image_class_of_triple: epsilon is not quadratic");

    // n = order of xi restricted to the kernel of epsilon
    const auto& inv = xi0.group->invariants();
    Int n = 1;
    std::vector<Int> e(inv.size(), 0);
    while (true) {
        if (eps.on_class(e).is_one()) {
            auto q = xi0.on_class(e).root_order();
            if (!q) throw InternalError("image_class_of_triple: non-unit character value");
            n = std::lcm(n, (Int)*q);
        }
        size_t i = 0;
        for (; i < inv.size(); ++i) {
            if (++e[i] < inv[i]) break;
            e[i] = 0;
        }
        if (i == inv.size()) break;
    }

    // value groups of the three members: the diagonal images of the H_i
    int cyc = 0;
    MatrixGroup P0;
    for (int i = 0; i < 3; ++i) {
        const HeckeChar& xi = T.members[(size_t)i];
        HeckeChar xs = conj_char(xi);
        std::vector<Mat2> gens;
        for (const auto& g : xi.group->generators())
            gens.push_back(Mat2::diag(evaluate(xi, g), evaluate(xs, g)));
        MatrixGroup P = MatrixGroup::closure(gens);
        Int scal = 0;
        for (int k = 0; k < P.size(); ++k)
            if (P.elem(k).is_scalar()) ++scal;
        if (scal != n || (Int)P.size() != 2 * n)
            throw InternalError("image_class_of_triple: value group has unexpected shape");
        bool cyclic = false;
        for (int k = 0; k < P.size(); ++k)
            if (P.order_of(k) == (Int)P.size()) cyclic = true;
        if (cyclic) ++cyc;
        if (i == 0) P0 = std::move(P);
    }

    // rebuild the full image: P0 plus an antidiagonal coset, glued by a
    // scalar v; the observed subgroup types pin down the right gluing
    static const std::map<int, int> line_cyc{{1, 1}, {2, 0}, {3, 3}, {4, 2}};
    std::vector<ImageClass> matches;
    for (int s = 0; s < P0.size(); ++s) {
        if (!P0.elem(s).is_scalar()) continue;
        const CycNum& v = P0.elem(s).a[0];
        std::vector<Mat2> elems;
        for (int k = 0; k < P0.size(); ++k) {
            elems.push_back(P0.elem(k));
            elems.push_back(Mat2::antidiag(v * P0.elem(k).a[3], P0.elem(k).a[0]));
        }
        ImageClass ic = classify_image(MatrixGroup::from_elements(std::move(elems)));
        if (line_cyc.at(ic.line) == cyc) matches.push_back(ic);
    }
    if (matches.empty())
        throw InternalError("image_class_of_triple: no gluing matches the subgroup types");
    for (const auto& m : matches)
        if (m.line != matches[0].line || m.name != matches[0].name)
            throw InternalError("image_class_of_triple: ambiguous gluing");

    // trace pattern cross-check: nonzero a_p = 2*zeta with zeta^n = 1
    QuadField K0 = xi0.group->modulus().field();
    for (Int p = 2; p <= 500; ++p) {
        if (!is_prime(p) || T.level % p == 0) continue;
        SplitType st = split_prime(K0, p);
        if (st.kind != SplitKind::Split) continue;
        CycNum v1 = evaluate(xi0, st.primes[0]), v2 = evaluate(xi0, st.primes[1]);
        if ((v1 + v2).is_zero()) continue;
        auto q = v1.root_order();
        if (v1 != v2 || !q || n % (Int)*q != 0)
            throw InternalError("image_class_of_triple: trace pattern violated");
    }
    return matches[0];
}

CounterexampleReport imprimitive_counterexample(const Triple& T, Int prime_bound) {
    for (Int p = 2; p <= prime_bound; ++p) {
        if (!is_prime(p) || T.level % p == 0) continue;
        for (int i = 0; i < 3; ++i) {
            SplitType si = split_prime(T.field(i), p);
            if (si.kind != SplitKind::Split) continue;
            for (int j = 0; j < 3; ++j) {
                if (j == i) continue;
                if (split_prime(T.field(j), p).kind != SplitKind::Inert) continue;

                CounterexampleReport rep;
                rep.member = i;
                rep.partner = j;
                rep.p = p;
                rep.kept_prime = si.primes[0];
                const HeckeChar& prim = T.members[(size_t)i];
                QuadIdeal mnew = prim.group->modulus().finite * rep.kept_prime;
                auto Gn = RayClassGroup::make(Modulus{mnew});
                rep.xi = lift_character(Gn, prim);
                rep.a_p = prime_power_coeff(rep.xi, p, 1);
                if (rep.a_p != evaluate(prim, si.primes[1]) || rep.a_p.is_zero())
                    throw InternalError("imprimitive_counterexample: a_p mismatch");

                // the partner coefficient vanishes for every character over
                // its primitive one, as p is inert there
                const HeckeChar& part = T.members[(size_t)j];
                rep.partner_ap_zero = prime_power_coeff(part, p, 1).is_zero();
                for (Int q = 2; q <= prime_bound && rep.partner_ap_zero; ++q) {
                    if (!is_prime(q) || q == p || T.level % q == 0) continue;
                    QuadIdeal extra = primes_above(T.field(j), q)[0];
                    auto Gl = RayClassGroup::make(
                        Modulus{part.group->modulus().finite * extra});
                    rep.partner_ap_zero =
                        prime_power_coeff(lift_character(Gl, part), p, 1).is_zero();
                    break;
                }

                // the +-1 relation at conjugate primes away from the modulus
                Int nm = mnew.norm();
                for (Int q = 2; q <= prime_bound; ++q) {
                    if (!is_prime(q) || nm % q == 0) continue;
                    SplitType st = split_prime(T.field(i), q);
                    if (st.kind != SplitKind::Split) continue;
                    PrimeWitness w;
                    w.p = q;
                    w.xi_p = evaluate(rep.xi, st.primes[0]);
                    w.xi_conj_p = evaluate(rep.xi, st.primes[1]);
                    w.pass = w.xi_p == w.xi_conj_p || w.xi_p == -w.xi_conj_p;
                    rep.prime_check.push_back(std::move(w));
                }
                return rep;
            }
        }
    }
    throw BoundError("imprimitive_counterexample: no witness prime below the bound");
}

ExtensionResult extend_modulus(const Triple& T, const HeckeChar& xi_nonprim,
                               int target, Int bound) {
    if (target < 0 || target > 2) throw InputError("extend_modulus: bad target index");
    Int d = xi_nonprim.group->modulus().disc();
    int src = -1;
    for (int i = 0; i < 3; ++i)
        if (T.members[(size_t)i].group->modulus().disc() == d) src = i;
    if (src < 0) throw InputError("extend_modulus: character is not on a member field");
    if (src == target) throw InputError("extend_modulus: target must be a different member");
    auto [f, prim] = conductor(xi_nonprim);
    const HeckeChar& mem = T.members[(size_t)src];
    if (f != mem.group->modulus().finite ||
        !theta_equal(theta_fast(prim, 60), theta_fast(mem, 60)))
        throw InputError("extend_modulus: character does not lie over the member");

    QuadField K = QuadField::from_disc(d);
    const QuadIdeal& m = xi_nonprim.group->modulus().finite;
    const HeckeChar& tgt = T.members[(size_t)target];
    QuadField Kpp = tgt.group->modulus().field();

    ExtensionResult res;
    res.bound = bound;
    QuadIdeal app = QuadIdeal::unit(Kpp);
    Int nm = m.norm(), nf = f.norm();
    // iterate the rational primes dividing the modulus norm
    std::vector<Int> ps;
    {
        Int t = nm;
        for (Int p = 2; p * p <= t; ++p)
            if (t % p == 0) {
                ps.push_back(p);
                while (t % p == 0) t /= p;
            }
        if (t > 1) ps.push_back(t);
    }
    for (Int p : ps) {
        std::vector<QuadIdeal> above = primes_above(K, p);
        std::vector<CycNum> vals, tvals;
        for (const auto& Q : above) {
            vals.push_back(evaluate(xi_nonprim, Q));
            tvals.push_back(evaluate(mem, Q));
        }
        if (vals == tvals) {
            // local values unchanged; counts as a dropped prime only when the
            // modulus actually grew at p
            Int om = 0, of = 0, t1 = nm, t2 = nf;
            while (t1 % p == 0) t1 /= p, ++om;
            while (t2 % p == 0) t2 /= p, ++of;
            if (om > of) ++res.case_unchanged;
            continue;
        }
        bool all_zero = true, some_tval = false;
        for (const auto& v : vals) all_zero = all_zero && v.is_zero();
        for (const auto& v : tvals) some_tval = some_tval || !v.is_zero();
        if (all_zero) {
            if (!some_tval) throw InternalError("extend_modulus: nothing dropped");
            ++res.case_kill_all;
            app = app * QuadIdeal::principal(QuadInt(Kpp, p, 0));
            continue;
        }
        // one of two split values killed, the other untouched
        if (above.size() != 2) throw InternalError("extend_modulus: unexpected drop pattern");
        int killed = vals[0].is_zero() ? 0 : 1;
        if (!vals[(size_t)killed].is_zero() || vals[(size_t)(1 - killed)] != tvals[(size_t)(1 - killed)] ||
            tvals[(size_t)killed].is_zero())
            throw InternalError("extend_modulus: unexpected drop pattern");
        SplitType stpp = split_prime(Kpp, p);
        if (stpp.kind != SplitKind::Split)
            throw InternalError("extend_modulus: half-drop at a prime not split in the target");
        ++res.case_half_split;
        app = app * stpp.primes[0];
    }

    res.modulus = tgt.group->modulus().finite * app;
    auto Gpp = RayClassGroup::make(Modulus{res.modulus});
    res.xi = lift_character(Gpp, tgt);
    res.verified = theta_equal(theta_fast(xi_nonprim, bound), theta_fast(res.xi, bound));
    return res;
}

RealityReport reality_and_oddness(const Triple& T) {
    RealityReport rep;
    for (int i = 0; i < 3; ++i) {
        const HeckeChar& xi = T.members[(size_t)i];
        auto it = infinity_type(xi);
        rep.infinity_types[(size_t)i] = {it[0], it[1]};
        if (xi.group->modulus().is_real()) {
            ++rep.real_count;
            rep.real_index = i;
            // odd at exactly one real place; det of conjugation is
            // (-1)^(p_tau1 + p_tau2) = -1
            if (it[0] + it[1] == 1) rep.det_conjugation_minus_one = true;
        }
    }
    rep.ok = rep.real_count == 1 && rep.det_conjugation_minus_one;
    return rep;
}

}  // namespace koehler

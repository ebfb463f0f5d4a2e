#include "koehler/rayclass.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

namespace koehler {

namespace {

constexpr Int kMaxGroupOrder = 200000;

bool wide_equivalent(const QuadIdeal& I, const QuadIdeal& J) {
    return principal_generator(I * J.conj()).has_value();
}

// Smith normal form of a square integer matrix.  Diagonalizes M in place
// with unimodular row/column operations; column operations are mirrored on
// V so that, for the relation lattice spanned by the rows of the original
// M, the quotient Z^k / L is  sum Z/d_i  with discrete log z = V^T x.
std::vector<Int> smith_form(std::vector<std::vector<Int>> M, std::vector<std::vector<Int>>& V) {
    size_t k = M.size();
    V.assign(k, std::vector<Int>(k, 0));
    for (size_t i = 0; i < k; ++i) V[i][i] = 1;
    auto swap_cols = [&](size_t a, size_t b) {
        for (size_t i = 0; i < k; ++i) std::swap(M[i][a], M[i][b]);
        for (size_t i = 0; i < k; ++i) std::swap(V[i][a], V[i][b]);
    };
    auto addmul_col = [&](size_t dst, size_t src, Int f) {
        for (size_t i = 0; i < k; ++i) M[i][dst] += f * M[i][src];
        for (size_t i = 0; i < k; ++i) V[i][dst] += f * V[i][src];
    };
    auto negate_col = [&](size_t a) {
        for (size_t i = 0; i < k; ++i) M[i][a] = -M[i][a];
        for (size_t i = 0; i < k; ++i) V[i][a] = -V[i][a];
    };

    for (int guard = 0; guard < 10000; ++guard) {
        // diagonalize
        for (size_t t = 0; t < k; ++t) {
            // find a minimal nonzero pivot in the lower-right block
            size_t pi = k, pj = k;
            for (size_t i = t; i < k; ++i)
                for (size_t j = t; j < k; ++j)
                    if (M[i][j] != 0 &&
                        (pi == k || std::abs(M[i][j]) < std::abs(M[pi][pj]))) {
                        pi = i;
                        pj = j;
                    }
            if (pi == k) break;
            std::swap(M[t], M[pi]);
            swap_cols(t, pj);
            bool again = true;
            while (again) {
                again = false;
                for (size_t i = t + 1; i < k; ++i) {
                    if (M[i][t] == 0) continue;
                    Int q = M[i][t] / M[t][t];
                    for (size_t j = 0; j < k; ++j) M[i][j] -= q * M[t][j];
                    if (M[i][t] != 0) {
                        std::swap(M[t], M[i]);
                        again = true;
                    }
                }
                for (size_t j = t + 1; j < k; ++j) {
                    if (M[t][j] == 0) continue;
                    Int q = M[t][j] / M[t][t];
                    addmul_col(j, t, -q);
                    if (M[t][j] != 0) {
                        swap_cols(t, j);
                        again = true;
                    }
                }
            }
        }
        for (size_t t = 0; t < k; ++t)
            if (M[t][t] < 0) negate_col(t);
        // enforce divisibility d_t | d_{t+1}
        bool fixed = true;
        for (size_t i = 0; i + 1 < k && fixed; ++i)
            for (size_t j = i + 1; j < k && fixed; ++j)
                if (M[i][i] != 0 && M[j][j] % M[i][i] != 0) {
                    addmul_col(i, j, 1);
                    fixed = false;
                }
        if (fixed) {
            std::vector<Int> d(k);
            for (size_t t = 0; t < k; ++t) d[t] = M[t][t];
            return d;
        }
    }
    throw InternalError("smith_form: did not stabilize");
}

}  // namespace

RayClassGroup::QRaw RayClassGroup::qraw_mul(const QRaw& a, const QRaw& b) const {
    return {m_.finite.residue_mul(a.res, b.res), a.bits ^ b.bits};
}

RayClassGroup::QRaw RayClassGroup::qraw_of(const QuadInt& alpha) const {
    int bits = 0;
    if (real_) {
        if (alpha.sign_at(1) < 0) bits |= 1;
        if (alpha.sign_at(2) < 0) bits |= 2;
    }
    return {m_.finite.residue(alpha), bits};
}

int RayClassGroup::qclass_of_raw(const QRaw& e) const {
    auto it = qindex_.find({e.res.first, e.res.second, e.bits});
    if (it != qindex_.end()) return it->second;
    throw InternalError("ray class group: unclassified residue element");
}

int RayClassGroup::qclass_of(const QuadInt& alpha) const {
    return qclass_of_raw(qraw_of(alpha));
}

int RayClassGroup::wide_class_of(const QuadIdeal& I) const {
    for (size_t c = 0; c < reps_.size(); ++c)
        if (wide_equivalent(I, reps_[c])) return (int)c;
    throw InternalError("ray class group: ideal matches no wide class");
}

std::pair<int, int> RayClassGroup::pair_of(const QuadIdeal& I) const {
    int c = wide_class_of(I);
    auto gamma = principal_generator(I * reps_[c].conj());
    if (!gamma) throw InternalError("ray class group: lost principality witness");
    QuadInt nrm(m_.field(), reps_[c].norm(), 0);
    int q = qmul_[qclass_of(*gamma)][qinv_[qclass_of(nrm)]];
    return {c, q};
}

std::pair<int, int> RayClassGroup::pair_mul(std::pair<int, int> x, std::pair<int, int> y) const {
    int c = clsmul_[x.first][y.first];
    int q = qmul_[qmul_[x.second][y.second]][cocyc_[x.first][y.first]];
    return {c, q};
}

std::shared_ptr<const RayClassGroup> RayClassGroup::make(const Modulus& m) {
    static std::map<std::tuple<Int, Int, Int, Int>, std::shared_ptr<const RayClassGroup>> cache;
    static std::mutex mu;
    std::tuple<Int, Int, Int, Int> key{m.disc(), m.finite.a(), m.finite.b(), m.finite.c()};
    std::lock_guard<std::mutex> lk(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto G = std::shared_ptr<RayClassGroup>(new RayClassGroup());
    G->build(m);
    cache[key] = G;
    return G;
}

void RayClassGroup::build(const Modulus& m) {
    m_ = m;
    real_ = m.is_real();
    QuadField K = m.field();
    Int D = K.disc();

    // --- wide class group, reps coprime to m ---
    Int B = (Int)((D < 0 ? 0.63662 : 0.5) * std::sqrt((double)std::abs(D))) + 1;
    std::vector<QuadIdeal> raw_reps = {QuadIdeal::unit(K)};
    for (Int n = 2; n <= B; ++n)
        for (const auto& I : ideals_of_norm(K, n)) {
            bool found = false;
            for (const auto& R : raw_reps)
                if (wide_equivalent(I, R)) { found = true; break; }
            if (!found) raw_reps.push_back(I);
        }
    reps_.clear();
    for (const auto& R : raw_reps) {
        if (R.coprime_to(m.finite)) {
            reps_.push_back(R);
            continue;
        }
        bool found = false;
        Int cap = std::max<Int>(1000, 6 * std::abs(D) * m.finite.norm());
        for (Int n = 1; n <= cap && !found; ++n)
            for (const auto& J : ideals_of_norm(K, n)) {
                if (!J.coprime_to(m.finite)) continue;
                if (wide_equivalent(J, R)) {
                    reps_.push_back(J);
                    found = true;
                    break;
                }
            }
        if (!found) throw BoundError("ray class group: no coprime class representative found");
    }
    size_t h = reps_.size();
    clsmul_.assign(h, std::vector<int>(h, 0));
    for (size_t i = 0; i < h; ++i)
        for (size_t j = 0; j < h; ++j)
            clsmul_[i][j] = wide_class_of(reps_[i] * reps_[j]);

    // --- Q = ((O/m)^x x signs) / units ---
    const QuadIdeal& fm = m.finite;
    unit_res_.clear();
    for (Int rx = 0; rx < fm.a(); ++rx)
        for (Int ry = 0; ry < fm.c(); ++ry)
            if (fm.residue_is_unit({rx, ry})) unit_res_.push_back({rx, ry});

    std::vector<QRaw> unit_gens;
    unit_gens.push_back(qraw_of(QuadInt(K, -1, 0)));
    if (real_) {
        unit_gens.push_back(qraw_of(fundamental_unit(K)));
    } else if (D == -4 || D == -3) {
        unit_gens.push_back(qraw_of(QuadInt(K, 2, 1)));  // i, resp. zeta_6
    }
    auto raw_key = [](const QRaw& e) {
        return std::tuple<Int, Int, int>{e.res.first, e.res.second, e.bits};
    };
    std::vector<QRaw> U = {qraw_of(QuadInt(K, 1, 0))};
    std::map<std::tuple<Int, Int, int>, bool> seen{{raw_key(U[0]), true}};
    for (size_t i = 0; i < U.size(); ++i)
        for (const auto& g : unit_gens) {
            QRaw e = qraw_mul(U[i], g);
            if (!seen.count(raw_key(e))) {
                seen[raw_key(e)] = true;
                U.push_back(e);
            }
        }
    auto canon = [&](const QRaw& e) {
        QRaw best = qraw_mul(e, U[0]);
        for (size_t i = 1; i < U.size(); ++i) {
            QRaw cand = qraw_mul(e, U[i]);
            if (raw_key(cand) < raw_key(best)) best = cand;
        }
        return best;
    };
    qcanon_.clear();
    qindex_.clear();
    int signrange = real_ ? 4 : 1;
    std::vector<QRaw> all;
    for (const auto& r : unit_res_)
        for (int bits = 0; bits < signrange; ++bits) all.push_back({r, bits});
    std::map<std::tuple<Int, Int, int>, int> canon_index;
    for (const auto& e : all) {
        QRaw ce = canon(e);
        auto ck = raw_key(ce);
        auto cit = canon_index.find(ck);
        int idx;
        if (cit == canon_index.end()) {
            idx = (int)qcanon_.size();
            canon_index[ck] = idx;
            qcanon_.push_back(ce);
        } else {
            idx = cit->second;
        }
        qindex_[raw_key(e)] = idx;
    }
    size_t Qn = qcanon_.size();
    qmul_.assign(Qn, std::vector<int>(Qn, 0));
    for (size_t i = 0; i < Qn; ++i)
        for (size_t j = 0; j < Qn; ++j)
            qmul_[i][j] = qindex_.at(raw_key(canon(qraw_mul(qcanon_[i], qcanon_[j]))));
    qident_ = qclass_of(QuadInt(K, 1, 0));
    qinv_.assign(Qn, -1);
    for (size_t i = 0; i < Qn; ++i)
        for (size_t j = 0; j < Qn; ++j)
            if (qmul_[i][j] == qident_) qinv_[i] = (int)j;

    order_ = (Int)(h * Qn);
    if (order_ > kMaxGroupOrder) throw BoundError("ray class group order exceeds desk-scale bound");

    // --- cocycle: gamma(I) gamma(J) = gamma(IJ) * conj(delta) / N(R_c'') ---
    cocyc_.assign(h, std::vector<int>(h, qident_));
    for (size_t i = 0; i < h; ++i)
        for (size_t j = 0; j < h; ++j) {
            int cc = clsmul_[i][j];
            auto delta = principal_generator(reps_[i] * reps_[j] * reps_[cc].conj());
            if (!delta) throw InternalError("ray class group: cocycle witness missing");
            QuadInt nrm(K, reps_[cc].norm(), 0);
            // correction q with [gamma_I][gamma_J] * q = [gamma_IJ]
            cocyc_[i][j] = qmul_[qclass_of(nrm)][qinv_[qclass_of(delta->conj())]];
        }

    // --- generators (smallest-norm primes) and triangular relations ---
    std::pair<int, int> ident{0, qident_};
    std::map<int, std::vector<Int>> H;  // pair id -> exponents in found generators
    H[pair_id(ident.first, ident.second)] = {};
    std::vector<std::pair<int, int>> gen_elts;
    std::vector<QuadIdeal> gen_ideals;
    std::vector<std::vector<Int>> rel_rows;

    Int cap = std::max<Int>(200, 6 * std::abs(D) * m.finite.norm());
    std::vector<QuadIdeal> prime_pool;
    for (Int p = 2; p <= cap && (Int)H.size() < order_; ++p) {
        bool isp = true;
        for (Int q = 2; q * q <= p; ++q)
            if (p % q == 0) { isp = false; break; }
        if (!isp) continue;
        auto st = split_prime(K, p);
        std::vector<QuadIdeal> here = st.primes;
        if (st.kind == SplitKind::Inert) here.push_back(QuadIdeal::principal(QuadInt(K, p, 0)));
        for (const auto& P : here) {
            if (!P.coprime_to(m.finite)) continue;
            if ((Int)H.size() >= order_) break;
            auto elt = pair_of(P);
            if (H.count(pair_id(elt.first, elt.second))) continue;
            // new generator: find its order over the current subgroup
            size_t jgen = gen_elts.size();
            std::pair<int, int> acc = elt;
            Int o = 1;
            while (!H.count(pair_id(acc.first, acc.second))) {
                acc = pair_mul(acc, elt);
                ++o;
                if (o > order_) throw InternalError("ray class group: generator order runaway");
            }
            std::vector<Int> row = H.at(pair_id(acc.first, acc.second));
            row.resize(jgen, 0);
            row.push_back(-o);
            rel_rows.push_back(row);
            gen_elts.push_back(elt);
            gen_ideals.push_back(P);
            // extend H by powers of the new generator
            std::map<int, std::vector<Int>> H2 = H;
            std::pair<int, int> pw = ident;
            for (Int e = 1; e < o; ++e) {
                pw = pair_mul(pw, elt);
                for (const auto& [id, vec] : H) {
                    std::vector<Int> nv = vec;
                    nv.resize(jgen, 0);
                    nv.push_back(e);
                    // compute the pair element by composing
                    int c = id / (int)Qn, qq = id % (int)Qn;
                    auto ne = pair_mul({c, qq}, pw);
                    H2[pair_id(ne.first, ne.second)] = nv;
                }
            }
            for (auto& [id, vec] : H2) vec.resize(jgen + 1, 0);
            H = std::move(H2);
        }
    }
    if ((Int)H.size() != order_)
        throw BoundError("ray class group: prime generators below the bound do not generate");

    // --- SNF presentation ---
    size_t k = gen_elts.size();
    invariants_.clear();
    gens_.clear();
    dlog_.assign(h * Qn, {});
    std::vector<Int> full_d;
    std::vector<std::vector<Int>> V;
    std::vector<size_t> keep;
    if (k > 0) {
        std::vector<std::vector<Int>> M(k, std::vector<Int>(k, 0));
        for (size_t i = 0; i < k; ++i)
            for (size_t j = 0; j < rel_rows[i].size(); ++j) M[i][j] = rel_rows[i][j];
        full_d = smith_form(M, V);
        Int prod = 1;
        for (Int d : full_d) prod *= d;
        if (prod != order_) throw InternalError("ray class group: presentation order mismatch");
        for (size_t i = 0; i < k; ++i)
            if (full_d[i] > 1) {
                keep.push_back(i);
                invariants_.push_back(full_d[i]);
            }
    }
    for (const auto& [id, x] : H) {
        std::vector<Int> z;
        for (size_t idx : keep) {
            Int s = 0;
            for (size_t j = 0; j < k; ++j) s += V[j][idx] * x[j];
            s %= full_d[idx];
            if (s < 0) s += full_d[idx];
            z.push_back(s);
        }
        dlog_[id] = z;
    }

    // --- one ideal generator per invariant ---
    for (size_t gi = 0; gi < invariants_.size(); ++gi) {
        std::vector<Int> target(invariants_.size(), 0);
        target[gi] = 1;
        bool found = false;
        for (Int n = 2; n <= cap * 4 && !found; ++n)
            for (const auto& J : ideals_of_norm(K, n)) {
                if (!J.coprime_to(m.finite)) continue;
                auto e = pair_of(J);
                if (dlog_[pair_id(e.first, e.second)] == target) {
                    gens_.push_back(J);
                    found = true;
                    break;
                }
            }
        if (!found) throw BoundError("ray class group: generator ideal search failed");
    }
}

std::vector<Int> RayClassGroup::class_of(const QuadIdeal& I) const {
    if (I.disc() != m_.disc()) throw InputError("class_of: field mismatch");
    if (!I.coprime_to(m_.finite)) throw InputError("class_of: ideal not coprime to the modulus");
    std::tuple<Int, Int, Int> key{I.a(), I.b(), I.c()};
    {
        std::lock_guard<std::mutex> lk(memo_mu_);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
    }
    auto e = pair_of(I);
    std::vector<Int> z = dlog_[pair_id(e.first, e.second)];
    std::lock_guard<std::mutex> lk(memo_mu_);
    memo_[key] = z;
    return z;
}

std::vector<Int> RayClassGroup::residue_class(std::pair<Int, Int> r) const {
    if (!m_.finite.residue_is_unit(r))
        throw InputError("residue_class: residue is not a unit");
    return dlog_[pair_id(0, qclass_of_raw({r, 0}))];
}

std::vector<Int> RayClassGroup::sign_class(int which) const {
    if (!real_) throw InputError("sign_class: field is imaginary");
    if (which != 1 && which != 2) throw InputError("sign_class: embedding must be 1 or 2");
    QRaw e{m_.finite.residue(QuadInt(m_.field(), 1, 0)), which == 1 ? 1 : 2};
    return dlog_[pair_id(0, qclass_of_raw(e))];
}

CycNum HeckeChar::value(size_t i) const {
    return CycNum::root(group->invariants()[i], exponents[i]);
}

CycNum HeckeChar::on_class(const std::vector<Int>& e) const {
    CycNum v = CycNum::one();
    for (size_t i = 0; i < exponents.size(); ++i)
        v *= CycNum::root(group->invariants()[i], exponents[i] * e[i]);
    return v;
}

bool HeckeChar::is_trivial() const {
    return std::all_of(exponents.begin(), exponents.end(), [](Int k) { return k == 0; });
}

bool HeckeChar::operator==(const HeckeChar& o) const {
    return group->modulus() == o.group->modulus() && exponents == o.exponents;
}

HeckeChar make_char(std::shared_ptr<const RayClassGroup> G, std::vector<Int> exponents) {
    if (exponents.size() != G->invariants().size())
        throw InputError("make_char: one exponent per invariant required");
    for (size_t i = 0; i < exponents.size(); ++i) {
        Int d = G->invariants()[i];
        exponents[i] %= d;
        if (exponents[i] < 0) exponents[i] += d;
    }
    return HeckeChar{std::move(G), std::move(exponents)};
}

std::vector<HeckeChar> characters(const std::shared_ptr<const RayClassGroup>& G) {
    std::vector<HeckeChar> out;
    std::vector<Int> k(G->invariants().size(), 0);
    while (true) {
        out.push_back(HeckeChar{G, k});
        size_t i = 0;
        for (; i < k.size(); ++i) {
            if (++k[k.size() - 1 - i] < G->invariants()[k.size() - 1 - i]) break;
            k[k.size() - 1 - i] = 0;
        }
        if (i == k.size()) break;
    }
    return out;
}

CycNum evaluate(const HeckeChar& xi, const QuadIdeal& I) {
    if (!I.coprime_to(xi.group->modulus().finite)) return CycNum::zero();
    return xi.on_class(xi.group->class_of(I));
}

std::array<int, 2> infinity_type(const HeckeChar& xi) {
    if (!xi.group->modulus().is_real()) return {0, 0};
    std::array<int, 2> p{};
    for (int t = 1; t <= 2; ++t) {
        CycNum v = xi.on_class(xi.group->sign_class(t));
        if (v.is_one())
            p[t - 1] = 0;
        else if (v == CycNum::integer(-1))
            p[t - 1] = 1;
        else
            throw InternalError("infinity_type: sign element has non-quadratic value");
    }
    return p;
}

namespace {

Int root_exponent(const CycNum& v, Int d) {
    for (Int kk = 0; kk < d; ++kk)
        if (v == CycNum::root(d, kk)) return kk;
    throw InternalError("character value is not a root of unity of the expected order");
}

}  // namespace

std::pair<QuadIdeal, HeckeChar> conductor(const HeckeChar& xi) {
    const auto& G = xi.group;
    const QuadIdeal& fm = G->modulus().finite;
    QuadField K = G->modulus().field();

    std::vector<QuadIdeal> divs = {QuadIdeal::unit(K)};
    for (auto& [P, e] : factor_ideal(fm)) {
        std::vector<QuadIdeal> next;
        QuadIdeal pk = QuadIdeal::unit(K);
        for (Int i = 0; i <= e; ++i) {
            for (const auto& d : divs) next.push_back(d * pk);
            if (i < e) pk = pk * P;
        }
        divs = std::move(next);
    }
    std::sort(divs.begin(), divs.end());

    for (const auto& f : divs) {
        bool ok = true;
        for (const auto& r : G->unit_residues()) {
            QuadInt lift(K, r.first, r.second);
            if (!f.contains(lift + QuadInt(K, -1, 0))) continue;  // need lift == 1 mod f
            if (!xi.on_class(G->residue_class(r)).is_one()) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        if (f == fm) return {fm, xi};
        auto Gf = RayClassGroup::make(Modulus{f});
        std::vector<Int> ks;
        Int cap = std::max<Int>(1000, 6 * std::abs(K.disc()) * fm.norm());
        for (size_t i = 0; i < Gf->generators().size(); ++i) {
            std::vector<Int> target(Gf->invariants().size(), 0);
            target[i] = 1;
            bool found = false;
            for (Int n = 1; n <= cap && !found; ++n)
                for (const auto& J : ideals_of_norm(K, n)) {
                    if (!J.coprime_to(fm)) continue;
                    if (Gf->class_of(J) != target) continue;
                    ks.push_back(root_exponent(evaluate(xi, J), Gf->invariants()[i]));
                    found = true;
                    break;
                }
            if (!found) throw BoundError("conductor: no coprime ideal found in generator class");
        }
        return {f, make_char(Gf, std::move(ks))};
    }
    throw InternalError("conductor: modulus itself failed the factoring test");
}

HeckeChar conj_char(const HeckeChar& xi) {
    const auto& G = xi.group;
    if (!G->modulus().sigma_stable())
        throw InputError("conj_char: modulus is not stable under conjugation");
    std::vector<Int> ks;
    for (size_t i = 0; i < G->generators().size(); ++i)
        ks.push_back(root_exponent(evaluate(xi, G->generators()[i].conj()),
                                   G->invariants()[i]));
    return make_char(G, std::move(ks));
}

std::pair<HeckeChar, Int> epsilon(const HeckeChar& xi) {
    HeckeChar cj = conj_char(xi);
    std::vector<Int> ks;
    Int ord = 1;
    for (size_t i = 0; i < xi.exponents.size(); ++i) {
        Int d = xi.group->invariants()[i];
        Int e = ((cj.exponents[i] - xi.exponents[i]) % d + d) % d;
        ks.push_back(e);
        if (e != 0) ord = std::lcm(ord, d / std::gcd(d, e));
    }
    return {make_char(xi.group, std::move(ks)), ord};
}

}  // namespace koehler

#include "koehler/grouprep.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace koehler {

namespace {
constexpr int kMaxClosure = 10000;
}

// ---------------------------------------------------------------------------
// Mat2

Mat2 Mat2::identity() { return diag(CycNum::one(), CycNum::one()); }

Mat2 Mat2::diag(CycNum x, CycNum y) {
    Mat2 m{{std::move(x), CycNum::zero(), CycNum::zero(), std::move(y)}};
    m.normalize();
    return m;
}

Mat2 Mat2::antidiag(CycNum upper, CycNum lower) {
    Mat2 m{{CycNum::zero(), std::move(upper), std::move(lower), CycNum::zero()}};
    m.normalize();
    return m;
}

Mat2 Mat2::scalar(CycNum x) { return diag(x, x); }

Mat2 Mat2::operator*(const Mat2& o) const {
    Mat2 m{{a[0] * o.a[0] + a[1] * o.a[2], a[0] * o.a[1] + a[1] * o.a[3],
            a[2] * o.a[0] + a[3] * o.a[2], a[2] * o.a[1] + a[3] * o.a[3]}};
    m.normalize();
    return m;
}

bool Mat2::operator<(const Mat2& o) const {
    for (int i = 0; i < 4; ++i) {
        if (a[i].order() != o.a[i].order()) return a[i].order() < o.a[i].order();
        if (a[i].coeffs() != o.a[i].coeffs()) return a[i].coeffs() < o.a[i].coeffs();
    }
    return false;
}

bool Mat2::is_identity() const {
    return a[0].is_one() && a[1].is_zero() && a[2].is_zero() && a[3].is_one();
}

bool Mat2::is_scalar() const {
    return a[1].is_zero() && a[2].is_zero() && a[0] == a[3];
}

bool Mat2::is_diagonal() const { return a[1].is_zero() && a[2].is_zero(); }

void Mat2::normalize() {
    for (auto& e : a) e = e.reduced_order();
}

// ---------------------------------------------------------------------------
// MatrixGroup

MatrixGroup MatrixGroup::closure(const std::vector<Mat2>& gens) {
    MatrixGroup G;
    Mat2 id = Mat2::identity();
    G.el_.push_back(id);
    G.idx_[id] = 0;
    std::vector<Mat2> frontier{id};
    while (!frontier.empty()) {
        std::vector<Mat2> next;
        for (const auto& x : frontier)
            for (const auto& g : gens) {
                Mat2 y = x * g;
                if (G.idx_.count(y)) continue;
                if ((int)G.el_.size() >= kMaxClosure)
                    throw BoundError("MatrixGroup::closure: group too large");
                G.idx_[y] = (int)G.el_.size();
                G.el_.push_back(y);
                next.push_back(y);
            }
        frontier = std::move(next);
    }
    // every element must have finite order (inverses then come for free)
    for (int i = 0; i < G.size(); ++i) G.order_of(i);
    return G;
}

MatrixGroup MatrixGroup::from_elements(std::vector<Mat2> elems) {
    MatrixGroup G;
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    for (auto it = elems.begin(); it != elems.end(); ++it)
        if (it->is_identity()) {
            std::iter_swap(elems.begin(), it);
            break;
        }
    if (elems.empty() || !elems[0].is_identity())
        throw InputError("MatrixGroup::from_elements: missing identity");
    for (const auto& e : elems) {
        G.idx_[e] = (int)G.el_.size();
        G.el_.push_back(e);
    }
    for (int i = 0; i < G.size(); ++i)
        for (int j = 0; j < G.size(); ++j)
            if (G.index_of(G.el_[(size_t)i] * G.el_[(size_t)j]) < 0)
                throw InputError("MatrixGroup::from_elements: not closed");
    return G;
}

int MatrixGroup::index_of(const Mat2& m) const {
    auto it = idx_.find(m);
    return it == idx_.end() ? -1 : it->second;
}

int MatrixGroup::mul(int i, int j) const {
    size_t n = el_.size();
    if (tab_.empty() && n <= 2048) tab_.assign(n * n, -1);
    if (!tab_.empty()) {
        int& slot = tab_[(size_t)i * n + (size_t)j];
        if (slot >= 0) return slot;
        slot = index_of(el_[(size_t)i] * el_[(size_t)j]);
        if (slot < 0) throw InternalError("MatrixGroup::mul: product escapes the group");
        return slot;
    }
    int k = index_of(el_[(size_t)i] * el_[(size_t)j]);
    if (k < 0) throw InternalError("MatrixGroup::mul: product escapes the group");
    return k;
}

int MatrixGroup::inverse(int i) const {
    int cur = i, prev = 0;
    for (int steps = 0; steps <= size(); ++steps) {
        if (cur == 0) return prev;
        prev = cur;
        cur = mul(cur, i);
    }
    throw InternalError("MatrixGroup::inverse: no finite order");
}

Int MatrixGroup::order_of(int i) const {
    int cur = i;
    for (Int o = 1; o <= size(); ++o) {
        if (cur == 0) return o;
        cur = mul(cur, i);
    }
    throw InternalError("MatrixGroup::order_of: no finite order");
}

std::vector<int> MatrixGroup::span(const std::vector<int>& gens) const {
    std::set<int> seen{0};
    std::vector<int> frontier{0};
    while (!frontier.empty()) {
        std::vector<int> next;
        for (int x : frontier)
            for (int g : gens) {
                int y = mul(x, g);
                if (seen.insert(y).second) next.push_back(y);
            }
        frontier = std::move(next);
    }
    return std::vector<int>(seen.begin(), seen.end());
}

std::vector<std::vector<int>> MatrixGroup::index2_subgroups() const {
    // N = <squares, commutators>; G/N is elementary abelian 2, and index-2
    // subgroups correspond to nonzero functionals on it.
    std::vector<int> ngens;
    for (int i = 0; i < size(); ++i) ngens.push_back(mul(i, i));
    for (int i = 0; i < size(); ++i)
        for (int j = 0; j < size(); ++j)
            ngens.push_back(mul(mul(mul(i, j), inverse(i)), inverse(j)));
    std::sort(ngens.begin(), ngens.end());
    ngens.erase(std::unique(ngens.begin(), ngens.end()), ngens.end());
    std::vector<int> N = span(ngens);

    // F2 coordinates on cosets of N, built from a greedy basis.
    std::vector<unsigned> vec((size_t)size(), 0u);
    std::vector<char> assigned((size_t)size(), 0);
    for (int x : N) assigned[(size_t)x] = 1;
    unsigned k = 0;
    for (int g = 0; g < size(); ++g) {
        if (assigned[(size_t)g]) continue;
        unsigned bit = 1u << k++;
        if (k > 24) throw BoundError("index2_subgroups: too many subgroups");
        std::vector<std::pair<int, unsigned>> known;
        for (int x = 0; x < size(); ++x)
            if (assigned[(size_t)x]) known.push_back({x, vec[(size_t)x]});
        for (auto [x, v] : known) {
            int y = mul(g, x);
            if (!assigned[(size_t)y]) {
                assigned[(size_t)y] = 1;
                vec[(size_t)y] = v | bit;
            }
        }
    }
    std::vector<std::vector<int>> out;
    for (unsigned phi = 1; phi < (1u << k); ++phi) {
        std::vector<int> H;
        for (int g = 0; g < size(); ++g)
            if (__builtin_parity(vec[(size_t)g] & phi) == 0) H.push_back(g);
        out.push_back(std::move(H));
    }
    return out;
}

std::vector<int> MatrixGroup::two_power_part() const {
    std::vector<int> out;
    for (int i = 0; i < size(); ++i) {
        Int o = order_of(i);
        while (o % 2 == 0) o /= 2;
        if (o == 1) out.push_back(i);
    }
    return out;
}

// ---------------------------------------------------------------------------
// SubgroupChar

const CycNum& SubgroupChar::value(int elem_index) const {
    auto it = std::lower_bound(H.begin(), H.end(), elem_index);
    if (it == H.end() || *it != elem_index)
        throw InputError("SubgroupChar: element not in the subgroup");
    return chi[(size_t)(it - H.begin())];
}

bool SubgroupChar::contains(int elem_index) const {
    return std::binary_search(H.begin(), H.end(), elem_index);
}

SubgroupChar diagonal_char(const MatrixGroup& G, const std::vector<int>& H) {
    SubgroupChar hc;
    hc.H = H;
    std::sort(hc.H.begin(), hc.H.end());
    for (int h : hc.H) {
        if (!G.elem(h).is_diagonal())
            throw InputError("diagonal_char: subgroup is not diagonal");
        hc.chi.push_back(G.elem(h).a[0]);
    }
    for (int g = 0; g < G.size(); ++g)
        if (!hc.contains(g)) {
            hc.sigma = g;
            break;
        }
    if (hc.sigma < 0) throw InputError("diagonal_char: subgroup is all of G");
    return hc;
}

namespace {

void validate_char(const MatrixGroup& G, const SubgroupChar& hc) {
    if (2 * (Int)hc.H.size() != G.size() || hc.H.size() != hc.chi.size())
        throw InputError("SubgroupChar: H must have index 2");
    if (hc.sigma < 0 || hc.sigma >= G.size() || hc.contains(hc.sigma))
        throw InputError("SubgroupChar: sigma must lie outside H");
    for (size_t i = 0; i < hc.H.size(); ++i)
        for (size_t j = 0; j < hc.H.size(); ++j) {
            int p = G.mul(hc.H[i], hc.H[j]);
            if (!hc.contains(p)) throw InputError("SubgroupChar: H is not closed");
            if (hc.value(p) != hc.chi[i] * hc.chi[j])
                throw InputError("SubgroupChar: chi is not a homomorphism");
        }
}

// chi^sigma(h) = chi(sigma^-1 h sigma)
CycNum chi_conj(const MatrixGroup& G, const SubgroupChar& hc, int h) {
    int si = G.inverse(hc.sigma);
    return hc.value(G.mul(G.mul(si, h), hc.sigma));
}

// o-th root of a root of unity, one fixed choice
CycNum unity_root_of(const CycNum& v, Int o) {
    auto q = v.root_order();
    if (!q) throw InternalError("unity_root_of: not a root of unity");
    for (long t = 0; t < *q; ++t)
        if (v == CycNum::root(*q, t)) return CycNum::root(*q * (long)o, t);
    throw InternalError("unity_root_of: no representation found");
}

// All 1-dimensional characters of the subgroup Hs of G, as value maps on Hs
// (through the abelianization).
std::vector<std::map<int, CycNum>> subgroup_characters(const MatrixGroup& G,
                                                       const std::vector<int>& Hs) {
    // commutator subgroup of Hs
    std::vector<int> cgens;
    for (int x : Hs)
        for (int y : Hs)
            cgens.push_back(G.mul(G.mul(G.mul(x, y), G.inverse(x)), G.inverse(y)));
    std::sort(cgens.begin(), cgens.end());
    cgens.erase(std::unique(cgens.begin(), cgens.end()), cgens.end());
    std::vector<int> C = G.span(cgens);

    // cosets, represented by their least element
    std::map<int, int> rep;
    for (int h : Hs) {
        if (rep.count(h)) continue;
        int r = h;
        std::vector<int> cls;
        for (int c : C) {
            int e = G.mul(h, c);
            cls.push_back(e);
            r = std::min(r, e);
        }
        for (int e : cls) rep[e] = r;
    }
    auto qmul = [&](int a, int b) { return rep.at(G.mul(a, b)); };

    // triangular generating sequence with discrete logs on the quotient
    std::vector<int> gens;
    std::vector<Int> ords;
    std::vector<std::vector<Int>> rels;  // rels[j]: dlog of gens[j]^ords[j]
    std::map<int, std::vector<Int>> dlog;
    dlog[rep.at(0)] = {};
    for (const auto& [e, r] : rep) {
        (void)r;
        if (e != rep.at(e)) continue;
        if (dlog.count(e)) continue;
        Int o = 1;
        int cur = e;
        while (!dlog.count(cur)) {
            cur = qmul(cur, e);
            ++o;
        }
        rels.push_back(dlog.at(cur));
        rels.back().resize(gens.size(), 0);
        gens.push_back(e);
        ords.push_back(o);
        std::vector<std::pair<int, std::vector<Int>>> snapshot(dlog.begin(), dlog.end());
        int pw = e;
        for (Int t = 1; t < o; ++t) {
            for (const auto& [old, v] : snapshot) {
                std::vector<Int> nv = v;
                nv.resize(gens.size() - 1, 0);
                nv.push_back(t);
                dlog[qmul(pw, old)] = std::move(nv);
            }
            pw = qmul(pw, e);
        }
        for (auto& [k, v] : dlog) {
            (void)k;
            v.resize(gens.size(), 0);
        }
    }

    // enumerate characters: z_j runs over the o_j solutions of
    // z^{o_j} = prod_i z_i^{rels[j][i]}
    size_t ng = gens.size();
    std::vector<std::map<int, CycNum>> out;
    std::vector<Int> pick(ng, 0);
    while (true) {
        std::vector<CycNum> z(ng);
        for (size_t j = 0; j < ng; ++j) {
            CycNum rhs = CycNum::one();
            for (size_t i = 0; i < j; ++i) rhs *= z[i].pow((long)rels[j][i]);
            z[j] = CycNum::root((long)ords[j], (long)pick[j]) * unity_root_of(rhs, ords[j]);
        }
        std::map<int, CycNum> chi;
        for (int h : Hs) {
            const auto& v = dlog.at(rep.at(h));
            CycNum val = CycNum::one();
            for (size_t i = 0; i < ng; ++i) val *= z[i].pow((long)v[i]);
            chi.emplace(h, val.reduced_order());
        }
        out.push_back(std::move(chi));
        size_t j = 0;
        for (; j < ng; ++j) {
            if (++pick[j] < ords[j]) break;
            pick[j] = 0;
        }
        if (j == ng) break;
        if (ng == 0) break;
    }
    return out;
}

// Characters chi' of the index-2 subgroup Hp whose induction matches the
// inclusion representation of G (by trace equality), one per conjugation
// orbit.
std::vector<std::map<int, CycNum>> matching_inducing_chars(const MatrixGroup& G,
                                                           const std::vector<int>& Hp) {
    auto in_hp = [&](int g) { return std::binary_search(Hp.begin(), Hp.end(), g); };
    int tau = -1;
    for (int g = 0; g < G.size(); ++g)
        if (!in_hp(g)) {
            tau = g;
            break;
        }
    if (tau < 0) throw InternalError("matching_inducing_chars: subgroup is everything");
    for (int g = 0; g < G.size(); ++g)
        if (!in_hp(g) && !G.elem(g).trace().is_zero()) return {};
    int ti = G.inverse(tau);
    auto conj_by_tau = [&](int h) { return G.mul(G.mul(ti, h), tau); };
    std::vector<std::map<int, CycNum>> matches;
    for (auto& chi : subgroup_characters(G, Hp)) {
        bool ok = true;
        for (int h : Hp)
            if (chi.at(h) + chi.at(conj_by_tau(h)) != G.elem(h).trace()) {
                ok = false;
                break;
            }
        if (!ok) continue;
        bool dup = false;
        for (const auto& prev : matches) {
            bool same = true;
            for (int h : Hp)
                if (prev.at(h) != chi.at(conj_by_tau(h))) {
                    same = false;
                    break;
                }
            if (same) {
                dup = true;
                break;
            }
        }
        if (!dup) matches.push_back(std::move(chi));
    }
    return matches;
}

}  // namespace

std::vector<std::vector<CycNum>> characters_of_subgroup(const MatrixGroup& G,
                                                        const std::vector<int>& H) {
    std::vector<int> Hs = H;
    std::sort(Hs.begin(), Hs.end());
    std::vector<std::vector<CycNum>> out;
    for (auto& chi : subgroup_characters(G, Hs)) {
        std::vector<CycNum> vals;
        for (int h : Hs) vals.push_back(chi.at(h));
        out.push_back(std::move(vals));
    }
    return out;
}

// ---------------------------------------------------------------------------
// induction and the equivalence battery

std::vector<Mat2> induce(const MatrixGroup& G, const SubgroupChar& hc) {
    validate_char(G, hc);
    int si = G.inverse(hc.sigma);
    CycNum chi_sigma2 = hc.value(G.mul(hc.sigma, hc.sigma));
    std::vector<Mat2> rho;
    rho.reserve((size_t)G.size());
    for (int g = 0; g < G.size(); ++g) {
        if (hc.contains(g)) {
            rho.push_back(Mat2::diag(hc.value(g), chi_conj(G, hc, g)));
        } else {
            int h = G.mul(si, g);  // g = sigma * h
            rho.push_back(Mat2::antidiag(chi_sigma2 * chi_conj(G, hc, h), hc.value(h)));
        }
    }
    for (int i = 0; i < G.size(); ++i)
        for (int j = 0; j < G.size(); ++j)
            if (rho[(size_t)i] * rho[(size_t)j] != rho[(size_t)G.mul(i, j)])
                throw InternalError("induce: result is not a homomorphism");
    return rho;
}

bool is_irreducible(const MatrixGroup& G, const SubgroupChar& hc) {
    validate_char(G, hc);
    for (size_t i = 0; i < hc.H.size(); ++i)
        if (hc.chi[i] != chi_conj(G, hc, hc.H[i])) return true;
    return false;
}

EpsilonInfo epsilon_char(const MatrixGroup& G, const SubgroupChar& hc) {
    validate_char(G, hc);
    EpsilonInfo info;
    info.order = 1;
    for (size_t i = 0; i < hc.H.size(); ++i) {
        CycNum e = (chi_conj(G, hc, hc.H[i]) * hc.chi[i].pow(-1)).reduced_order();
        auto q = e.root_order();
        if (!q) throw InternalError("epsilon_char: value is not a root of unity");
        info.order = std::lcm(info.order, (Int)*q);
        if (e.is_one()) info.kernel.push_back(hc.H[i]);
        info.values.push_back(std::move(e));
    }
    info.quadratic = info.order == 2;
    return info;
}

std::array<bool, 6> check_equivalences(const MatrixGroup& G, const SubgroupChar& hc) {
    std::array<bool, 6> r{};
    if (!is_irreducible(G, hc)) return r;  // statements read under irreducibility

    // pass to the image of the induced representation
    std::vector<Mat2> rho = induce(G, hc);
    MatrixGroup img = MatrixGroup::from_elements(rho);
    std::vector<int> Hbar, Kbar;
    for (int g = 0; g < img.size(); ++g)
        if (img.elem(g).is_diagonal()) {
            Hbar.push_back(g);
            if (img.elem(g).is_scalar()) Kbar.push_back(g);
        }

    // (B') chi = +- chi^sigma pointwise; (C') epsilon quadratic
    bool bprime = true;
    Int eps_order = 1;
    for (int h : Hbar) {
        CycNum e = (img.elem(h).a[3] * img.elem(h).a[0].pow(-1)).reduced_order();
        auto q = e.root_order();
        if (!q) throw InternalError("check_equivalences: epsilon not a root of unity");
        eps_order = std::lcm(eps_order, (Int)*q);
        if (*q > 2) bprime = false;
    }
    r[1] = bprime;
    r[2] = eps_order == 2;

    // (D') traces vanish on H minus the epsilon kernel (= scalars)
    bool dprime = true;
    for (int h : Hbar)
        if (!img.elem(h).is_scalar() && !img.elem(h).trace().is_zero()) dprime = false;
    r[3] = dprime;

    // (E') G/K of type (2,2)
    bool eprime = img.size() == 4 * (int)Kbar.size();
    if (eprime)
        for (int g = 0; g < img.size() && eprime; ++g)
            if (!img.elem(img.mul(g, g)).is_scalar()) eprime = false;
    r[4] = eprime;

    // (A')/(F') exhaustive search over other index-2 subgroups
    int found = 0;
    for (const auto& Hp : img.index2_subgroups()) {
        if (Hp == Hbar) continue;
        if (!matching_inducing_chars(img, Hp).empty()) ++found;
    }
    r[0] = found >= 1;
    r[5] = found >= 2;
    return r;
}

std::vector<std::pair<std::vector<int>, std::vector<CycNum>>> inducing_pairs(
    const MatrixGroup& G) {
    // irreducibility of the inclusion representation: sum |tr|^2 = |G|
    CycNum s = CycNum::zero();
    for (int g = 0; g < G.size(); ++g) {
        CycNum t = G.elem(g).trace();
        s += t * t.conj();
    }
    if (s != CycNum::integer(G.size()))
        throw InputError("inducing_pairs: representation is not irreducible");
    std::vector<std::pair<std::vector<int>, std::vector<CycNum>>> out;
    for (const auto& Hp : G.index2_subgroups())
        for (auto& chi : matching_inducing_chars(G, Hp)) {
            std::vector<CycNum> vals;
            for (int h : Hp) vals.push_back(chi.at(h));
            out.push_back({Hp, std::move(vals)});
        }
    return out;
}

TrDetReport trdet_profile(const MatrixGroup& G) {
    TrDetReport rep;
    rep.ok = true;
    for (int g = 0; g < G.size(); ++g) {
        const Mat2& M = G.elem(g);
        const Mat2& M2 = G.elem(G.mul(g, g));
        if (!M2.is_scalar()) {
            rep.ok = false;
            rep.detail = "square of an element is not scalar";
            return rep;
        }
        CycNum chiK_g2 = M2.a[0];
        if (M.is_scalar()) {
            if (M.trace() != CycNum::integer(2) * M.a[0] || M.det() != chiK_g2) {
                rep.ok = false;
                rep.detail = "scalar element violates the pattern";
                return rep;
            }
        } else {
            if (!M.trace().is_zero()) {
                rep.ok = false;
                rep.detail = "non-scalar element with nonzero trace";
                return rep;
            }
            if (M.det() != -chiK_g2) {
                rep.ok = false;
                rep.detail = "determinant differs from -chi_K(g^2)";
                return rep;
            }
        }
        ++rep.checked;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// the classified groups

TableData table_group(int line, int r, Int m) {
    if (line < 1 || line > 6) throw InputError("table_group: line must be 1..6");
    if (m < 1 || m % 2 == 0 || m > 99) throw InputError("table_group: m must be odd and small");
    if (r < 1 || r > 6) throw InputError("table_group: r out of range");
    if ((line == 1 || line == 3) && r != 1)
        throw InputError("table_group: this line requires r = 1");
    if ((line == 2 || line == 4) && r < 2)
        throw InputError("table_group: this line requires r >= 2");

    CycNum za = CycNum::root(2L << r, 1);  // zeta_{2^{r+1}}
    CycNum zb = CycNum::root(1L << r, 1);  // zeta_{2^r}
    Mat2 c1 = Mat2::diag(za, -za);
    Mat2 i1 = Mat2::diag(CycNum::one(), CycNum::integer(-1));
    Mat2 c2 = Mat2::antidiag(zb, CycNum::one());
    Mat2 i2 = Mat2::antidiag(CycNum::one(), CycNum::one());
    Mat2 k = Mat2::scalar(zb);
    Mat2 kp = Mat2::scalar(CycNum::root((long)m, 1));

    Mat2 g1, g2;  // the non-scalar generators of H1 resp. H2
    switch (line) {
        case 1: case 2: g1 = i1; g2 = i2; break;
        case 3: case 4: g1 = c1; g2 = c2; break;
        case 5: g1 = c1; g2 = i2; break;
        case 6: g1 = i1; g2 = c2; break;
    }
    TableData td;
    td.G = MatrixGroup::closure({g1, g2, k, kp});
    if ((Int)td.G.size() != (Int(4) << r) * m)
        throw InternalError("table_group: unexpected group order");

    auto need = [&](const Mat2& M) {
        int i = td.G.index_of(M);
        if (i < 0) throw InternalError("table_group: generator missing from closure");
        return i;
    };
    td.H[0] = td.G.span({need(g1), need(k), need(kp)});
    td.H[1] = td.G.span({need(g2), need(k), need(kp)});

    // H3: the remaining index-2 subgroup containing all scalars
    std::vector<int> scalars;
    for (int i = 0; i < td.G.size(); ++i)
        if (td.G.elem(i).is_scalar()) scalars.push_back(i);
    std::vector<std::vector<int>> cands;
    for (auto& H : td.G.index2_subgroups()) {
        if (!std::includes(H.begin(), H.end(), scalars.begin(), scalars.end())) continue;
        if (H == td.H[0] || H == td.H[1]) continue;
        cands.push_back(std::move(H));
    }
    if (cands.size() != 1) throw InternalError("table_group: H3 is not unique");
    td.H[2] = std::move(cands[0]);

    td.chi1 = diagonal_char(td.G, td.H[0]);
    return td;
}

bool has_involution_det_minus_one(const MatrixGroup& G) {
    for (int g = 1; g < G.size(); ++g) {
        const Mat2& M = G.elem(g);
        if (M.is_scalar()) continue;
        if ((M * M).is_identity() && M.det() == CycNum::integer(-1)) return true;
    }
    return false;
}

namespace {

bool relations_hold_pair(const MatrixGroup& G, int x, int y, int line, Int r) {
    auto pw = [&](int g, Int e) {
        int acc = 0;
        for (Int i = 0; i < e; ++i) acc = G.mul(acc, g);
        return acc;
    };
    switch (line) {
        case 1:  // x^2 = y^4 = (xy)^2 = 1, dihedral of order 8
            return G.order_of(x) == 2 && G.order_of(y) == 4 &&
                   pw(G.mul(x, y), 2) == 0;
        case 3:  // x^4 = 1, x^2 = y^2, y x y^-1 = x^-1, quaternion
            return G.order_of(x) == 4 && pw(x, 2) == pw(y, 2) &&
                   G.mul(G.mul(y, x), G.inverse(y)) == G.inverse(x);
        case 4:  // x^{2^{r+1}} = y^2 = 1, y x y = x^{2^r + 1}, modular
            return G.order_of(x) == (Int(2) << r) && G.order_of(y) == 2 &&
                   G.mul(G.mul(y, x), y) == pw(x, (Int(1) << r) + 1);
    }
    return false;
}

bool presentation_matches(const MatrixGroup& G, const std::vector<int>& S, int line, Int r) {
    // search the Sylow 2-part S for generators realizing the presentation
    if ((Int)S.size() != (Int(4) << r)) return false;
    if (line == 2) {
        // x^2 = y^2 = 1, [x, y] = z^{2^{r-1}}, z central of order 2^r
        for (int z : S) {
            if (G.order_of(z) != (Int(1) << r) || !G.elem(z).is_scalar()) continue;
            int zh = z;
            for (Int i = 1; i < (Int(1) << (r - 1)); ++i) zh = G.mul(zh, z);
            for (int x : S) {
                if (G.order_of(x) != 2) continue;
                for (int y : S) {
                    if (G.order_of(y) != 2) continue;
                    int comm = G.mul(G.mul(G.mul(x, y), G.inverse(x)), G.inverse(y));
                    if (comm != zh) continue;
                    if (G.span({x, y, z}).size() == S.size()) return true;
                }
            }
        }
        return false;
    }
    for (int x : S)
        for (int y : S)
            if (relations_hold_pair(G, x, y, line, r) &&
                G.span({x, y}).size() == S.size())
                return true;
    return false;
}

}  // namespace

ImageClass classify_image(const MatrixGroup& G) {
    std::vector<int> scalars;
    for (int i = 0; i < G.size(); ++i)
        if (G.elem(i).is_scalar()) scalars.push_back(i);
    Int n = (Int)scalars.size();
    if ((Int)G.size() != 4 * n)
        throw InputError("classify_image: scalar subgroup does not have index 4");
    for (int g = 0; g < G.size(); ++g)
        if (!G.elem(G.mul(g, g)).is_scalar())
            throw InputError("classify_image: projective image is not of type (2,2)");

    ImageClass ic;
    ic.r = 0;
    ic.m = n;
    while (ic.m % 2 == 0) {
        ic.m /= 2;
        ++ic.r;
    }
    if (ic.r < 1) throw InputError("classify_image: scalar 2-part is trivial");

    // the three index-2 subgroups containing the scalars; count the cyclic ones
    std::vector<std::vector<int>> hs;
    for (auto& H : G.index2_subgroups())
        if (std::includes(H.begin(), H.end(), scalars.begin(), scalars.end()))
            hs.push_back(std::move(H));
    if (hs.size() != 3) throw InternalError("classify_image: expected three subgroups over K");
    int cyc = 0;
    for (const auto& H : hs) {
        bool cyclic = false;
        for (int h : H)
            if (G.order_of(h) == (Int)H.size()) {
                cyclic = true;
                break;
            }
        if (cyclic) ++cyc;
    }

    if (ic.r == 1 && cyc == 1) {
        ic.line = 1;
        ic.name = "D4";
    } else if (ic.r == 1 && cyc == 3) {
        ic.line = 3;
        ic.name = "Q8";
    } else if (ic.r >= 2 && cyc == 0) {
        ic.line = 2;
        ic.name = "D4oC" + std::to_string(Int(1) << ic.r);
    } else if (ic.r >= 2 && cyc == 2) {
        ic.line = 4;
        ic.name = "M" + std::to_string(ic.r + 2) + "(2)";
    } else {
        throw InternalError("classify_image: cyclic-subgroup count matches no line");
    }
    // independent cross-check: the quaternion case is exactly the one with no
    // non-scalar involution
    bool has_inv = false;
    for (int g = 1; g < G.size(); ++g)
        if (!G.elem(g).is_scalar() && G.elem(G.mul(g, g)).is_identity()) has_inv = true;
    if ((ic.line == 3) == has_inv)
        throw InternalError("classify_image: involution cross-check failed");

    ic.full_name = ic.m > 1 ? ic.name + "xC" + std::to_string(ic.m) : ic.name;
    ic.presentation_ok = presentation_matches(G, G.two_power_part(), ic.line, ic.r);
    return ic;
}

}  // namespace koehler

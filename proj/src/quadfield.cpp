#include "koehler/quadfield.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

namespace koehler {

namespace {

constexpr Int kMaxDisc = 10000;       // desk-scale guardrail
constexpr Int kMaxNorm = 1000000;     // enumeration guardrail

bool is_prime(Int p) {
    if (p < 2) return false;
    for (Int q = 2; q * q <= p; ++q)
        if (p % q == 0) return false;
    return true;
}

std::vector<std::pair<Int, Int>> factor_int(Int n) {
    std::vector<std::pair<Int, Int>> f;
    for (Int p = 2; p * p <= n; ++p)
        if (n % p == 0) {
            Int e = 0;
            while (n % p == 0) n /= p, ++e;
            f.push_back({p, e});
        }
    if (n > 1) f.push_back({n, 1});
    return f;
}

// Sign of A + B*sqrt(D), D > 0 nonsquare; zero input returns 0.
int sign_of_pair(const BigInt& A, const BigInt& B, Int D) {
    if (B == 0) return A == 0 ? 0 : (A > 0 ? 1 : -1);
    if (A == 0) return B > 0 ? 1 : -1;
    if (A > 0 && B > 0) return 1;
    if (A < 0 && B < 0) return -1;
    BigInt lhs = A * A, rhs = B * B * D;
    if (A > 0) return lhs > rhs ? 1 : -1;   // B < 0
    return lhs < rhs ? 1 : -1;              // A < 0, B > 0
}

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return (uint64_t)((__uint128_t)a * b % m);
}

uint64_t powmod_u64(uint64_t b, uint64_t e, uint64_t m) {
    uint64_t r = 1 % m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, b, m);
        b = mulmod_u64(b, b, m);
        e >>= 1;
    }
    return r;
}

// Tonelli-Shanks; requires p odd prime and (a|p) = 1.
uint64_t sqrt_mod_prime(uint64_t a, uint64_t p) {
    a %= p;
    if (a == 0) return 0;
    if (p % 4 == 3) return powmod_u64(a, (p + 1) / 4, p);
    uint64_t q = p - 1, s = 0;
    while (q % 2 == 0) q /= 2, ++s;
    uint64_t z = 2;
    while (powmod_u64(z, (p - 1) / 2, p) != p - 1) ++z;
    uint64_t m = s, c = powmod_u64(z, q, p);
    uint64_t t = powmod_u64(a, q, p), r = powmod_u64(a, (q + 1) / 2, p);
    while (t != 1) {
        uint64_t i = 0, tt = t;
        while (tt != 1) tt = mulmod_u64(tt, tt, p), ++i;
        uint64_t b = c;
        for (uint64_t j = 0; j + i + 1 < m; ++j) b = mulmod_u64(b, b, p);
        m = i;
        c = mulmod_u64(b, b, p);
        t = mulmod_u64(t, c, p);
        r = mulmod_u64(r, b, p);
    }
    return r;
}

}  // namespace

int kronecker_symbol(Int a, Int n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    int result = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) result = -result;
    }
    while (n % 2 == 0) {
        n /= 2;
        Int am = ((a % 8) + 8) % 8;
        if (am % 2 == 0) return 0;
        if (am == 3 || am == 5) result = -result;
    }
    a = ((a % n) + n) % n;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            Int nm = n % 8;
            if (nm == 3 || nm == 5) result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

QuadField QuadField::make(Int d) {
    if (d == 0 || d == 1) throw InputError("make_field: d must not be 0 or 1");
    Int ad = d < 0 ? -d : d;
    Int s = (Int)std::llround(std::sqrt((double)ad));
    for (Int t = std::max<Int>(0, s - 2); t <= s + 2; ++t)
        if (d > 0 && t * t == d) throw InputError("make_field: d is a square");
    // squarefree core
    Int core = d < 0 ? -1 : 1;
    for (auto [p, e] : factor_int(ad))
        if (e % 2 == 1) core *= p;
    Int D = (((core % 4) + 4) % 4 == 1) ? core : 4 * core;
    if (D > kMaxDisc || D < -kMaxDisc)
        throw BoundError("make_field: |D| exceeds desk-scale bound");
    return QuadField(D);
}

QuadField QuadField::from_disc(Int D) {
    Int m = ((D % 4) + 4) % 4;
    if (D == 0 || D == 1 || (m != 0 && m != 1))
        throw InputError("from_disc: not a discriminant");
    QuadField K = QuadField::make(m == 0 ? D / 4 : D);
    if (K.disc() != D) throw InputError("from_disc: not fundamental");
    return K;
}

BigInt QuadInt::norm() const {
    BigInt n0 = BigInt(disc) * (disc - 1) / 4;
    return x * x + BigInt(disc) * x * y + n0 * y * y;
}

QuadInt QuadInt::conj() const {
    QuadInt r;
    r.disc = disc;
    r.x = x + y * disc;
    r.y = -y;
    return r;
}

QuadInt QuadInt::operator*(const QuadInt& o) const {
    if (disc != o.disc) throw InputError("QuadInt: field mismatch");
    BigInt n0 = BigInt(disc) * (disc - 1) / 4;
    QuadInt r;
    r.disc = disc;
    r.x = x * o.x - n0 * y * o.y;
    r.y = x * o.y + y * o.x + BigInt(disc) * y * o.y;
    return r;
}

QuadInt QuadInt::operator+(const QuadInt& o) const {
    if (disc != o.disc) throw InputError("QuadInt: field mismatch");
    QuadInt r;
    r.disc = disc;
    r.x = x + o.x;
    r.y = y + o.y;
    return r;
}

QuadInt QuadInt::operator-() const {
    QuadInt r;
    r.disc = disc;
    r.x = -x;
    r.y = -y;
    return r;
}

int QuadInt::sign_at(int embedding) const {
    if (disc <= 0) throw InputError("sign_at: field is imaginary");
    // 2*(x + y*omega) = (2x + yD) + y*sqrt(D)
    BigInt A = 2 * x + y * disc;
    BigInt B = embedding == 1 ? y : -y;
    return sign_of_pair(A, B, disc);
}

QuadIdeal QuadIdeal::unit(const QuadField& K) {
    QuadIdeal I;
    I.disc_ = K.disc();
    return I;
}

QuadIdeal QuadIdeal::from_abc(const QuadField& K, Int a, Int b, Int c) {
    if (a <= 0 || c <= 0) throw InputError("ideal: a, c must be positive");
    QuadIdeal I;
    I.disc_ = K.disc();
    I.a_ = a;
    I.c_ = c;
    I.b_ = ((b % a) + a) % a;
    if (a % c != 0 || I.b_ % c != 0)
        throw InputError("ideal: normal form requires c | a and c | b");
    // omega-stability: omega*a and omega*(b + c*omega) must lie in the module
    QuadInt wa(K, 0, a);
    QuadInt wb = QuadInt(K, I.b_, c) * QuadInt(K, 0, 1);
    if (!I.contains(wa) || !I.contains(wb))
        throw InputError("ideal: module is not omega-stable");
    return I;
}

bool QuadIdeal::contains(const QuadInt& v) const {
    if (v.disc != disc_) return false;
    if (v.y % c_ != 0) return false;
    BigInt k = v.y / c_;
    return (v.x - k * b_) % a_ == 0;
}

QuadIdeal QuadIdeal::from_generators(const QuadField& K, const std::vector<QuadInt>& gens) {
    // Z-module generated by gens and gens*omega, as column vectors (x, y).
    std::vector<std::pair<BigInt, BigInt>> cols;
    QuadInt omega(K, 0, 1);
    for (const QuadInt& g : gens) {
        if (g.disc != K.disc()) throw InputError("ideal: generator field mismatch");
        if (g.is_zero()) continue;
        cols.push_back({g.x, g.y});
        QuadInt gw = g * omega;
        cols.push_back({gw.x, gw.y});
    }
    if (cols.empty()) throw InputError("ideal: zero ideal");
    // HNF of the 2 x k matrix.
    BigInt bx = 0, by = 0;  // current second-row generator (x, y) with y = gcd
    std::vector<BigInt> xonly;
    for (auto& [vx0, vy0] : cols) {
        BigInt vx = vx0, vy = vy0;
        if (vy == 0) {
            if (vx != 0) xonly.push_back(vx);
            continue;
        }
        if (by == 0) {
            bx = vx;
            by = vy;
            continue;
        }
        // extended gcd on y-components
        BigInt old_r = by, r = vy, old_s = 1, s = 0, old_t = 0, t = 1;
        while (r != 0) {
            BigInt q = old_r / r;
            BigInt tmp;
            tmp = old_r - q * r; old_r = r; r = tmp;
            tmp = old_s - q * s; old_s = s; s = tmp;
            tmp = old_t - q * t; old_t = t; t = tmp;
        }
        BigInt g = old_r;
        BigInt nbx = old_s * bx + old_t * vx;
        // reduce both originals against the new generator
        BigInt q1 = by / g, q2 = vy / g;
        BigInt leftover1 = bx - q1 * nbx;  // y-component 0
        BigInt leftover2 = vx - q2 * nbx;
        if (leftover1 != 0) xonly.push_back(leftover1);
        if (leftover2 != 0) xonly.push_back(leftover2);
        bx = nbx;
        by = g;
    }
    if (by < 0) { by = -by; bx = -bx; }
    BigInt abig = 0;
    for (auto& v : xonly) abig = boost::multiprecision::gcd(abig, boost::multiprecision::abs(v));
    if (by == 0) throw InputError("ideal: module has rank < 2, not an ideal");
    if (abig == 0) throw InternalError("ideal: degenerate module");
    Int a = checked_cast(abig, "ideal HNF");
    Int c = checked_cast(by, "ideal HNF");
    BigInt bmod = ((bx % abig) + abig) % abig;
    Int b = checked_cast(bmod, "ideal HNF");
    return from_abc(K, a, b, c);
}

QuadIdeal QuadIdeal::principal(const QuadInt& g) {
    if (g.is_zero()) throw InputError("ideal: zero ideal");
    QuadField K = QuadField::from_disc(g.disc);
    return from_generators(K, {g});
}

QuadIdeal QuadIdeal::operator*(const QuadIdeal& o) const {
    if (disc_ != o.disc_) throw InputError("ideal: field mismatch");
    QuadField K = field();
    QuadInt g1(K, a_, 0), g2(K, b_, c_);
    QuadInt h1(K, o.a_, 0), h2(K, o.b_, o.c_);
    return from_generators(K, {g1 * h1, g1 * h2, g2 * h1, g2 * h2});
}

QuadIdeal QuadIdeal::conj() const {
    QuadField K = field();
    QuadInt g1(K, a_, 0), g2 = QuadInt(K, b_, c_).conj();
    return from_generators(K, {g1, g2});
}

QuadIdeal QuadIdeal::pow(Int e) const {
    if (e < 0) throw InputError("ideal::pow: negative exponent");
    QuadIdeal r = unit(field());
    QuadIdeal b = *this;
    while (e > 0) {
        if (e & 1) r = r * b;
        if (e >>= 1) b = b * b;
    }
    return r;
}

bool QuadIdeal::divides(const QuadIdeal& o) const {
    if (disc_ != o.disc_) return false;
    QuadField K = field();
    return contains(QuadInt(K, o.a_, 0)) && contains(QuadInt(K, o.b_, o.c_));
}

bool QuadIdeal::coprime_to(const QuadIdeal& o) const {
    if (disc_ != o.disc_) throw InputError("ideal: field mismatch");
    if (std::gcd(norm(), o.norm()) == 1) return true;
    QuadField K = field();
    QuadIdeal sum = from_generators(
        K, {QuadInt(K, a_, 0), QuadInt(K, b_, c_), QuadInt(K, o.a_, 0), QuadInt(K, o.b_, o.c_)});
    return sum.is_unit_ideal();
}

std::pair<Int, Int> QuadIdeal::residue(const BigInt& x, const BigInt& y) const {
    BigInt ry = ((y % c_) + c_) % c_;
    BigInt k = (y - ry) / c_;
    BigInt rx = (((x - k * b_) % a_) + a_) % a_;
    return {(Int)rx, (Int)ry};
}

std::pair<Int, Int> QuadIdeal::residue_mul(std::pair<Int, Int> u, std::pair<Int, Int> v) const {
    BigInt n0 = BigInt(disc_) * (disc_ - 1) / 4;
    BigInt x = BigInt(u.first) * v.first - n0 * u.second * v.second;
    BigInt y = BigInt(u.first) * v.second + BigInt(u.second) * v.first +
               BigInt(disc_) * u.second * v.second;
    return residue(x, y);
}

bool QuadIdeal::residue_is_unit(std::pair<Int, Int> r) const {
    QuadField K = field();
    QuadInt v(K, r.first, r.second);
    // unit iff (v) + m = O_K
    std::vector<QuadInt> gens = {QuadInt(K, a_, 0), QuadInt(K, b_, c_), v};
    if (v.is_zero()) return is_unit_ideal();
    return from_generators(K, gens).is_unit_ideal();
}

SplitType split_prime(const QuadField& K, Int p) {
    if (!is_prime(p)) throw InputError("split_prime: p is not prime");
    Int D = K.disc();
    int sym = kronecker_symbol(D, p);
    if (sym == -1) return {SplitKind::Inert, {}};
    // roots of t^2 + D t + D(D-1)/4 mod p
    Int n0 = K.omega_norm();
    std::vector<Int> roots;
    if (p == 2) {
        for (Int t = 0; t < 2; ++t)
            if (((t * t + D * t + n0) % 2 + 2) % 2 == 0) roots.push_back(t);
        // both residues can be roots mod 2 only in the split case
    } else {
        Int Dp = ((D % p) + p) % p;
        uint64_t s = (sym == 0) ? 0 : sqrt_mod_prime((uint64_t)Dp, (uint64_t)p);
        uint64_t inv2 = powmod_u64(2, (uint64_t)p - 2, (uint64_t)p);
        Int negD = ((-D) % p + p) % p;
        Int r1 = (Int)mulmod_u64((uint64_t)((negD + (Int)s) % p), inv2, (uint64_t)p);
        Int r2 = (Int)mulmod_u64((uint64_t)((negD - (Int)s + 2 * p) % p), inv2, (uint64_t)p);
        roots.push_back(r1);
        if (r2 != r1) roots.push_back(r2);
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    if (sym == 1) {
        if (roots.size() != 2) throw InternalError("split_prime: expected two roots");
        QuadIdeal p1 = QuadIdeal::from_abc(K, p, roots[0], 1);
        QuadIdeal p2 = QuadIdeal::from_abc(K, p, roots[1], 1);
        return {SplitKind::Split, {p1, p2}};
    }
    // ramified
    for (Int b : roots) {
        QuadIdeal pr = QuadIdeal::from_abc(K, p, b, 1);
        if (pr * pr == QuadIdeal::principal(QuadInt(K, p, 0)))
            return {SplitKind::Ramified, {pr}};
    }
    throw InternalError("split_prime: no ramified prime found");
}

std::vector<QuadIdeal> ideals_of_norm(const QuadField& K, Int n) {
    if (n < 1) throw InputError("ideals_of_norm: n must be positive");
    if (n > kMaxNorm) throw BoundError("ideals_of_norm: norm exceeds desk-scale bound");
    std::vector<QuadIdeal> result = {QuadIdeal::unit(K)};
    for (auto [p, e] : factor_int(n)) {
        SplitType st = split_prime(K, p);
        std::vector<QuadIdeal> local;
        if (st.kind == SplitKind::Inert) {
            if (e % 2 == 1) return {};
            local.push_back(QuadIdeal::principal(QuadInt(K, p, 0)).pow(e / 2));
        } else if (st.kind == SplitKind::Ramified) {
            local.push_back(st.primes[0].pow(e));
        } else {
            for (Int i = 0; i <= e; ++i)
                local.push_back(st.primes[0].pow(i) * st.primes[1].pow(e - i));
        }
        std::vector<QuadIdeal> next;
        for (const auto& r : result)
            for (const auto& l : local) next.push_back(r * l);
        result = std::move(next);
    }
    std::sort(result.begin(), result.end());
    return result;
}

std::vector<std::pair<QuadIdeal, Int>> factor_ideal(const QuadIdeal& I) {
    QuadField K = I.field();
    std::vector<std::pair<QuadIdeal, Int>> out;
    for (auto [p, e] : factor_int(I.norm())) {
        (void)e;
        SplitType st = split_prime(K, p);
        std::vector<QuadIdeal> primes = st.primes;
        if (st.kind == SplitKind::Inert)
            primes.push_back(QuadIdeal::principal(QuadInt(K, p, 0)));
        for (const auto& pr : primes) {
            Int v = 0;
            QuadIdeal pk = pr;
            while (pk.divides(I)) {
                ++v;
                if (pk.norm() > I.norm()) break;
                pk = pk * pr;
            }
            if (v > 0) out.push_back({pr, v});
        }
    }
    std::sort(out.begin(), out.end(),
              [](const auto& l, const auto& r) { return l.first < r.first; });
    return out;
}

const QuadInt& fundamental_unit(const QuadField& K) {
    static std::map<Int, QuadInt> cache;
    static std::mutex mu;
    if (!K.is_real()) throw InputError("fundamental_unit: field is imaginary");
    std::lock_guard<std::mutex> lk(mu);
    auto it = cache.find(K.disc());
    if (it != cache.end()) return it->second;

    Int D = K.disc();
    BigInt n0 = K.omega_norm();
    Int s = (Int)std::llround(std::floor(std::sqrt((double)D)));
    while ((s + 1) * (s + 1) <= D) ++s;
    while (s * s > D) --s;
    // continued fraction of omega = (D + sqrt(D)) / 2
    BigInt P = D, Q = 2;
    BigInt p0 = 1, q0 = 0;
    BigInt p1 = (P + s) / Q, q1 = 1;  // a0
    BigInt a = p1;
    for (int iter = 0; iter < 100000; ++iter) {
        // candidate zeta = -p + q*omega for current convergent p1/q1
        BigInt nrm = p1 * p1 - BigInt(D) * p1 * q1 + n0 * q1 * q1;
        if (nrm == 1 || nrm == -1) {
            // unit = sigma(zeta)/N(zeta), normalized to be > 1 at tau1
            QuadInt zeta;
            zeta.disc = D;
            zeta.x = -p1;
            zeta.y = q1;
            QuadInt u = zeta.conj();
            if (nrm == -1) u = -u;
            if (u.sign_at(1) < 0) u = -u;
            // ensure tau1(u) > 1: tau1 value minus 1 has sign of (2x+yD-2) + y*sqrt(D)
            if (sign_of_pair(2 * u.x + u.y * D - 2, u.y, D) < 0) {
                QuadInt inv = u.conj();  // u * conj(u) = +-1
                if (u.norm() == -1) inv = -inv;
                u = inv;
                if (u.sign_at(1) < 0) u = -u;
            }
            return cache.emplace(K.disc(), u).first->second;
        }
        P = a * Q - P;
        Q = (D - P * P) / Q;
        a = (P + s) / Q;
        BigInt p2 = a * p1 + p0, q2 = a * q1 + q0;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    }
    throw BoundError("fundamental_unit: continued fraction did not terminate");
}

namespace {

// All alpha in I with |N(alpha)| = N(I), imaginary case (finite list).
std::vector<QuadInt> imaginary_generators(const QuadIdeal& I) {
    QuadField K = I.field();
    Int D = K.disc();
    Int n = I.norm();
    std::vector<QuadInt> out;
    Int ymax = (Int)std::sqrt((double)(4 * n) / (double)(-D) + 1.0) / I.c() + 2;
    for (Int y = -ymax; y <= ymax; ++y) {
        BigInt v = BigInt(y) * I.c();
        BigInt disc_u = BigInt(D) * v * v + 4 * n;
        if (disc_u < 0) continue;
        BigInt sq = boost::multiprecision::sqrt(disc_u);
        if (sq * sq != disc_u) continue;
        for (int sgn : {1, -1}) {
            if (sq == 0 && sgn < 0) continue;
            BigInt num = -BigInt(D) * v + sgn * sq;
            if (num % 2 != 0) continue;
            BigInt u = num / 2;
            if ((u - BigInt(y) * I.b()) % I.a() != 0) continue;
            QuadInt alpha;
            alpha.disc = D;
            alpha.x = u;
            alpha.y = v;
            if (!alpha.is_zero()) out.push_back(alpha);
        }
    }
    return out;
}

// One generator of I in a real field, or nullopt; bounded lattice scan
// derived from the fundamental unit.
std::optional<QuadInt> real_one_generator(const QuadIdeal& I) {
    QuadField K = I.field();
    Int D = K.disc();
    Int n = I.norm();
    const QuadInt& eps = fundamental_unit(K);
    double eval = (double)eps.x + (double)eps.y * ((double)D + std::sqrt((double)D)) / 2.0;
    if (!(eval > 1.0) || eval > 1e18)
        throw BoundError("principal_generator: fundamental unit out of desk scale");
    double bound = 2.0 * std::sqrt((double)n * eval) / std::sqrt((double)D);
    Int ymax = (Int)(bound / (double)I.c()) + 2;
    if (ymax > 80000000) throw BoundError("principal_generator: search bound too large");
    for (Int y = 0; y <= ymax; ++y) {
        for (int ys : {1, -1}) {
            if (y == 0 && ys < 0) continue;
            BigInt v = BigInt(ys) * y * I.c();
            for (Int tn : {n, -n}) {
                BigInt disc_u = BigInt(D) * v * v + 4 * tn;
                if (disc_u < 0) continue;
                BigInt sq = boost::multiprecision::sqrt(disc_u);
                if (sq * sq != disc_u) continue;
                for (int sgn : {1, -1}) {
                    if (sq == 0 && sgn < 0) continue;
                    BigInt num = -BigInt(D) * v + sgn * sq;
                    if (num % 2 != 0) continue;
                    BigInt u = num / 2;
                    if ((u - v / I.c() * I.b()) % I.a() != 0) continue;
                    QuadInt alpha;
                    alpha.disc = D;
                    alpha.x = u;
                    alpha.y = v;
                    if (!alpha.is_zero()) return alpha;
                }
            }
        }
    }
    return std::nullopt;
}

QuadInt pow_quadint(const QuadInt& b, Int e) {
    QuadInt r;
    r.disc = b.disc;
    r.x = 1;
    r.y = 0;
    QuadInt base = b;
    while (e > 0) {
        if (e & 1) r = r * base;
        if (e >>= 1) base = base * base;
    }
    return r;
}

}  // namespace

std::optional<QuadInt> principal_generator(const QuadIdeal& I,
                                           const std::optional<Congruence>& congruence,
                                           const std::optional<std::pair<int, int>>& signs) {
    QuadField K = I.field();
    if (congruence) {
        if (congruence->modulus.disc() != I.disc())
            throw InputError("principal_generator: congruence modulus field mismatch");
        if (!I.coprime_to(congruence->modulus))
            throw InputError("principal_generator: ideal not coprime to congruence modulus");
    }
    if (!K.is_real()) {
        auto cands = imaginary_generators(I);
        for (const QuadInt& alpha : cands) {
            if (!I.contains(alpha)) continue;
            if (alpha.norm() != I.norm()) continue;  // only |N| was matched
            if (congruence) {
                const QuadIdeal& m = congruence->modulus;
                if (m.residue(alpha) != m.residue(congruence->target)) continue;
            }
            return alpha;
        }
        return std::nullopt;
    }

    auto alpha0 = real_one_generator(I);
    if (!alpha0) return std::nullopt;
    if (!I.contains(*alpha0) || boost::multiprecision::abs(alpha0->norm()) != I.norm())
        throw InternalError("principal_generator: bad scan candidate");

    const QuadInt& eps = fundamental_unit(K);
    int sgnN = eps.norm() == 1 ? 1 : -1;

    // Period of the unit action on (residue mod m, sign pattern).
    Int t = 1;
    std::pair<Int, Int> eps_res{0, 0}, one_res{0, 0};
    if (congruence) {
        const QuadIdeal& m = congruence->modulus;
        eps_res = m.residue(eps.x, eps.y);
        one_res = m.residue(BigInt(1), BigInt(0));
        std::pair<Int, Int> r = eps_res;
        t = 1;
        while (r != one_res) {
            r = m.residue_mul(r, eps_res);
            ++t;
            if (t > 2 * kMaxNorm)
                throw InternalError("principal_generator: unit order runaway");
        }
    }
    Int period = (sgnN == 1 || t % 2 == 0) ? t : 2 * t;

    int s1 = alpha0->sign_at(1), s2 = alpha0->sign_at(2);
    std::pair<Int, Int> cur{0, 0}, target_res{0, 0};
    if (congruence) {
        cur = congruence->modulus.residue(*alpha0);
        target_res = congruence->modulus.residue(congruence->target);
    }
    for (Int k = 0; k < period; ++k) {
        int u2 = (k % 2 == 0) ? 1 : sgnN;  // sign of eps^k at tau2 (tau1 always +)
        for (int s : {1, -1}) {
            if (congruence) {
                auto r = cur;
                if (s < 0) {
                    const QuadIdeal& m = congruence->modulus;
                    r = m.residue_mul(r, m.residue(BigInt(-1), BigInt(0)));
                }
                if (r != target_res) continue;
            }
            if (signs) {
                if (s * s1 != signs->first) continue;
                if (s * s2 * u2 != signs->second) continue;
            }
            QuadInt result = *alpha0 * pow_quadint(eps, k);
            if (s < 0) result = -result;
            return result;
        }
        if (congruence) cur = congruence->modulus.residue_mul(cur, eps_res);
    }
    return std::nullopt;
}

}  // namespace koehler

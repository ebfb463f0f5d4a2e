#include "koehler/cyclotomic.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>

#include <boost/multiprecision/cpp_int.hpp>
#include <nlohmann/json.hpp>

namespace koehler {

namespace {

using Poly = std::vector<Int>;  // low degree first

void poly_trim(Poly& p) {
    while (p.size() > 1 && p.back() == 0) p.pop_back();
}

// Exact division, remainder must vanish (divisor need not be monic but is
// here: cyclotomic polynomials are monic).
Poly poly_divexact(Poly num, const Poly& den) {
    Poly q(num.size() >= den.size() ? num.size() - den.size() + 1 : 1, 0);
    for (long i = (long)num.size() - 1; i >= (long)den.size() - 1; --i) {
        Int c = num[i];
        if (c == 0) continue;
        if (c % den.back() != 0) throw InternalError("poly_divexact: not divisible");
        Int f = c / den.back();
        q[i - (den.size() - 1)] = f;
        for (size_t j = 0; j < den.size(); ++j)
            num[i - (den.size() - 1) + j] -= f * den[j];
    }
    for (Int c : num)
        if (c != 0) throw InternalError("poly_divexact: nonzero remainder");
    poly_trim(q);
    return q;
}

// Reduce p modulo the monic polynomial m in place, returning the remainder
// coefficients (length deg m).
std::vector<Int> poly_mod(Poly p, const Poly& m) {
    size_t d = m.size() - 1;
    for (long i = (long)p.size() - 1; i >= (long)d; --i) {
        Int f = p[i];
        if (f == 0) continue;
        for (size_t j = 0; j < m.size(); ++j) p[i - d + j] -= f * m[j];
    }
    p.resize(d, 0);
    return p;
}

}  // namespace

long euler_phi(long n) {
    long r = n;
    for (long p = 2; p * p <= n; ++p)
        if (n % p == 0) {
            r -= r / p;
            while (n % p == 0) n /= p;
        }
    if (n > 1) r -= r / n;
    return r;
}

const std::vector<Int>& cyclotomic_poly(long N) {
    static std::map<long, Poly> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lk(mu);
    auto it = cache.find(N);
    if (it != cache.end()) return it->second;

    std::function<const Poly&(long)> get = [&](long n) -> const Poly& {
        auto i2 = cache.find(n);
        if (i2 != cache.end()) return i2->second;
        Poly num(n + 1, 0);
        num[0] = -1;
        num[n] = 1;  // x^n - 1
        for (long d = 1; d < n; ++d)
            if (n % d == 0) num = poly_divexact(std::move(num), get(d));
        return cache.emplace(n, std::move(num)).first->second;
    };
    return get(N);
}

CycNum CycNum::integer(Int v) {
    CycNum r;
    r.coeffs_[0] = v;
    return r;
}

CycNum CycNum::root(long N, long k) {
    if (N < 1) throw InputError("CycNum::root: order must be positive");
    k %= N;
    if (k < 0) k += N;
    Poly p(k + 1, 0);
    p[k] = 1;
    return CycNum(N, poly_mod(std::move(p), cyclotomic_poly(N)));
}

CycNum CycNum::lifted(long M) const {
    if (M == order_) return *this;
    if (M % order_ != 0) throw InputError("CycNum::lifted: target order not a multiple");
    long s = M / order_;
    Poly p((coeffs_.size() - 1) * s + 1, 0);
    for (size_t i = 0; i < coeffs_.size(); ++i) p[i * s] = coeffs_[i];
    return CycNum(M, poly_mod(std::move(p), cyclotomic_poly(M)));
}

CycNum CycNum::operator+(const CycNum& o) const {
    long M = std::lcm(order_, o.order_);
    CycNum a = lifted(M), b = o.lifted(M);
    for (size_t i = 0; i < a.coeffs_.size(); ++i) a.coeffs_[i] += b.coeffs_[i];
    return a;
}

CycNum CycNum::operator-() const {
    CycNum a = *this;
    for (auto& c : a.coeffs_) c = -c;
    return a;
}

CycNum CycNum::operator-(const CycNum& o) const { return *this + (-o); }

CycNum CycNum::operator*(const CycNum& o) const {
    long M = std::lcm(order_, o.order_);
    CycNum a = lifted(M), b = o.lifted(M);
    Poly p(a.coeffs_.size() + b.coeffs_.size() - 1, 0);
    for (size_t i = 0; i < a.coeffs_.size(); ++i) {
        if (a.coeffs_[i] == 0) continue;
        for (size_t j = 0; j < b.coeffs_.size(); ++j)
            p[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return CycNum(M, poly_mod(std::move(p), cyclotomic_poly(M)));
}

bool CycNum::operator==(const CycNum& o) const {
    if (order_ == o.order_) return coeffs_ == o.coeffs_;
    long M = std::lcm(order_, o.order_);
    return lifted(M).coeffs_ == o.lifted(M).coeffs_;
}

CycNum CycNum::galois(long a) const {
    a %= order_;
    if (a < 0) a += order_;
    if (std::gcd(a, order_) != 1) throw InputError("CycNum::galois: exponent not coprime to order");
    Poly p(order_, 0);
    for (size_t i = 0; i < coeffs_.size(); ++i) p[(i * a) % order_] += coeffs_[i];
    return CycNum(order_, poly_mod(std::move(p), cyclotomic_poly(order_)));
}

CycNum CycNum::conj() const { return order_ == 1 ? *this : galois(order_ - 1); }

CycNum CycNum::pow(long e) const {
    if (e < 0) {
        auto q = root_order();
        if (!q) throw InputError("CycNum::pow: negative power of a non-root");
        e = ((e % *q) + *q) % *q;
    }
    CycNum r = one(), b = *this;
    while (e > 0) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

bool CycNum::is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](Int c) { return c == 0; });
}

std::optional<Int> CycNum::as_integer() const {
    for (size_t i = 1; i < coeffs_.size(); ++i)
        if (coeffs_[i] != 0) return std::nullopt;
    return coeffs_[0];
}

std::optional<long> CycNum::root_order() const {
    // Kronecker: an algebraic integer all of whose conjugates have absolute
    // value 1 is a root of unity; x * conj(x) == 1 checks exactly that.
    if (!((*this) * conj()).is_one()) return std::nullopt;
    long M = (order_ % 2 == 0) ? order_ : 2 * order_;
    for (long q = 1; q <= M; ++q)
        if (M % q == 0 && pow(q).is_one()) return q;
    throw InternalError("root_order: unit of modulus one with no finite order");
}

std::complex<double> CycNum::embed() const {
    std::complex<double> z = 0;
    const double two_pi = 6.283185307179586476925286766559;
    for (size_t i = 0; i < coeffs_.size(); ++i)
        if (coeffs_[i] != 0)
            z += double(coeffs_[i]) *
                 std::polar(1.0, two_pi * double(i) / double(order_));
    return z;
}

CycNum CycNum::reduced_order() const {
    using Rat = boost::multiprecision::cpp_rational;
    for (long d = 1; d < order_; ++d) {
        if (order_ % d != 0) continue;
        long cols = euler_phi(d), rows = (long)coeffs_.size();
        // Columns: power-basis elements of Z[zeta_d] lifted to order N.
        std::vector<std::vector<Rat>> A(rows, std::vector<Rat>(cols + 1, 0));
        for (long j = 0; j < cols; ++j) {
            CycNum col = CycNum::root(d, j).lifted(order_);
            for (long i = 0; i < rows; ++i) A[i][j] = col.coeffs()[i];
        }
        for (long i = 0; i < rows; ++i) A[i][cols] = coeffs_[i];
        // Gaussian elimination over Q.
        long rank = 0;
        std::vector<long> pivot_col(rows, -1);
        for (long c = 0; c < cols && rank < rows; ++c) {
            long piv = -1;
            for (long i = rank; i < rows; ++i)
                if (A[i][c] != 0) { piv = i; break; }
            if (piv < 0) continue;
            std::swap(A[rank], A[piv]);
            Rat inv = A[rank][c];
            for (long j = c; j <= cols; ++j) A[rank][j] /= inv;
            for (long i = 0; i < rows; ++i) {
                if (i == rank || A[i][c] == 0) continue;
                Rat f = A[i][c];
                for (long j = c; j <= cols; ++j) A[i][j] -= f * A[rank][j];
            }
            pivot_col[rank] = c;
            ++rank;
        }
        bool consistent = true;
        for (long i = rank; i < rows; ++i)
            if (A[i][cols] != 0) { consistent = false; break; }
        if (!consistent) continue;
        std::vector<Int> x(cols, 0);
        bool integral = true;
        for (long i = 0; i < rank; ++i) {
            Rat v = A[i][cols];
            if (boost::multiprecision::denominator(v) != 1) { integral = false; break; }
            x[pivot_col[i]] = checked_cast(BigInt(boost::multiprecision::numerator(v)),
                                           "reduced_order");
        }
        if (integral) return CycNum(d, std::move(x));
    }
    return *this;
}

size_t CycNum::hash() const {
    size_t h = std::hash<long>()(order_);
    for (Int c : coeffs_) h = h * 1000003u + std::hash<Int>()(c);
    return h;
}

nlohmann::json CycNum::to_json() const {
    return nlohmann::json{{"order", order_}, {"coeffs", coeffs_}};
}

CycNum CycNum::from_json(const nlohmann::json& j) {
    long N = j.at("order").get<long>();
    std::vector<Int> c = j.at("coeffs").get<std::vector<Int>>();
    if (N < 1 || (long)c.size() != euler_phi(N))
        throw InputError("CycNum::from_json: bad order/coefficient length");
    return CycNum(N, std::move(c));
}

}  // namespace koehler

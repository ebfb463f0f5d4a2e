#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "koehler/common.hpp"

#include <nlohmann/json_fwd.hpp>

namespace koehler {

// Exact element of Z[zeta_N], stored in the power basis
// 1, zeta, ..., zeta^{phi(N)-1} modulo the N-th cyclotomic polynomial.
// The representation is canonical for a fixed order: two values over the
// same N are equal iff their coefficient vectors are equal.  Mixed-order
// arithmetic lifts both operands to the lcm of the orders; nothing is
// reduced back automatically (see reduced_order()).
class CycNum {
public:
    CycNum() : order_(1), coeffs_{0} {}

    static CycNum integer(Int v);
    // Canonical representative of zeta_N^k (k taken mod N).
    static CycNum root(long N, long k);
    static CycNum zero() { return CycNum(); }
    static CycNum one() { return integer(1); }

    long order() const { return order_; }
    const std::vector<Int>& coeffs() const { return coeffs_; }

    CycNum operator+(const CycNum& o) const;
    CycNum operator-(const CycNum& o) const;
    CycNum operator*(const CycNum& o) const;
    CycNum operator-() const;
    CycNum& operator+=(const CycNum& o) { return *this = *this + o; }
    CycNum& operator*=(const CycNum& o) { return *this = *this * o; }

    bool operator==(const CycNum& o) const;
    bool operator!=(const CycNum& o) const { return !(*this == o); }

    // Complex conjugation zeta -> zeta^{-1}.
    CycNum conj() const;
    // Galois automorphism zeta -> zeta^a, gcd(a, N) = 1.
    CycNum galois(long a) const;
    CycNum pow(long e) const;  // e may be negative only for roots of unity

    bool is_zero() const;
    bool is_one() const { return *this == one(); }
    std::optional<Int> as_integer() const;

    // Least q >= 1 with (*this)^q == 1, or nullopt if not a root of unity.
    std::optional<long> root_order() const;

    // Re-embed into Z[zeta_M] for N | M.
    CycNum lifted(long M) const;
    // Smallest-order representative: tries every divisor N' of N and
    // rewrites the value over zeta_{N'} when the coefficients lie in that
    // subring.  Explicit normalization pass, never applied implicitly.
    CycNum reduced_order() const;

    // Float embedding zeta_N -> exp(2*pi*i/N); sanity oracle only.
    std::complex<double> embed() const;

    nlohmann::json to_json() const;
    static CycNum from_json(const nlohmann::json& j);

    // For hashing in closure computations.
    size_t hash() const;

private:
    CycNum(long order, std::vector<Int> coeffs)
        : order_(order), coeffs_(std::move(coeffs)) {}

    long order_;
    std::vector<Int> coeffs_;  // length phi(order_)
};

long euler_phi(long n);
// Coefficients of the N-th cyclotomic polynomial, low degree first (memoized).
const std::vector<Int>& cyclotomic_poly(long N);

struct CycNumHash {
    size_t operator()(const CycNum& x) const { return x.hash(); }
};

}  // namespace koehler

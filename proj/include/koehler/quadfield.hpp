#pragma once

#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "koehler/common.hpp"

namespace koehler {

// Quadratic field K = Q(sqrt(d)) with fundamental discriminant D.
// Ring of integers Z[omega], omega = (D + sqrt(D))/2, so that
// omega^2 - D*omega + D(D-1)/4 = 0.
class QuadField {
public:
    static QuadField make(Int d);
    // Wrap an already-known fundamental discriminant (validated).
    static QuadField from_disc(Int D);

    Int disc() const { return disc_; }
    bool is_real() const { return disc_ > 0; }
    // N(omega) = D(D-1)/4, Tr(omega) = D.
    Int omega_norm() const { return disc_ * (disc_ - 1) / 4; }
    Int omega_trace() const { return disc_; }

    bool operator==(const QuadField& o) const { return disc_ == o.disc_; }
    bool operator!=(const QuadField& o) const { return disc_ != o.disc_; }

private:
    explicit QuadField(Int D) : disc_(D) {}
    Int disc_;
};

// Element x + y*omega of O_K.  Coordinates are arbitrary precision: unit
// multiples produced by constraint sweeps in real fields can be large.
struct QuadInt {
    Int disc = 0;
    BigInt x = 0, y = 0;

    QuadInt() = default;
    QuadInt(const QuadField& K, BigInt x_, BigInt y_)
        : disc(K.disc()), x(std::move(x_)), y(std::move(y_)) {}

    BigInt norm() const;
    BigInt trace() const { return 2 * x + y * disc; }
    QuadInt conj() const;  // x + y*sigma(omega), sigma(omega) = D - omega
    QuadInt operator*(const QuadInt& o) const;
    QuadInt operator+(const QuadInt& o) const;
    QuadInt operator-() const;
    bool operator==(const QuadInt& o) const {
        return disc == o.disc && x == o.x && y == o.y;
    }
    // Sign under the real embedding sending sqrt(D) to +sqrt(D) (tau1) or
    // -sqrt(D) (tau2).  Exact; requires D > 0 and nonzero value.
    int sign_at(int embedding) const;
    bool totally_positive() const { return sign_at(1) > 0 && sign_at(2) > 0; }
    bool is_zero() const { return x == 0 && y == 0; }
};

// Integral ideal in Hermite normal form: Z*a + Z*(b + c*omega) with
// a, c > 0, c | a, c | b, 0 <= b < a.  Norm a*c.
class QuadIdeal {
public:
    QuadIdeal() = default;

    static QuadIdeal unit(const QuadField& K);
    static QuadIdeal principal(const QuadInt& g);
    static QuadIdeal from_generators(const QuadField& K, const std::vector<QuadInt>& gens);
    // Raw module Z*a + Z*(b+c*omega); verified to be an ideal.
    static QuadIdeal from_abc(const QuadField& K, Int a, Int b, Int c);

    Int a() const { return a_; }
    Int b() const { return b_; }
    Int c() const { return c_; }
    Int disc() const { return disc_; }
    QuadField field() const { return QuadField::from_disc(disc_); }
    Int norm() const { return a_ * c_; }
    bool is_unit_ideal() const { return a_ == 1 && c_ == 1; }

    QuadIdeal operator*(const QuadIdeal& o) const;
    QuadIdeal conj() const;
    QuadIdeal pow(Int e) const;

    bool operator==(const QuadIdeal& o) const {
        return disc_ == o.disc_ && a_ == o.a_ && b_ == o.b_ && c_ == o.c_;
    }
    bool operator!=(const QuadIdeal& o) const { return !(*this == o); }
    bool operator<(const QuadIdeal& o) const {
        return std::tuple(norm(), a_, b_, c_) < std::tuple(o.norm(), o.a_, o.b_, o.c_);
    }

    bool contains(const QuadInt& v) const;
    bool divides(const QuadIdeal& o) const;  // this | o, i.e. o subset of this
    bool coprime_to(const QuadIdeal& o) const;

    // Canonical residue of x + y*omega modulo this ideal: pair (rx, ry)
    // with 0 <= ry < c, 0 <= rx < a.
    std::pair<Int, Int> residue(const BigInt& x, const BigInt& y) const;
    std::pair<Int, Int> residue(const QuadInt& v) const { return residue(v.x, v.y); }
    std::pair<Int, Int> residue_mul(std::pair<Int, Int> u, std::pair<Int, Int> v) const;
    bool residue_is_unit(std::pair<Int, Int> r) const;

private:
    Int disc_ = 0;
    Int a_ = 1, b_ = 0, c_ = 1;
};

enum class SplitKind { Split, Inert, Ramified };

struct SplitType {
    SplitKind kind;
    std::vector<QuadIdeal> primes;  // 2 for split (conjugate pair), 1 ramified, 0 inert
};

int kronecker_symbol(Int a, Int n);
SplitType split_prime(const QuadField& K, Int p);

// All integral ideals of norm exactly n, sorted, each once.
std::vector<QuadIdeal> ideals_of_norm(const QuadField& K, Int n);

// Prime-ideal factorization of an integral ideal.
std::vector<std::pair<QuadIdeal, Int>> factor_ideal(const QuadIdeal& I);

// Fundamental unit eps0 > 1 of a real field, by continued fractions.
const QuadInt& fundamental_unit(const QuadField& K);

struct Congruence {
    QuadIdeal modulus;
    QuadInt target;  // require alpha == target mod modulus
};

// A generator of I satisfying the optional congruence and sign constraints,
// after adjusting by units; nullopt if no unit multiple works (or I is not
// principal at all).  signs = (s_tau1, s_tau2) with each +1 or -1; ignored
// for imaginary fields.
std::optional<QuadInt> principal_generator(
    const QuadIdeal& I,
    const std::optional<Congruence>& congruence = std::nullopt,
    const std::optional<std::pair<int, int>>& signs = std::nullopt);

}  // namespace koehler

#include "koehler/theta.hpp"

#include <cstdlib>

#include <nlohmann/json.hpp>

namespace koehler {

const CycNum& ThetaExpansion::a(Int n) const {
    if (n < 1 || n > bound) throw InputError("ThetaExpansion: coefficient index out of range");
    return coeffs[(size_t)(n - 1)];
}

nlohmann::json ThetaExpansion::to_json() const {
    const QuadIdeal& m = character.group->modulus().finite;
    nlohmann::json cj = nlohmann::json::array();
    for (const auto& c : coeffs) cj.push_back(c.to_json());
    return nlohmann::json{{"schema", 1},
                          {"disc", disc},
                          {"modulus", {m.a(), m.b(), m.c()}},
                          {"char", character.exponents},
                          {"level", level},
                          {"bound", bound},
                          {"coeffs", cj}};
}

Int level(const HeckeChar& xi) {
    const Modulus& m = xi.group->modulus();
    return std::abs(m.disc()) * m.finite.norm();
}

ThetaExpansion theta_oracle(const HeckeChar& xi, Int B) {
    if (B < 1 || B > 100000) throw BoundError("theta_oracle: bound out of range");
    QuadField K = xi.group->modulus().field();
    ThetaExpansion T;
    T.disc = K.disc();
    T.character = xi;
    T.bound = B;
    T.level = level(xi);
    T.coeffs.reserve(B);
    for (Int n = 1; n <= B; ++n) {
        CycNum s = CycNum::zero();
        for (const auto& I : ideals_of_norm(K, n)) s += evaluate(xi, I);
        T.coeffs.push_back(s);
    }
    return T;
}

CycNum prime_power_coeff(const HeckeChar& xi, Int p, Int r) {
    if (r < 1) throw InputError("prime_power_coeff: exponent must be >= 1");
    QuadField K = xi.group->modulus().field();
    auto st = split_prime(K, p);
    switch (st.kind) {
        case SplitKind::Inert: {
            if (r % 2 == 1) return CycNum::zero();
            return evaluate(xi, QuadIdeal::principal(QuadInt(K, p, 0))).pow(r / 2);
        }
        case SplitKind::Ramified:
            return evaluate(xi, st.primes[0]).pow(r);
        case SplitKind::Split: {
            CycNum v1 = evaluate(xi, st.primes[0]);
            CycNum v2 = evaluate(xi, st.primes[1]);
            CycNum s = CycNum::zero();
            for (Int i = 0; i <= r; ++i) s += v1.pow(i) * v2.pow(r - i);
            return s;
        }
    }
    throw InternalError("prime_power_coeff: unreachable");
}

ThetaExpansion theta_fast(const HeckeChar& xi, Int B) {
    if (B < 1 || B > 1000000) throw BoundError("theta_fast: bound out of range");
    QuadField K = xi.group->modulus().field();
    ThetaExpansion T;
    T.disc = K.disc();
    T.character = xi;
    T.bound = B;
    T.level = level(xi);
    T.coeffs.assign(B, CycNum::one());
    std::map<std::pair<Int, Int>, CycNum> memo;
    for (Int n = 2; n <= B; ++n) {
        Int m = n;
        CycNum v = CycNum::one();
        for (Int p = 2; p * p <= m; ++p)
            if (m % p == 0) {
                Int r = 0;
                while (m % p == 0) m /= p, ++r;
                auto it = memo.find({p, r});
                if (it == memo.end())
                    it = memo.emplace(std::pair<Int, Int>{p, r}, prime_power_coeff(xi, p, r)).first;
                v *= it->second;
            }
        if (m > 1) {
            auto it = memo.find({m, 1});
            if (it == memo.end())
                it = memo.emplace(std::pair<Int, Int>{m, 1}, prime_power_coeff(xi, m, 1)).first;
            v *= it->second;
        }
        T.coeffs[(size_t)(n - 1)] = v;
    }
    return T;
}

bool is_cuspidal(const HeckeChar& xi) { return conj_char(xi) != xi; }

bool parity_ok(const HeckeChar& xi) {
    if (!xi.group->modulus().is_real()) return true;
    auto p = infinity_type(xi);
    return p[0] + p[1] == 1;
}

Int sturm_bound(Int N) {
    if (N < 1) throw InputError("sturm_bound: level must be positive");
    // mu = N^2 prod_{p|N} (1 - 1/p^2), the index of Gamma1(N)
    Int mu = N * N;
    Int m = N;
    for (Int p = 2; p * p <= m; ++p)
        if (m % p == 0) {
            mu = mu / (p * p) * (p * p - 1);
            while (m % p == 0) m /= p;
        }
    if (m > 1) mu = mu / (m * m) * (m * m - 1);
    return (mu + 11) / 12;
}

}  // namespace koehler

#pragma once

#include <nlohmann/json_fwd.hpp>

#include "koehler/rayclass.hpp"

namespace koehler {

// q-expansion of the weight-one theta series attached to a ray class
// character: a_n = sum over ideals of norm n of xi(ideal).
struct ThetaExpansion {
    Int disc = 0;
    HeckeChar character;
    Int bound = 0;
    Int level = 0;                // |D| * N(m)
    std::vector<CycNum> coeffs;   // coeffs[n-1] = a_n

    const CycNum& a(Int n) const;
    nlohmann::json to_json() const;
};

// Direct summation over ideals_of_norm; reference engine.
ThetaExpansion theta_oracle(const HeckeChar& xi, Int B);

// a_{p^r} by the split/inert/ramified case formulas.
CycNum prime_power_coeff(const HeckeChar& xi, Int p, Int r);

// Multiplicative assembly from prime powers; agrees with theta_oracle.
ThetaExpansion theta_fast(const HeckeChar& xi, Int B);

// True iff xi differs from its conjugate (the series is then cuspidal).
bool is_cuspidal(const HeckeChar& xi);

Int level(const HeckeChar& xi);

// Imaginary fields: always admissible.  Real fields: exactly one p_tau = 1.
bool parity_ok(const HeckeChar& xi);

// Sturm-type comparison bound for weight one and level N:
// ceil(mu/12) with mu = N^2 prod_{p|N} (1 - 1/p^2).
Int sturm_bound(Int N);

}  // namespace koehler

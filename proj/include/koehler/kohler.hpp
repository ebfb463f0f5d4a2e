#pragma once

#include <array>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "koehler/grouprep.hpp"
#include "koehler/theta.hpp"

namespace koehler {

struct PrimeWitness {
    Int p = 0;
    CycNum xi_p;       // value at one prime above p
    CycNum xi_conj_p;  // value at the conjugate prime
    bool pass = false; // xi_p == +- xi_conj_p
};

struct ConditionBReport {
    bool cuspidal = false;
    Int epsilon_order = 1;
    bool holds = false;  // cuspidal and epsilon of order exactly 2
    std::vector<PrimeWitness> prime_check;
};

// The two-part character condition: cuspidality plus the +-1 relation between
// conjugate prime values (equivalently: epsilon quadratic).  The witness list
// is a cross-check at split primes, not the decision procedure.
ConditionBReport condition_B(const HeckeChar& xi, Int prime_bound = 1000);

// Three primitive characters on three distinct quadratic fields sharing one
// theta series.
struct Triple {
    std::array<HeckeChar, 3> members;  // sorted by (|D|, modulus, exponents)
    Int level = 0;
    Int bound = 0;             // comparison bound used for the certificate
    std::string coeff_hash;    // hash of the shared q-expansion up to bound

    const QuadField field(int i) const { return members[(size_t)i].group->modulus().field(); }
    nlohmann::json to_json() const;
};

// Exhaustive search for partner fields/characters producing the same theta
// series; empty unless xi is cuspidal with quadratic epsilon and admissible
// parity.  xi must be primitive.
std::vector<HeckeChar> find_partners(const HeckeChar& xi, Int bound_override = 0);

// find_partners plus assembly; requires exactly two partners.
Triple make_triple(const HeckeChar& xi, Int bound_override = 0);

// Scan levels <= max_level for the first triple; result cached under
// KOEHLER_CACHE (atomic write) and verified on reload.
Triple find_first_triple(Int max_level, Int bound_override = 0);

// Rebuild a triple from its certificate; the coefficient hash and the
// pairwise agreement up to the stored bound are re-verified.
Triple triple_from_json(const nlohmann::json& j);

// Classify the image of the attached 2-dimensional representation from the
// value groups of the three characters (no field is ever constructed).
ImageClass image_class_of_triple(const Triple& T);

struct CounterexampleReport {
    HeckeChar xi;          // non-primitive character, modulus f * p
    int member = 0;        // index of the member whose character was restricted
    int partner = 1;       // index of the member with p inert
    Int p = 0;
    QuadIdeal kept_prime;  // the prime above p placed into the modulus
    CycNum a_p;            // = xi(conjugate prime), nonzero
    bool partner_ap_zero = false;
    std::vector<PrimeWitness> prime_check;  // +-1 relation on the new modulus
};

// The restriction construction showing that dropping primitivity breaks the
// equivalence: a_p survives on K while every character over the partner's
// primitive character gives a_p = 0.
CounterexampleReport imprimitive_counterexample(const Triple& T, Int prime_bound = 1000);

struct ExtensionResult {
    QuadIdeal modulus;  // m'' = f'' * a''
    HeckeChar xi;       // character of modulus m'' over the target's primitive one
    int case_unchanged = 0;   // dropped prime with unchanged local values
    int case_kill_all = 0;    // all local values killed -> p O_K'' enters a''
    int case_half_split = 0;  // one of two split values killed -> one prime enters a''
    bool verified = false;    // full coefficient agreement up to bound
    Int bound = 0;
};

// Transfer a (possibly non-primitive) character of one member to a modulus on
// the target member with identical theta coefficients, by the per-prime case
// rules.
ExtensionResult extend_modulus(const Triple& T, const HeckeChar& xi_nonprim,
                               int target, Int bound = 300);

struct RealityReport {
    bool ok = false;
    int real_count = 0;
    int real_index = -1;
    std::array<std::array<int, 2>, 3> infinity_types{};
    bool det_conjugation_minus_one = false;
};

// Exactly one member field is real, its character is odd at exactly one real
// place, and complex conjugation has determinant -1.
RealityReport reality_and_oddness(const Triple& T);

// Character of the (finer) group G agreeing with xi on ideals coprime to
// G's modulus; the modulus of xi must divide that of G.
HeckeChar lift_character(const std::shared_ptr<const RayClassGroup>& G,
                         const HeckeChar& xi);

bool is_fundamental_disc(Int D);

}  // namespace koehler

#pragma once

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "koehler/cyclotomic.hpp"
#include "koehler/quadfield.hpp"

namespace koehler {

// Modulus of a ray class group.  The infinite part is implicit: for real
// fields both real places are always included (narrow convention); for
// imaginary fields there is none.
struct Modulus {
    QuadIdeal finite;

    Int disc() const { return finite.disc(); }
    QuadField field() const { return finite.field(); }
    bool is_real() const { return finite.disc() > 0; }
    bool sigma_stable() const { return finite.conj() == finite; }
    bool operator==(const Modulus& o) const { return finite == o.finite; }
    bool operator!=(const Modulus& o) const { return !(*this == o); }
};

// Narrow ray class group J(m)/P(m), presented in Smith normal form:
// invariants d1 | d2 | ... with one ideal generator per invariant.
//
// Internally the group is modeled exactly (not by relation search alone):
// an element is a pair (wide ideal class, coset in Q), where
// Q = ((O_K/m)^x x {signs}) / (image of units), glued by a 2-cocycle of
// principal generators.  The SNF presentation is computed on top of that
// model, which makes the group order correct by construction
// (h_m = h * |Q| is the standard exact-sequence order).
class RayClassGroup {
public:
    static std::shared_ptr<const RayClassGroup> make(const Modulus& m);

    const Modulus& modulus() const { return m_; }
    const std::vector<Int>& invariants() const { return invariants_; }
    const std::vector<QuadIdeal>& generators() const { return gens_; }
    Int order() const { return order_; }
    bool trivial() const { return order_ == 1; }

    // Exponent vector (e_1, ...) with I ~ prod generators()[i]^{e_i}.
    // Requires I coprime to the finite part.
    std::vector<Int> class_of(const QuadIdeal& I) const;

    // Class of the principal ray element with residue r (a unit residue
    // modulo the finite part) and totally positive signs.
    std::vector<Int> residue_class(std::pair<Int, Int> r) const;

    // Real fields only: class of an element that is 1 modulo the finite
    // part and negative exactly at the embedding tau_{which} (1 or 2).
    std::vector<Int> sign_class(int which) const;

    // All unit residues modulo the finite part, in canonical order.
    const std::vector<std::pair<Int, Int>>& unit_residues() const { return unit_res_; }

private:
    RayClassGroup() = default;
    void build(const Modulus& m);

    struct QRaw {
        std::pair<Int, Int> res;
        int bits;  // bit 0: negative at tau1, bit 1: negative at tau2
    };
    QRaw qraw_mul(const QRaw& a, const QRaw& b) const;
    QRaw qraw_of(const QuadInt& alpha) const;
    int qclass_of_raw(const QRaw& e) const;
    int qclass_of(const QuadInt& alpha) const;
    int wide_class_of(const QuadIdeal& I) const;
    std::pair<int, int> pair_of(const QuadIdeal& I) const;  // (wide class, q class)
    int pair_id(int c, int q) const { return c * (int)qcanon_.size() + q; }
    std::pair<int, int> pair_mul(std::pair<int, int> x, std::pair<int, int> y) const;

    Modulus m_{};
    Int order_ = 1;
    bool real_ = false;

    std::vector<QuadIdeal> reps_;               // wide class reps, coprime to m, reps_[0] = O
    std::vector<std::vector<int>> clsmul_;

    std::vector<std::pair<Int, Int>> unit_res_;
    std::vector<QRaw> qcanon_;                  // canonical representative per Q class
    std::map<std::tuple<Int, Int, int>, int> qindex_;
    std::vector<std::vector<int>> qmul_;
    std::vector<int> qinv_;
    int qident_ = 0;
    std::vector<std::vector<int>> cocyc_;       // q-class correction per (c1, c2)

    std::vector<Int> invariants_;
    std::vector<QuadIdeal> gens_;
    std::vector<std::vector<Int>> dlog_;        // pair id -> exponent vector

    mutable std::map<std::tuple<Int, Int, Int>, std::vector<Int>> memo_;
    mutable std::mutex memo_mu_;
};

// Character of a ray class group; value on generator i is root(d_i, exponents[i]).
struct HeckeChar {
    std::shared_ptr<const RayClassGroup> group;
    std::vector<Int> exponents;

    CycNum value(size_t i) const;
    CycNum on_class(const std::vector<Int>& e) const;
    bool is_trivial() const;
    bool operator==(const HeckeChar& o) const;
    bool operator!=(const HeckeChar& o) const { return !(*this == o); }
};

HeckeChar make_char(std::shared_ptr<const RayClassGroup> G, std::vector<Int> exponents);
// All |G| characters, in lexicographic exponent order (index 0 is trivial).
std::vector<HeckeChar> characters(const std::shared_ptr<const RayClassGroup>& G);

// xi(I), with the convention xi(I) = 0 when I is not coprime to the modulus.
CycNum evaluate(const HeckeChar& xi, const QuadIdeal& I);

// Sign exponents (p_tau1, p_tau2); (0, 0) for imaginary fields.
std::array<int, 2> infinity_type(const HeckeChar& xi);

// Conductor f | m of the finite part, plus the primitive character modulo f
// agreeing with xi on ideals coprime to m.
std::pair<QuadIdeal, HeckeChar> conductor(const HeckeChar& xi);

// xi^sigma with xi^sigma(I) = xi(sigma(I)); requires a sigma-stable modulus.
HeckeChar conj_char(const HeckeChar& xi);

// epsilon = xi^sigma / xi and its order.
std::pair<HeckeChar, Int> epsilon(const HeckeChar& xi);

}  // namespace koehler

#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "koehler/cyclotomic.hpp"

namespace koehler {

// 2x2 matrix over the cyclotomic integers, row major.  Entries are kept in
// reduced-order form so that equal matrices have identical representations
// (needed for map keys).
struct Mat2 {
    std::array<CycNum, 4> a;

    static Mat2 identity();
    static Mat2 diag(CycNum x, CycNum y);
    static Mat2 antidiag(CycNum upper, CycNum lower);  // [[0, upper], [lower, 0]]
    static Mat2 scalar(CycNum x);

    Mat2 operator*(const Mat2& o) const;
    bool operator==(const Mat2& o) const { return a == o.a; }
    bool operator!=(const Mat2& o) const { return !(*this == o); }
    bool operator<(const Mat2& o) const;

    CycNum trace() const { return a[0] + a[3]; }
    CycNum det() const { return a[0] * a[3] - a[1] * a[2]; }
    bool is_identity() const;
    bool is_scalar() const;
    bool is_diagonal() const;
    void normalize();
};

// Finite group of invertible 2x2 cyclotomic matrices, closed under
// multiplication; element 0 is the identity.
class MatrixGroup {
public:
    static MatrixGroup closure(const std::vector<Mat2>& gens);
    static MatrixGroup from_elements(std::vector<Mat2> elems);  // must be closed

    int size() const { return (int)el_.size(); }
    const Mat2& elem(int i) const { return el_[(size_t)i]; }
    int index_of(const Mat2& m) const;  // -1 when absent
    int mul(int i, int j) const;
    int inverse(int i) const;
    Int order_of(int i) const;

    // Subgroup generated by the given element indices (sorted index list).
    std::vector<int> span(const std::vector<int>& gens) const;
    // All subgroups of index 2, via kernels of homomorphisms to C2.
    std::vector<std::vector<int>> index2_subgroups() const;
    // Elements of 2-power order (the Sylow 2-subgroup when it is normal).
    std::vector<int> two_power_part() const;

private:
    std::vector<Mat2> el_;
    std::map<Mat2, int> idx_;
    mutable std::vector<int> tab_;  // lazily memoized multiplication table
};

// Character chi of an index-2 subgroup H of an ambient matrix group, plus a
// chosen coset representative sigma outside H.
struct SubgroupChar {
    std::vector<int> H;        // sorted element indices
    std::vector<CycNum> chi;   // values aligned with H
    int sigma = -1;

    const CycNum& value(int elem_index) const;
    bool contains(int elem_index) const;
};

// chi with values given by the top-left entries (H must be diagonal), and
// sigma the first element outside H.
SubgroupChar diagonal_char(const MatrixGroup& G, const std::vector<int>& H);

// All 1-dimensional characters of the subgroup H (through its
// abelianization); values aligned with H sorted ascending.
std::vector<std::vector<CycNum>> characters_of_subgroup(const MatrixGroup& G,
                                                        const std::vector<int>& H);

// The induced representation of Eq-style shape: one matrix per group element.
std::vector<Mat2> induce(const MatrixGroup& G, const SubgroupChar& hc);

bool is_irreducible(const MatrixGroup& G, const SubgroupChar& hc);

struct EpsilonInfo {
    std::vector<CycNum> values;  // on H, aligned with hc.H
    std::vector<int> kernel;     // sorted indices into G
    Int order = 1;
    bool quadratic = false;      // order exactly 2
};
EpsilonInfo epsilon_char(const MatrixGroup& G, const SubgroupChar& hc);

// The six equivalent statements, each evaluated independently on the image
// of the induced representation; reducible input yields all-false.
std::array<bool, 6> check_equivalences(const MatrixGroup& G, const SubgroupChar& hc);

// All index-2 subgroups H' of G (with one character each) whose induction
// is isomorphic to the inclusion representation of G, decided by trace
// equality; conjugate characters are counted once.
std::vector<std::pair<std::vector<int>, std::vector<CycNum>>> inducing_pairs(
    const MatrixGroup& G);

struct TrDetReport {
    bool ok = false;
    int checked = 0;
    std::string detail;
};
// Verify the trace/determinant pattern: tr = 2*chi_K on the scalar subgroup
// and 0 elsewhere; det = chi_K(g^2) on it and -chi_K(g^2) elsewhere.
TrDetReport trdet_profile(const MatrixGroup& G);

struct TableData {
    MatrixGroup G;
    std::array<std::vector<int>, 3> H;  // H1, H2, H3 (sorted index lists)
    SubgroupChar chi1;                  // diagonal character on H1
};
// The explicit generator matrices for the classified images, by table line.
TableData table_group(int line, int r, Int m);

struct ImageClass {
    Int r = 1;
    Int m = 1;
    int line = 0;  // smallest consistent table line
    std::string name;       // base 2-group name: D4, Q8, D4oC{2^r}, M{r+2}(2)
    std::string full_name;  // with the xC_m factor when m > 1
    bool presentation_ok = false;
};
ImageClass classify_image(const MatrixGroup& G);

// Whether G contains a non-scalar involution of determinant -1.
bool has_involution_det_minus_one(const MatrixGroup& G);

}  // namespace koehler

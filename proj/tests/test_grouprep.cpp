#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "koehler/grouprep.hpp"

using namespace koehler;

namespace {

Mat2 minus_identity() { return Mat2::scalar(CycNum::integer(-1)); }

MatrixGroup s3_model() {
    // faithful 2-dimensional model of the symmetric group on 3 letters
    Mat2 rot = Mat2::diag(CycNum::root(3, 1), CycNum::root(3, 2));
    Mat2 flip = Mat2::antidiag(CycNum::one(), CycNum::one());
    return MatrixGroup::closure({rot, flip});
}

SubgroupChar with_sigma(const MatrixGroup& G, std::vector<int> H, std::vector<CycNum> chi) {
    SubgroupChar sc;
    sc.H = std::move(H);
    sc.chi = std::move(chi);
    for (int g = 0; g < G.size(); ++g)
        if (!sc.contains(g)) {
            sc.sigma = g;
            break;
        }
    return sc;
}

std::vector<int> diagonal_part(const MatrixGroup& G) {
    std::vector<int> H;
    for (int g = 0; g < G.size(); ++g)
        if (G.elem(g).is_diagonal()) H.push_back(g);
    return H;
}

struct Instance {
    int line, r;
    Int m;
};

std::vector<Instance> all_instances() {
    std::vector<Instance> out;
    for (Int m : {1, 3}) {
        out.push_back({1, 1, m});
        out.push_back({3, 1, m});
        for (int r = 2; r <= 3; ++r) {
            out.push_back({2, r, m});
            out.push_back({4, r, m});
        }
        for (int r = 1; r <= 3; ++r) {
            out.push_back({5, r, m});
            out.push_back({6, r, m});
        }
    }
    return out;
}

}  // namespace

TEST_CASE("closure sizes") {
    CHECK(MatrixGroup::closure({minus_identity()}).size() == 2);
    Mat2 i1 = Mat2::diag(CycNum::one(), CycNum::integer(-1));
    Mat2 rot4 = Mat2::antidiag(CycNum::one(), CycNum::integer(-1));
    CHECK(MatrixGroup::closure({i1, rot4}).size() == 8);  // dihedral
    Mat2 c1 = Mat2::diag(CycNum::root(4, 1), -CycNum::root(4, 1));
    Mat2 c2 = Mat2::antidiag(CycNum::integer(-1), CycNum::one());
    CHECK(MatrixGroup::closure({c1, c2}).size() == 8);  // quaternion
    CHECK(s3_model().size() == 6);
}

TEST_CASE("induction shapes") {
    // trivial character on the trivial subgroup of a 2-element group
    MatrixGroup C2 = MatrixGroup::closure({Mat2::antidiag(CycNum::one(), CycNum::one())});
    SubgroupChar sc = with_sigma(C2, {0}, {CycNum::one()});
    auto rho = induce(C2, sc);
    CHECK(rho[0].is_identity());
    CHECK(rho[(size_t)sc.sigma] == Mat2::antidiag(CycNum::one(), CycNum::one()));

    // faithful character on the cyclic 4-subgroup of the quaternion group
    Mat2 c1 = Mat2::diag(CycNum::root(4, 1), -CycNum::root(4, 1));
    Mat2 c2 = Mat2::antidiag(CycNum::integer(-1), CycNum::one());
    MatrixGroup Q = MatrixGroup::closure({c1, c2});
    SubgroupChar qc = diagonal_char(Q, diagonal_part(Q));
    auto qr = induce(Q, qc);
    std::set<Mat2> distinct(qr.begin(), qr.end());
    CHECK(distinct.size() == 8);
    for (int g = 0; g < Q.size(); ++g)
        if (!qc.contains(g)) CHECK(qr[(size_t)g].trace().is_zero());
}

TEST_CASE("irreducibility and epsilon") {
    MatrixGroup S3 = s3_model();
    SubgroupChar a3 = diagonal_char(S3, diagonal_part(S3));
    CHECK(is_irreducible(S3, a3));
    EpsilonInfo e3 = epsilon_char(S3, a3);
    CHECK(e3.order == 3);
    CHECK(!e3.quadratic);
    CHECK(e3.kernel.size() == 1);

    // trivial character: chi = chi^sigma
    MatrixGroup V = MatrixGroup::closure(
        {Mat2::antidiag(CycNum::one(), CycNum::one()), minus_identity()});
    REQUIRE(V.size() == 4);
    SubgroupChar vc = diagonal_char(V, diagonal_part(V));
    CHECK(!is_irreducible(V, vc));
    EpsilonInfo ev = epsilon_char(V, vc);
    CHECK(ev.order == 1);
    CHECK(ev.kernel.size() == vc.H.size());

    // quaternion instance: epsilon quadratic with scalar kernel
    TableData q = table_group(3, 1, 1);
    EpsilonInfo eq = epsilon_char(q.G, q.chi1);
    CHECK(eq.quadratic);
    CHECK(eq.kernel.size() == 2);
    // larger scalar subgroup: central product instance, kernel of order 4
    TableData t2 = table_group(2, 2, 1);
    EpsilonInfo e2 = epsilon_char(t2.G, t2.chi1);
    CHECK(e2.quadratic);
    CHECK(e2.kernel.size() == 4);
    for (int kk : e2.kernel) CHECK(t2.G.elem(kk).is_scalar());
}

TEST_CASE("equivalence battery on controls") {
    TableData d4 = table_group(1, 1, 1);
    auto rd = check_equivalences(d4.G, d4.chi1);
    for (bool b : rd) CHECK(b);

    MatrixGroup S3 = s3_model();
    auto rs = check_equivalences(S3, diagonal_char(S3, diagonal_part(S3)));
    for (bool b : rs) CHECK(!b);

    MatrixGroup V = MatrixGroup::closure(
        {Mat2::antidiag(CycNum::one(), CycNum::one()), minus_identity()});
    auto rv = check_equivalences(V, diagonal_char(V, diagonal_part(V)));
    for (bool b : rv) CHECK(!b);
}

TEST_CASE("inducing pairs") {
    TableData q = table_group(3, 1, 1);
    auto pq = inducing_pairs(q.G);
    CHECK(pq.size() == 3);
    for (const auto& [H, chi] : pq) {
        (void)chi;
        bool cyclic = false;
        for (int h : H)
            if (q.G.order_of(h) == (Int)H.size()) cyclic = true;
        CHECK(cyclic);  // the three cyclic 4-subgroups
    }
    CHECK(inducing_pairs(s3_model()).size() == 1);
    TableData t2 = table_group(2, 2, 1);
    CHECK(inducing_pairs(t2.G).size() == 3);
}

TEST_CASE("table instances: orders, equivalences, classification") {
    for (const Instance& in : all_instances()) {
        CAPTURE(in.line);
        CAPTURE(in.r);
        CAPTURE(in.m);
        TableData td = table_group(in.line, in.r, in.m);
        CHECK((Int)td.G.size() == (Int(4) << in.r) * in.m);
        for (auto& H : td.H) CHECK(2 * (Int)H.size() == (Int)td.G.size());

        auto eq = check_equivalences(td.G, td.chi1);
        for (bool b : eq) CHECK(b);

        auto pairs = inducing_pairs(td.G);
        CHECK(pairs.size() == 3);
        for (auto& [H, chi] : pairs) {
            SubgroupChar sc = with_sigma(td.G, H, chi);
            auto rho = induce(td.G, sc);
            for (int g = 0; g < td.G.size(); ++g)
                CHECK(rho[(size_t)g].trace() == td.G.elem(g).trace());
        }

        ImageClass ic = classify_image(td.G);
        CHECK(ic.r == in.r);
        CHECK(ic.m == in.m);
        CHECK(ic.presentation_ok);
        int expect_line = in.line;
        std::string expect_name;
        switch (in.line) {
            case 1: expect_name = "D4"; break;
            case 2: expect_name = "D4oC" + std::to_string(Int(1) << in.r); break;
            case 3: expect_name = "Q8"; break;
            default:
                if (in.r == 1) {  // M3(2) is dihedral of order 8
                    expect_line = 1;
                    expect_name = "D4";
                } else {
                    expect_line = 4;
                    expect_name = "M" + std::to_string(in.r + 2) + "(2)";
                }
        }
        CHECK(ic.line == expect_line);
        CHECK(ic.name == expect_name);
        if (in.m > 1) CHECK(ic.full_name == expect_name + "xC" + std::to_string(in.m));

        // projective image of type (2,2)
        int scalars = 0;
        for (int g = 0; g < td.G.size(); ++g)
            if (td.G.elem(g).is_scalar()) ++scalars;
        CHECK(td.G.size() == 4 * scalars);
        for (int g = 0; g < td.G.size(); ++g)
            CHECK(td.G.elem(td.G.mul(g, g)).is_scalar());

        TrDetReport tr = trdet_profile(td.G);
        CHECK(tr.ok);
        CHECK(tr.checked == td.G.size());

        // involution of determinant -1 exists except in the quaternion case
        CHECK(has_involution_det_minus_one(td.G) == (in.line != 3));
    }
}

TEST_CASE("quaternion determinant is trivial") {
    TableData q = table_group(3, 1, 1);
    for (int g = 0; g < q.G.size(); ++g) CHECK(q.G.elem(g).det().is_one());
    TableData d = table_group(1, 1, 1);
    bool found = false;
    for (int g = 0; g < d.G.size(); ++g)
        if (d.G.elem(g).det() == CycNum::integer(-1)) found = true;
    CHECK(found);
}

TEST_CASE("results do not depend on the choice of sigma") {
    for (const Instance& in : std::vector<Instance>{{1, 1, 1}, {2, 2, 1}, {3, 1, 1}, {6, 2, 3}}) {
        TableData td = table_group(in.line, in.r, in.m);
        SubgroupChar base = td.chi1;
        auto ref = check_equivalences(td.G, base);
        auto ref_eps = epsilon_char(td.G, base);
        for (int s = 0; s < td.G.size(); ++s) {
            if (base.contains(s)) continue;
            SubgroupChar sc = base;
            sc.sigma = s;
            CHECK(check_equivalences(td.G, sc) == ref);
            EpsilonInfo e = epsilon_char(td.G, sc);
            CHECK(e.order == ref_eps.order);
            CHECK(e.kernel == ref_eps.kernel);
            auto rho = induce(td.G, sc);
            for (int g = 0; g < td.G.size(); ++g)
                CHECK(rho[(size_t)g].trace() == td.G.elem(g).trace());
        }
    }
}

TEST_CASE("six booleans agree on many subgroup characters") {
    int tested = 0;
    std::vector<Instance> pool{{1, 1, 1}, {3, 1, 1}, {2, 2, 1}, {4, 2, 1},
                               {5, 2, 1}, {6, 2, 1}, {5, 1, 3}, {4, 3, 1}};
    for (const Instance& in : pool) {
        TableData td = table_group(in.line, in.r, in.m);
        for (const auto& Hp : td.G.index2_subgroups()) {
            for (auto& chi : characters_of_subgroup(td.G, Hp)) {
                SubgroupChar sc = with_sigma(td.G, Hp, chi);
                auto r = check_equivalences(td.G, sc);
                bool first = r[0];
                for (bool b : r) CHECK(b == first);
                ++tested;
            }
            if (tested >= 220) break;
        }
        if (tested >= 220) break;
    }
    MatrixGroup S3 = s3_model();
    for (const auto& Hp : S3.index2_subgroups())
        for (auto& chi : characters_of_subgroup(S3, Hp)) {
            SubgroupChar sc = with_sigma(S3, Hp, chi);
            auto r = check_equivalences(S3, sc);
            bool first = r[0];
            for (bool b : r) CHECK(b == first);
            ++tested;
        }
    CHECK(tested >= 200);
}

TEST_CASE("invalid table arguments") {
    CHECK_THROWS_AS(table_group(0, 1, 1), InputError);
    CHECK_THROWS_AS(table_group(1, 2, 1), InputError);
    CHECK_THROWS_AS(table_group(2, 1, 1), InputError);
    CHECK_THROWS_AS(table_group(4, 1, 1), InputError);
    CHECK_THROWS_AS(table_group(5, 1, 2), InputError);
}

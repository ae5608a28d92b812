#include <catch2/catch_amalgamated.hpp>

#include <numeric>

#include "oracle.hpp"
#include "qapbnb/model.hpp"

using namespace qapbnb;

namespace {

QapInstance tiny2() {
  QapInstance inst;
  inst.n = 2;
  inst.A = Matrix{{0, 1}, {1, 0}};
  inst.B = Matrix{{0, 3}, {3, 0}};
  inst.C = Matrix::Zero(2, 2);
  return inst;
}

QapInstance tiny3() {
  QapInstance inst;
  inst.n = 3;
  inst.A = Matrix{{0, 1, 0}, {1, 0, 2}, {0, 2, 0}};
  inst.B = Matrix{{0, 5, 1}, {5, 0, 3}, {1, 3, 0}};
  inst.C = Matrix::Zero(3, 3);
  return inst;
}

}  // namespace

TEST_CASE("objective on known values") {
  CHECK(objective(tiny2(), {0, 1}) == 6.0);
  CHECK(objective(tiny3(), {1, 0, 2}) == 14.0);

  QapInstance lin;
  lin.n = 3;
  lin.A = Matrix::Zero(3, 3);
  lin.B = Matrix::Zero(3, 3);
  lin.C = Matrix{{4, 0, 0}, {0, 7, 0}, {0, 0, 9}};
  CHECK(objective(lin, {0, 1, 2}) == 20.0);

  CHECK_THROWS_AS(objective(tiny2(), {0, 0}), ModelError);
  CHECK_THROWS_AS(objective(tiny2(), {0}), ModelError);
}

TEST_CASE("objective A/B swap symmetry for C = 0") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    QapInstance inst = oracle::random_instance(5, seed);
    QapInstance swapped = inst;
    std::swap(swapped.A, swapped.B);
    std::vector<int> perm{3, 0, 4, 1, 2};
    std::vector<int> inv(5);
    for (int i = 0; i < 5; ++i) inv[perm[i]] = i;
    CHECK(objective(inst, perm) == objective(swapped, inv));
  }
}

TEST_CASE("integrality detection") {
  CHECK(tiny2().integral());
  QapInstance frac = tiny2();
  frac.C(0, 1) = 0.5;
  CHECK_FALSE(frac.integral());
}

TEST_CASE("assignment bookkeeping") {
  Assignment asg{4, {2, 0}, {1, 3}};
  REQUIRE(asg.valid());
  CHECK(asg.depth() == 2);
  CHECK(asg.free_facilities() == std::vector<int>{1, 3});
  CHECK(asg.free_locations() == std::vector<int>{0, 2});

  Assignment ext = asg.extended(1, 0);
  CHECK(ext.depth() == 3);
  CHECK(ext.facilities.back() == 1);

  CHECK_FALSE(Assignment{4, {0, 0}, {1, 2}}.valid());
  CHECK_FALSE(Assignment{4, {0}, {}}.valid());
  CHECK_FALSE(Assignment{4, {4}, {0}}.valid());
}

TEST_CASE("cell index round trips") {
  Assignment asg{5, {1}, {4}};
  CellIndex cells = CellIndex::of(asg);
  REQUIRE(cells.mf() == 4);
  REQUIRE(cells.ml() == 4);
  CHECK(cells.dim() == 17);
  for (int a = 1; a < cells.dim(); ++a) {
    int f = cells.facility_of(a), l = cells.location_of(a);
    CHECK(cells.index_of(f, l) == a);
  }
  CHECK_THROWS_AS(cells.index_of(1, 0), ModelError);  // facility 1 is fixed
}

TEST_CASE("q0 reproduces the objective for every permutation") {
  for (int n : {2, 3, 4}) {
    QapInstance inst = oracle::random_instance(n, 11 + n, true);
    SubQap root = build_q0(inst);
    REQUIRE(root.Q.rows() == 1 + n * n);
    CHECK(root.Q.isApprox(root.Q.transpose()));
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      CHECK(oracle::q0_value(root.Q, perm) == Catch::Approx(objective(inst, perm)).margin(1e-9));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
}

TEST_CASE("q0 block structure") {
  QapInstance inst = tiny2();
  SubQap root = build_q0(inst);
  // C = 0: border is zero
  CHECK(root.Q.row(0).norm() == 0.0);
  // Kronecker entry: cell (i=0,j=0) vs cell (i=1,j=1) is b01 * a01 = 3
  CellIndex cells = root.cells;
  CHECK(root.Q(cells.index_of(0, 0), cells.index_of(1, 1)) == 3.0);

  QapInstance withc = inst;
  withc.C = Matrix{{2, 4}, {6, 8}};
  SubQap rootc = build_q0(withc);
  CHECK(rootc.Q(0, rootc.cells.index_of(1, 0)) == 3.0);  // C(1,0)/2
}

TEST_CASE("reduce matches the from-scratch congruence") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    QapInstance inst = oracle::random_instance(5, 100 + seed, seed % 2 == 0);
    SubQap root = build_q0(inst);
    Assignment asg{5, {3, 1}, {0, 4}};
    SubQap sub = reduce(root, asg);
    Matrix P = oracle::reduction_matrix(asg);
    Matrix expected = P.transpose() * root.Q * P;
    REQUIRE(sub.Q.rows() == expected.rows());
    CHECK((sub.Q - expected).norm() <= 1e-9 * (1.0 + expected.norm()));
  }
}

TEST_CASE("reduce at full depth yields the objective") {
  QapInstance inst = oracle::random_instance(4, 7, true);
  SubQap root = build_q0(inst);
  Assignment full{4, {0, 1, 2, 3}, {2, 0, 3, 1}};
  SubQap sub = reduce(root, full);
  REQUIRE(sub.Q.rows() == 1);
  CHECK(sub.Q(0, 0) == Catch::Approx(objective(inst, full.to_permutation())).margin(1e-9));
}

TEST_CASE("reduced matrix prices every completion") {
  QapInstance inst = oracle::random_instance(5, 42, true);
  SubQap root = build_q0(inst);
  Assignment asg{5, {2}, {3}};
  SubQap sub = reduce(root, asg);
  std::vector<int> ff = asg.free_facilities(), fl = asg.free_locations();
  std::vector<int> order(fl.size());
  std::iota(order.begin(), order.end(), 0);
  do {
    Vector x = Vector::Zero(sub.cells.dim());
    x(0) = 1.0;
    std::vector<int> perm = asg.to_permutation();
    for (std::size_t p = 0; p < ff.size(); ++p) {
      x(sub.cells.index_of(ff[p], fl[order[p]])) = 1.0;
      perm[ff[p]] = fl[order[p]];
    }
    CHECK(x.dot(sub.Q * x) == Catch::Approx(objective(inst, perm)).margin(1e-8));
  } while (std::next_permutation(order.begin(), order.end()));
}

TEST_CASE("reduce path independence") {
  QapInstance inst = oracle::random_instance(6, 5);
  SubQap root = build_q0(inst);
  SubQap a = child_subqap(child_subqap(root, 4, 2), 1, 5);
  SubQap b = reduce(root, Assignment{6, {4, 1}, {2, 5}});
  CHECK((a.Q - b.Q).norm() <= 1e-9 * (1.0 + b.Q.norm()));
  CHECK(a.Q.rows() == 1 + 16);
}

TEST_CASE("children enumeration") {
  Assignment root{3, {}, {}};
  auto kids = children(root, BranchSide::Facility, 1);
  REQUIRE(kids.size() == 3);
  CHECK(kids[0].facilities == std::vector<int>{1});
  CHECK(kids[0].locations == std::vector<int>{0});
  CHECK(kids[2].locations == std::vector<int>{2});

  Assignment part{3, {0}, {2}};
  auto kids2 = children(part, BranchSide::Location, 0);
  REQUIRE(kids2.size() == 2);
  CHECK(kids2[0].facilities == std::vector<int>{0, 1});
  CHECK(kids2[1].facilities == std::vector<int>{0, 2});

  Assignment deep{3, {0, 1}, {1, 0}};
  CHECK(children(deep, BranchSide::Facility, 2).size() == 1);
  CHECK_THROWS_AS(children(part, BranchSide::Facility, 0), ModelError);
}

#ifndef QAPBNB_MODEL_HPP_
#define QAPBNB_MODEL_HPP_

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "qapbnb/common.hpp"

namespace qapbnb {

/// A quadratic assignment instance: minimize
///   sum_{i,k} A(i,k) * B(pi(i),pi(k)) + sum_i C(i,pi(i))
/// over permutations pi of {0,...,n-1}.  A and B are symmetric.
struct QapInstance {
  int n = 0;
  Matrix A;
  Matrix B;
  Matrix C;
  std::string name;

  /// True when every entry of A, B, C is an integer; enables the
  /// ceil-based pruning test.
  bool integral() const {
    auto all_int = [](const Matrix& m) {
      for (int j = 0; j < m.cols(); ++j)
        for (int i = 0; i < m.rows(); ++i)
          if (!nearly_integral(m(i, j))) return false;
      return true;
    };
    return all_int(A) && all_int(B) && all_int(C);
  }
};

inline bool is_permutation(const std::vector<int>& perm, int n) {
  if (static_cast<int>(perm.size()) != n) return false;
  std::vector<char> seen(n, 0);
  for (int v : perm) {
    if (v < 0 || v >= n || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

/// Objective value of a full permutation (perm[i] = location of facility i).
inline double objective(const QapInstance& inst, const std::vector<int>& perm) {
  if (!is_permutation(perm, inst.n)) throw ModelError("objective: invalid permutation");
  double val = 0.0;
  for (int i = 0; i < inst.n; ++i) {
    for (int k = 0; k < inst.n; ++k) val += inst.A(i, k) * inst.B(perm[i], perm[k]);
    val += inst.C(i, perm[i]);
  }
  return val;
}

/// A partial assignment: facility facilities[p] is pinned to location
/// locations[p].  Order matters only through this positional pairing.
struct Assignment {
  int n = 0;
  std::vector<int> facilities;  // 0-based, pairwise distinct
  std::vector<int> locations;   // 0-based, pairwise distinct

  int depth() const { return static_cast<int>(facilities.size()); }

  bool valid() const {
    if (n < 1) return false;
    if (facilities.size() != locations.size()) return false;
    auto distinct_in_range = [this](const std::vector<int>& v) {
      std::vector<char> seen(n, 0);
      for (int x : v) {
        if (x < 0 || x >= n || seen[x]) return false;
        seen[x] = 1;
      }
      return true;
    };
    return distinct_in_range(facilities) && distinct_in_range(locations);
  }

  std::vector<int> free_facilities() const { return complement(facilities); }
  std::vector<int> free_locations() const { return complement(locations); }

  Assignment extended(int f, int l) const {
    Assignment child = *this;
    child.facilities.push_back(f);
    child.locations.push_back(l);
    return child;
  }

  /// Full permutation from a complete assignment (depth == n).
  std::vector<int> to_permutation() const {
    std::vector<int> perm(n, -1);
    for (int p = 0; p < depth(); ++p) perm[facilities[p]] = locations[p];
    return perm;
  }

 private:
  std::vector<int> complement(const std::vector<int>& fixed) const {
    std::vector<char> used(n, 0);
    for (int x : fixed) used[x] = 1;
    std::vector<int> out;
    out.reserve(n - fixed.size());
    for (int x = 0; x < n; ++x)
      if (!used[x]) out.push_back(x);
    return out;
  }
};

/// Index map between free cells (i,j) in F^c x L^c and rows/columns
/// 1..mf*ml of the reduced matrix.  Cells are ordered lexicographically by
/// (location, facility), i.e. column-major over the free grid.
struct CellIndex {
  std::vector<int> free_f;  // ascending
  std::vector<int> free_l;  // ascending

  int mf() const { return static_cast<int>(free_f.size()); }
  int ml() const { return static_cast<int>(free_l.size()); }
  int dim() const { return 1 + mf() * ml(); }

  int index_of_pos(int fpos, int lpos) const { return 1 + lpos * mf() + fpos; }

  int fpos_of(int index) const { return (index - 1) % mf(); }
  int lpos_of(int index) const { return (index - 1) / mf(); }

  int facility_of(int index) const { return free_f[fpos_of(index)]; }
  int location_of(int index) const { return free_l[lpos_of(index)]; }

  int index_of(int facility, int location) const {
    auto fit = std::lower_bound(free_f.begin(), free_f.end(), facility);
    auto lit = std::lower_bound(free_l.begin(), free_l.end(), location);
    if (fit == free_f.end() || *fit != facility || lit == free_l.end() || *lit != location)
      throw ModelError("CellIndex: cell not free");
    return index_of_pos(static_cast<int>(fit - free_f.begin()),
                        static_cast<int>(lit - free_l.begin()));
  }

  static CellIndex of(const Assignment& asg) {
    return CellIndex{asg.free_facilities(), asg.free_locations()};
  }
};

/// A sub-QAP: the assignment (F,L) plus the reduced symmetric matrix Q
/// indexed by {0} and the free cells.
struct SubQap {
  Assignment asg;
  CellIndex cells;
  Matrix Q;

  int n() const { return asg.n; }
  int free_size() const { return asg.n - asg.depth(); }
};

/// The root matrix Q0: (0,0) zero, border vec(C)/2, lower-right block
/// the Kronecker product of B with A under column-major cell ordering.
inline SubQap build_q0(const QapInstance& inst) {
  const int n = inst.n;
  Assignment root{n, {}, {}};
  CellIndex cells = CellIndex::of(root);
  const int d = cells.dim();
  Matrix Q = Matrix::Zero(d, d);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int a = cells.index_of_pos(i, j);
      Q(0, a) = Q(a, 0) = inst.C(i, j) / 2.0;
    }
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int a = cells.index_of_pos(i, j);
      for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k)
          Q(a, cells.index_of_pos(k, l)) = inst.B(j, l) * inst.A(i, k);
    }
  return SubQap{std::move(root), std::move(cells), std::move(Q)};
}

/// One-step congruence fold: pin facility f to location l.  The fixed
/// cell's row/column is folded into index 0 and dropped.
inline SubQap child_subqap(const SubQap& parent, int f, int l) {
  const int c = parent.cells.index_of(f, l);
  Assignment child_asg = parent.asg.extended(f, l);
  CellIndex child_cells = CellIndex::of(child_asg);
  const int dc = child_cells.dim();
  Matrix Qc(dc, dc);

  // surviving parent indices, aligned with child cell ordering
  std::vector<int> keep(dc);
  keep[0] = 0;
  for (int b = 1; b < dc; ++b)
    keep[b] = parent.cells.index_of(child_cells.facility_of(b), child_cells.location_of(b));

  const Matrix& Q = parent.Q;
  Qc(0, 0) = Q(0, 0) + 2.0 * Q(0, c) + Q(c, c);
  for (int b = 1; b < dc; ++b) {
    Qc(0, b) = Qc(b, 0) = Q(0, keep[b]) + Q(c, keep[b]);
    for (int b2 = 1; b2 <= b; ++b2) Qc(b, b2) = Qc(b2, b) = Q(keep[b], keep[b2]);
  }
  return SubQap{std::move(child_asg), std::move(child_cells), std::move(Qc)};
}

/// Reduce the root to Q(F,L) by folding the fixed pairs one at a time.
inline SubQap reduce(const SubQap& root, const Assignment& asg) {
  if (root.asg.depth() != 0 || root.n() != asg.n || !asg.valid())
    throw ModelError("reduce: invalid assignment");
  SubQap cur = root;
  for (int p = 0; p < asg.depth(); ++p)
    cur = child_subqap(cur, asg.facilities[p], asg.locations[p]);
  return cur;
}

enum class BranchSide { Facility, Location };

/// Child assignments from fixing facility fixed (side Facility) against
/// every free location, or vice versa.  Children in ascending free index.
inline std::vector<Assignment> children(const Assignment& asg, BranchSide side, int fixed) {
  std::vector<Assignment> out;
  if (side == BranchSide::Facility) {
    auto ff = asg.free_facilities();
    if (std::find(ff.begin(), ff.end(), fixed) == ff.end())
      throw ModelError("children: facility not free");
    for (int l : asg.free_locations()) out.push_back(asg.extended(fixed, l));
  } else {
    auto fl = asg.free_locations();
    if (std::find(fl.begin(), fl.end(), fixed) == fl.end())
      throw ModelError("children: location not free");
    for (int f : asg.free_facilities()) out.push_back(asg.extended(f, fixed));
  }
  return out;
}

}  // namespace qapbnb

#endif  // QAPBNB_MODEL_HPP_

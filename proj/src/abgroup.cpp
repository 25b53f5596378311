#include "slicecalc/abgroup.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace slicecalc {

namespace {

using BigMat = std::vector<std::vector<mpz_class>>;

BigMat to_big(const Mat& m) {
  BigMat r(m.size());
  for (size_t i = 0; i < m.size(); ++i) {
    r[i].reserve(m[i].size());
    for (const Int v : m[i]) r[i].emplace_back(v);
  }
  return r;
}

Int narrow(const mpz_class& v) {
  if (!v.fits_slong_p()) throw std::overflow_error("abgroup: value exceeds 64-bit range");
  return static_cast<Int>(v.get_si());
}

Mat from_big(const BigMat& m) {
  Mat r(m.size());
  for (size_t i = 0; i < m.size(); ++i) {
    r[i].reserve(m[i].size());
    for (const mpz_class& v : m[i]) r[i].push_back(narrow(v));
  }
  return r;
}

BigMat big_identity(int n) {
  BigMat r(static_cast<size_t>(n), std::vector<mpz_class>(static_cast<size_t>(n), 0));
  for (int i = 0; i < n; ++i) r[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1;
  return r;
}

void check_rect(const Mat& m) {
  for (const auto& row : m)
    if (row.size() != m[0].size()) throw std::invalid_argument("matrix rows have unequal length");
}

}  // namespace

// ---------------------------------------------------------------- matrices

int mat_rows(const Mat& m) { return static_cast<int>(m.size()); }
int mat_cols(const Mat& m) { return m.empty() ? 0 : static_cast<int>(m[0].size()); }

Mat mat_zero(int rows, int cols) {
  return Mat(static_cast<size_t>(rows), std::vector<Int>(static_cast<size_t>(cols), 0));
}

Mat mat_identity(int n) {
  Mat r = mat_zero(n, n);
  for (int i = 0; i < n; ++i) r[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1;
  return r;
}

Mat mat_mul(const Mat& a, const Mat& b) {
  if (mat_rows(a) == 0) return {};  // 0 x anything: empty result
  if (mat_cols(a) != mat_rows(b) && !(mat_rows(b) == 0 && mat_cols(a) == 0))
    throw std::invalid_argument("mat_mul: shape mismatch");
  const int n = mat_rows(a), k = mat_cols(a), m = mat_cols(b);
  Mat r = mat_zero(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      mpz_class acc = 0;  // exact accumulation; narrow only the final entry
      for (int t = 0; t < k; ++t)
        acc += mpz_class(a[static_cast<size_t>(i)][static_cast<size_t>(t)]) *
               b[static_cast<size_t>(t)][static_cast<size_t>(j)];
      r[static_cast<size_t>(i)][static_cast<size_t>(j)] = narrow(acc);
    }
  return r;
}

Mat mat_add(const Mat& a, const Mat& b) {
  if (mat_rows(a) != mat_rows(b) || mat_cols(a) != mat_cols(b))
    throw std::invalid_argument("mat_add: shape mismatch");
  Mat r = a;
  for (int i = 0; i < mat_rows(a); ++i)
    for (int j = 0; j < mat_cols(a); ++j)
      r[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          narrow(mpz_class(a[static_cast<size_t>(i)][static_cast<size_t>(j)]) +
                 b[static_cast<size_t>(i)][static_cast<size_t>(j)]);
  return r;
}

Mat mat_neg(const Mat& a) {
  Mat r = a;
  for (auto& row : r)
    for (auto& v : row) v = -v;
  return r;
}

Mat mat_transpose(const Mat& a) {
  Mat r = mat_zero(mat_cols(a), mat_rows(a));
  for (int i = 0; i < mat_rows(a); ++i)
    for (int j = 0; j < mat_cols(a); ++j)
      r[static_cast<size_t>(j)][static_cast<size_t>(i)] = a[static_cast<size_t>(i)][static_cast<size_t>(j)];
  return r;
}

Mat mat_vstack(const Mat& a, const Mat& b) {
  if (mat_rows(a) == 0) return b;
  if (mat_rows(b) == 0) return a;
  if (mat_cols(a) != mat_cols(b)) throw std::invalid_argument("mat_vstack: shape mismatch");
  Mat r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

Mat mat_hstack(const Mat& a, const Mat& b) {
  if (mat_cols(a) == 0 && mat_rows(a) == 0) return b;
  if (mat_cols(b) == 0 && mat_rows(b) == 0) return a;
  if (mat_rows(a) != mat_rows(b)) throw std::invalid_argument("mat_hstack: shape mismatch");
  Mat r = a;
  for (int i = 0; i < mat_rows(a); ++i)
    r[static_cast<size_t>(i)].insert(r[static_cast<size_t>(i)].end(), b[static_cast<size_t>(i)].begin(),
                                     b[static_cast<size_t>(i)].end());
  return r;
}

std::string mat_to_string(const Mat& m) {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < m.size(); ++i) {
    os << (i ? "; " : "");
    for (size_t j = 0; j < m[i].size(); ++j) os << (j ? " " : "") << m[i][j];
  }
  os << "]";
  return os.str();
}

// ---------------------------------------------------------------- AbGroup

Int AbGroup::order() const {
  if (free > 0) return 0;
  mpz_class n = 1;
  for (const Int d : tor) n *= d;
  return narrow(n);
}

std::string AbGroup::to_string() const {
  if (is_trivial()) return "0";
  std::ostringstream os;
  bool first = true;
  auto sep = [&] {
    if (!first) os << " + ";
    first = false;
  };
  if (free == 1) {
    sep();
    os << "Z";
  } else if (free > 1) {
    sep();
    os << "Z^" << free;
  }
  // group equal invariant factors for readability: Z/2^3
  size_t i = 0;
  while (i < tor.size()) {
    size_t j = i;
    while (j < tor.size() && tor[j] == tor[i]) ++j;
    sep();
    os << "Z/" << tor[i];
    if (j - i > 1) os << "^" << (j - i);
    i = j;
  }
  return os.str();
}

AbGroup AbGroup::cyclic(Int n) {
  if (n == 0) return AbGroup{1, {}};
  if (n < 0) n = -n;
  if (n == 1) return AbGroup{};
  return AbGroup{0, {n}};
}

AbGroup AbGroup::elem_abelian(Int p, Int rank) {
  AbGroup g;
  g.tor.assign(static_cast<size_t>(rank), p);
  return g;
}

AbGroup AbGroup::of_cyclics(const std::vector<Int>& orders) {
  // Build the diagonal relation matrix and canonicalize via SNF.
  Int free = 0;
  std::vector<Int> fin;
  for (Int d : orders) {
    if (d < 0) d = -d;
    if (d == 0)
      ++free;
    else if (d > 1)
      fin.push_back(d);
  }
  // invariant factors of + Z/fin[i] by prime-power merge
  std::map<Int, std::vector<int>> ppow;  // prime -> exponents (desc)
  for (Int d : fin) {
    Int x = d;
    for (Int p = 2; p * p <= x; ++p) {
      if (x % p == 0) {
        int e = 0;
        while (x % p == 0) {
          x /= p;
          ++e;
        }
        ppow[p].push_back(e);
      }
    }
    if (x > 1) ppow[x].push_back(1);
  }
  size_t maxlen = 0;
  for (auto& [p, es] : ppow) {
    std::sort(es.begin(), es.end(), std::greater<int>());
    maxlen = std::max(maxlen, es.size());
  }
  std::vector<Int> inv(maxlen, 1);  // inv[0] = largest factor
  for (auto& [p, es] : ppow)
    for (size_t i = 0; i < es.size(); ++i) {
      mpz_class q;
      mpz_ui_pow_ui(q.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(es[i]));
      inv[i] = narrow(mpz_class(inv[i]) * q);
    }
  std::reverse(inv.begin(), inv.end());
  AbGroup g;
  g.free = free;
  g.tor = std::move(inv);
  return g;
}

bool is_canonical(const AbGroup& g) {
  if (g.free < 0) return false;
  for (size_t i = 0; i < g.tor.size(); ++i) {
    if (g.tor[i] < 2) return false;
    if (i + 1 < g.tor.size() && g.tor[i + 1] % g.tor[i] != 0) return false;
  }
  return true;
}

std::vector<Int> reduce_vec(const AbGroup& g, std::vector<Int> v) {
  if (static_cast<int>(v.size()) != g.ngens())
    throw std::invalid_argument("reduce_vec: length mismatch");
  for (int i = 0; i < g.ngens(); ++i) {
    const Int d = g.gen_order(i);
    if (d > 0) {
      Int r = v[static_cast<size_t>(i)] % d;
      if (r < 0) r += d;
      v[static_cast<size_t>(i)] = r;
    }
  }
  return v;
}

Mat reduce_mat(const AbGroup& g, Mat m) {
  if (mat_rows(m) != g.ngens()) throw std::invalid_argument("reduce_mat: row count mismatch");
  for (int i = 0; i < g.ngens(); ++i) {
    const Int d = g.gen_order(i);
    if (d > 0)
      for (auto& v : m[static_cast<size_t>(i)]) {
        Int r = v % d;
        if (r < 0) r += d;
        v = r;
      }
  }
  return m;
}

// ---------------------------------------------------------------- AbHom

bool is_well_defined(const AbGroup& src, const AbGroup& dst, const Mat& m) {
  if (mat_rows(m) != dst.ngens()) return false;
  if (dst.ngens() > 0 && mat_cols(m) != src.ngens()) return false;
  if (dst.ngens() == 0) return true;
  for (int j = 0; j < src.ngens(); ++j) {
    const Int dsrc = src.gen_order(j);
    if (dsrc == 0) continue;
    for (int i = 0; i < dst.ngens(); ++i) {
      const Int ddst = dst.gen_order(i);
      const mpz_class v = mpz_class(dsrc) * m[static_cast<size_t>(i)][static_cast<size_t>(j)];
      if (ddst == 0) {
        if (v != 0) return false;
      } else if (v % ddst != 0) {
        return false;
      }
    }
  }
  return true;
}

AbHom make_hom(const AbGroup& src, const AbGroup& dst, Mat m) {
  if (!is_canonical(src) || !is_canonical(dst))
    throw std::invalid_argument("make_hom: groups must be canonical");
  if (m.empty()) m = mat_zero(dst.ngens(), src.ngens());
  check_rect(m);
  if (mat_rows(m) != dst.ngens() || (dst.ngens() > 0 && mat_cols(m) != src.ngens()))
    throw std::invalid_argument("make_hom: matrix shape mismatch (" + std::to_string(mat_rows(m)) +
                                "x" + std::to_string(mat_cols(m)) + " for dst " + dst.to_string() +
                                ", src " + src.to_string() + ")");
  if (mat_rows(m) == 0) m = mat_zero(0, src.ngens());
  if (!is_well_defined(src, dst, m))
    throw std::invalid_argument("make_hom: matrix " + mat_to_string(m) + " not well defined " +
                                src.to_string() + " -> " + dst.to_string());
  return AbHom{src, dst, reduce_mat(dst, std::move(m))};
}

std::string AbHom::to_string() const {
  return src.to_string() + " -> " + dst.to_string() + " " + mat_to_string(m);
}

AbHom hom_zero(const AbGroup& src, const AbGroup& dst) {
  return AbHom{src, dst, mat_zero(dst.ngens(), src.ngens())};
}

AbHom hom_identity(const AbGroup& g) { return AbHom{g, g, mat_identity(g.ngens())}; }

AbHom hom_compose(const AbHom& g, const AbHom& f) {
  if (!(f.dst == g.src)) throw std::invalid_argument("hom_compose: middle groups differ");
  // build from group data so 0-dimensional middles keep the right shape
  const int rows = g.dst.ngens(), mid = f.dst.ngens(), cols = f.src.ngens();
  Mat m = mat_zero(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      mpz_class acc = 0;
      for (int t = 0; t < mid; ++t)
        acc += mpz_class(g.m[static_cast<size_t>(i)][static_cast<size_t>(t)]) *
               f.m[static_cast<size_t>(t)][static_cast<size_t>(j)];
      m[static_cast<size_t>(i)][static_cast<size_t>(j)] = narrow(acc);
    }
  return AbHom{f.src, g.dst, reduce_mat(g.dst, std::move(m))};
}

AbHom hom_add(const AbHom& f, const AbHom& g) {
  if (!(f.src == g.src && f.dst == g.dst)) throw std::invalid_argument("hom_add: shape mismatch");
  return AbHom{f.src, f.dst, reduce_mat(f.dst, mat_add(f.m, g.m))};
}

bool hom_is_zero(const AbHom& f) {
  for (const auto& row : f.m)
    for (const Int v : row)
      if (v != 0) return false;
  return true;
}

std::vector<Int> hom_apply(const AbHom& f, const std::vector<Int>& x) {
  if (static_cast<int>(x.size()) != f.src.ngens())
    throw std::invalid_argument("hom_apply: vector length mismatch");
  std::vector<Int> y(static_cast<size_t>(f.dst.ngens()), 0);
  for (int i = 0; i < f.dst.ngens(); ++i) {
    mpz_class acc = 0;
    for (int j = 0; j < f.src.ngens(); ++j)
      acc += mpz_class(f.m[static_cast<size_t>(i)][static_cast<size_t>(j)]) * x[static_cast<size_t>(j)];
    y[static_cast<size_t>(i)] = narrow(acc);
  }
  return reduce_vec(f.dst, y);
}

// ---------------------------------------------------------------- SNF

namespace {

struct BigSmith {
  BigMat a;  // reduced in place to diagonal
  BigMat left, left_inv, right, right_inv;
};

// row ops keep left*orig*right == a; inverses are maintained alongside.
void row_swap(BigSmith& s, int i, int j) {
  std::swap(s.a[static_cast<size_t>(i)], s.a[static_cast<size_t>(j)]);
  std::swap(s.left[static_cast<size_t>(i)], s.left[static_cast<size_t>(j)]);
  for (auto& row : s.left_inv) std::swap(row[static_cast<size_t>(i)], row[static_cast<size_t>(j)]);
}

void col_swap(BigSmith& s, int i, int j) {
  for (auto& row : s.a) std::swap(row[static_cast<size_t>(i)], row[static_cast<size_t>(j)]);
  for (auto& row : s.right) std::swap(row[static_cast<size_t>(i)], row[static_cast<size_t>(j)]);
  std::swap(s.right_inv[static_cast<size_t>(i)], s.right_inv[static_cast<size_t>(j)]);
}

// row[i] += c * row[j]
void row_addmul(BigSmith& s, int i, int j, const mpz_class& c) {
  const size_t si = static_cast<size_t>(i), sj = static_cast<size_t>(j);
  for (size_t k = 0; k < s.a[si].size(); ++k) s.a[si][k] += c * s.a[sj][k];
  for (size_t k = 0; k < s.left[si].size(); ++k) s.left[si][k] += c * s.left[sj][k];
  for (auto& row : s.left_inv) row[sj] -= c * row[si];
}

// col[i] += c * col[j]
void col_addmul(BigSmith& s, int i, int j, const mpz_class& c) {
  const size_t si = static_cast<size_t>(i), sj = static_cast<size_t>(j);
  for (auto& row : s.a) row[si] += c * row[sj];
  for (auto& row : s.right) row[si] += c * row[sj];
  for (size_t k = 0; k < s.right_inv[sj].size(); ++k) s.right_inv[sj][k] -= c * s.right_inv[si][k];
}

void row_negate(BigSmith& s, int i) {
  const size_t si = static_cast<size_t>(i);
  for (auto& v : s.a[si]) v = -v;
  for (auto& v : s.left[si]) v = -v;
  for (auto& row : s.left_inv) row[si] = -row[si];
}

// Quotient leaving the remainder of minimal absolute value (limits the
// coefficient growth of the accumulated transforms).
mpz_class balanced_quot(const mpz_class& v, const mpz_class& p) {
  mpz_class q, r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), v.get_mpz_t(), p.get_mpz_t());
  if (2 * abs(r) > abs(p)) q += 1;
  return q;
}

}  // namespace

SmithResult smith_normal_form(const Mat& a_in) {
  check_rect(a_in);
  const int rows = mat_rows(a_in), cols = mat_cols(a_in);
  BigSmith s{to_big(a_in), big_identity(rows), big_identity(rows), big_identity(cols),
             big_identity(cols)};
  if (rows > 0 && cols == 0) {
    // normalize empty shapes
    s.a.assign(static_cast<size_t>(rows), {});
  }

  const int lim = std::min(rows, cols);
  for (int t = 0; t < lim; ++t) {
    // find pivot: nonzero entry of smallest absolute value in the remaining block
    int pi = -1, pj = -1;
    mpz_class best = 0;
    for (int i = t; i < rows; ++i)
      for (int j = t; j < cols; ++j) {
        const mpz_class& v = s.a[static_cast<size_t>(i)][static_cast<size_t>(j)];
        if (v != 0 && (pi < 0 || abs(v) < best)) {
          best = abs(v);
          pi = i;
          pj = j;
        }
      }
    if (pi < 0) break;  // all remaining entries zero
    if (pi != t) row_swap(s, t, pi);
    if (pj != t) col_swap(s, t, pj);

    bool clean = false;
    while (!clean) {
      clean = true;
      // clear column t below/above the pivot
      for (int i = t + 1; i < rows; ++i) {
        mpz_class& v = s.a[static_cast<size_t>(i)][static_cast<size_t>(t)];
        if (v == 0) continue;
        const mpz_class q = balanced_quot(v, s.a[static_cast<size_t>(t)][static_cast<size_t>(t)]);
        row_addmul(s, i, t, -q);
        if (s.a[static_cast<size_t>(i)][static_cast<size_t>(t)] != 0) {
          row_swap(s, t, i);  // remainder is strictly smaller: swap up, restart
          clean = false;
        }
      }
      if (!clean) continue;
      // clear row t
      for (int j = t + 1; j < cols; ++j) {
        mpz_class& v = s.a[static_cast<size_t>(t)][static_cast<size_t>(j)];
        if (v == 0) continue;
        const mpz_class q = balanced_quot(v, s.a[static_cast<size_t>(t)][static_cast<size_t>(t)]);
        col_addmul(s, j, t, -q);
        if (s.a[static_cast<size_t>(t)][static_cast<size_t>(j)] != 0) {
          col_swap(s, t, j);
          clean = false;
          break;  // column ops may have dirtied column t; restart
        }
      }
    }
    if (s.a[static_cast<size_t>(t)][static_cast<size_t>(t)] < 0) row_negate(s, t);
    // enforce divisibility d_t | every entry of the remaining block
    bool redo = false;
    for (int i = t + 1; i < rows && !redo; ++i)
      for (int j = t + 1; j < cols && !redo; ++j)
        if (s.a[static_cast<size_t>(i)][static_cast<size_t>(j)] %
                s.a[static_cast<size_t>(t)][static_cast<size_t>(t)] !=
            0) {
          row_addmul(s, t, i, 1);  // fold offending row into pivot row
          redo = true;
        }
    if (redo) --t;  // redo this pivot
  }

  SmithResult r;
  r.left = from_big(s.left);
  r.left_inv = from_big(s.left_inv);
  r.right = from_big(s.right);
  r.right_inv = from_big(s.right_inv);
  for (int t = 0; t < lim; ++t) {
    const mpz_class& v = s.a[static_cast<size_t>(t)][static_cast<size_t>(t)];
    if (v == 0) break;
    r.diag.push_back(narrow(v));
  }
  r.rank = static_cast<int>(r.diag.size());
  return r;
}

std::optional<std::vector<Int>> solve_integer(const Mat& a, const std::vector<Int>& b) {
  const int rows = mat_rows(a), cols = mat_cols(a);
  if (static_cast<int>(b.size()) != rows) throw std::invalid_argument("solve_integer: length mismatch");
  SmithResult s = smith_normal_form(a);
  // a x = b  <=>  D y = L b with x = R y
  std::vector<mpz_class> lb(static_cast<size_t>(rows), 0);
  for (int i = 0; i < rows; ++i) {
    mpz_class acc = 0;
    for (int j = 0; j < rows; ++j)
      acc += mpz_class(s.left[static_cast<size_t>(i)][static_cast<size_t>(j)]) * b[static_cast<size_t>(j)];
    lb[static_cast<size_t>(i)] = acc;
  }
  std::vector<mpz_class> y(static_cast<size_t>(cols), 0);
  for (int i = 0; i < rows; ++i) {
    if (i < s.rank) {
      if (lb[static_cast<size_t>(i)] % s.diag[static_cast<size_t>(i)] != 0) return std::nullopt;
      y[static_cast<size_t>(i)] = lb[static_cast<size_t>(i)] / s.diag[static_cast<size_t>(i)];
    } else if (lb[static_cast<size_t>(i)] != 0) {
      return std::nullopt;
    }
  }
  std::vector<Int> x(static_cast<size_t>(cols), 0);
  for (int i = 0; i < cols; ++i) {
    mpz_class acc = 0;
    for (int j = 0; j < cols; ++j)
      acc += mpz_class(s.right[static_cast<size_t>(i)][static_cast<size_t>(j)]) * y[static_cast<size_t>(j)];
    x[static_cast<size_t>(i)] = narrow(acc);
  }
  return x;
}

Mat integer_nullspace(const Mat& a) {
  const int cols = mat_cols(a);
  SmithResult s = smith_normal_form(a);
  Mat basis = mat_zero(cols, cols - s.rank);
  for (int j = s.rank; j < cols; ++j)
    for (int i = 0; i < cols; ++i)
      basis[static_cast<size_t>(i)][static_cast<size_t>(j - s.rank)] =
          s.right[static_cast<size_t>(i)][static_cast<size_t>(j)];
  return basis;
}

// ---------------------------------------------------------------- presentations

Pres Pres::of(const AbGroup& g) {
  Pres p;
  p.ngens = g.ngens();
  p.rels = mat_zero(p.ngens, static_cast<int>(g.tor.size()));
  for (size_t k = 0; k < g.tor.size(); ++k)
    p.rels[g.free + k][k] = g.tor[k];
  return p;
}

CanonicalPres canonicalize(const Pres& p) {
  const int n = p.ngens;
  Mat rels = p.rels.empty() ? mat_zero(n, 0) : p.rels;
  if (mat_rows(rels) != n) throw std::invalid_argument("canonicalize: relation rows != ngens");
  SmithResult s = smith_normal_form(rels);
  // y = L x: relations become diag(d_1..d_r), zero beyond.
  // keep generators with d == 0 (free) and d >= 2 (torsion); drop d == 1.
  std::vector<int> free_idx, tor_idx;
  for (int i = 0; i < n; ++i) {
    const Int d = i < s.rank ? s.diag[static_cast<size_t>(i)] : 0;
    if (d == 0)
      free_idx.push_back(i);
    else if (d >= 2)
      tor_idx.push_back(i);
  }
  CanonicalPres out;
  out.grp.free = static_cast<Int>(free_idx.size());
  for (int i : tor_idx) out.grp.tor.push_back(s.diag[static_cast<size_t>(i)]);
  std::vector<int> kept = free_idx;
  kept.insert(kept.end(), tor_idx.begin(), tor_idx.end());
  out.to_canon = mat_zero(static_cast<int>(kept.size()), n);
  out.from_canon = mat_zero(n, static_cast<int>(kept.size()));
  for (size_t r = 0; r < kept.size(); ++r)
    for (int j = 0; j < n; ++j) {
      out.to_canon[r][static_cast<size_t>(j)] = s.left[static_cast<size_t>(kept[r])][static_cast<size_t>(j)];
      out.from_canon[static_cast<size_t>(j)][r] =
          s.left_inv[static_cast<size_t>(j)][static_cast<size_t>(kept[r])];
    }
  out.to_canon = reduce_mat(out.grp, std::move(out.to_canon));
  return out;
}

std::optional<std::vector<Int>> solve_mod(const Mat& f, const AbGroup& dst,
                                          const std::vector<Int>& b) {
  if (static_cast<int>(b.size()) != dst.ngens())
    throw std::invalid_argument("solve_mod: vector length mismatch");
  if (dst.ngens() == 0) return std::vector<Int>(static_cast<size_t>(mat_cols(f)), 0);
  const Mat aug = mat_hstack(f, Pres::of(dst).rels);
  auto sol = solve_integer(aug, b);
  if (!sol) return std::nullopt;
  sol->resize(static_cast<size_t>(mat_cols(f)));
  return sol;
}

// ---------------------------------------------------------------- derived objects

SubquotientResult subgroup_of(const AbGroup& ambient, const Mat& gens_in) {
  const int n = ambient.ngens();
  SubquotientResult out;
  if (n == 0) {  // nothing lives in the trivial group
    out.grp = AbGroup{};
    out.gens = mat_zero(0, 0);
    return out;
  }
  Mat gens = gens_in.empty() ? mat_zero(n, 0) : gens_in;
  if (mat_rows(gens) != n) throw std::invalid_argument("subgroup_of: coordinate length mismatch");
  const Mat rels = Pres::of(ambient).rels;
  const int k = mat_cols(gens);
  // Relations among the generators as ambient elements:
  //   { x in Z^k : gens*x lies in colspan(rels) }
  // = the x-block of the nullspace of [gens | rels].
  const Mat aug = mat_hstack(gens, rels);
  const Mat null = integer_nullspace(aug);
  Mat syzygies = mat_zero(k, mat_cols(null));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < mat_cols(null); ++j)
      syzygies[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          null[static_cast<size_t>(i)][static_cast<size_t>(j)];
  CanonicalPres cp = canonicalize(Pres{k, syzygies});
  out.grp = cp.grp;
  out.gens = reduce_mat(ambient, mat_mul(gens, cp.from_canon));
  return out;
}

KernelResult kernel(const AbHom& f) {
  KernelResult out;
  const int a = f.src.ngens();
  if (f.dst.ngens() == 0) {  // everything maps to zero
    out.grp = f.src;
    out.incl = hom_identity(f.src);
    return out;
  }
  const Mat rb = Pres::of(f.dst).rels;
  // x in ker  <=>  exists y : F x + RB y = 0
  const Mat aug = mat_hstack(f.m, rb);
  Mat null = integer_nullspace(aug);
  // project onto the x-block
  Mat lattice = mat_zero(a, mat_cols(null));
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < mat_cols(null); ++j)
      lattice[static_cast<size_t>(i)][static_cast<size_t>(j)] = null[static_cast<size_t>(i)][static_cast<size_t>(j)];
  SubquotientResult sq = subgroup_of(f.src, lattice);
  out.grp = sq.grp;
  out.incl = make_hom(sq.grp, f.src, sq.gens);
  return out;
}

CokernelResult cokernel(const AbHom& f) {
  const Mat rb = Pres::of(f.dst).rels;
  const Mat rels = mat_hstack(f.m, rb);
  CanonicalPres cp = canonicalize(Pres{f.dst.ngens(), rels.empty() ? mat_zero(f.dst.ngens(), 0) : rels});
  CokernelResult out;
  out.grp = cp.grp;
  out.proj = make_hom(f.dst, cp.grp, cp.to_canon);
  out.section = reduce_mat(f.dst, cp.from_canon);
  return out;
}

ImageResult image(const AbHom& f) {
  SubquotientResult sq = subgroup_of(f.dst, f.m);
  ImageResult out;
  out.grp = sq.grp;
  out.incl = make_hom(sq.grp, f.dst, sq.gens);
  return out;
}

bool in_image(const AbHom& f, const std::vector<Int>& x) {
  if (f.dst.ngens() == 0) return true;
  return solve_mod(f.m, f.dst, reduce_vec(f.dst, x)).has_value();
}

bool is_exact_at(const AbHom& f, const AbHom& g) {
  if (!(f.dst == g.src)) throw std::invalid_argument("is_exact_at: chain mismatch");
  if (!hom_is_zero(hom_compose(g, f))) return false;
  // im f contains ker g?
  KernelResult k = kernel(g);
  for (int j = 0; j < k.grp.ngens(); ++j) {
    std::vector<Int> col(static_cast<size_t>(g.src.ngens()));
    for (int i = 0; i < g.src.ngens(); ++i)
      col[static_cast<size_t>(i)] = k.incl.m[static_cast<size_t>(i)][static_cast<size_t>(j)];
    if (!in_image(f, col)) return false;
  }
  return true;
}

// ---------------------------------------------------------------- direct sums

DirectSum direct_sum(const std::vector<AbGroup>& parts) {
  int total = 0;
  for (const auto& p : parts) total += p.ngens();
  Mat rels = mat_zero(total, 0);
  {
    int row0 = 0;
    std::vector<Mat> blocks;
    int relcols = 0;
    for (const auto& p : parts) relcols += static_cast<int>(p.tor.size());
    rels = mat_zero(total, relcols);
    int col0 = 0;
    for (const auto& p : parts) {
      const Mat r = Pres::of(p).rels;
      for (int i = 0; i < mat_rows(r); ++i)
        for (int j = 0; j < mat_cols(r); ++j)
          rels[static_cast<size_t>(row0 + i)][static_cast<size_t>(col0 + j)] = r[static_cast<size_t>(i)][static_cast<size_t>(j)];
      row0 += p.ngens();
      col0 += mat_cols(r);
    }
  }
  CanonicalPres cp = canonicalize(Pres{total, rels});
  DirectSum out;
  out.grp = cp.grp;
  int row0 = 0;
  for (const auto& p : parts) {
    Mat inj = mat_zero(cp.grp.ngens(), p.ngens());
    Mat proj = mat_zero(p.ngens(), cp.grp.ngens());
    for (int i = 0; i < cp.grp.ngens(); ++i)
      for (int j = 0; j < p.ngens(); ++j)
        inj[static_cast<size_t>(i)][static_cast<size_t>(j)] = cp.to_canon[static_cast<size_t>(i)][static_cast<size_t>(row0 + j)];
    for (int i = 0; i < p.ngens(); ++i)
      for (int j = 0; j < cp.grp.ngens(); ++j)
        proj[static_cast<size_t>(i)][static_cast<size_t>(j)] = cp.from_canon[static_cast<size_t>(row0 + i)][static_cast<size_t>(j)];
    out.inj.push_back(make_hom(p, cp.grp, std::move(inj)));
    out.proj.push_back(AbHom{cp.grp, p, reduce_mat(p, std::move(proj))});
    row0 += p.ngens();
  }
  return out;
}

// ---------------------------------------------------------------- extensions

bool abgroup_less(const AbGroup& a, const AbGroup& b) {
  if (a.free != b.free) return a.free < b.free;
  if (a.tor.size() != b.tor.size()) return a.tor.size() < b.tor.size();
  return a.tor < b.tor;
}

std::vector<AbGroup> abelian_groups_of_order(Int n) {
  if (n < 1) throw std::invalid_argument("abelian_groups_of_order: n must be >= 1");
  if (n == 1) return {AbGroup{}};
  // factor
  std::map<Int, int> fac;
  Int x = n;
  for (Int p = 2; p * p <= x; ++p)
    while (x % p == 0) {
      ++fac[p];
      x /= p;
    }
  if (x > 1) ++fac[x];
  // partitions per prime
  auto partitions = [](int e) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int rem, int maxpart) -> void {
      if (rem == 0) {
        out.push_back(cur);
        return;
      }
      for (int k = std::min(rem, maxpart); k >= 1; --k) {
        cur.push_back(k);
        self(self, rem - k, k);
        cur.pop_back();
      }
    };
    rec(rec, e, e);
    return out;
  };
  std::vector<AbGroup> result{AbGroup{}};
  for (const auto& [p, e] : fac) {
    std::vector<AbGroup> next;
    for (const auto& base : result)
      for (const auto& part : partitions(e)) {
        // part is descending; build cyclic orders p^part[i]
        std::vector<Int> orders(base.tor.begin(), base.tor.end());
        for (int ex : part) {
          mpz_class q;
          mpz_ui_pow_ui(q.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(ex));
          orders.push_back(narrow(q));
        }
        next.push_back(AbGroup::of_cyclics(orders));
      }
    result = std::move(next);
  }
  std::sort(result.begin(), result.end(), abgroup_less);
  result.erase(std::unique(result.begin(), result.end()), result.end());
  return result;
}

namespace {

// Elements of a finite group as coordinate tuples.
std::vector<std::vector<Int>> all_elements(const AbGroup& g) {
  std::vector<std::vector<Int>> out{std::vector<Int>(static_cast<size_t>(g.ngens()), 0)};
  for (int i = 0; i < g.ngens(); ++i) {
    const Int d = g.gen_order(i);
    std::vector<std::vector<Int>> next;
    next.reserve(out.size() * static_cast<size_t>(d));
    for (const auto& e : out)
      for (Int v = 0; v < d; ++v) {
        auto e2 = e;
        e2[static_cast<size_t>(i)] = v;
        next.push_back(std::move(e2));
      }
    out = std::move(next);
  }
  return out;
}

std::vector<Int> add_in(const AbGroup& g, const std::vector<Int>& a, const std::vector<Int>& b) {
  std::vector<Int> c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return reduce_vec(g, std::move(c));
}

// All subgroups of a finite group, as sorted element sets.
std::vector<std::set<std::vector<Int>>> all_subgroups(const AbGroup& g) {
  const auto elems = all_elements(g);
  auto closure = [&](std::set<std::vector<Int>> seed) {
    // close under addition (finite group: iterate to fixpoint)
    bool grew = true;
    while (grew) {
      grew = false;
      std::vector<std::vector<Int>> cur(seed.begin(), seed.end());
      for (const auto& a : cur)
        for (const auto& b : cur) {
          auto c = add_in(g, a, b);
          if (seed.insert(c).second) grew = true;
        }
    }
    return seed;
  };
  std::set<std::set<std::vector<Int>>> found;
  std::vector<std::set<std::vector<Int>>> frontier;
  const std::vector<Int> zero(static_cast<size_t>(g.ngens()), 0);
  auto base = closure({zero});
  found.insert(base);
  frontier.push_back(base);
  while (!frontier.empty()) {
    std::vector<std::set<std::vector<Int>>> next;
    for (const auto& sub : frontier)
      for (const auto& e : elems) {
        if (sub.count(e)) continue;
        auto bigger = sub;
        bigger.insert(e);
        auto cl = closure(std::move(bigger));
        if (found.insert(cl).second) next.push_back(std::move(cl));
      }
    frontier = std::move(next);
  }
  return {found.begin(), found.end()};
}

AbGroup iso_type_of_subgroup(const AbGroup& ambient, const std::set<std::vector<Int>>& elems) {
  Mat gens = mat_zero(ambient.ngens(), static_cast<int>(elems.size()));
  int j = 0;
  for (const auto& e : elems) {
    for (int i = 0; i < ambient.ngens(); ++i) gens[static_cast<size_t>(i)][static_cast<size_t>(j)] = e[static_cast<size_t>(i)];
    ++j;
  }
  return subgroup_of(ambient, gens).grp;
}

AbGroup iso_type_of_quotient(const AbGroup& ambient, const std::set<std::vector<Int>>& elems) {
  Mat extra = mat_zero(ambient.ngens(), static_cast<int>(elems.size()));
  int j = 0;
  for (const auto& e : elems) {
    for (int i = 0; i < ambient.ngens(); ++i) extra[static_cast<size_t>(i)][static_cast<size_t>(j)] = e[static_cast<size_t>(i)];
    ++j;
  }
  const Mat rels = mat_hstack(extra, Pres::of(ambient).rels);
  return canonicalize(Pres{ambient.ngens(), rels}).grp;
}

}  // namespace

ExtensionProblem enumerate_extensions(const AbGroup& sub, const AbGroup& quot) {
  ExtensionProblem out;
  out.sub = sub;
  out.quot = quot;
  if (sub.is_trivial()) {
    out.candidates = {quot};
    out.resolved = quot;
    return out;
  }
  if (quot.is_trivial()) {
    out.candidates = {sub};
    out.resolved = sub;
    return out;
  }
  if (!sub.is_finite() || !quot.is_finite())
    throw std::invalid_argument("enumerate_extensions: both ends must be finite (or one trivial)");
  const Int n = narrow(mpz_class(sub.order()) * quot.order());
  constexpr Int kMaxOrder = 4096;
  if (n > kMaxOrder)
    throw std::invalid_argument("enumerate_extensions: total order " + std::to_string(n) +
                                " exceeds supported bound " + std::to_string(kMaxOrder));
  for (const AbGroup& cand : abelian_groups_of_order(n)) {
    bool ok = false;
    for (const auto& subset : all_subgroups(cand)) {
      if (static_cast<Int>(subset.size()) != sub.order()) continue;
      if (!(iso_type_of_subgroup(cand, subset) == sub)) continue;
      if (iso_type_of_quotient(cand, subset) == quot) {
        ok = true;
        break;
      }
    }
    if (ok) out.candidates.push_back(cand);
  }
  std::sort(out.candidates.begin(), out.candidates.end(), abgroup_less);
  if (out.candidates.size() == 1) out.resolved = out.candidates.front();
  return out;
}

// ---------------------------------------------------------------- JSON

void to_json(nlohmann::json& j, const AbGroup& g) {
  j = nlohmann::json{{"free", g.free}, {"torsion", g.tor}};
}

void from_json(const nlohmann::json& j, AbGroup& g) {
  g.free = j.at("free").get<Int>();
  g.tor = j.at("torsion").get<std::vector<Int>>();
  if (!is_canonical(g)) throw std::invalid_argument("AbGroup JSON not in canonical form");
}

void to_json(nlohmann::json& j, const AbHom& h) {
  j = nlohmann::json{{"src", h.src}, {"dst", h.dst}, {"matrix", h.m}};
}

void from_json(const nlohmann::json& j, AbHom& h) {
  AbGroup src = j.at("src").get<AbGroup>();
  AbGroup dst = j.at("dst").get<AbGroup>();
  Mat m = j.at("matrix").get<Mat>();
  h = make_hom(src, dst, std::move(m));
}

}  // namespace slicecalc

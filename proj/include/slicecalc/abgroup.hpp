#pragma once
// Finitely generated abelian groups in invariant-factor form, homomorphisms
// between them, and exact integer linear algebra (Smith normal form, kernels,
// cokernels, images, exactness tests, extension enumeration).
//
// Conventions:
//  * An AbGroup is Z^free  +  Z/d1 + ... + Z/dk with 2 <= d1 | d2 | ... | dk.
//    Generators are ordered free-first, then torsion in divisibility order.
//  * A homomorphism is an integer matrix, columns indexed by source
//    generators, rows by target generators.  Entries in torsion rows are kept
//    reduced into [0, d).
//  * All arithmetic is exact; internal computations use arbitrary precision,
//    values are narrowed back to 64-bit at the interface (overflow -> throw).

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace slicecalc {

using Int = long;  // 64-bit on the supported platforms
using Mat = std::vector<std::vector<Int>>;  // row-major: m[row][col]

// ---------------------------------------------------------------- matrices

Mat mat_zero(int rows, int cols);
Mat mat_identity(int n);
Mat mat_mul(const Mat& a, const Mat& b);
Mat mat_add(const Mat& a, const Mat& b);
Mat mat_neg(const Mat& a);
Mat mat_transpose(const Mat& a);
// Stack vertically: [a; b] (same column count).
Mat mat_vstack(const Mat& a, const Mat& b);
// Concatenate horizontally: [a | b] (same row count).
Mat mat_hstack(const Mat& a, const Mat& b);
int mat_rows(const Mat& m);
int mat_cols(const Mat& m);
std::string mat_to_string(const Mat& m);

// ---------------------------------------------------------------- AbGroup

struct AbGroup {
  Int free = 0;
  std::vector<Int> tor;  // invariant factors, each >= 2, ascending divisibility

  int ngens() const { return static_cast<int>(free + tor.size()); }
  // Order of the relation on generator i (0 = infinite order / free).
  Int gen_order(int i) const {
    return i < free ? 0 : tor[static_cast<size_t>(i - free)];
  }
  bool is_trivial() const { return free == 0 && tor.empty(); }
  bool is_finite() const { return free == 0; }
  // Group order; 0 encodes "infinite".  Throws on overflow.
  Int order() const;
  bool operator==(const AbGroup& o) const {
    return free == o.free && tor == o.tor;
  }
  bool operator!=(const AbGroup& o) const { return !(*this == o); }
  std::string to_string() const;

  static AbGroup zero() { return AbGroup{}; }
  static AbGroup free_group(Int rank) { return AbGroup{rank, {}}; }
  static AbGroup cyclic(Int n);                        // Z/n (n>=2), n==0 -> Z
  static AbGroup elem_abelian(Int p, Int rank);        // (Z/p)^rank
  // Canonicalize an arbitrary list of cyclic orders (0 = Z) into invariant
  // factor form.
  static AbGroup of_cyclics(const std::vector<Int>& orders);
};

bool is_canonical(const AbGroup& g);

// Reduce a column vector / matrix into canonical residues for the group's
// generators (torsion rows mod d, free rows untouched).
std::vector<Int> reduce_vec(const AbGroup& g, std::vector<Int> v);
Mat reduce_mat(const AbGroup& g, Mat m);

// ---------------------------------------------------------------- AbHom

struct AbHom {
  AbGroup src;
  AbGroup dst;
  Mat m;  // dst.ngens() x src.ngens()

  std::string to_string() const;
  bool operator==(const AbHom& o) const {
    return src == o.src && dst == o.dst && m == o.m;
  }
  bool operator!=(const AbHom& o) const { return !(*this == o); }
};

// Construct + validate (throws std::invalid_argument when ill-defined).
AbHom make_hom(const AbGroup& src, const AbGroup& dst, Mat m);
// d_src * column must vanish in dst for every source generator.
bool is_well_defined(const AbGroup& src, const AbGroup& dst, const Mat& m);

AbHom hom_zero(const AbGroup& src, const AbGroup& dst);
AbHom hom_identity(const AbGroup& g);
AbHom hom_compose(const AbHom& g, const AbHom& f);  // g after f
AbHom hom_add(const AbHom& f, const AbHom& g);
bool hom_is_zero(const AbHom& f);
std::vector<Int> hom_apply(const AbHom& f, const std::vector<Int>& x);

// ---------------------------------------------------------------- SNF

struct SmithResult {
  std::vector<Int> diag;  // nonneg, ascending divisibility, then zeros dropped
  int rank = 0;           // number of nonzero diagonal entries
  Mat left;               // unimodular, rows x rows
  Mat left_inv;
  Mat right;              // unimodular, cols x cols
  Mat right_inv;
};

// left * a * right has diag on its main diagonal and zeros elsewhere.
SmithResult smith_normal_form(const Mat& a);

// Solve a*x = b over the integers (no relations).  Empty optional if none.
std::optional<std::vector<Int>> solve_integer(const Mat& a,
                                              const std::vector<Int>& b);

// Basis (as matrix columns) of { x : a*x = 0 } over Z.
Mat integer_nullspace(const Mat& a);

// ---------------------------------------------------------------- presentations

// Z^ngens modulo the column span of rels.
struct Pres {
  int ngens = 0;
  Mat rels;  // ngens x k

  static Pres of(const AbGroup& g);
};

struct CanonicalPres {
  AbGroup grp;
  Mat to_canon;    // grp.ngens() x pres.ngens: coordinates of old gens
  Mat from_canon;  // pres.ngens x grp.ngens(): canonical gens in old coords
};

CanonicalPres canonicalize(const Pres& p);

// Does b lie in (colspan f + colspan rels of dst)?  If so return x with
// f*x = b modulo dst relations.
std::optional<std::vector<Int>> solve_mod(const Mat& f, const AbGroup& dst,
                                          const std::vector<Int>& b);

// ---------------------------------------------------------------- derived objects

struct SubquotientResult {
  AbGroup grp;
  Mat gens;  // ambient coordinates of grp's canonical generators (cols)
};

// (colspan gens + colspan of ambient relations) / ambient relations, as an
// abstract group together with representing elements.
SubquotientResult subgroup_of(const AbGroup& ambient, const Mat& gens);

struct KernelResult {
  AbGroup grp;
  AbHom incl;  // grp -> f.src
};
KernelResult kernel(const AbHom& f);

struct CokernelResult {
  AbGroup grp;
  AbHom proj;   // f.dst -> grp
  Mat section;  // set-level lift of canonical generators, dst coords (cols)
};
CokernelResult cokernel(const AbHom& f);

struct ImageResult {
  AbGroup grp;
  AbHom incl;  // grp -> f.dst
};
ImageResult image(const AbHom& f);

// Is im(f) = ker(g)?  Requires f.dst == g.src; checks g*f = 0 too.
bool is_exact_at(const AbHom& f, const AbHom& g);

// Does x (coords in f.dst) lie in the image of f?
bool in_image(const AbHom& f, const std::vector<Int>& x);

// ---------------------------------------------------------------- direct sums

struct DirectSum {
  AbGroup grp;
  std::vector<AbHom> inj;   // summand -> sum
  std::vector<AbHom> proj;  // sum -> summand (only valid as set-level splits
                            // when mixed torsion is involved; each proj*inj=id)
};
DirectSum direct_sum(const std::vector<AbGroup>& parts);

// ---------------------------------------------------------------- extensions

struct ExtensionProblem {
  AbGroup sub;
  AbGroup quot;
  std::vector<AbGroup> candidates;   // sorted, deduplicated
  std::optional<AbGroup> resolved;   // set iff exactly one candidate
};

// All isomorphism classes E fitting 0 -> sub -> E -> quot -> 0.  Both groups
// must be finite (one side may be trivial); throws when the search space is
// infinite or larger than the supported bound.
ExtensionProblem enumerate_extensions(const AbGroup& sub, const AbGroup& quot);

// All abelian groups of order n (n >= 1), canonical forms, sorted.
std::vector<AbGroup> abelian_groups_of_order(Int n);

// Deterministic ordering used for candidate lists.
bool abgroup_less(const AbGroup& a, const AbGroup& b);

// ---------------------------------------------------------------- JSON

void to_json(nlohmann::json& j, const AbGroup& g);
void from_json(const nlohmann::json& j, AbGroup& g);
void to_json(nlohmann::json& j, const AbHom& h);
void from_json(const nlohmann::json& j, AbHom& h);

}  // namespace slicecalc

#pragma once
// Slice filtrations of integral Eilenberg-MacLane suspensions over K = C2xC2
// and over C2: slice-membership predicates for (de)suspended Eilenberg-MacLane
// spectra, closed-form slice tables for Sigma^{+-n} HZ, the rho-suspension and
// duality transports between tables, and recovery of the mod-2 tables from
// two adjacent integral ones.

#include "slicecalc/susp.hpp"

namespace slicecalc {

// ---------------------------------------------------------------- predicates

// H M is a zero slice for every Mackey functor M; Sigma^1 H M is a one slice
// exactly when every restriction map of M is injective.
bool is_one_slice(const MackeyFunctor& m);

// Sigma^{-1} H M is a (-n)-slice (n = 1, 2 or |G|) exactly when M vanishes at
// the levels indexed by subgroups of order < n and every transfer whose
// source level has order >= n is surjective.
bool is_negative_one_slice_with(const MackeyFunctor& m, Int n);

// A C2 spectrum with homotopy pi2/pi1 in degrees 2/1 (zero elsewhere) is a
// two slice iff pi2 restricts injectively to the bottom level and pi1
// vanishes there.
bool c2_is_two_slice(const MackeyFunctor& pi2, const MackeyFunctor& pi1);

// Sigma^1 H N is a K-two-slice iff N has zero bottom level and injects into
// the product of its middle levels.
bool k_is_two_slice_sigma1(const MackeyFunctor& n);

// Sigma^2 H M is a K-two-slice iff every restriction of M is injective and
//   M_K -> M_L + M_D + M_R -> M_e^3
// is exact in the middle, the second map sending (x, y, z) to the pairwise
// differences of the three further restrictions.
bool k_is_two_slice_sigma2(const MackeyFunctor& m);

enum class TwoSliceVerdict { two_slice, not_two_slice, needs_spectrum_data };
std::string to_string(TwoSliceVerdict v);

// Verdict for a K-spectrum with homotopy pi2/pi1 in degrees 2/1: certifies a
// two slice when pi2 passes the Sigma^2 conditions, pi1 vanishes at the
// bottom and pi1 injects into its middle levels; refutes when the pi2
// conditions or the bottom-level condition fail; the middle-level injectivity
// of pi1 alone failing is not decisive without the spectrum itself.
TwoSliceVerdict k_two_slice_theorem(const MackeyFunctor& pi2, const MackeyFunctor& pi1);

// ---------------------------------------------------------------- tables

// One slice P^L_L = Sigma^W H(coeff), stored at its slice level L.
struct SliceEntry {
  int level = 0;
  RORep suspension;  // W
  FSum coeff;        // formal sum of catalog functors

  bool operator==(const SliceEntry& o) const = default;
};

struct SliceSource {
  GroupId group = GroupId::K4;
  std::string coeff = "Z";
  Int degree = 0;  // Sigma^degree H(coeff)
};

struct SliceTable {
  SliceSource source;
  std::vector<SliceEntry> entries;  // strictly increasing level
  std::vector<std::string> notes;

  const SliceEntry* at(int level) const;  // null when the level is empty
  std::vector<int> levels() const;
};

// Every nontrivial slice of Sigma^n H_{C2} Z / Sigma^n H_K Z.
SliceTable c2_slice_table(Int n);
SliceTable k_slice_table(Int n);

// Transport along Sigma^{j*rho}: levels move by j*|G|, suspensions by j*rho.
SliceTable rho_shift(const SliceTable& t, Int j);
SliceEntry rho_shift(const SliceEntry& e, GroupId g, Int j);

// Pulling back along a quotient by a subgroup of the given index multiplies
// slice degrees by that index.
Int pullback_slice_degree(Int k, Int index);

// ---------------------------------------------------------------- normal forms

// Minimal-coordinate representative of an entry under the suspension
// equivalences of the catalog families (Z <-> Z*, m <-> mg*, m* <-> mg,
// phi*F <-> phi*F*, trivial vs sign suspensions on pulled-back g powers).
// Mixed sums normalize piecewise as wedge summands.
struct CanonicalPiece {
  std::string name;
  Int mult = 1;
  Int a = 0;  // suspension a*rho + b
  Int b = 0;

  bool operator==(const CanonicalPiece& o) const = default;
  bool operator<(const CanonicalPiece& o) const;
};
std::vector<CanonicalPiece> canonical_pieces(GroupId g, const SliceEntry& e);

// Same level and same canonical piece multiset.
bool entry_equivalent(GroupId g, const SliceEntry& x, const SliceEntry& y);

// Equal sources aside, tables agree levelwise up to entry equivalence.
bool table_equivalent(const SliceTable& x, const SliceTable& y);

// Convenience constructor: Sigma^{a*rho+b} H(coeff) at the given level.
SliceEntry slice_entry(GroupId g, int level, const std::string& coeff, Int a, Int b);

// ---------------------------------------------------------------- transports

// Predicted slices of Sigma^n H_K Z in levels >= n+2 (n >= 6), obtained from
// the table of Sigma^{5-n} H_K Z: the level-l entry Sigma^W H A contributes
// Sigma^{rho - W} H(dual A) at level 4 - l.
SliceTable dualize_slice_table(const SliceTable& negative);

// Restriction of a K-table to the C2 spectrum underlying the L-fixed points:
// alpha and gamma restrict to sigma, beta to the trivial character.  Entries
// whose coefficient restricts to zero are dropped.
SliceTable restrict_table_to_L(const SliceTable& t);

// ---------------------------------------------------------------- status

enum class SliceStatus { yes, no, indeterminate };
std::string to_string(SliceStatus s);

// Is the entry's spectrum really a slice of its recorded level?  Routes the
// entry through Sigma^{j*rho} to a window where a characterization applies;
// coefficients without closed-form homotopy come back indeterminate.
SliceStatus verify_slice_status(GroupId g, const SliceEntry& e);
SliceStatus verify_slice_status(const SliceTable& t);  // worst across entries

// ---------------------------------------------------------------- mod 2

// M/2 and M[2] with induced structure maps.
MackeyFunctor mackey_mod2(const MackeyFunctor& m);
MackeyFunctor mackey_two_torsion(const MackeyFunctor& m);

// Catalog name, g power, or two-piece wedge matching m up to isomorphism.
std::string describe_functor(const MackeyFunctor& m);

// One level of the recovered mod-2 table: resolved when exactly one
// candidate coefficient survives; a level assembled from two nonzero ends
// carries the full extension candidate list instead.
struct FSliceLevel {
  int level = 0;
  RORep suspension;
  bool carried_4k2 = false;  // level congruent 2 mod 4: not theorem-covered
  std::vector<MackeyFunctor> candidates;
  std::vector<std::string> names;  // describe_functor of each candidate

  bool resolved() const { return candidates.size() == 1; }
};

struct FSliceTable {
  SliceSource source;
  std::vector<FSliceLevel> levels;
  std::vector<std::string> notes;

  const FSliceLevel* at(int level) const;
};

// Slices of Sigma^n H F recovered from the integral tables of Sigma^n H Z
// and Sigma^{n+1} H Z: at each level the mod-2 reduction of the first feeds
// the bottom of an extension whose top is the 2-torsion of the second.
FSliceTable recover_F_slices(const SliceTable& zn, const SliceTable& zn1);

}  // namespace slicecalc

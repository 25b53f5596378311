#pragma once
// Homotopy Mackey functors of representation-sphere (de)suspensions of
// Eilenberg-MacLane spectra over K = C2 x C2 and over C2.
//
// Two engines live here:
//  * an exact desuspension engine that peels off one sign representation at
//    a time via kernels/cokernels of the unit map into the induced functor
//    (extension ambiguities between adjacent degrees are kept as filtration
//    chains, never resolved by guesswork), and
//  * closed-form tables for the recurring coefficient families (Z, Z*,
//    Z(2,1)*, m, m*, mg, mg*, phi*F, phi*F*, g-powers), expressed as formal
//    sums of catalog functors per degree.

#include "slicecalc/mackey.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace slicecalc {

// ---------------------------------------------------------------- RO(G)

// Virtual representation.  Over K the three sign characters alpha, beta,
// gamma have kernels R, L, D respectively and rho = 1 + alpha + beta + gamma.
// Over C2 only t and a are used, with a counting copies of sigma.
struct RORep {
  GroupId group = GroupId::K4;
  Int t = 0;  // trivial summands
  Int a = 0;  // alpha count (sigma count over C2)
  Int b = 0;  // beta count
  Int c = 0;  // gamma count

  bool operator==(const RORep& o) const = default;
};

RORep rep_k(Int t, Int a, Int b, Int c);
RORep rep_c2(Int t, Int s);
RORep rep_rho(GroupId g, Int k = 1);  // k * rho
RORep rep_rho_bar(Int k = 1);         // k * (alpha + beta + gamma), K only
RORep rep_add(const RORep& x, const RORep& y);
RORep rep_negate(const RORep& x);
Int rep_dim(const RORep& x);        // virtual dimension
Int rep_fixed_dim(const RORep& x);  // dimension of the G-fixed subspace

// Restriction along the subgroup indexed by mid (kMidL/kMidD/kMidR):
// the sign character with that kernel restricts trivially, the others to
// sigma.
RORep rep_restrict(const RORep& x, int mid);

// If x = a*rho + b (over either group), returns {a, b}.
std::optional<std::pair<Int, Int>> rep_as_rho_multiple(const RORep& x);

std::string rep_to_string(const RORep& x);

// Accepts sums of terms like "2*rho", "-rho", "3", "a*alpha+b*beta+c*gamma",
// "s*sigma"; whitespace-insensitive.  Throws std::invalid_argument.
RORep parse_rep(GroupId g, const std::string& text);

void to_json(nlohmann::json& j, const RORep& r);
void from_json(const nlohmann::json& j, RORep& r);

// ---------------------------------------------------------------- tables

// Value of one homotopy degree: a filtration chain of Mackey functors listed
// subobject-first.  Empty = zero; a single piece is an exact value; two or
// more pieces form an iterated extension whose assembly is not determined by
// the data here.  `approximate` marks chains whose pieces were pushed through
// a filtration (they bound the true graded pieces instead of pinning them).
struct PiEntry {
  std::vector<MackeyFunctor> pieces;
  bool approximate = false;

  bool zero() const { return pieces.empty(); }
  bool exact() const { return pieces.size() == 1 && !approximate; }
  const MackeyFunctor& value() const;  // requires exact()
};

struct Spectrum {
  GroupId group = GroupId::K4;
  std::string coeff;  // catalog name; empty for an ad-hoc functor
  RORep rep;

  std::string to_string() const;
};

struct HomotopyTable {
  Spectrum spectrum;
  std::map<Int, PiEntry> deg;  // absent key = zero
  std::vector<std::string> notes;

  GroupId group() const { return spectrum.group; }
  const PiEntry& at(Int n) const;  // zero entry when absent
  std::vector<Int> degrees() const;
  bool fully_resolved() const;
};

// Isomorphism classes one level of a chain entry can assemble to.  Empty
// result means the candidates were not enumerable (an infinite piece inside
// a nontrivial chain).
std::vector<AbGroup> level_candidates(const PiEntry& e, int level);

// Degreewise comparison, pieces matched in filtration order up to iso.
bool table_equal(const HomotopyTable& x, const HomotopyTable& y);

void to_json(nlohmann::json& j, const HomotopyTable& t);

// ---------------------------------------------------------------- engine

enum class SignRep { alpha, beta, gamma };

int sign_mid(SignRep s);         // alpha -> kMidR, beta -> kMidL, gamma -> kMidD
SignRep sign_of_mid(int mid);
std::string sign_name(SignRep s);

// H(M) concentrated in degree 0.
HomotopyTable em_table(const MackeyFunctor& m);

// One sign desuspension: in each degree the result is the extension of
// coker(unit at degree n+1) by ker(unit at degree n), where the unit maps
// into the functor induced from the sign's kernel subgroup.
HomotopyTable desuspend_table(const HomotopyTable& t, int mid);

HomotopyTable desuspend_sign(const MackeyFunctor& m, SignRep which);

// Degrees 0..-3 of the (alpha+beta+gamma)-desuspension.
HomotopyTable desuspend_reduced_rho(const MackeyFunctor& m);

// k rounds of the above (k >= 1).
HomotopyTable desuspend_reduced_rho_iter(const MackeyFunctor& m, Int k);

// Desuspension by an arbitrary rep with a, b, c <= 0 (t of either sign is a
// pure reindexing).
HomotopyTable desuspend_rep(const MackeyFunctor& m, const RORep& rep);

// True when every piece of every degree restricts to zero at `mid`; further
// desuspension by that sign then leaves the table unchanged, which is what
// makes the iterated tables stabilize after the first round.
bool homotopy_reduction_check(const HomotopyTable& t, int mid);

// ---------------------------------------------------------------- formal sums

// Formal direct sum of catalog functors.  A piece named "g" with mult j
// realizes to gn(j); any other name with mult j realizes to a j-fold sum.
struct FPiece {
  std::string name;
  Int mult = 1;

  bool operator==(const FPiece& o) const = default;
};
using FSum = std::vector<FPiece>;

FSum fsum_normalize(FSum s);
FSum fsum_add(FSum x, const FSum& y);
bool fsum_equal(const FSum& x, const FSum& y);
bool fsum_is_zero(const FSum& s);
std::string fsum_to_string(const FSum& s);
MackeyFunctor realize_fsum(GroupId g, const FSum& s);
// Piecewise catalog dual; throws when a piece's dual is not catalogued.
FSum fsum_dual(GroupId g, const FSum& s);
// Parse "Z", "g^3", "g^2+phi*F" back into a sum (inverse of fsum_to_string).
FSum parse_fsum(const std::string& text);

// ---------------------------------------------------------------- closed forms

// pi_*(Sigma^{a*rho+b} H coeff) as formal sums per degree.
struct ClosedTable {
  GroupId group = GroupId::K4;
  std::string coeff;
  Int a = 0;
  Int b = 0;
  std::map<Int, FSum> deg;

  FSum at(Int n) const;
};

// Closed-form homotopy for the supported coefficient families.  Throws
// std::domain_error("missing-homotopy-family: ...") for coefficients without
// a closed form at the requested suspension.
ClosedTable pi_closed(GroupId g, const std::string& coeff, Int a, Int b);
bool pi_closed_supported(GroupId g, const std::string& coeff, Int a);

// Single degree of the above, realized as a Mackey functor.
MackeyFunctor closed_form_homotopy(GroupId g, const std::string& coeff, Int a,
                                   Int b, Int degree);

HomotopyTable realize_table(const ClosedTable& t);

// pi_*(Sigma^{k sigma + r} H_{C2} Z) for k, r >= 0: Z (k even) or fhat
// (k odd) at degree k+r, g at degrees i in [r, k+r-1] with i = r (mod 2).
HomotopyTable c2_suspension_table(Int k, Int r);

// ---------------------------------------------------------------- K-fixed ranks

enum class KRhoVariant { rho, rho_minus_beta, rho_plus_beta };

// pi_i at level K of Sigma^{k*rho}, Sigma^{k*rho-beta}, Sigma^{k*rho+beta}
// with Z coefficients, as an abelian group (k >= 1).
AbGroup krho_fixed_ranks(Int k, KRhoVariant v, Int i);

}  // namespace slicecalc

#pragma once
// Mackey functors for the cyclic group of order 2 (C2) and the Klein
// four-group (K4), presented as explicit diagrams of abelian groups with
// restriction, transfer and Weyl-group data, together with the change-of-group
// operations: induction, restriction, inflation pullback, duality, and the
// unit of the induction/restriction adjunction.
//
// Level layout
//   K4: index 0 = K (top), 1..3 = the order-2 subgroups L, D, R, 4 = e.
//   C2: index 0 = top, 1 = e.
//
// Weyl actions
//   At a middle K4 level the Weyl group has order 2: one involution.
//   At the bottom K4 level the Weyl group is all of K4: we store the actions
//   of the generators l and d (the action of r is their composite).
//   At the bottom C2 level: one involution.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "slicecalc/abgroup.hpp"

namespace slicecalc {

enum class GroupId { C2, K4 };

inline constexpr int kMidL = 0;
inline constexpr int kMidD = 1;
inline constexpr int kMidR = 2;

std::string group_name(GroupId g);
GroupId group_from_name(const std::string& s);
// Level display names: K4 -> {"K","L","D","R","e"}, C2 -> {"C2","e"}.
const std::vector<std::string>& level_names(GroupId g);

struct MackeyFunctor {
  GroupId group = GroupId::K4;
  std::string name;  // display only; empty for computed functors

  std::vector<AbGroup> lev;  // K4: 5 entries; C2: 2 entries

  // K4: res_up[i] : M_K -> M_{L/D/R},  tr_up[i] : M_{L/D/R} -> M_K
  //     res_dn[i] : M_{L/D/R} -> M_e,  tr_dn[i] : M_e -> M_{L/D/R}
  // C2: res_up[0] : M_C2 -> M_e,       tr_up[0] : M_e -> M_C2; no dn maps.
  std::vector<AbHom> res_up, tr_up, res_dn, tr_dn;

  std::vector<AbHom> weyl_mid;  // K4: involutions at L, D, R; C2: empty
  std::vector<AbHom> weyl_e;    // K4: actions of l, d at level e; C2: [w]

  int nlevels() const { return group == GroupId::K4 ? 5 : 2; }
  const AbGroup& top() const { return lev[0]; }
  const AbGroup& bottom() const { return lev[static_cast<size_t>(nlevels() - 1)]; }
  bool operator==(const MackeyFunctor& o) const;
  bool operator!=(const MackeyFunctor& o) const { return !(*this == o); }
  std::string to_string() const;
};

// Action of the Weyl element g in {"1","l","d","r"} on the bottom level.
AbHom weyl_bottom(const MackeyFunctor& m, const std::string& g);

// All axioms of a Mackey functor diagram; returns human-readable violations
// (empty means the diagram is valid).
std::vector<std::string> check_axioms(const MackeyFunctor& m);

// Identity on generators in every level.
bool mackey_equal(const MackeyFunctor& a, const MackeyFunctor& b);
// Brute-force search for a levelwise isomorphism commuting with all structure
// maps.  Supported for levels of free rank <= 2.
bool mackey_iso(const MackeyFunctor& a, const MackeyFunctor& b);

// Zero functor over a group.
MackeyFunctor mackey_zero(GroupId g);
bool mackey_is_zero(const MackeyFunctor& m);

// Levelwise direct sum with blockwise structure maps.
MackeyFunctor mackey_direct_sum(const std::vector<MackeyFunctor>& parts);

// Levelwise dual: free and torsion parts dualize separately, restriction and
// transfer trade places.  Throws when a structure map mixes a free generator
// into torsion (no such functor arises in the supported families).
MackeyFunctor dual(const MackeyFunctor& m);

// ---------------------------------------------------------------- change of group

// Induction of a C2 Mackey functor up to K4 along the middle level `mid`
// (kMidL/kMidD/kMidR).
MackeyFunctor induce(const MackeyFunctor& n, int mid);

// Restriction of a K4 Mackey functor to the order-2 subgroup at `mid`.
MackeyFunctor restrict_to(const MackeyFunctor& m, int mid);

// Bottom-level data of a K4 functor: the group with its two Weyl generators.
struct UnderlyingData {
  AbGroup grp;
  AbHom act_l, act_d;
};
UnderlyingData restrict_to_e(const MackeyFunctor& m);

// Inflation along K4 -> K4/H for the order-2 subgroup at `mid`: levels
// containing H inherit the C2 diagram, all others vanish.
MackeyFunctor pullback(const MackeyFunctor& n, int mid);

// Direct sum of the three inflations of the same C2 functor.
MackeyFunctor pullback_ldr(const MackeyFunctor& n);

// Inflation along K4 -> 1: the group sits at the top level, everything below
// vanishes.
MackeyFunctor pullback_from_trivial(const AbGroup& a);

// ---------------------------------------------------------------- unit map

// The unit M -> induce(restrict_to(M, mid), mid) of the adjunction.
struct UnitMap {
  MackeyFunctor target;
  std::vector<AbHom> comp;  // one per level of M
};
UnitMap unit_map(const MackeyFunctor& m, int mid);

// Violations of naturality for a levelwise map src -> dst (empty = natural).
std::vector<std::string> check_mackey_map(const MackeyFunctor& src, const MackeyFunctor& dst,
                                          const std::vector<AbHom>& comp);

// Kernel / cokernel of a levelwise natural map, with induced structure maps.
MackeyFunctor mackey_map_kernel(const MackeyFunctor& src, const MackeyFunctor& dst,
                                const std::vector<AbHom>& comp);
MackeyFunctor mackey_map_cokernel(const MackeyFunctor& src, const MackeyFunctor& dst,
                                  const std::vector<AbHom>& comp);

// ---------------------------------------------------------------- catalog

// Named diagrams.  K4 names: Z, Z*, Z(2,1), Z(2,1)*, M, m, m*, mg, mg*,
// phi*F, phi*F*, phi*f, g, E.  C2 names: Z, Z*, fhat, F, F*, f, g.
// Unknown names throw std::out_of_range.
const MackeyFunctor& catalog(GroupId g, const std::string& name);
std::vector<std::string> catalog_names(GroupId g);
bool catalog_has(GroupId g, const std::string& name);

// (Z/2)^n concentrated at the top K4 level.
MackeyFunctor gn(int n);

// Catalog name of the dual diagram, when the dual is itself catalogued.
std::optional<std::string> dual_name(GroupId g, const std::string& name);

// Diagnostics for the loaded catalog (path or "embedded").
std::string catalog_source();

// ---------------------------------------------------------------- JSON

void to_json(nlohmann::json& j, const MackeyFunctor& m);
void from_json(const nlohmann::json& j, MackeyFunctor& m);

}  // namespace slicecalc

#include "slicecalc/slice.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <tuple>

namespace slicecalc {

namespace {

Int group_size(GroupId g) { return g == GroupId::K4 ? 4 : 2; }

RORep rep_of(GroupId g, Int a, Int b) {
  return g == GroupId::K4 ? rep_k(a + b, a, a, a) : rep_c2(a + b, a);
}

AbHom hom_scale(const AbHom& f, Int c) {
  Mat m = f.m;
  for (auto& row : m)
    for (auto& x : row) x *= c;
  return make_hom(f.src, f.dst, std::move(m));
}

bool hom_injective(const AbHom& f) { return kernel(f).grp.is_trivial(); }
bool hom_surjective(const AbHom& f) { return cokernel(f).grp.is_trivial(); }

// M_K -> M_L + M_D + M_R assembled from the three upper restrictions.
struct MidStack {
  DirectSum mids;
  AbHom res;
};

MidStack stack_res(const MackeyFunctor& m) {
  MidStack s{direct_sum({m.lev[1], m.lev[2], m.lev[3]}), {}};
  s.res = hom_compose(s.mids.inj[0], m.res_up[0]);
  s.res = hom_add(s.res, hom_compose(s.mids.inj[1], m.res_up[1]));
  s.res = hom_add(s.res, hom_compose(s.mids.inj[2], m.res_up[2]));
  return s;
}

std::string g_power(Int a) {
  return a == 1 ? std::string("g") : "g^" + std::to_string(a);
}

}  // namespace

// ---------------------------------------------------------------- predicates

bool is_one_slice(const MackeyFunctor& m) {
  for (const AbHom& r : m.res_up)
    if (!hom_injective(r)) return false;
  for (const AbHom& r : m.res_dn)
    if (!hom_injective(r)) return false;
  return true;
}

bool is_negative_one_slice_with(const MackeyFunctor& m, Int n) {
  const bool k4 = m.group == GroupId::K4;
  if (n != 1 && n != 2 && !(k4 && n == 4))
    throw std::invalid_argument("is_negative_one_slice_with: n must be a subgroup order");
  if (n >= 2 && !m.bottom().is_trivial()) return false;
  if (n >= 4)
    for (int i = 1; i <= 3; ++i)
      if (!m.lev[static_cast<size_t>(i)].is_trivial()) return false;
  if (k4) {
    if (n <= 2)
      for (const AbHom& t : m.tr_up)
        if (!hom_surjective(t)) return false;
    if (n <= 1)
      for (const AbHom& t : m.tr_dn)
        if (!hom_surjective(t)) return false;
  } else {
    if (n <= 1 && !hom_surjective(m.tr_up[0])) return false;
  }
  return true;
}

bool c2_is_two_slice(const MackeyFunctor& pi2, const MackeyFunctor& pi1) {
  if (pi2.group != GroupId::C2 || pi1.group != GroupId::C2)
    throw std::invalid_argument("c2_is_two_slice: expects C2 functors");
  return hom_injective(pi2.res_up[0]) && pi1.bottom().is_trivial();
}

bool k_is_two_slice_sigma1(const MackeyFunctor& n) {
  if (n.group != GroupId::K4)
    throw std::invalid_argument("k_is_two_slice_sigma1: expects a K functor");
  if (!n.bottom().is_trivial()) return false;
  return hom_injective(stack_res(n).res);
}

bool k_is_two_slice_sigma2(const MackeyFunctor& m) {
  if (m.group != GroupId::K4)
    throw std::invalid_argument("k_is_two_slice_sigma2: expects a K functor");
  for (const AbHom& r : m.res_up)
    if (!hom_injective(r)) return false;
  for (const AbHom& r : m.res_dn)
    if (!hom_injective(r)) return false;
  MidStack s = stack_res(m);
  DirectSum e3 = direct_sum({m.lev[4], m.lev[4], m.lev[4]});
  AbHom rl = hom_compose(m.res_dn[0], s.mids.proj[0]);
  AbHom rd = hom_compose(m.res_dn[1], s.mids.proj[1]);
  AbHom rr = hom_compose(m.res_dn[2], s.mids.proj[2]);
  AbHom diff = hom_compose(e3.inj[0], hom_add(hom_scale(rl, -1), rd));
  diff = hom_add(diff, hom_compose(e3.inj[1], hom_add(rl, hom_scale(rr, -1))));
  diff = hom_add(diff, hom_compose(e3.inj[2], hom_add(hom_scale(rd, -1), rr)));
  return is_exact_at(s.res, diff);
}

std::string to_string(TwoSliceVerdict v) {
  switch (v) {
    case TwoSliceVerdict::two_slice: return "two-slice";
    case TwoSliceVerdict::not_two_slice: return "not-two-slice";
    default: return "needs-spectrum-data";
  }
}

TwoSliceVerdict k_two_slice_theorem(const MackeyFunctor& pi2, const MackeyFunctor& pi1) {
  const bool cond1 = k_is_two_slice_sigma2(pi2);
  const bool cond2 = pi1.bottom().is_trivial();
  const bool cond3 = hom_injective(stack_res(pi1).res);
  if (cond1 && cond2 && cond3) return TwoSliceVerdict::two_slice;
  if (!cond1 || !cond2) return TwoSliceVerdict::not_two_slice;
  return TwoSliceVerdict::needs_spectrum_data;
}

// ---------------------------------------------------------------- tables

const SliceEntry* SliceTable::at(int level) const {
  for (const SliceEntry& e : entries)
    if (e.level == level) return &e;
  return nullptr;
}

std::vector<int> SliceTable::levels() const {
  std::vector<int> out;
  out.reserve(entries.size());
  for (const SliceEntry& e : entries) out.push_back(e.level);
  return out;
}

SliceEntry slice_entry(GroupId g, int level, const std::string& coeff, Int a, Int b) {
  return SliceEntry{level, rep_of(g, a, b), parse_fsum(coeff)};
}

SliceTable c2_slice_table(Int n) {
  SliceTable t;
  t.source = {GroupId::C2, "Z", n};
  if (n >= 0 && n <= 6) {
    t.entries.push_back(slice_entry(GroupId::C2, static_cast<int>(n), "Z", 0, n));
    return t;
  }
  if (n > 6) {
    const Int r = 3 + ((n - 3) % 4);
    t.entries.push_back(slice_entry(GroupId::C2, static_cast<int>(n), "Z", (n - r) / 2, r));
    for (Int k = (n + r) / 2 - 1; k <= n - 3; ++k)
      if ((k - n - 1) % 2 == 0)
        t.entries.push_back(slice_entry(GroupId::C2, static_cast<int>(2 * k), "g", 0, k));
    return t;
  }
  const Int m = -n;
  const Int r = 1 + ((m - 1) % 4);
  t.entries.push_back(slice_entry(GroupId::C2, static_cast<int>(-m), "Z*", -(m - r) / 2, -r));
  for (Int k = (m + r) / 2; k <= m; ++k)
    if ((k - m) % 2 == 0)
      t.entries.push_back(slice_entry(GroupId::C2, static_cast<int>(-2 * k), "g", 0, -k));
  std::sort(t.entries.begin(), t.entries.end(),
            [](const SliceEntry& x, const SliceEntry& y) { return x.level < y.level; });
  return t;
}

SliceTable k_slice_table(Int n) {
  SliceTable t;
  t.source = {GroupId::K4, "Z", n};
  std::map<int, SliceEntry> es;
  auto add = [&](Int level, const std::string& coeff, Int a, Int b) {
    auto [it, fresh] =
        es.emplace(static_cast<int>(level), slice_entry(GroupId::K4, static_cast<int>(level), coeff, a, b));
    if (!fresh) throw std::logic_error("k_slice_table: level collision");
  };
  if (n >= 0 && n <= 5) {
    add(n, "Z", 0, n);
  } else if (n >= 6) {
    if (n % 4 == 2)
      add(n, "Z(2,1)*", (n - 2) / 4, 2);
    else {
      const Int r = 3 + ((n - 3) % 4);
      add(n, "Z", (n - r) / 4, r);
    }
    if (n % 4 == 3) add(n + 1, "mg*", (n + 1) / 4, 0);
    if (n % 2 == 0) {
      for (Int l = n + 2; l <= 2 * n - 8; ++l)
        if (l % 4 == 0) add(l, g_power((l - n) / 2), 0, l / 4);
      for (Int l = n + 2; l <= 2 * n - 6; ++l)
        if ((l - 2) % 4 == 0) add(l, "phi*F*", (l - 2) / 4 + 1, -1);
    } else {
      for (Int l = n + 2; l <= 2 * n - 6; ++l)
        if (l % 4 == 0) {
          const Int a = (l - n + 3) / 2 - 3;
          add(l, a == 0 ? std::string("phi*F*") : g_power(a) + "+phi*F*", l / 4, 0);
        }
    }
    for (Int l = 2 * n - 4; l <= 4 * (n - 4); ++l)
      if (l % 4 == 0) add(l, g_power(n - l / 4 - 3), 0, l / 4);
  } else {
    const Int m = -n;
    const Int r = 1 + ((m - 1) % 4);
    add(-m, "Z*", -(m - r) / 4, -r);
    if (m % 4 == 1) add(-(m + 1), "m*", -(m - 1) / 4, -1);
    if (m % 4 == 2) {
      const Int k = (m + 2) / 4;
      if (k == 1)
        add(-4, "m*", 0, -2);
      else
        add(-4 * k, "mg", -k, 0);
    }
    if (m % 2 == 1) {
      for (Int l = m + 3; l <= 2 * m - 2; ++l)
        if (l % 4 == 0) add(-l, g_power((l - m - 1) / 2), 0, -l / 4);
      for (Int l = m + 2; l <= 2 * m; ++l)
        if ((l - 2) % 4 == 0) add(-l, "phi*F", -((l - 2) / 4 + 1), 1);
    } else {
      for (Int l = m + 3; l <= 2 * m; ++l)
        if (l % 4 == 0) {
          const Int a = (l - m + 2) / 2 - 3;
          add(-l, a == 0 ? std::string("phi*F") : g_power(a) + "+phi*F", -l / 4, 0);
        }
    }
    for (Int l = 2 * m + 1; l <= 4 * m; ++l)
      if (l % 4 == 0) add(-l, g_power(m - l / 4 + 1), 0, -l / 4);
    if (m == 3)
      t.notes.push_back(
          "level -6 is stored in the rho-form Sigma^{-2rho+1} H(phi*F); "
          "the equivalent concentrated spelling is Sigma^{-3} H(phi*F*)");
  }
  for (auto& [l, e] : es) t.entries.push_back(e);
  return t;
}

SliceEntry rho_shift(const SliceEntry& e, GroupId g, Int j) {
  return SliceEntry{e.level + static_cast<int>(j * group_size(g)),
                    rep_add(e.suspension, rep_rho(g, j)), e.coeff};
}

SliceTable rho_shift(const SliceTable& t, Int j) {
  SliceTable out = t;
  for (SliceEntry& e : out.entries) e = rho_shift(e, t.source.group, j);
  if (j != 0)
    out.notes.push_back("shifted by " + std::to_string(j) + "*rho from the stored source");
  return out;
}

Int pullback_slice_degree(Int k, Int index) {
  if (index < 1) throw std::invalid_argument("pullback_slice_degree: index must be positive");
  return k * index;
}

// ---------------------------------------------------------------- normal forms

bool CanonicalPiece::operator<(const CanonicalPiece& o) const {
  return std::tie(name, mult, a, b) < std::tie(o.name, o.mult, o.a, o.b);
}

namespace {

CanonicalPiece canonical_piece(GroupId g, std::string name, Int mult, Int a, Int b) {
  if (g == GroupId::K4) {
    if (name == "Z*") {
      name = "Z"; a -= 1; b += 4;
    } else if (name == "m") {
      name = "mg*"; a += 1; b -= 2;
    } else if (name == "m*") {
      name = "mg"; a -= 1; b += 2;
    } else if (name == "phi*F*") {
      name = "phi*F"; a -= 2; b += 4;
    } else if (name == "g") {
      b += a; a = 0;
    }
  } else {
    if (name == "Z*") {
      name = "Z"; a -= 2; b += 4;
    } else if (name == "f") {
      name = "F*"; a += 1; b -= 2;
    } else if (name == "g") {
      b += a; a = 0;
    }
  }
  return CanonicalPiece{std::move(name), mult, a, b};
}

}  // namespace

std::vector<CanonicalPiece> canonical_pieces(GroupId g, const SliceEntry& e) {
  auto ab = rep_as_rho_multiple(e.suspension);
  if (!ab) throw std::invalid_argument("canonical_pieces: suspension is not of the form a*rho+b");
  std::vector<CanonicalPiece> out;
  for (const FPiece& p : fsum_normalize(e.coeff))
    out.push_back(canonical_piece(g, p.name, p.mult, ab->first, ab->second));
  std::sort(out.begin(), out.end());
  return out;
}

bool entry_equivalent(GroupId g, const SliceEntry& x, const SliceEntry& y) {
  return x.level == y.level && canonical_pieces(g, x) == canonical_pieces(g, y);
}

bool table_equivalent(const SliceTable& x, const SliceTable& y) {
  if (x.entries.size() != y.entries.size()) return false;
  for (size_t i = 0; i < x.entries.size(); ++i) {
    const SliceEntry& ex = x.entries[i];
    const SliceEntry& ey = y.entries[i];
    if (ex.level != ey.level) return false;
    if (canonical_pieces(x.source.group, ex) != canonical_pieces(y.source.group, ey)) return false;
  }
  return true;
}

// ---------------------------------------------------------------- transports

SliceTable dualize_slice_table(const SliceTable& negative) {
  if (negative.source.group != GroupId::K4 || negative.source.coeff != "Z")
    throw std::invalid_argument("dualize_slice_table: expects a K table with Z coefficients");
  const Int n = 5 - negative.source.degree;
  if (n < 6) throw std::invalid_argument("dualize_slice_table: source degree must be at most -1");
  SliceTable out;
  out.source = {GroupId::K4, "Z", n};
  for (const SliceEntry& e : negative.entries) {
    const int level = 4 - e.level;
    if (level < n + 2) continue;
    out.entries.push_back(SliceEntry{level, rep_add(rep_rho(GroupId::K4, 1), rep_negate(e.suspension)),
                                     fsum_dual(GroupId::K4, e.coeff)});
  }
  std::sort(out.entries.begin(), out.entries.end(),
            [](const SliceEntry& x, const SliceEntry& y) { return x.level < y.level; });
  return out;
}

SliceTable restrict_table_to_L(const SliceTable& t) {
  if (t.source.group != GroupId::K4)
    throw std::invalid_argument("restrict_table_to_L: expects a K table");
  SliceTable out;
  out.source = {GroupId::C2, t.source.coeff, t.source.degree};
  for (const SliceEntry& e : t.entries) {
    FSum pieces;
    for (const FPiece& p : fsum_normalize(e.coeff)) {
      MackeyFunctor r = restrict_to(realize_fsum(GroupId::K4, {p}), kMidL);
      if (mackey_is_zero(r)) continue;
      if (mackey_iso(r, catalog(GroupId::C2, "Z"))) {
        pieces = fsum_add(pieces, {FPiece{"Z", 1}});
        continue;
      }
      if (mackey_iso(r, catalog(GroupId::C2, "Z*"))) {
        pieces = fsum_add(pieces, {FPiece{"Z*", 1}});
        continue;
      }
      const Int j = static_cast<Int>(r.top().tor.size());
      if (j > 0 && r.top().free == 0 && r.bottom().is_trivial() &&
          mackey_iso(r, realize_fsum(GroupId::C2, {FPiece{"g", j}}))) {
        pieces = fsum_add(pieces, {FPiece{"g", j}});
        continue;
      }
      throw std::domain_error("restrict_table_to_L: unrecognized restricted coefficient");
    }
    if (fsum_is_zero(pieces)) continue;
    out.entries.push_back(SliceEntry{e.level, rep_restrict(e.suspension, kMidL), pieces});
  }
  return out;
}

// ---------------------------------------------------------------- status

std::string to_string(SliceStatus s) {
  switch (s) {
    case SliceStatus::yes: return "yes";
    case SliceStatus::no: return "no";
    default: return "indeterminate";
  }
}

namespace {

struct Spelling {
  std::string name;
  Int a = 0, b = 0;
};

// Suspension-equivalent respellings of Sigma^{a*rho+b} H(name); the closed
// forms cover different windows for different spellings.
std::vector<Spelling> spellings(GroupId g, const std::string& name, Int a, Int b) {
  std::vector<Spelling> out{{name, a, b}};
  if (g == GroupId::K4) {
    if (name == "Z") out.push_back({"Z*", a + 1, b - 4});
    else if (name == "Z*") out.push_back({"Z", a - 1, b + 4});
    else if (name == "m") out.push_back({"mg*", a + 1, b - 2});
    else if (name == "mg*") out.push_back({"m", a - 1, b + 2});
    else if (name == "m*") out.push_back({"mg", a - 1, b + 2});
    else if (name == "mg") out.push_back({"m*", a + 1, b - 2});
    else if (name == "phi*F") out.push_back({"phi*F*", a + 2, b - 4});
    else if (name == "phi*F*") out.push_back({"phi*F", a - 2, b + 4});
  } else {
    if (name == "Z") out.push_back({"Z*", a + 2, b - 4});
    else if (name == "Z*") out.push_back({"Z", a - 2, b + 4});
    else if (name == "f") out.push_back({"F*", a + 1, b - 2});
    else if (name == "F*") out.push_back({"f", a - 1, b + 2});
  }
  return out;
}

// One wedge summand Sigma^{a*rho+b} H(name^mult) against a claimed level L.
SliceStatus verify_piece(GroupId g, Int L, const std::string& name, Int mult, Int a, Int b) {
  const Int gs = group_size(g);
  const std::vector<Int> orders = g == GroupId::K4 ? std::vector<Int>{1, 2, 4} : std::vector<Int>{1, 2};
  for (const Spelling& sp : spellings(g, name, a, b)) {
    const Int jlo = std::min(sp.a, L / gs) - 6;
    const Int jhi = std::max(sp.a, L / gs) + 6;
    for (Int j = jlo; j <= jhi; ++j) {
      ClosedTable ct;
      try {
        ct = pi_closed(g, sp.name, sp.a - j, sp.b);
      } catch (const std::domain_error&) {
        continue;
      }
      std::map<Int, FSum> degs;
      for (const auto& [d, s] : ct.deg)
        if (!fsum_is_zero(s)) degs.emplace(d, s);
      if (degs.empty()) return SliceStatus::yes;
      auto realize_at = [&](Int d) {
        FSum s = degs.at(d);
        for (FPiece& p : s) p.mult *= mult;
        return realize_fsum(g, s);
      };
      const Int base = gs * j;
      if (degs.size() == 1) {
        const Int d = degs.begin()->first;
        if (d == 0) return L == base ? SliceStatus::yes : SliceStatus::no;
        if (d == 1) {
          MackeyFunctor M = realize_at(1);
          const bool one = is_one_slice(M);
          const bool two =
              g == GroupId::K4 ? k_is_two_slice_sigma1(M) : M.bottom().is_trivial();
          if (one) return L == base + 1 ? SliceStatus::yes : SliceStatus::no;
          if (two) return L == base + 2 ? SliceStatus::yes : SliceStatus::no;
          if (L == base + 1 || L == base + 2) return SliceStatus::no;
          continue;
        }
        if (d == 2) {
          MackeyFunctor M = realize_at(2);
          const bool two =
              g == GroupId::K4 ? k_is_two_slice_sigma2(M) : hom_injective(M.res_up[0]);
          if (two) return L == base + 2 ? SliceStatus::yes : SliceStatus::no;
          if (L == base + 2) return SliceStatus::no;
          continue;
        }
        if (d == -1) {
          MackeyFunctor M = realize_at(-1);
          std::vector<Int> hits;
          for (Int o : orders)
            if (is_negative_one_slice_with(M, o)) hits.push_back(o);
          if (hits.size() == 1) return L == base - hits[0] ? SliceStatus::yes : SliceStatus::no;
          if (hits.empty()) {
            for (Int o : orders)
              if (L == base - o) return SliceStatus::no;
          }
          continue;
        }
        continue;
      }
      if (degs.size() == 2 && degs.count(1) && degs.count(2)) {
        MackeyFunctor p2 = realize_at(2);
        MackeyFunctor p1 = realize_at(1);
        if (g == GroupId::K4) {
          switch (k_two_slice_theorem(p2, p1)) {
            case TwoSliceVerdict::two_slice:
              return L == base + 2 ? SliceStatus::yes : SliceStatus::no;
            case TwoSliceVerdict::not_two_slice:
              if (L == base + 2) return SliceStatus::no;
              break;
            default:
              break;
          }
        } else {
          if (c2_is_two_slice(p2, p1)) return L == base + 2 ? SliceStatus::yes : SliceStatus::no;
          if (L == base + 2) return SliceStatus::no;
        }
        continue;
      }
    }
  }
  return SliceStatus::indeterminate;
}

}  // namespace

SliceStatus verify_slice_status(GroupId g, const SliceEntry& e) {
  auto ab = rep_as_rho_multiple(e.suspension);
  if (!ab) return SliceStatus::indeterminate;
  const FSum s = fsum_normalize(e.coeff);
  if (fsum_is_zero(s)) return SliceStatus::yes;
  bool indeterminate = false;
  for (const FPiece& p : s) {
    const SliceStatus st = verify_piece(g, e.level, p.name, p.mult, ab->first, ab->second);
    if (st == SliceStatus::no) return SliceStatus::no;
    if (st == SliceStatus::indeterminate) indeterminate = true;
  }
  return indeterminate ? SliceStatus::indeterminate : SliceStatus::yes;
}

SliceStatus verify_slice_status(const SliceTable& t) {
  SliceStatus worst = SliceStatus::yes;
  for (const SliceEntry& e : t.entries) {
    const SliceStatus st = verify_slice_status(t.source.group, e);
    if (st == SliceStatus::no) return SliceStatus::no;
    if (st == SliceStatus::indeterminate) worst = SliceStatus::indeterminate;
  }
  return worst;
}

// ---------------------------------------------------------------- mod 2

namespace {

std::vector<AbHom> doubling(const MackeyFunctor& m) {
  std::vector<AbHom> comp;
  comp.reserve(m.lev.size());
  for (const AbGroup& a : m.lev) comp.push_back(hom_scale(hom_identity(a), 2));
  return comp;
}

bool k_concentrated(const MackeyFunctor& m) {
  for (int i = 1; i < m.nlevels(); ++i)
    if (!m.lev[static_cast<size_t>(i)].is_trivial()) return false;
  return true;
}

MackeyFunctor make_k_concentrated(const AbGroup& top) {
  MackeyFunctor m = mackey_zero(GroupId::K4);
  const AbGroup triv = m.lev[1];
  m.lev[0] = top;
  for (int i = 0; i < 3; ++i) {
    m.res_up[static_cast<size_t>(i)] = hom_zero(top, triv);
    m.tr_up[static_cast<size_t>(i)] = hom_zero(triv, top);
  }
  return m;
}

}  // namespace

MackeyFunctor mackey_mod2(const MackeyFunctor& m) {
  return mackey_map_cokernel(m, m, doubling(m));
}

MackeyFunctor mackey_two_torsion(const MackeyFunctor& m) {
  return mackey_map_kernel(m, m, doubling(m));
}

std::string describe_functor(const MackeyFunctor& m) {
  if (mackey_is_zero(m)) return "0";
  auto same_shape = [&](const MackeyFunctor& c) {
    for (size_t i = 0; i < m.lev.size(); ++i)
      if (m.lev[i].free != c.lev[i].free || m.lev[i].tor != c.lev[i].tor) return false;
    return true;
  };
  // The automorphism search refuses very large levels; an undescribed
  // functor is preferable to a crash there.
  auto iso = [&](const MackeyFunctor& c) {
    if (mackey_equal(m, c)) return true;
    try {
      return mackey_iso(m, c);
    } catch (const std::runtime_error&) {
      return false;
    }
  };
  std::vector<std::pair<std::string, MackeyFunctor>> atoms;
  for (const std::string& nm : catalog_names(m.group)) atoms.emplace_back(nm, catalog(m.group, nm));
  for (Int j = 2; j <= 10; ++j)
    atoms.emplace_back(g_power(j), realize_fsum(m.group, {FPiece{"g", j}}));
  for (const auto& [nm, c] : atoms)
    if (same_shape(c) && iso(c)) return nm;
  for (size_t i = 0; i < atoms.size(); ++i)
    for (size_t j = i; j < atoms.size(); ++j)
      for (bool flip : {false, true}) {
        if (flip && i == j) continue;
        const auto& x = flip ? atoms[j] : atoms[i];
        const auto& y = flip ? atoms[i] : atoms[j];
        MackeyFunctor sum = mackey_direct_sum({x.second, y.second});
        if (same_shape(sum) && iso(sum))
          return fsum_to_string(fsum_normalize(parse_fsum(atoms[i].first + "+" + atoms[j].first)));
      }
  return "";
}

// ---------------------------------------------------------------- HF recovery

const FSliceLevel* FSliceTable::at(int level) const {
  for (const FSliceLevel& l : levels)
    if (l.level == level) return &l;
  return nullptr;
}

namespace {

// Re-express Sigma^{(a+da)rho + (b+db)} H(sum) as Sigma^{a*rho+b} H(M): needs
// the closed-form homotopy of every piece at (da, db) concentrated in degree 0.
std::optional<MackeyFunctor> transport_em(GroupId g, const FSum& s, Int da, Int db) {
  std::vector<MackeyFunctor> parts;
  for (const FPiece& p : fsum_normalize(s)) {
    ClosedTable ct;
    try {
      ct = pi_closed(g, p.name, da, db);
    } catch (const std::domain_error&) {
      return std::nullopt;
    }
    for (const auto& [d, dsum] : ct.deg)
      if (d != 0 && !fsum_is_zero(dsum)) return std::nullopt;
    FSum at0 = ct.at(0);
    for (FPiece& q : at0) q.mult *= p.mult;
    if (!fsum_is_zero(at0)) parts.push_back(realize_fsum(g, at0));
  }
  if (parts.empty()) return mackey_zero(g);
  return mackey_direct_sum(parts);
}

}  // namespace

FSliceTable recover_F_slices(const SliceTable& zn, const SliceTable& zn1) {
  if (zn.source.group != GroupId::K4 || zn.source.coeff != "Z" ||
      zn1.source.group != GroupId::K4 || zn1.source.coeff != "Z" ||
      zn1.source.degree != zn.source.degree + 1)
    throw std::invalid_argument("recover_F_slices: expects K tables with Z coefficients in adjacent degrees");
  FSliceTable out;
  out.source = {GroupId::K4, "F", zn.source.degree};
  std::set<int> levels;
  for (const SliceEntry& e : zn.entries) levels.insert(e.level);
  for (const SliceEntry& e : zn1.entries) levels.insert(e.level);
  for (int t : levels) {
    const SliceEntry* ea = zn.at(t);
    const SliceEntry* eb = zn1.at(t);
    RORep w;
    MackeyFunctor A = mackey_zero(GroupId::K4);
    MackeyFunctor B = mackey_zero(GroupId::K4);
    bool aligned = true;
    if (ea && eb) {
      auto pa = rep_as_rho_multiple(ea->suspension);
      auto pb = rep_as_rho_multiple(eb->suspension);
      if (!pa || !pb) throw std::logic_error("recover_F_slices: non-rho suspension");
      if (*pa == *pb) {
        w = ea->suspension;
        A = realize_fsum(GroupId::K4, ea->coeff);
        B = realize_fsum(GroupId::K4, eb->coeff);
      } else if (auto tb = transport_em(GroupId::K4, eb->coeff, pb->first - pa->first,
                                        pb->second - pa->second)) {
        w = ea->suspension;
        A = realize_fsum(GroupId::K4, ea->coeff);
        B = *tb;
      } else if (auto ta = transport_em(GroupId::K4, ea->coeff, pa->first - pb->first,
                                        pa->second - pb->second)) {
        w = eb->suspension;
        A = *ta;
        B = realize_fsum(GroupId::K4, eb->coeff);
      } else {
        aligned = false;
        w = ea->suspension;
      }
    } else if (ea) {
      w = ea->suspension;
      A = realize_fsum(GroupId::K4, ea->coeff);
    } else {
      w = eb->suspension;
      B = realize_fsum(GroupId::K4, eb->coeff);
    }

    FSliceLevel lv;
    lv.level = t;
    lv.suspension = w;
    lv.carried_4k2 = ((t % 4) + 4) % 4 == 2;
    if (!aligned) {
      out.notes.push_back("level " + std::to_string(t) +
                          ": incompatible suspension forms; extension left open");
      out.levels.push_back(lv);
      continue;
    }
    MackeyFunctor endA = mackey_mod2(A);
    MackeyFunctor endB = mackey_two_torsion(B);
    const bool a0 = mackey_is_zero(endA);
    const bool b0 = mackey_is_zero(endB);
    if (a0 && b0) continue;
    if (b0)
      lv.candidates = {endA};
    else if (a0)
      lv.candidates = {endB};
    else if (k_concentrated(endA) && k_concentrated(endB)) {
      const ExtensionProblem ext = enumerate_extensions(endA.lev[0], endB.lev[0]);
      for (const AbGroup& grp : ext.candidates) lv.candidates.push_back(make_k_concentrated(grp));
    } else {
      out.notes.push_back("level " + std::to_string(t) +
                          ": extension of non-concentrated ends left open");
    }
    for (const MackeyFunctor& c : lv.candidates) lv.names.push_back(describe_functor(c));
    out.levels.push_back(lv);
  }
  return out;
}

}  // namespace slicecalc

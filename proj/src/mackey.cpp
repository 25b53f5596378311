#include "slicecalc/mackey.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include <gmpxx.h>

namespace slicecalc {

namespace {

Int narrow_z(const mpz_class& v) {
  if (!v.fits_slong_p()) throw std::overflow_error("mackey: value exceeds 64 bits");
  return v.get_si();
}

bool hom_equal(const AbHom& a, const AbHom& b) {
  return a.src == b.src && a.dst == b.dst &&
         reduce_mat(a.dst, a.m) == reduce_mat(b.dst, b.m);
}

// Uniform access to every structure map of a diagram.
enum EdgeKind { kResUp, kTrUp, kResDn, kTrDn, kWeylMid, kWeylE };

struct EdgeRef {
  EdgeKind kind;
  int idx;
  int src, dst;  // level indices
};

const std::vector<EdgeRef>& edge_list(GroupId g) {
  static const std::vector<EdgeRef> k4 = [] {
    std::vector<EdgeRef> e;
    for (int i = 0; i < 3; ++i) {
      e.push_back({kResUp, i, 0, 1 + i});
      e.push_back({kTrUp, i, 1 + i, 0});
      e.push_back({kResDn, i, 1 + i, 4});
      e.push_back({kTrDn, i, 4, 1 + i});
      e.push_back({kWeylMid, i, 1 + i, 1 + i});
    }
    e.push_back({kWeylE, 0, 4, 4});
    e.push_back({kWeylE, 1, 4, 4});
    return e;
  }();
  static const std::vector<EdgeRef> c2 = {
      {kResUp, 0, 0, 1}, {kTrUp, 0, 1, 0}, {kWeylE, 0, 1, 1}};
  return g == GroupId::K4 ? k4 : c2;
}

const AbHom& edge_get(const MackeyFunctor& m, const EdgeRef& e) {
  switch (e.kind) {
    case kResUp: return m.res_up[static_cast<size_t>(e.idx)];
    case kTrUp: return m.tr_up[static_cast<size_t>(e.idx)];
    case kResDn: return m.res_dn[static_cast<size_t>(e.idx)];
    case kTrDn: return m.tr_dn[static_cast<size_t>(e.idx)];
    case kWeylMid: return m.weyl_mid[static_cast<size_t>(e.idx)];
    default: return m.weyl_e[static_cast<size_t>(e.idx)];
  }
}

AbHom& edge_get(MackeyFunctor& m, const EdgeRef& e) {
  return const_cast<AbHom&>(edge_get(static_cast<const MackeyFunctor&>(m), e));
}

std::string edge_name(GroupId g, const EdgeRef& e) {
  const auto& ln = level_names(g);
  std::ostringstream os;
  switch (e.kind) {
    case kResUp:
    case kResDn: os << "res(" << ln[static_cast<size_t>(e.src)] << "->" << ln[static_cast<size_t>(e.dst)] << ")"; break;
    case kTrUp:
    case kTrDn: os << "tr(" << ln[static_cast<size_t>(e.src)] << "->" << ln[static_cast<size_t>(e.dst)] << ")"; break;
    case kWeylMid: os << "weyl(" << ln[static_cast<size_t>(e.src)] << ")"; break;
    default: os << "weyl(e," << (e.idx == 0 ? "l" : "d") << ")"; break;
  }
  return os.str();
}

const char* mid_gen_name(int mid) {
  static const char* names[3] = {"l", "d", "r"};
  return names[mid];
}

// Coset representative used as the second bottom-level basis vector when
// inducing along `mid`; any generator other than the one generating `mid`.
const char* rep_name(int mid) { return mid == kMidR ? "d" : "r"; }

// Expected sizes of the map vectors for a group.
void check_shape(const MackeyFunctor& m, std::vector<std::string>& errs) {
  const bool k4 = m.group == GroupId::K4;
  const size_t nl = static_cast<size_t>(m.nlevels());
  if (m.lev.size() != nl) {
    errs.push_back("wrong number of levels");
    return;
  }
  const size_t nup = k4 ? 3 : 1, ndn = k4 ? 3 : 0, nwm = k4 ? 3 : 0,
               nwe = k4 ? 2 : 1;
  if (m.res_up.size() != nup || m.tr_up.size() != nup ||
      m.res_dn.size() != ndn || m.tr_dn.size() != ndn ||
      m.weyl_mid.size() != nwm || m.weyl_e.size() != nwe) {
    errs.push_back("wrong number of structure maps");
    return;
  }
  for (const auto& e : edge_list(m.group)) {
    const AbHom& h = edge_get(m, e);
    if (h.src != m.lev[static_cast<size_t>(e.src)] || h.dst != m.lev[static_cast<size_t>(e.dst)]) {
      errs.push_back(edge_name(m.group, e) + ": endpoint groups do not match levels");
      continue;
    }
    if (!is_well_defined(h.src, h.dst, h.m))
      errs.push_back(edge_name(m.group, e) + ": matrix not well defined");
  }
}

void init_edges(MackeyFunctor& m) {
  const bool k4 = m.group == GroupId::K4;
  m.res_up.assign(k4 ? 3 : 1, AbHom{});
  m.tr_up.assign(k4 ? 3 : 1, AbHom{});
  m.res_dn.assign(k4 ? 3 : 0, AbHom{});
  m.tr_dn.assign(k4 ? 3 : 0, AbHom{});
  m.weyl_mid.assign(k4 ? 3 : 0, AbHom{});
  m.weyl_e.assign(k4 ? 2 : 1, AbHom{});
}

// All automorphisms of a small group; free rank <= 2 supported.
std::vector<AbHom> automorphisms(const AbGroup& a) {
  const int n = a.ngens();
  if (n == 0) return {hom_identity(a)};
  std::vector<std::vector<Int>> choices;
  double total = 1;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const Int dr = a.gen_order(r), dc = a.gen_order(c);
      std::vector<Int> v;
      if (dr == 0) {
        if (dc == 0)
          v = {-2, -1, 0, 1, 2};
        else
          v = {0};
      } else {
        for (Int x = 0; x < dr; ++x) v.push_back(x);
      }
      total *= static_cast<double>(v.size());
      choices.push_back(std::move(v));
    }
  if (total > 2e6)
    throw std::runtime_error("isomorphism search unsupported for level " + a.to_string());
  std::vector<AbHom> out;
  std::vector<size_t> odo(choices.size(), 0);
  for (;;) {
    Mat m(static_cast<size_t>(n), std::vector<Int>(static_cast<size_t>(n)));
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        m[static_cast<size_t>(r)][static_cast<size_t>(c)] =
            choices[static_cast<size_t>(r * n + c)][odo[static_cast<size_t>(r * n + c)]];
    if (is_well_defined(a, a, m)) {
      AbHom h{a, a, m};
      if (kernel(h).grp.is_trivial() && cokernel(h).grp.is_trivial()) out.push_back(std::move(h));
    }
    size_t k = 0;
    while (k < odo.size() && ++odo[k] == choices[k].size()) odo[k++] = 0;
    if (k == odo.size()) break;
  }
  return out;
}

}  // namespace

std::string group_name(GroupId g) { return g == GroupId::K4 ? "K4" : "C2"; }

GroupId group_from_name(const std::string& s) {
  if (s == "K4") return GroupId::K4;
  if (s == "C2") return GroupId::C2;
  throw std::invalid_argument("unknown group '" + s + "'");
}

const std::vector<std::string>& level_names(GroupId g) {
  static const std::vector<std::string> k4 = {"K", "L", "D", "R", "e"};
  static const std::vector<std::string> c2 = {"C2", "e"};
  return g == GroupId::K4 ? k4 : c2;
}

bool MackeyFunctor::operator==(const MackeyFunctor& o) const {
  return mackey_equal(*this, o);
}

std::string MackeyFunctor::to_string() const {
  std::ostringstream os;
  os << group_name(group);
  if (!name.empty()) os << "[" << name << "]";
  os << "(";
  const auto& ln = level_names(group);
  for (size_t i = 0; i < lev.size(); ++i) {
    if (i) os << ", ";
    os << ln[i] << "=" << lev[i].to_string();
  }
  os << ")";
  return os.str();
}

AbHom weyl_bottom(const MackeyFunctor& m, const std::string& g) {
  const AbGroup& bot = m.bottom();
  if (g == "1") return hom_identity(bot);
  if (m.group == GroupId::C2) {
    if (g == "w") return m.weyl_e[0];
    throw std::invalid_argument("weyl_bottom: unknown element '" + g + "'");
  }
  if (g == "l") return m.weyl_e[0];
  if (g == "d") return m.weyl_e[1];
  if (g == "r") return hom_compose(m.weyl_e[0], m.weyl_e[1]);
  throw std::invalid_argument("weyl_bottom: unknown element '" + g + "'");
}

std::vector<std::string> check_axioms(const MackeyFunctor& m) {
  std::vector<std::string> errs;
  check_shape(m, errs);
  if (!errs.empty()) return errs;

  auto want = [&](const AbHom& a, const AbHom& b, const std::string& what) {
    if (!hom_equal(a, b)) errs.push_back(what);
  };

  if (m.group == GroupId::C2) {
    const AbHom& res = m.res_up[0];
    const AbHom& tr = m.tr_up[0];
    const AbHom& w = m.weyl_e[0];
    want(hom_compose(w, w), hom_identity(m.lev[1]), "weyl(e) is not an involution");
    want(hom_compose(w, res), res, "res not Weyl-invariant");
    want(hom_compose(tr, w), tr, "tr not Weyl-invariant");
    want(hom_compose(res, tr), hom_add(hom_identity(m.lev[1]), w),
         "double coset: res*tr != 1+weyl");
    return errs;
  }

  const auto& ln = level_names(m.group);
  const AbHom wl = m.weyl_e[0], wd = m.weyl_e[1];
  want(hom_compose(wl, wl), hom_identity(m.lev[4]), "weyl(e,l) is not an involution");
  want(hom_compose(wd, wd), hom_identity(m.lev[4]), "weyl(e,d) is not an involution");
  want(hom_compose(wl, wd), hom_compose(wd, wl), "weyl(e) generators do not commute");

  for (int i = 0; i < 3; ++i) {
    const auto si = static_cast<size_t>(i);
    const std::string li = ln[1 + si];
    const AbHom& wm = m.weyl_mid[si];
    want(hom_compose(wm, wm), hom_identity(m.lev[1 + si]),
         "weyl(" + li + ") is not an involution");
    want(hom_compose(wm, m.res_up[si]), m.res_up[si],
         "res(K->" + li + ") not Weyl-invariant");
    want(hom_compose(m.tr_up[si], wm), m.tr_up[si],
         "tr(" + li + "->K) not Weyl-invariant");
    // double cosets within one subgroup
    want(hom_compose(m.res_up[si], m.tr_up[si]),
         hom_add(hom_identity(m.lev[1 + si]), wm),
         "double coset at " + li + ": res*tr != 1+weyl");
    want(hom_compose(m.res_dn[si], m.tr_dn[si]),
         hom_add(hom_identity(m.lev[4]), weyl_bottom(m, mid_gen_name(i))),
         "double coset below " + li + ": res*tr != 1+weyl");
    // bottom-level equivariance
    const AbHom wh = weyl_bottom(m, mid_gen_name(i));
    want(hom_compose(wh, m.res_dn[si]), m.res_dn[si],
         "res(" + li + "->e) not invariant under its own generator");
    want(hom_compose(m.tr_dn[si], wh), m.tr_dn[si],
         "tr(e->" + li + ") not invariant under its own generator");
    for (int j = 0; j < 3; ++j) {
      if (j == i) continue;
      const AbHom wc = weyl_bottom(m, mid_gen_name(j));
      want(hom_compose(wc, m.res_dn[si]), hom_compose(m.res_dn[si], wm),
           "res(" + li + "->e) not Weyl-equivariant");
      want(hom_compose(m.tr_dn[si], wc), hom_compose(wm, m.tr_dn[si]),
           "tr(e->" + li + ") not Weyl-equivariant");
    }
  }
  // composite paths through the middle agree
  for (int i = 1; i < 3; ++i) {
    const auto si = static_cast<size_t>(i);
    want(hom_compose(m.res_dn[si], m.res_up[si]),
         hom_compose(m.res_dn[0], m.res_up[0]),
         "res(K->e) depends on the path (" + ln[1 + si] + " vs L)");
    want(hom_compose(m.tr_up[si], m.tr_dn[si]),
         hom_compose(m.tr_up[0], m.tr_dn[0]),
         "tr(e->K) depends on the path (" + ln[1 + si] + " vs L)");
  }
  // double cosets across distinct subgroups
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      const auto si = static_cast<size_t>(i), sj = static_cast<size_t>(j);
      want(hom_compose(m.res_up[sj], m.tr_up[si]),
           hom_compose(m.tr_dn[sj], m.res_dn[si]),
           "cross double coset (" + ln[1 + si] + "," + ln[1 + sj] + ") fails");
    }
  return errs;
}

bool mackey_equal(const MackeyFunctor& a, const MackeyFunctor& b) {
  if (a.group != b.group || a.lev != b.lev) return false;
  for (const auto& e : edge_list(a.group))
    if (!hom_equal(edge_get(a, e), edge_get(b, e))) return false;
  return true;
}

bool mackey_iso(const MackeyFunctor& a, const MackeyFunctor& b) {
  if (a.group != b.group || a.lev != b.lev) return false;
  if (mackey_equal(a, b)) return true;
  const int nl = a.nlevels();
  const auto& edges = edge_list(a.group);
  std::vector<std::vector<AbHom>> autos(static_cast<size_t>(nl));
  for (int i = 0; i < nl; ++i) autos[static_cast<size_t>(i)] = automorphisms(a.lev[static_cast<size_t>(i)]);
  std::vector<const AbHom*> phi(static_cast<size_t>(nl), nullptr);
  std::function<bool(int)> go = [&](int k) -> bool {
    if (k == nl) return true;
    for (const AbHom& cand : autos[static_cast<size_t>(k)]) {
      phi[static_cast<size_t>(k)] = &cand;
      bool ok = true;
      for (const auto& e : edges) {
        if (e.src > k || e.dst > k) continue;
        if (e.src != k && e.dst != k) continue;  // checked at an earlier depth
        if (!hom_equal(hom_compose(*phi[static_cast<size_t>(e.dst)], edge_get(a, e)),
                       hom_compose(edge_get(b, e), *phi[static_cast<size_t>(e.src)]))) {
          ok = false;
          break;
        }
      }
      if (ok && go(k + 1)) return true;
    }
    phi[static_cast<size_t>(k)] = nullptr;
    return false;
  };
  return go(0);
}

MackeyFunctor mackey_zero(GroupId g) {
  MackeyFunctor m;
  m.group = g;
  m.lev.assign(static_cast<size_t>(m.nlevels()), AbGroup::zero());
  init_edges(m);
  for (const auto& e : edge_list(g))
    edge_get(m, e) = hom_zero(m.lev[static_cast<size_t>(e.src)], m.lev[static_cast<size_t>(e.dst)]);
  return m;
}

bool mackey_is_zero(const MackeyFunctor& m) {
  return std::all_of(m.lev.begin(), m.lev.end(),
                     [](const AbGroup& g) { return g.is_trivial(); });
}

MackeyFunctor mackey_direct_sum(const std::vector<MackeyFunctor>& parts) {
  if (parts.empty()) throw std::invalid_argument("mackey_direct_sum: no parts");
  const GroupId g = parts[0].group;
  for (const auto& p : parts)
    if (p.group != g) throw std::invalid_argument("mackey_direct_sum: mixed groups");
  const int nl = parts[0].nlevels();
  std::vector<DirectSum> ds(static_cast<size_t>(nl));
  MackeyFunctor out;
  out.group = g;
  out.lev.resize(static_cast<size_t>(nl));
  for (int i = 0; i < nl; ++i) {
    std::vector<AbGroup> pieces;
    for (const auto& p : parts) pieces.push_back(p.lev[static_cast<size_t>(i)]);
    ds[static_cast<size_t>(i)] = direct_sum(pieces);
    out.lev[static_cast<size_t>(i)] = ds[static_cast<size_t>(i)].grp;
  }
  init_edges(out);
  for (const auto& e : edge_list(g)) {
    AbHom sum = hom_zero(out.lev[static_cast<size_t>(e.src)], out.lev[static_cast<size_t>(e.dst)]);
    for (size_t p = 0; p < parts.size(); ++p)
      sum = hom_add(sum, hom_compose(ds[static_cast<size_t>(e.dst)].inj[p],
                                     hom_compose(edge_get(parts[p], e),
                                                 ds[static_cast<size_t>(e.src)].proj[p])));
    edge_get(out, e) = sum;
  }
  bool named = std::all_of(parts.begin(), parts.end(),
                           [](const MackeyFunctor& p) { return !p.name.empty(); });
  if (named) {
    std::ostringstream os;
    for (size_t p = 0; p < parts.size(); ++p) os << (p ? "+" : "") << parts[p].name;
    out.name = os.str();
  }
  return out;
}

namespace {

AbHom dual_hom(const AbHom& f) {
  const AbGroup& a = f.src;
  const AbGroup& b = f.dst;
  Mat g(static_cast<size_t>(a.ngens()), std::vector<Int>(static_cast<size_t>(b.ngens()), 0));
  for (int ia = 0; ia < a.ngens(); ++ia)
    for (int ib = 0; ib < b.ngens(); ++ib) {
      const Int da = a.gen_order(ia), db = b.gen_order(ib);
      const Int v = f.m[static_cast<size_t>(ib)][static_cast<size_t>(ia)];
      if (da == 0 && db == 0) {
        g[static_cast<size_t>(ia)][static_cast<size_t>(ib)] = v;
      } else if (da != 0 && db != 0) {
        // well-definedness gives db | da*v
        g[static_cast<size_t>(ia)][static_cast<size_t>(ib)] = narrow_z(mpz_class(v) * da / db);
      } else if (da == 0 && db != 0) {
        if (v % db != 0)
          throw std::invalid_argument(
              "dual: component from a free generator into torsion is not dualizable");
      }
      // da != 0, db == 0 entries vanish by well-definedness
    }
  return make_hom(b, a, std::move(g));
}

}  // namespace

MackeyFunctor dual(const MackeyFunctor& m) {
  MackeyFunctor out;
  out.group = m.group;
  out.lev = m.lev;
  init_edges(out);
  for (size_t i = 0; i < m.res_up.size(); ++i) {
    out.res_up[i] = dual_hom(m.tr_up[i]);
    out.tr_up[i] = dual_hom(m.res_up[i]);
  }
  for (size_t i = 0; i < m.res_dn.size(); ++i) {
    out.res_dn[i] = dual_hom(m.tr_dn[i]);
    out.tr_dn[i] = dual_hom(m.res_dn[i]);
  }
  for (size_t i = 0; i < m.weyl_mid.size(); ++i) out.weyl_mid[i] = dual_hom(m.weyl_mid[i]);
  for (size_t i = 0; i < m.weyl_e.size(); ++i) out.weyl_e[i] = dual_hom(m.weyl_e[i]);
  if (!m.name.empty()) {
    auto dn = dual_name(m.group, m.name);
    if (dn) out.name = *dn;
  }
  return out;
}

MackeyFunctor induce(const MackeyFunctor& n, int mid) {
  if (n.group != GroupId::C2) throw std::invalid_argument("induce: expected a C2 diagram");
  if (mid < 0 || mid > 2) throw std::invalid_argument("induce: bad level");
  const AbGroup& n1 = n.lev[0];
  const AbGroup& n0 = n.lev[1];
  const AbHom& rho = n.res_up[0];
  const AbHom& tau = n.tr_up[0];
  const AbHom& w = n.weyl_e[0];
  const DirectSum h2 = direct_sum({n1, n1});
  const DirectSum e2 = direct_sum({n0, n0});

  // the two untouched middle levels: `plain` restricts diagonally, `twisted`
  // picks up the C2 Weyl action in its second coordinate
  const int plain = mid == kMidR ? kMidD : kMidR;
  const int twisted = (mid == kMidL || plain == kMidL) ? kMidD : kMidL;

  MackeyFunctor out;
  out.group = GroupId::K4;
  out.lev.assign(5, n0);
  out.lev[0] = n1;
  out.lev[static_cast<size_t>(1 + mid)] = h2.grp;
  out.lev[4] = e2.grp;
  init_edges(out);

  const auto sm = static_cast<size_t>(mid), sp = static_cast<size_t>(plain),
             st = static_cast<size_t>(twisted);
  out.res_up[sm] = hom_add(h2.inj[0], h2.inj[1]);
  out.tr_up[sm] = hom_add(h2.proj[0], h2.proj[1]);
  out.weyl_mid[sm] = hom_add(hom_compose(h2.inj[0], h2.proj[1]),
                             hom_compose(h2.inj[1], h2.proj[0]));
  out.res_up[sp] = rho;
  out.res_up[st] = rho;
  out.tr_up[sp] = tau;
  out.tr_up[st] = tau;
  out.weyl_mid[sp] = w;
  out.weyl_mid[st] = w;
  out.res_dn[sm] = hom_add(hom_compose(e2.inj[0], hom_compose(rho, h2.proj[0])),
                           hom_compose(e2.inj[1], hom_compose(rho, h2.proj[1])));
  out.tr_dn[sm] = hom_add(hom_compose(h2.inj[0], hom_compose(tau, e2.proj[0])),
                          hom_compose(h2.inj[1], hom_compose(tau, e2.proj[1])));
  out.res_dn[sp] = hom_add(e2.inj[0], e2.inj[1]);
  out.tr_dn[sp] = hom_add(e2.proj[0], e2.proj[1]);
  out.res_dn[st] = hom_add(e2.inj[0], hom_compose(e2.inj[1], w));
  out.tr_dn[st] = hom_add(e2.proj[0], hom_compose(w, e2.proj[1]));

  const AbHom dw = hom_add(hom_compose(e2.inj[0], hom_compose(w, e2.proj[0])),
                           hom_compose(e2.inj[1], hom_compose(w, e2.proj[1])));
  const AbHom sw = hom_add(hom_compose(e2.inj[0], e2.proj[1]),
                           hom_compose(e2.inj[1], e2.proj[0]));
  const AbHom dsw = hom_compose(dw, sw);
  // actions of l and d: the generator of `mid` acts diag(w,w), the chosen
  // representative swaps the coordinates
  if (mid == kMidL) {
    out.weyl_e = {dw, dsw};
  } else if (mid == kMidD) {
    out.weyl_e = {dsw, dw};
  } else {
    out.weyl_e = {dsw, sw};
  }
  if (!n.name.empty())
    out.name = "ind_" + level_names(GroupId::K4)[static_cast<size_t>(1 + mid)] + "(" + n.name + ")";
  return out;
}

MackeyFunctor restrict_to(const MackeyFunctor& m, int mid) {
  if (m.group != GroupId::K4) throw std::invalid_argument("restrict_to: expected a K4 diagram");
  if (mid < 0 || mid > 2) throw std::invalid_argument("restrict_to: bad level");
  MackeyFunctor out;
  out.group = GroupId::C2;
  out.lev = {m.lev[static_cast<size_t>(1 + mid)], m.lev[4]};
  init_edges(out);
  out.res_up[0] = m.res_dn[static_cast<size_t>(mid)];
  out.tr_up[0] = m.tr_dn[static_cast<size_t>(mid)];
  out.weyl_e[0] = weyl_bottom(m, mid_gen_name(mid));
  if (!m.name.empty())
    out.name = "res_" + level_names(GroupId::K4)[static_cast<size_t>(1 + mid)] + "(" + m.name + ")";
  return out;
}

UnderlyingData restrict_to_e(const MackeyFunctor& m) {
  if (m.group != GroupId::K4) throw std::invalid_argument("restrict_to_e: expected a K4 diagram");
  return UnderlyingData{m.lev[4], m.weyl_e[0], m.weyl_e[1]};
}

MackeyFunctor pullback(const MackeyFunctor& n, int mid) {
  if (n.group != GroupId::C2) throw std::invalid_argument("pullback: expected a C2 diagram");
  if (mid < 0 || mid > 2) throw std::invalid_argument("pullback: bad level");
  MackeyFunctor out = mackey_zero(GroupId::K4);
  out.lev[0] = n.lev[0];
  out.lev[static_cast<size_t>(1 + mid)] = n.lev[1];
  init_edges(out);
  for (const auto& e : edge_list(GroupId::K4))
    edge_get(out, e) = hom_zero(out.lev[static_cast<size_t>(e.src)], out.lev[static_cast<size_t>(e.dst)]);
  out.res_up[static_cast<size_t>(mid)] = n.res_up[0];
  out.tr_up[static_cast<size_t>(mid)] = n.tr_up[0];
  out.weyl_mid[static_cast<size_t>(mid)] = n.weyl_e[0];
  if (!n.name.empty())
    out.name = "phi_" + level_names(GroupId::K4)[static_cast<size_t>(1 + mid)] + "*(" + n.name + ")";
  return out;
}

MackeyFunctor pullback_ldr(const MackeyFunctor& n) {
  return mackey_direct_sum({pullback(n, kMidL), pullback(n, kMidD), pullback(n, kMidR)});
}

MackeyFunctor pullback_from_trivial(const AbGroup& a) {
  MackeyFunctor out = mackey_zero(GroupId::K4);
  out.lev[0] = a;
  init_edges(out);
  for (const auto& e : edge_list(GroupId::K4))
    edge_get(out, e) = hom_zero(out.lev[static_cast<size_t>(e.src)], out.lev[static_cast<size_t>(e.dst)]);
  out.name = "phi_K*(" + a.to_string() + ")";
  return out;
}

UnitMap unit_map(const MackeyFunctor& m, int mid) {
  if (m.group != GroupId::K4) throw std::invalid_argument("unit_map: expected a K4 diagram");
  UnitMap u;
  u.target = induce(restrict_to(m, mid), mid);
  // direct_sum is deterministic, so these agree with the sums used by induce
  const DirectSum h2 = direct_sum({m.lev[static_cast<size_t>(1 + mid)], m.lev[static_cast<size_t>(1 + mid)]});
  const DirectSum e2 = direct_sum({m.lev[4], m.lev[4]});
  u.comp.resize(5);
  u.comp[0] = m.res_up[static_cast<size_t>(mid)];
  u.comp[static_cast<size_t>(1 + mid)] =
      hom_add(h2.inj[0], hom_compose(h2.inj[1], m.weyl_mid[static_cast<size_t>(mid)]));
  for (int o = 0; o < 3; ++o)
    if (o != mid) u.comp[static_cast<size_t>(1 + o)] = m.res_dn[static_cast<size_t>(o)];
  u.comp[4] = hom_add(e2.inj[0], hom_compose(e2.inj[1], weyl_bottom(m, rep_name(mid))));
  return u;
}

std::vector<std::string> check_mackey_map(const MackeyFunctor& src, const MackeyFunctor& dst,
                                          const std::vector<AbHom>& comp) {
  std::vector<std::string> errs;
  if (src.group != dst.group) {
    errs.push_back("source and target live over different groups");
    return errs;
  }
  if (comp.size() != static_cast<size_t>(src.nlevels())) {
    errs.push_back("wrong number of components");
    return errs;
  }
  for (size_t i = 0; i < comp.size(); ++i)
    if (comp[i].src != src.lev[i] || comp[i].dst != dst.lev[i]) {
      errs.push_back("component " + level_names(src.group)[i] + " has wrong endpoints");
      return errs;
    }
  for (const auto& e : edge_list(src.group))
    if (!hom_equal(hom_compose(comp[static_cast<size_t>(e.dst)], edge_get(src, e)),
                   hom_compose(edge_get(dst, e), comp[static_cast<size_t>(e.src)])))
      errs.push_back("does not commute with " + edge_name(src.group, e));
  return errs;
}

MackeyFunctor mackey_map_kernel(const MackeyFunctor& src, const MackeyFunctor& dst,
                                const std::vector<AbHom>& comp) {
  auto errs = check_mackey_map(src, dst, comp);
  if (!errs.empty()) throw std::invalid_argument("mackey_map_kernel: " + errs[0]);
  const int nl = src.nlevels();
  std::vector<KernelResult> kr(static_cast<size_t>(nl));
  MackeyFunctor out;
  out.group = src.group;
  out.lev.resize(static_cast<size_t>(nl));
  for (int i = 0; i < nl; ++i) {
    kr[static_cast<size_t>(i)] = kernel(comp[static_cast<size_t>(i)]);
    out.lev[static_cast<size_t>(i)] = kr[static_cast<size_t>(i)].grp;
  }
  init_edges(out);
  for (const auto& e : edge_list(src.group)) {
    const KernelResult& ka = kr[static_cast<size_t>(e.src)];
    const KernelResult& kb = kr[static_cast<size_t>(e.dst)];
    const AbHom& f = edge_get(src, e);
    const int rows = kb.grp.ngens(), cols = ka.grp.ngens();
    Mat g(static_cast<size_t>(rows), std::vector<Int>(static_cast<size_t>(cols), 0));
    for (int j = 0; j < cols; ++j) {
      std::vector<Int> gen(static_cast<size_t>(src.lev[static_cast<size_t>(e.src)].ngens()));
      for (size_t r = 0; r < gen.size(); ++r) gen[r] = ka.incl.m[r][static_cast<size_t>(j)];
      const std::vector<Int> v = hom_apply(f, gen);
      auto sol = solve_mod(kb.incl.m, src.lev[static_cast<size_t>(e.dst)], v);
      if (!sol)
        throw std::logic_error("mackey_map_kernel: kernel not preserved by " +
                               edge_name(src.group, e));
      const std::vector<Int> red = reduce_vec(kb.grp, *sol);
      for (int r = 0; r < rows; ++r) g[static_cast<size_t>(r)][static_cast<size_t>(j)] = red[static_cast<size_t>(r)];
    }
    edge_get(out, e) = make_hom(ka.grp, kb.grp, std::move(g));
  }
  return out;
}

MackeyFunctor mackey_map_cokernel(const MackeyFunctor& src, const MackeyFunctor& dst,
                                  const std::vector<AbHom>& comp) {
  auto errs = check_mackey_map(src, dst, comp);
  if (!errs.empty()) throw std::invalid_argument("mackey_map_cokernel: " + errs[0]);
  const int nl = src.nlevels();
  std::vector<CokernelResult> ck(static_cast<size_t>(nl));
  MackeyFunctor out;
  out.group = src.group;
  out.lev.resize(static_cast<size_t>(nl));
  for (int i = 0; i < nl; ++i) {
    ck[static_cast<size_t>(i)] = cokernel(comp[static_cast<size_t>(i)]);
    out.lev[static_cast<size_t>(i)] = ck[static_cast<size_t>(i)].grp;
  }
  init_edges(out);
  for (const auto& e : edge_list(src.group)) {
    const CokernelResult& ca = ck[static_cast<size_t>(e.src)];
    const CokernelResult& cb = ck[static_cast<size_t>(e.dst)];
    const AbHom& f = edge_get(dst, e);
    // independent of the chosen set-level section: f carries im(comp) to
    // im(comp), which proj kills
    const AbHom lift{ca.grp, dst.lev[static_cast<size_t>(e.src)], ca.section};
    const AbHom g = hom_compose(cb.proj, hom_compose(f, lift));
    edge_get(out, e) = make_hom(ca.grp, cb.grp, g.m);
  }
  return out;
}

MackeyFunctor gn(int n) {
  if (n < 0) throw std::invalid_argument("gn: negative rank");
  MackeyFunctor out = mackey_zero(GroupId::K4);
  out.lev[0] = AbGroup::elem_abelian(2, n);
  init_edges(out);
  for (const auto& e : edge_list(GroupId::K4))
    edge_get(out, e) = hom_zero(out.lev[static_cast<size_t>(e.src)], out.lev[static_cast<size_t>(e.dst)]);
  out.name = n == 1 ? "g" : "g^" + std::to_string(n);
  return out;
}

std::optional<std::string> dual_name(GroupId g, const std::string& name) {
  static const std::map<std::string, std::string> k4 = {
      {"Z", "Z*"},           {"Z*", "Z"},
      {"Z(2,1)", "Z(2,1)*"}, {"Z(2,1)*", "Z(2,1)"},
      {"M", "M"},            {"m", "m*"},
      {"m*", "m"},           {"mg", "mg*"},
      {"mg*", "mg"},         {"phi*F", "phi*F*"},
      {"phi*F*", "phi*F"},   {"phi*f", "phi*f"},
      {"g", "g"}};
  static const std::map<std::string, std::string> c2 = {
      {"Z", "Z*"}, {"Z*", "Z"}, {"fhat", "fhat"}, {"F", "F*"},
      {"F*", "F"}, {"f", "f"},  {"g", "g"}};
  const auto& m = g == GroupId::K4 ? k4 : c2;
  auto it = m.find(name);
  if (it == m.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------- JSON

namespace {

Mat mat_from_json(const nlohmann::json& j, int rows, int cols) {
  Mat m(static_cast<size_t>(rows), std::vector<Int>(static_cast<size_t>(cols), 0));
  if (j.is_null() || j.empty()) return m;  // [] is shorthand for zero
  if (static_cast<int>(j.size()) != rows)
    throw std::invalid_argument("matrix has wrong number of rows");
  for (int r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<size_t>(r)];
    if (static_cast<int>(row.size()) != cols)
      throw std::invalid_argument("matrix has wrong number of columns");
    for (int c = 0; c < cols; ++c) m[static_cast<size_t>(r)][static_cast<size_t>(c)] = row[static_cast<size_t>(c)].get<Int>();
  }
  return m;
}

}  // namespace

void to_json(nlohmann::json& j, const MackeyFunctor& m) {
  j = nlohmann::json::object();
  j["group"] = group_name(m.group);
  if (!m.name.empty()) j["name"] = m.name;
  j["levels"] = m.lev;
  auto mats = [](const std::vector<AbHom>& hs) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& h : hs) a.push_back(h.m);
    return a;
  };
  j["res_up"] = mats(m.res_up);
  j["tr_up"] = mats(m.tr_up);
  if (m.group == GroupId::K4) {
    j["res_dn"] = mats(m.res_dn);
    j["tr_dn"] = mats(m.tr_dn);
    j["weyl_mid"] = mats(m.weyl_mid);
  }
  j["weyl_e"] = mats(m.weyl_e);
}

void from_json(const nlohmann::json& j, MackeyFunctor& m) {
  m = MackeyFunctor{};
  m.group = group_from_name(j.at("group").get<std::string>());
  if (j.contains("name")) m.name = j.at("name").get<std::string>();
  m.lev = j.at("levels").get<std::vector<AbGroup>>();
  if (m.lev.size() != static_cast<size_t>(m.nlevels()))
    throw std::invalid_argument("wrong number of levels");
  init_edges(m);
  auto read = [&](const char* key, EdgeKind kind, size_t count) {
    nlohmann::json arr = nlohmann::json::array();
    if (j.contains(key)) arr = j.at(key);
    if (arr.size() != count)
      throw std::invalid_argument(std::string(key) + ": expected " +
                                  std::to_string(count) + " matrices");
    for (const auto& e : edge_list(m.group)) {
      if (e.kind != kind) continue;
      const AbGroup& src = m.lev[static_cast<size_t>(e.src)];
      const AbGroup& dst = m.lev[static_cast<size_t>(e.dst)];
      edge_get(m, e) = make_hom(
          src, dst, mat_from_json(arr[static_cast<size_t>(e.idx)], dst.ngens(), src.ngens()));
    }
  };
  const bool k4 = m.group == GroupId::K4;
  read("res_up", kResUp, k4 ? 3 : 1);
  read("tr_up", kTrUp, k4 ? 3 : 1);
  if (k4) {
    read("res_dn", kResDn, 3);
    read("tr_dn", kTrDn, 3);
    read("weyl_mid", kWeylMid, 3);
  }
  read("weyl_e", kWeylE, k4 ? 2 : 1);
}

}  // namespace slicecalc

#include "slicecalc/sss.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <limits>
#include <set>
#include <tuple>

namespace slicecalc {

namespace {

bool all_zero(const std::vector<Int>& v) {
  return std::all_of(v.begin(), v.end(), [](Int x) { return x == 0; });
}

std::string join_ints(const std::vector<Int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(v[i]);
  }
  return s;
}

std::string coord_str(const std::pair<Int, Int>& p) {
  return "(" + std::to_string(p.first) + "," + std::to_string(p.second) + ")";
}

}  // namespace

// --------------------------------------------------------------- RankVector

bool RankVector::is_zero() const {
  return all_zero(free) && all_zero(f2) && all_zero(z4);
}

RankVector& RankVector::operator+=(const RankVector& o) {
  if (nlevels() != o.nlevels())
    throw std::invalid_argument("rank vector level mismatch");
  for (std::size_t i = 0; i < free.size(); ++i) {
    free[i] += o.free[i];
    f2[i] += o.f2[i];
    z4[i] += o.z4[i];
  }
  return *this;
}

std::string RankVector::to_string() const {
  return "free[" + join_ints(free) + "] f2[" + join_ints(f2) + "] z4[" +
         join_ints(z4) + "]";
}

RankVector rank_vector_zero(std::size_t nlevels) {
  RankVector r;
  r.free.assign(nlevels, 0);
  r.f2.assign(nlevels, 0);
  r.z4.assign(nlevels, 0);
  return r;
}

RankVector rank_vector(const MackeyFunctor& m) {
  RankVector r = rank_vector_zero(static_cast<std::size_t>(m.nlevels()));
  for (std::size_t i = 0; i < r.nlevels(); ++i) {
    r.free[i] = m.lev[i].free;
    for (Int t : m.lev[i].tor) {
      if (t == 2)
        ++r.f2[i];
      else if (t == 4)
        ++r.z4[i];
      else
        throw std::invalid_argument("rank vector undefined for torsion Z/" +
                                    std::to_string(t));
    }
  }
  return r;
}

// -------------------------------------------------------------------- Chart

const Cell* Chart::at(Int x, Int y) const {
  for (const auto& c : cells)
    if (c.x == x && c.y == y) return &c;
  return nullptr;
}

Chart assemble_e2(const SliceTable& table) {
  Chart chart;
  chart.source = table.source;
  chart.abutment[table.source.degree] = table.source.coeff;

  std::map<std::pair<Int, Int>, FSum> merged;
  for (const auto& entry : table.entries) {
    auto rho = rep_as_rho_multiple(entry.suspension);
    if (!rho)
      throw std::invalid_argument(
          "slice suspension is not of the form a*rho+b");
    for (const auto& piece : entry.coeff) {
      ClosedTable pi =
          pi_closed(table.source.group, piece.name, rho->first, rho->second);
      for (const auto& [degree, fs] : pi.deg) {
        FSum scaled = fs;
        for (auto& p : scaled) p.mult *= piece.mult;
        auto key = std::make_pair(degree, Int(entry.level) - degree);
        merged[key] = fsum_add(std::move(merged[key]), scaled);
      }
    }
  }

  for (auto& [key, fs] : merged) {
    Cell c;
    c.x = key.first;
    c.y = key.second;
    c.slice_level = c.x + c.y;
    c.entry = fsum_normalize(std::move(fs));
    if (fsum_is_zero(c.entry)) continue;
    c.ranks = rank_vector(realize_fsum(table.source.group, c.entry));
    chart.cells.push_back(std::move(c));
  }
  std::sort(chart.cells.begin(), chart.cells.end(),
            [](const Cell& a, const Cell& b) {
              if (a.slice_level != b.slice_level)
                return a.slice_level < b.slice_level;
              return a.x > b.x;
            });
  return chart;
}

// ------------------------------------------------------------------- solver

namespace {

// Remaining movable (Z/2) ranks per cell, indexed like chart.cells.
using Rem = std::vector<std::vector<Int>>;

struct PairGeom {
  Int r = 2;
  std::size_t src = 0;
  std::size_t tgt = 0;
  bool required = false;  // a pinned differential lives on this pair
};

RankVector abutment_ranks(const Chart& chart, Int column,
                          std::size_t nlevels) {
  auto it = chart.abutment.find(column);
  if (it == chart.abutment.end()) return rank_vector_zero(nlevels);
  return rank_vector(catalog(chart.source.group, it->second));
}

// Survivors of an abutment column must stack, deepest filtration first, into
// an iterated extension realizing the abutment entry.  Free ranks add up
// exactly; torsion on top of earlier free rank may (but need not) be
// absorbed into a nonsplit extension.  `col` holds (free, f2, z4) triples
// sorted by y descending.
bool column_composes(const std::vector<std::array<std::vector<Int>, 3>>& col,
                     const RankVector& abut, std::size_t nlevels) {
  for (std::size_t l = 0; l < nlevels; ++l) {
    Int free_total = 0, f2_total = 0, z4_total = 0;
    Int max_f2 = 0, max_z4 = 0, max_joint = 0;
    Int acc_free = 0;
    for (const auto& ranks : col) {
      Int cf = ranks[0][l], c2 = ranks[1][l], c4 = ranks[2][l];
      free_total += cf;
      f2_total += c2;
      z4_total += c4;
      max_f2 += std::min(c2, acc_free);
      max_z4 += std::min(c4, acc_free);
      max_joint += std::min(c2 + c4, acc_free);
      acc_free += cf;
    }
    if (free_total != abut.free[l]) return false;
    Int need_f2 = f2_total - abut.f2[l];
    Int need_z4 = z4_total - abut.z4[l];
    if (need_f2 < 0 || need_z4 < 0) return false;
    if (need_f2 > max_f2 || need_z4 > max_z4) return false;
    if (need_f2 + need_z4 > max_joint) return false;
  }
  return true;
}

bool column_composes(const Chart& chart, Int column, const Rem& rem,
                     const RankVector& abut) {
  std::vector<std::pair<Int, std::size_t>> order;  // (y, cell index)
  for (std::size_t i = 0; i < chart.cells.size(); ++i)
    if (chart.cells[i].x == column) order.emplace_back(chart.cells[i].y, i);
  std::sort(order.begin(), order.end(), std::greater<>());
  std::vector<std::array<std::vector<Int>, 3>> col;
  for (auto [y, i] : order)
    col.push_back(
        {chart.cells[i].ranks.free, rem[i], chart.cells[i].ranks.z4});
  return column_composes(col, abut, abut.free.size());
}

struct Solver {
  const Chart& chart;
  std::size_t nlevels;
  std::vector<PairGeom> pairs;
  Rem rem;
  std::vector<RankVector> transfer;  // per pair, the chosen move
  std::vector<std::vector<Differential>>& out;
  std::size_t cap;
  bool overflow = false;

  Solver(const Chart& c, std::vector<std::vector<Differential>>& o,
         std::size_t cap_)
      : chart(c), out(o), cap(cap_) {
    nlevels = chart.cells.empty() ? 0 : chart.cells[0].ranks.nlevels();
    for (const auto& cell : chart.cells) rem.push_back(cell.ranks.f2);
  }

  bool in_abutment(std::size_t i) const {
    return chart.abutment.count(chart.cells[i].x) > 0;
  }

  // Optimistic reachability: a cell off the abutment can still cancel at
  // most the summed remaining ranks of its partners among pairs not yet
  // decided.  Partner ranks only shrink, so this never prunes a solution.
  bool feasible(std::size_t next_pair) const {
    std::vector<std::vector<Int>> bound(chart.cells.size(),
                                        std::vector<Int>(nlevels, 0));
    for (std::size_t j = next_pair; j < pairs.size(); ++j) {
      for (std::size_t l = 0; l < nlevels; ++l) {
        bound[pairs[j].src][l] += rem[pairs[j].tgt][l];
        bound[pairs[j].tgt][l] += rem[pairs[j].src][l];
      }
    }
    for (std::size_t i = 0; i < chart.cells.size(); ++i) {
      if (in_abutment(i)) continue;
      for (std::size_t l = 0; l < nlevels; ++l)
        if (rem[i][l] > bound[i][l]) return false;
    }
    return true;
  }

  bool accept() const {
    for (std::size_t i = 0; i < chart.cells.size(); ++i)
      if (!in_abutment(i) && !all_zero(rem[i])) return false;
    std::set<Int> cols;
    for (const auto& cell : chart.cells) cols.insert(cell.x);
    for (const auto& [col, name] : chart.abutment) cols.insert(col);
    for (Int col : cols) {
      if (!chart.abutment.count(col)) continue;
      if (!column_composes(chart, col, rem,
                           abutment_ranks(chart, col, nlevels)))
        return false;
    }
    return true;
  }

  void record() {
    std::vector<Differential> sol;
    for (std::size_t j = 0; j < pairs.size(); ++j) {
      if (transfer[j].is_zero()) continue;
      Differential d;
      d.r = pairs[j].r;
      d.from = {chart.cells[pairs[j].src].x, chart.cells[pairs[j].src].y};
      d.to = {chart.cells[pairs[j].tgt].x, chart.cells[pairs[j].tgt].y};
      d.rank_transferred = transfer[j];
      sol.push_back(std::move(d));
    }
    std::sort(sol.begin(), sol.end(),
              [](const Differential& a, const Differential& b) {
                return std::tie(a.r, a.from, a.to) <
                       std::tie(b.r, b.from, b.to);
              });
    if (out.size() < cap)
      out.push_back(std::move(sol));
    else
      overflow = true;
  }

  void search(std::size_t idx) {
    if (overflow) return;
    if (!feasible(idx)) return;
    if (idx == pairs.size()) {
      if (accept()) record();
      return;
    }
    const PairGeom& p = pairs[idx];
    std::vector<Int> cap_l(nlevels);
    for (std::size_t l = 0; l < nlevels; ++l)
      cap_l[l] = std::min(rem[p.src][l], rem[p.tgt][l]);
    std::vector<Int> v(nlevels, 0);
    for (;;) {
      bool zero = all_zero(v);
      if (!(zero && p.required)) {
        for (std::size_t l = 0; l < nlevels; ++l) {
          rem[p.src][l] -= v[l];
          rem[p.tgt][l] -= v[l];
        }
        transfer[idx].f2 = v;
        search(idx + 1);
        transfer[idx] = rank_vector_zero(nlevels);
        for (std::size_t l = 0; l < nlevels; ++l) {
          rem[p.src][l] += v[l];
          rem[p.tgt][l] += v[l];
        }
      }
      std::size_t l = 0;
      while (l < nlevels && v[l] == cap_l[l]) v[l++] = 0;
      if (l == nlevels) break;
      ++v[l];
    }
  }
};

std::string solution_to_string(const std::vector<Differential>& sol) {
  std::string s;
  for (const auto& d : sol) {
    if (!s.empty()) s += ", ";
    s += "d" + std::to_string(d.r) + " " + coord_str(d.from) + "->" +
         coord_str(d.to) + " f2[" + join_ints(d.rank_transferred.f2) + "]";
  }
  return s.empty() ? "(no differentials)" : s;
}

}  // namespace

std::vector<std::vector<Differential>>
all_forced_solutions(const Chart& e2, std::size_t cap,
                     const std::vector<NamedDifferential>& pinned) {
  std::vector<std::vector<Differential>> out;
  std::size_t nlevels =
      e2.cells.empty() ? (e2.source.group == GroupId::K4 ? 5 : 2)
                       : e2.cells[0].ranks.nlevels();

  // Free and Z/4 ranks never move, so their placement is decided at E2.
  for (const auto& cell : e2.cells) {
    if (e2.abutment.count(cell.x)) continue;
    if (!all_zero(cell.ranks.free) || !all_zero(cell.ranks.z4)) return out;
  }
  for (const auto& [col, name] : e2.abutment) {
    RankVector abut = rank_vector(catalog(e2.source.group, name));
    std::vector<Int> free_total(nlevels, 0);
    for (const auto& cell : e2.cells)
      if (cell.x == col)
        for (std::size_t l = 0; l < nlevels; ++l)
          free_total[l] += cell.ranks.free[l];
    if (free_total != abut.free) return out;
  }

  Solver solver(e2, out, cap);
  for (std::size_t i = 0; i < e2.cells.size(); ++i) {
    for (std::size_t j = 0; j < e2.cells.size(); ++j) {
      if (e2.cells[j].x != e2.cells[i].x - 1) continue;
      Int r = e2.cells[j].y - e2.cells[i].y;
      if (r < 2) continue;
      solver.pairs.push_back({r, i, j, false});
    }
  }
  std::sort(solver.pairs.begin(), solver.pairs.end(),
            [&](const PairGeom& a, const PairGeom& b) {
              return std::tie(a.r, e2.cells[a.src].y, e2.cells[a.src].x) <
                     std::tie(b.r, e2.cells[b.src].y, e2.cells[b.src].x);
            });
  for (const auto& nd : pinned) {
    bool found = false;
    for (auto& p : solver.pairs) {
      if (p.r == nd.r &&
          std::make_pair(e2.cells[p.src].x, e2.cells[p.src].y) == nd.from &&
          std::make_pair(e2.cells[p.tgt].x, e2.cells[p.tgt].y) == nd.to) {
        p.required = true;
        found = true;
      }
    }
    if (!found) return {};
  }
  solver.transfer.assign(solver.pairs.size(),
                         rank_vector_zero(solver.nlevels));
  solver.search(0);
  return out;
}

Chart solve_forced_differentials(const Chart& e2,
                                 const std::vector<NamedDifferential>& pinned) {
  auto sols = all_forced_solutions(e2, 8, pinned);
  if (sols.empty())
    throw ChartSolveError(
        "no-solution: no differential assignment kills every column off the "
        "abutment of Sigma^" +
        std::to_string(e2.source.degree) + " H(" + e2.source.coeff + ")");
  if (sols.size() > 1) {
    std::string msg = "multiple-solutions: " + std::to_string(sols.size()) +
                      " differential assignments converge";
    for (const auto& s : sols) msg += "\n  " + solution_to_string(s);
    throw ChartSolveError(msg);
  }
  Chart solved = e2;
  solved.differentials = sols.front();
  return solved;
}

// -------------------------------------------------------------- euler check

namespace {

// Replays chart.differentials over the E2 ranks.  Returns false on any
// bookkeeping violation (bad geometry, missing cells, overdrawn ranks).
bool replay(const Chart& chart, Rem& rem) {
  rem.clear();
  for (const auto& cell : chart.cells) rem.push_back(cell.ranks.f2);
  auto index_of = [&](const std::pair<Int, Int>& pos) -> std::ptrdiff_t {
    for (std::size_t i = 0; i < chart.cells.size(); ++i)
      if (chart.cells[i].x == pos.first && chart.cells[i].y == pos.second)
        return static_cast<std::ptrdiff_t>(i);
    return -1;
  };
  for (const auto& d : chart.differentials) {
    if (d.r < 2) return false;
    if (d.to.first != d.from.first - 1 || d.to.second != d.from.second + d.r)
      return false;
    auto si = index_of(d.from), ti = index_of(d.to);
    if (si < 0 || ti < 0) return false;
    if (!all_zero(d.rank_transferred.free) ||
        !all_zero(d.rank_transferred.z4))
      return false;
    const auto& v = d.rank_transferred.f2;
    if (v.size() != rem[si].size()) return false;
    for (std::size_t l = 0; l < v.size(); ++l) {
      if (v[l] < 0) return false;
      rem[si][l] -= v[l];
      rem[ti][l] -= v[l];
      if (rem[si][l] < 0 || rem[ti][l] < 0) return false;
    }
  }
  return true;
}

}  // namespace

bool euler_check(const Chart& chart) {
  Rem rem;
  if (!replay(chart, rem)) return false;
  std::size_t nlevels =
      chart.cells.empty() ? (chart.source.group == GroupId::K4 ? 5 : 2)
                          : chart.cells[0].ranks.nlevels();
  for (const auto& [col, name] : chart.abutment)
    if (!catalog_has(chart.source.group, name)) return false;
  for (std::size_t i = 0; i < chart.cells.size(); ++i) {
    if (chart.abutment.count(chart.cells[i].x)) continue;
    if (!all_zero(chart.cells[i].ranks.free) ||
        !all_zero(chart.cells[i].ranks.z4) || !all_zero(rem[i]))
      return false;
  }
  std::set<Int> cols;
  for (const auto& cell : chart.cells) cols.insert(cell.x);
  for (const auto& [col, name] : chart.abutment) cols.insert(col);
  for (Int col : cols) {
    RankVector abut = abutment_ranks(chart, col, nlevels);
    if (!chart.abutment.count(col)) continue;
    if (!column_composes(chart, col, rem, abut)) return false;
  }
  return true;
}

// ---------------------------------------------------------------- survivors

namespace {

std::string survivor_name(GroupId g, const Cell& cell, const RankVector& left,
                          bool partial) {
  if (!partial) return fsum_to_string(cell.entry);
  // Pure top-level torsion is a g-power.
  bool g_shape = all_zero(left.free) && all_zero(left.z4);
  for (std::size_t l = 1; g_shape && l < left.f2.size(); ++l)
    if (left.f2[l] != 0) g_shape = false;
  if (g_shape && left.f2[0] > 0)
    return left.f2[0] == 1 ? "g" : "g^" + std::to_string(left.f2[0]);

  bool starred = false;
  for (const auto& p : cell.entry)
    if (p.name.find('*') != std::string::npos) starred = true;
  std::vector<std::string> matches;
  for (const auto& name : catalog_names(g)) {
    MackeyFunctor m = catalog(g, name);
    bool ok = true;
    try {
      if (!(rank_vector(m) == left)) ok = false;
    } catch (const std::invalid_argument&) {
      ok = false;
    }
    if (ok) matches.push_back(name);
  }
  std::sort(matches.begin(), matches.end());
  for (const auto& name : matches)
    if (starred == (name.back() == '*')) return name;
  if (!matches.empty()) return matches.front();
  return "(" + left.to_string() + ")";
}

}  // namespace

std::vector<Survivor> einf_survivors(const Chart& chart) {
  Rem rem;
  if (!replay(chart, rem))
    throw std::invalid_argument("chart differentials do not replay");
  std::vector<Survivor> out;
  for (std::size_t i = 0; i < chart.cells.size(); ++i) {
    RankVector left = chart.cells[i].ranks;
    left.f2 = rem[i];
    if (left.is_zero()) continue;
    Survivor s;
    s.cell = chart.cells[i];
    s.partial = !(left == chart.cells[i].ranks);
    s.cell.ranks = left;
    s.name = survivor_name(chart.source.group, chart.cells[i], left, s.partial);
    out.push_back(std::move(s));
  }
  return out;
}

ExtensionChain double_extension_report(const Chart& chart, Int column) {
  ExtensionChain out;
  out.column = column;
  std::vector<Survivor> col;
  for (auto& s : einf_survivors(chart))
    if (s.cell.x == column) col.push_back(std::move(s));
  std::sort(col.begin(), col.end(), [](const Survivor& a, const Survivor& b) {
    return a.cell.y > b.cell.y;
  });
  for (const auto& s : col) out.names.push_back(s.name);

  std::string abut_name;
  if (auto it = chart.abutment.find(column); it != chart.abutment.end())
    abut_name = it->second;
  for (std::size_t i = 1; i < col.size(); ++i) {
    std::string sub = i == 1 ? out.names[0] : "X" + std::to_string(i - 1);
    std::string total = (i + 1 == col.size() && !abut_name.empty())
                            ? abut_name
                            : "X" + std::to_string(i);
    out.steps.push_back("0 -> " + sub + " -> " + total + " -> " +
                        out.names[i] + " -> 0");
  }

  std::size_t nlevels =
      chart.cells.empty() ? (chart.source.group == GroupId::K4 ? 5 : 2)
                          : chart.cells[0].ranks.nlevels();
  std::vector<std::array<std::vector<Int>, 3>> stack;
  for (const auto& s : col)
    stack.push_back({s.cell.ranks.free, s.cell.ranks.f2, s.cell.ranks.z4});
  out.consistent = column_composes(
      stack, abutment_ranks(chart, column, nlevels), nlevels);
  return out;
}

// --------------------------------------------------------- phi*F elimination

PhiFReport phiF_slice_argument(Int n) {
  if (n < 3 || n % 2 == 0)
    throw std::invalid_argument(
        "the slice elimination argument applies to odd degrees >= 3");
  Int k = (n - 1) / 2;
  Chart solved = solve_forced_differentials(assemble_e2(k_slice_table(-n)));

  PhiFReport report;
  report.n = n;
  report.cell = {-k - 1, -3 * k - 1};

  // Candidate coefficients for the -(2n)-slice and the homotopy each one
  // would park at the probe cell.  phi*f has no closed suspension form; its
  // probe value is fixed data, the rest are recomputed.
  std::vector<std::pair<std::string, FSum>> candidates;
  candidates.emplace_back("phi*f", parse_fsum("g^3"));
  for (const char* name : {"m", "mg", "phi*F"})
    candidates.emplace_back(
        name, pi_closed(GroupId::K4, name, -(k + 1), 1).at(-k - 1));

  // The solved chart has no spare rank anywhere: columns off the abutment
  // die exactly and the abutment survivors are reserved for the abutment.
  Rem rem;
  replay(solved, rem);
  auto spare = [&](Int x, Int ylo, Int yhi) {
    Int total = 0;
    for (std::size_t i = 0; i < solved.cells.size(); ++i)
      if (solved.cells[i].x == x && solved.cells[i].y >= ylo &&
          solved.cells[i].y <= yhi && !solved.abutment.count(x))
        for (Int v : rem[i]) total += v;
    return total;
  };

  for (auto& [name, probe] : candidates) {
    PhiFCandidate c;
    c.name = name;
    c.probe_homotopy = probe;
    if (fsum_is_zero(probe)) {
      c.verdict = "winner";
      report.winner = name;
    } else {
      std::vector<std::string> reasons;
      if (spare(report.cell.first + 1, std::numeric_limits<Int>::min() / 2,
                report.cell.second - 2) == 0)
        reasons.push_back("no-differential-source");
      if (spare(report.cell.first - 1, report.cell.second + 2,
                std::numeric_limits<Int>::max() / 2) == 0)
        reasons.push_back("no-differential-target");
      std::string v;
      for (const auto& r : reasons) {
        if (!v.empty()) v += "; ";
        v += r;
      }
      c.verdict = v.empty() ? "unblocked" : v;
    }
    report.candidates.push_back(std::move(c));
  }
  if (report.winner.empty())
    throw ChartSolveError("no-solution: every candidate slice coefficient is blocked");
  return report;
}

// ------------------------------------------------------------- HF collapse

Chart hf_collapse_chart(const Chart& z_n, const Chart& z_n1) {
  Int n = z_n.source.degree;
  if (z_n1.source.degree != n + 1)
    throw std::invalid_argument("mod-2 collapse needs adjacent degrees");
  if (z_n.source.group != z_n1.source.group || z_n.source.coeff != "Z" ||
      z_n1.source.coeff != "Z")
    throw std::invalid_argument("mod-2 collapse needs integral charts");

  Chart out;
  out.source = {z_n.source.group, "F", n};
  out.abutment[n] = "F";

  std::map<std::pair<Int, Int>, std::pair<FSum, RankVector>> acc;
  auto add = [&](Int x, Int y, const FSum& fs, const RankVector& rv) {
    auto key = std::make_pair(x, y);
    auto it = acc.find(key);
    if (it == acc.end()) {
      acc.emplace(key, std::make_pair(fs, rv));
    } else {
      it->second.first = fsum_add(std::move(it->second.first), fs);
      it->second.second += rv;
    }
  };

  for (const auto& cell : z_n.cells) {
    if (cell.slice_level != n) {
      add(cell.x, cell.y, cell.entry, cell.ranks);
      continue;
    }
    // Mod-2 image of the degree-n diagonal: free ranks become Z/2 ranks.
    FSum fs;
    for (const auto& p : cell.entry) {
      std::string name = p.name == "Z" ? "F" : p.name == "Z*" ? "F*" : p.name;
      fs.push_back({name, p.mult});
    }
    RankVector rv = cell.ranks;
    for (std::size_t l = 0; l < rv.nlevels(); ++l) {
      rv.f2[l] += rv.free[l] + rv.z4[l];
      rv.free[l] = 0;
      rv.z4[l] = 0;
    }
    add(cell.x, cell.y, fs, rv);
  }
  for (const auto& cell : z_n1.cells) {
    if (cell.slice_level != n + 1) {
      add(cell.x, cell.y, cell.entry, cell.ranks);
      continue;
    }
    // 2-torsion of the degree-(n+1) diagonal drops one filtration row; free
    // ranks have trivial 2-kernel and vanish.
    RankVector rv = cell.ranks;
    for (std::size_t l = 0; l < rv.nlevels(); ++l) {
      rv.f2[l] += rv.z4[l];
      rv.free[l] = 0;
      rv.z4[l] = 0;
    }
    if (rv.is_zero()) continue;
    FSum fs;
    for (const auto& p : cell.entry)
      if (p.name != "Z" && p.name != "Z*") fs.push_back(p);
    add(cell.x, cell.y - 1, fs, rv);
  }

  for (auto& [key, val] : acc) {
    Cell c;
    c.x = key.first;
    c.y = key.second;
    c.slice_level = c.x + c.y;
    c.entry = fsum_normalize(std::move(val.first));
    c.ranks = std::move(val.second);
    if (c.ranks.is_zero()) continue;
    out.cells.push_back(std::move(c));
  }
  std::sort(out.cells.begin(), out.cells.end(),
            [](const Cell& a, const Cell& b) {
              if (a.slice_level != b.slice_level)
                return a.slice_level < b.slice_level;
              return a.x > b.x;
            });
  return out;
}

}  // namespace slicecalc

#pragma once

#include "slicecalc/slice.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace slicecalc {

// ---------------------------------------------------------------------------
// Rank vectors
// ---------------------------------------------------------------------------

// Per-level rank bookkeeping for chart cells.  Each subgroup level of a
// Mackey functor is recorded as (free rank, number of Z/2 summands, number
// of Z/4 summands); this is the granularity at which differentials move
// classes around.  Vectors are indexed like MackeyFunctor::lev.
struct RankVector {
  std::vector<Int> free;
  std::vector<Int> f2;
  std::vector<Int> z4;

  std::size_t nlevels() const { return free.size(); }
  bool is_zero() const;
  RankVector& operator+=(const RankVector& o);
  friend RankVector operator+(RankVector a, const RankVector& b) {
    a += b;
    return a;
  }
  bool operator==(const RankVector& o) const = default;
  std::string to_string() const;
};

RankVector rank_vector_zero(std::size_t nlevels);

// Decomposes every level of m as Z^a + (Z/2)^b + (Z/4)^c.  Throws
// std::invalid_argument if some level has torsion other than Z/2 or Z/4.
RankVector rank_vector(const MackeyFunctor& m);

// ---------------------------------------------------------------------------
// Charts
// ---------------------------------------------------------------------------

// One dot (or dot stack) of a spectral-sequence chart.  x is the homotopy
// degree, y = slice_level - x, so cells contributed by the n-slice sit on
// the line x + y = n.  entry names the homotopy Mackey functor of the cell
// and ranks caches its rank vector.
struct Cell {
  Int x = 0;
  Int y = 0;
  Int slice_level = 0;
  FSum entry;
  RankVector ranks;
};

// A d_r differential moves (x, y) -> (x - 1, y + r).  rank_transferred
// records, per level, how many Z/2 classes cancel; free and Z/4 ranks never
// move.
struct Differential {
  Int r = 2;
  std::pair<Int, Int> from;
  std::pair<Int, Int> to;
  RankVector rank_transferred;
};

// Slice spectral sequence chart for one suspension.  abutment maps a column
// (homotopy degree) to the catalog name of the homotopy group the column
// converges to; columns absent from the map converge to zero.
struct Chart {
  SliceSource source;
  std::vector<Cell> cells;
  std::vector<Differential> differentials;
  std::map<Int, std::string> abutment;

  const Cell* at(Int x, Int y) const;
};

// Raised by solve_forced_differentials; the message starts with either
// "no-solution" or "multiple-solutions".
struct ChartSolveError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Builds the E2 page of the slice spectral sequence from a slice table by
// running every slice through the closed-form homotopy tables.  Cells with
// the same coordinates merge.  Throws std::domain_error when a slice
// coefficient has no closed form ("missing-homotopy-family").
Chart assemble_e2(const SliceTable& table);

// A (page, source, target) triple used to pin a differential by name when a
// chart admits more than one rank-consistent solution.
struct NamedDifferential {
  Int r = 2;
  std::pair<Int, Int> from;
  std::pair<Int, Int> to;
};

// Exhaustively searches for sets of differentials under which the chart
// converges to its abutment: every column off the abutment dies, the
// abutment columns survive with exactly the right ranks (torsion on top of
// lower filtration may be absorbed into an extension).  Returns the chart
// with differentials filled in when the solution is unique; throws
// ChartSolveError otherwise.  `pinned` restricts the search to solutions
// containing every named differential with a nonzero transfer.
Chart solve_forced_differentials(const Chart& e2,
                                 const std::vector<NamedDifferential>& pinned = {});

// All rank-consistent differential sets, each sorted canonically; at most
// `cap` are collected.  Used for diagnostics and the multiple-solutions
// error message.
std::vector<std::vector<Differential>>
all_forced_solutions(const Chart& e2, std::size_t cap = 8,
                     const std::vector<NamedDifferential>& pinned = {});

// Replays the chart's differentials over the E2 ranks and verifies the
// bookkeeping: transfers stay within the available Z/2 ranks, columns off
// the abutment cancel exactly, and the abutment columns' survivors compose
// (as iterated extensions) to the stated abutment.  Pure; never throws on a
// malformed chart, it just returns false.
bool euler_check(const Chart& chart);

// ---------------------------------------------------------------------------
// E-infinity reports
// ---------------------------------------------------------------------------

// Survivor of one cell on the E-infinity page.
struct Survivor {
  Cell cell;              // cell with ranks reduced to what survives
  bool partial = false;   // true when differentials removed part of the cell
  std::string name;       // catalog-based name for the surviving ranks
};

// The filtration of an abutment column read off the E-infinity page.  names
// lists survivors bottom-to-top (deepest subobject first, i.e. y
// descending); steps spells each extension stage.  Extension problems are
// reported, never resolved to a single group.
struct ExtensionChain {
  Int column = 0;
  std::vector<std::string> names;
  std::vector<std::string> steps;
  bool consistent = false;
};

std::vector<Survivor> einf_survivors(const Chart& chart);
ExtensionChain double_extension_report(const Chart& chart, Int column);

// ---------------------------------------------------------------------------
// The phi*F slice argument
// ---------------------------------------------------------------------------

// One candidate coefficient for the slice in filtration -(4k+2) of a
// negative odd suspension, with the homotopy it would contribute at the
// probe degree and the verdict for that contribution.
struct PhiFCandidate {
  std::string name;
  FSum probe_homotopy;
  std::string verdict;  // "winner", or the reasons the candidate is blocked
};

struct PhiFReport {
  Int n = 0;                 // the suspension degree (chart of Sigma^{-n}HZ)
  std::pair<Int, Int> cell;  // where the candidate homotopy would land
  std::string winner;
  std::vector<PhiFCandidate> candidates;
};

// For odd n >= 3 identifies the coefficient of the -(2n)-slice of
// Sigma^{-n}HZ by elimination: any candidate contributing nonzero homotopy
// at the probe cell is blocked because the solved chart leaves that cell
// with no differential in ("no-differential-source") or out
// ("no-differential-target").  Throws std::invalid_argument for other n.
PhiFReport phiF_slice_argument(Int n);

// ---------------------------------------------------------------------------
// Mod-2 comparison charts
// ---------------------------------------------------------------------------

// E2 chart of Sigma^n HF approximated from the integral charts of degrees n
// and n+1: the degree-n diagonal reduces mod 2 (free ranks become Z/2
// ranks), the degree-(n+1) diagonal contributes its torsion one row down,
// and everything off those diagonals merges cell-wise.
Chart hf_collapse_chart(const Chart& z_n, const Chart& z_n1);

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

// Deterministic renderers; format is "text" or "svg" (anything else throws
// std::invalid_argument).  The text grid uses one character per symbol
// class; differentials are listed as arrow lines under the grid.
std::string render_chart(const Chart& chart, const std::string& format = "text");

// Single display character for a cell entry ('#' Z, 'o' Z*, digits for g
// powers, 'P'/'p' phi*F/phi*F*, 'T'/'t' mg/mg*, 'm'/'v' m/m*, 'F'/'f' F/F*,
// '*' for merged entries).
char cell_symbol(const Cell& cell);

// JSON dump of a chart: {"source": ..., "cells": [...], "differentials":
// [...], "abutment": {...}}.
std::string chart_to_json(const Chart& chart);

}  // namespace slicecalc

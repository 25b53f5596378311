#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "slicecalc/slice.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <vector>

using namespace slicecalc;

namespace {

struct Row {
  int level;
  std::string coeff;
  Int a;
  Int b;
};

// Exact comparison against the stored form (levels, coefficient sums and
// suspension coordinates all literal).
void expect_table(const SliceTable& t, const std::vector<Row>& rows) {
  REQUIRE(t.entries.size() == rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    CAPTURE(i);
    const SliceEntry want =
        slice_entry(t.source.group, rows[i].level, rows[i].coeff, rows[i].a, rows[i].b);
    CHECK(t.entries[i].level == want.level);
    CHECK(t.entries[i].suspension == want.suspension);
    CHECK(fsum_equal(t.entries[i].coeff, want.coeff));
  }
}

const MackeyFunctor& kat(const std::string& name) { return catalog(GroupId::K4, name); }

MackeyFunctor g_pow(Int j) { return realize_fsum(GroupId::K4, {FPiece{"g", j}}); }

RORep rep_rho_plus(GroupId g, Int a, Int b) {
  return g == GroupId::K4 ? rep_k(a + b, a, a, a) : rep_c2(a + b, a);
}

}  // namespace

TEST_CASE("one-slice and negative-one-slice predicates") {
  CHECK(is_one_slice(kat("Z")));
  CHECK(is_one_slice(kat("Z*")));
  // mg and phi*F vanish at the bottom, so their middle restrictions cannot
  // inject; their first suspensions are two slices rather than one slices.
  CHECK_FALSE(is_one_slice(kat("mg")));
  CHECK_FALSE(is_one_slice(kat("phi*F")));
  CHECK_FALSE(is_one_slice(g_pow(1)));  // restrictions from K all vanish
  CHECK(is_one_slice(kat("f")));        // bottom-only: every restriction is vacuously injective
  CHECK(is_one_slice(mackey_zero(GroupId::K4)));
  CHECK(is_one_slice(catalog(GroupId::C2, "Z")));
  CHECK_FALSE(is_one_slice(catalog(GroupId::C2, "g")));

  // Sigma^{-1} H m* is the (-2)-slice of Sigma^{-1} HZ.
  CHECK_FALSE(is_negative_one_slice_with(kat("m*"), 1));
  CHECK(is_negative_one_slice_with(kat("m*"), 2));
  CHECK_FALSE(is_negative_one_slice_with(kat("m*"), 4));

  // Sigma^{-1} H Z* is the (-1)-slice.
  CHECK(is_negative_one_slice_with(kat("Z*"), 1));
  CHECK_FALSE(is_negative_one_slice_with(kat("Z*"), 2));
  CHECK_FALSE(is_negative_one_slice_with(kat("Z*"), 4));

  // Sigma^{-1} H g is the (-4)-slice.
  CHECK_FALSE(is_negative_one_slice_with(g_pow(1), 1));
  CHECK_FALSE(is_negative_one_slice_with(g_pow(1), 2));
  CHECK(is_negative_one_slice_with(g_pow(1), 4));

  CHECK(is_negative_one_slice_with(catalog(GroupId::C2, "Z*"), 1));
  CHECK_FALSE(is_negative_one_slice_with(catalog(GroupId::C2, "Z*"), 2));
  CHECK(is_negative_one_slice_with(catalog(GroupId::C2, "g"), 2));
  CHECK_THROWS_AS(is_negative_one_slice_with(kat("Z"), 3), std::invalid_argument);
  CHECK_THROWS_AS(is_negative_one_slice_with(catalog(GroupId::C2, "Z"), 4),
                  std::invalid_argument);
}

TEST_CASE("two-slice characterizations") {
  CHECK(k_is_two_slice_sigma2(kat("Z")));
  // Z* restricts by multiplication by 2 everywhere: the middle exactness
  // fails (image is twice the diagonal), and indeed Sigma^2 HZ* is
  // Sigma^{-rho} Sigma^6 HZ, which has two slices rather than one.
  CHECK_FALSE(k_is_two_slice_sigma2(kat("Z*")));
  CHECK(k_is_two_slice_sigma2(kat("f")));  // vacuous: all levels but the bottom vanish
  CHECK(k_is_two_slice_sigma2(mackey_zero(GroupId::K4)));

  CHECK(k_is_two_slice_sigma1(kat("mg")));
  CHECK(k_is_two_slice_sigma1(kat("phi*F")));
  CHECK_FALSE(k_is_two_slice_sigma1(g_pow(1)));
  CHECK_FALSE(k_is_two_slice_sigma1(kat("Z")));  // bottom level nonzero
  CHECK(k_is_two_slice_sigma1(mackey_zero(GroupId::K4)));

  CHECK(c2_is_two_slice(catalog(GroupId::C2, "Z"), mackey_zero(GroupId::C2)));
  CHECK(c2_is_two_slice(catalog(GroupId::C2, "Z*"), mackey_zero(GroupId::C2)));
  CHECK_FALSE(c2_is_two_slice(catalog(GroupId::C2, "g"), mackey_zero(GroupId::C2)));
  CHECK_FALSE(c2_is_two_slice(catalog(GroupId::C2, "Z"), catalog(GroupId::C2, "f")));
  CHECK_THROWS_AS(c2_is_two_slice(kat("Z"), mackey_zero(GroupId::K4)), std::invalid_argument);

  CHECK(k_two_slice_theorem(kat("Z"), mackey_zero(GroupId::K4)) == TwoSliceVerdict::two_slice);
  CHECK(k_two_slice_theorem(kat("Z"), kat("mg")) == TwoSliceVerdict::two_slice);
  CHECK(k_two_slice_theorem(kat("Z*"), mackey_zero(GroupId::K4)) ==
        TwoSliceVerdict::not_two_slice);
  CHECK(k_two_slice_theorem(kat("Z"), kat("f")) == TwoSliceVerdict::not_two_slice);
  // pi_1 = g restricts to zero in the middle levels, so the sufficient
  // conditions are silent and the verdict defers to spectrum-level data.
  CHECK(k_two_slice_theorem(kat("f"), g_pow(1)) == TwoSliceVerdict::needs_spectrum_data);

  CHECK(to_string(TwoSliceVerdict::two_slice) == "two-slice");
  CHECK(to_string(TwoSliceVerdict::needs_spectrum_data) == "needs-spectrum-data");
}

TEST_CASE("K slice tables in low degrees") {
  for (Int n = 0; n <= 5; ++n) {
    SliceTable t = k_slice_table(n);
    CHECK(t.source.group == GroupId::K4);
    CHECK(t.source.degree == n);
    expect_table(t, {{static_cast<int>(n), "Z", 0, n}});
  }
}

TEST_CASE("K slice tables, positive degrees 6..14") {
  expect_table(k_slice_table(6), {{6, "Z(2,1)*", 1, 2}, {8, "g", 0, 2}});
  expect_table(k_slice_table(7), {{7, "Z", 1, 3}, {8, "mg*", 2, 0}, {12, "g", 0, 3}});
  expect_table(k_slice_table(8),
               {{8, "Z", 1, 4}, {10, "phi*F*", 3, -1}, {12, "g^2", 0, 3}, {16, "g", 0, 4}});
  expect_table(k_slice_table(9),
               {{9, "Z", 1, 5}, {12, "phi*F*", 3, 0}, {16, "g^2", 0, 4}, {20, "g", 0, 5}});
  expect_table(k_slice_table(10), {{10, "Z(2,1)*", 2, 2},
                                   {12, "g", 0, 3},
                                   {14, "phi*F*", 4, -1},
                                   {16, "g^3", 0, 4},
                                   {20, "g^2", 0, 5},
                                   {24, "g", 0, 6}});
  expect_table(k_slice_table(11), {{11, "Z", 2, 3},
                                   {12, "mg*", 3, 0},
                                   {16, "g+phi*F*", 4, 0},
                                   {20, "g^3", 0, 5},
                                   {24, "g^2", 0, 6},
                                   {28, "g", 0, 7}});
  expect_table(k_slice_table(12), {{12, "Z", 2, 4},
                                   {14, "phi*F*", 4, -1},
                                   {16, "g^2", 0, 4},
                                   {18, "phi*F*", 5, -1},
                                   {20, "g^4", 0, 5},
                                   {24, "g^3", 0, 6},
                                   {28, "g^2", 0, 7},
                                   {32, "g", 0, 8}});
  expect_table(k_slice_table(13), {{13, "Z", 2, 5},
                                   {16, "phi*F*", 4, 0},
                                   {20, "g^2+phi*F*", 5, 0},
                                   {24, "g^4", 0, 6},
                                   {28, "g^3", 0, 7},
                                   {32, "g^2", 0, 8},
                                   {36, "g", 0, 9}});
  expect_table(k_slice_table(14), {{14, "Z(2,1)*", 3, 2},
                                   {16, "g", 0, 4},
                                   {18, "phi*F*", 5, -1},
                                   {20, "g^3", 0, 5},
                                   {22, "phi*F*", 6, -1},
                                   {24, "g^5", 0, 6},
                                   {28, "g^4", 0, 7},
                                   {32, "g^3", 0, 8},
                                   {36, "g^2", 0, 9},
                                   {40, "g", 0, 10}});

  // The level-8 slice of Sigma^7 HZ is also written Sigma^{rho+2} H m.
  CHECK(entry_equivalent(GroupId::K4, *k_slice_table(7).at(8),
                         slice_entry(GroupId::K4, 8, "m", 1, 2)));
}

TEST_CASE("K slice tables, negative degrees -1..-9") {
  expect_table(k_slice_table(-1), {{-4, "g", 0, -1}, {-2, "m*", 0, -1}, {-1, "Z*", 0, -1}});
  expect_table(k_slice_table(-2), {{-8, "g", 0, -2}, {-4, "m*", 0, -2}, {-2, "Z*", 0, -2}});
  expect_table(k_slice_table(-3),
               {{-12, "g", 0, -3}, {-8, "g^2", 0, -2}, {-6, "phi*F", -2, 1}, {-3, "Z*", 0, -3}});
  expect_table(k_slice_table(-4),
               {{-16, "g", 0, -4}, {-12, "g^2", 0, -3}, {-8, "phi*F", -2, 0}, {-4, "Z*", 0, -4}});
  expect_table(k_slice_table(-5), {{-20, "g", 0, -5},
                                   {-16, "g^2", 0, -4},
                                   {-12, "g^3", 0, -3},
                                   {-10, "phi*F", -3, 1},
                                   {-8, "g", 0, -2},
                                   {-6, "m*", -1, -1},
                                   {-5, "Z*", -1, -1}});
  expect_table(k_slice_table(-6), {{-24, "g", 0, -6},
                                   {-20, "g^2", 0, -5},
                                   {-16, "g^3", 0, -4},
                                   {-12, "g+phi*F", -3, 0},
                                   {-8, "mg", -2, 0},
                                   {-6, "Z*", -1, -2}});
  expect_table(k_slice_table(-7), {{-28, "g", 0, -7},
                                   {-24, "g^2", 0, -6},
                                   {-20, "g^3", 0, -5},
                                   {-16, "g^4", 0, -4},
                                   {-14, "phi*F", -4, 1},
                                   {-12, "g^2", 0, -3},
                                   {-10, "phi*F", -3, 1},
                                   {-7, "Z*", -1, -3}});
  expect_table(k_slice_table(-8), {{-32, "g", 0, -8},
                                   {-28, "g^2", 0, -7},
                                   {-24, "g^3", 0, -6},
                                   {-20, "g^4", 0, -5},
                                   {-16, "g^2+phi*F", -4, 0},
                                   {-12, "phi*F", -3, 0},
                                   {-8, "Z*", -1, -4}});
  expect_table(k_slice_table(-9), {{-36, "g", 0, -9},
                                   {-32, "g^2", 0, -8},
                                   {-28, "g^3", 0, -7},
                                   {-24, "g^4", 0, -6},
                                   {-20, "g^5", 0, -5},
                                   {-18, "phi*F", -5, 1},
                                   {-16, "g^3", 0, -4},
                                   {-14, "phi*F", -4, 1},
                                   {-12, "g", 0, -3},
                                   {-10, "m*", -2, -1},
                                   {-9, "Z*", -2, -1}});

  // The rho-form at level -6 of the degree -3 table admits a concentrated
  // spelling, recorded as a table note.
  const SliceTable t3 = k_slice_table(-3);
  REQUIRE(t3.notes.size() == 1);
  CHECK(t3.notes[0].find("phi*F*") != std::string::npos);
  CHECK(entry_equivalent(GroupId::K4, *t3.at(-6), slice_entry(GroupId::K4, -6, "phi*F*", 0, -3)));
}

TEST_CASE("top slices for |n| <= 20") {
  for (Int n = 6; n <= 20; ++n) {
    CAPTURE(n);
    const SliceTable t = k_slice_table(n);
    const SliceEntry* top = t.at(static_cast<int>(n));
    REQUIRE(top != nullptr);
    CHECK(t.entries.front().level == n);
    if (n % 4 == 2) {
      CHECK(fsum_equal(top->coeff, parse_fsum("Z(2,1)*")));
      CHECK(top->suspension == rep_rho_plus(GroupId::K4, (n - 2) / 4, 2));
    } else {
      const Int r = 3 + ((n - 3) % 4);
      CHECK(fsum_equal(top->coeff, parse_fsum("Z")));
      CHECK(top->suspension == rep_rho_plus(GroupId::K4, (n - r) / 4, r));
    }
    if (n % 4 == 3) {
      const SliceEntry* next = t.at(static_cast<int>(n + 1));
      REQUIRE(next != nullptr);
      CHECK(fsum_equal(next->coeff, parse_fsum("mg*")));
    }
  }
  for (Int m = 1; m <= 20; ++m) {
    CAPTURE(m);
    const SliceTable t = k_slice_table(-m);
    const SliceEntry* top = t.at(static_cast<int>(-m));
    REQUIRE(top != nullptr);
    CHECK(t.entries.back().level == -m);
    const Int r = 1 + ((m - 1) % 4);
    CHECK(fsum_equal(top->coeff, parse_fsum("Z*")));
    CHECK(top->suspension == rep_rho_plus(GroupId::K4, -(m - r) / 4, -r));
    if (m % 4 == 1) {
      const SliceEntry* next = t.at(static_cast<int>(-(m + 1)));
      REQUIRE(next != nullptr);
      CHECK(fsum_equal(next->coeff, parse_fsum("m*")));
    }
  }
}

TEST_CASE("C2 slice tables") {
  for (Int n = 0; n <= 6; ++n)
    expect_table(c2_slice_table(n), {{static_cast<int>(n), "Z", 0, n}});
  expect_table(c2_slice_table(7), {{7, "Z", 2, 3}, {8, "g", 0, 4}});
  expect_table(c2_slice_table(8), {{8, "Z", 2, 4}, {10, "g", 0, 5}});
  expect_table(c2_slice_table(9), {{9, "Z", 2, 5}, {12, "g", 0, 6}});
  expect_table(c2_slice_table(10), {{10, "Z", 2, 6}, {14, "g", 0, 7}});
  expect_table(c2_slice_table(11), {{11, "Z", 4, 3}, {12, "g", 0, 6}, {16, "g", 0, 8}});
  expect_table(c2_slice_table(-1), {{-2, "g", 0, -1}, {-1, "Z*", 0, -1}});
  expect_table(c2_slice_table(-2), {{-4, "g", 0, -2}, {-2, "Z*", 0, -2}});
  expect_table(c2_slice_table(-3), {{-6, "g", 0, -3}, {-3, "Z*", 0, -3}});
  expect_table(c2_slice_table(-4), {{-8, "g", 0, -4}, {-4, "Z*", 0, -4}});
  expect_table(c2_slice_table(-5), {{-10, "g", 0, -5}, {-6, "g", 0, -3}, {-5, "Z*", -2, -1}});
  expect_table(c2_slice_table(-6), {{-12, "g", 0, -6}, {-8, "g", 0, -4}, {-6, "Z*", -2, -2}});
}

TEST_CASE("rho shift") {
  const SliceEntry e = slice_entry(GroupId::K4, 6, "Z(2,1)*", 1, 2);
  const SliceEntry s = rho_shift(e, GroupId::K4, 1);
  CHECK(s.level == 10);
  CHECK(s.suspension == rep_rho_plus(GroupId::K4, 2, 2));
  CHECK(fsum_equal(s.coeff, e.coeff));

  SliceTable t = rho_shift(k_slice_table(-1), -1);
  REQUIRE(t.notes.size() == 1);
  const SliceTable inner = k_slice_table(-5);
  for (const SliceEntry& se : t.entries) {
    const SliceEntry* got = inner.at(se.level);
    REQUIRE(got != nullptr);
    CHECK(entry_equivalent(GroupId::K4, se, *got));
  }
  CHECK(rho_shift(k_slice_table(3), 0).notes.empty());
}

TEST_CASE("slice reduction stability under rho shifts") {
  // Negative side: within levels [-2m+1, -m] the table of degree -m is
  // exactly the -rho shift of the table of degree -m+4.
  for (Int m = 5; m <= 12; ++m) {
    CAPTURE(m);
    const SliceTable shifted = rho_shift(k_slice_table(-(m - 4)), -1);
    const SliceTable big = k_slice_table(-m);
    size_t in_window = 0;
    for (const SliceEntry& se : shifted.entries) {
      if (se.level < -2 * m + 1) continue;
      ++in_window;
      CAPTURE(se.level);
      const SliceEntry* got = big.at(se.level);
      REQUIRE(got != nullptr);
      CHECK(entry_equivalent(GroupId::K4, se, *got));
    }
    size_t expected = 0;
    for (const SliceEntry& be : big.entries)
      if (be.level >= -2 * m + 1) ++expected;
    CHECK(in_window == expected);
  }
  // Positive side: within levels [n, 2n-7] the table of degree n is the
  // +rho shift of the table of degree n-4.
  for (Int n = 10; n <= 16; ++n) {
    CAPTURE(n);
    const SliceTable shifted = rho_shift(k_slice_table(n - 4), 1);
    const SliceTable big = k_slice_table(n);
    size_t in_window = 0;
    for (const SliceEntry& se : shifted.entries) {
      if (se.level > 2 * n - 7) continue;
      ++in_window;
      CAPTURE(se.level);
      const SliceEntry* got = big.at(se.level);
      REQUIRE(got != nullptr);
      CHECK(entry_equivalent(GroupId::K4, se, *got));
    }
    size_t expected = 0;
    for (const SliceEntry& be : big.entries)
      if (be.level <= 2 * n - 7) ++expected;
    CHECK(in_window == expected);
  }
}

TEST_CASE("level ranges and parity exclusion") {
  for (Int n = 6; n <= 20; ++n) {
    const SliceTable t = k_slice_table(n);
    for (int l : t.levels()) {
      CHECK(l >= n);
      CHECK(l <= 4 * (n - 4));
    }
  }
  for (Int m = 1; m <= 20; ++m) {
    const SliceTable t = k_slice_table(-m);
    for (int l : t.levels()) {
      CHECK(l <= -m);
      CHECK(l >= -4 * m);
      // Even-degree tables only use levels divisible by 4 below the top.
      if (m % 2 == 0 && l != -m) CHECK(l % 4 == 0);
    }
  }
}

TEST_CASE("canonical pieces and equivalences") {
  const GroupId K = GroupId::K4;
  CHECK(entry_equivalent(K, slice_entry(K, 4, "Z", 1, 0), slice_entry(K, 4, "Z*", 2, -4)));
  CHECK(entry_equivalent(K, slice_entry(K, 8, "m", 1, 2), slice_entry(K, 8, "mg*", 2, 0)));
  CHECK(entry_equivalent(K, slice_entry(K, -6, "m*", -1, -1), slice_entry(K, -6, "mg", -2, 1)));
  CHECK(entry_equivalent(K, slice_entry(K, -6, "phi*F", -2, 1), slice_entry(K, -6, "phi*F*", 0, -3)));
  // For top-level torsion only the fixed dimension a+b of the suspension
  // matters.
  CHECK(entry_equivalent(K, slice_entry(K, 8, "g", 0, 2), slice_entry(K, 8, "g", 1, 1)));
  CHECK_FALSE(entry_equivalent(K, slice_entry(K, 8, "g", 0, 2), slice_entry(K, 8, "g", 1, -2)));
  CHECK(entry_equivalent(K, slice_entry(K, 16, "g+phi*F*", 4, 0),
                         slice_entry(K, 16, "phi*F*+g", 4, 0)));
  CHECK_FALSE(entry_equivalent(K, slice_entry(K, 4, "Z", 1, 0), slice_entry(K, 8, "Z", 1, 0)));
  CHECK_FALSE(entry_equivalent(K, slice_entry(K, 8, "g", 0, 2), slice_entry(K, 8, "g^2", 0, 2)));
  CHECK_FALSE(entry_equivalent(K, slice_entry(K, 4, "Z", 1, 0), slice_entry(K, 4, "Z*", 1, 0)));

  const GroupId C = GroupId::C2;
  CHECK(entry_equivalent(C, slice_entry(C, 9, "Z", 2, 5), slice_entry(C, 9, "Z*", 4, 1)));
  CHECK(entry_equivalent(C, slice_entry(C, 0, "f", 0, 0), slice_entry(C, 0, "F*", 1, -2)));
  CHECK_FALSE(entry_equivalent(C, slice_entry(C, 0, "f", 0, 0), slice_entry(C, 0, "F", 0, 0)));

  SliceEntry bad;
  bad.level = 0;
  bad.suspension = rep_k(1, 1, 0, 0);
  bad.coeff = parse_fsum("Z");
  CHECK_THROWS_AS(canonical_pieces(K, bad), std::invalid_argument);

  // Equal tables up to respelling, with a deliberate respelling applied.
  SliceTable x = k_slice_table(7);
  SliceTable y = x;
  y.entries[1] = slice_entry(K, 8, "m", 1, 2);
  CHECK(table_equivalent(x, y));
  y.entries[1] = slice_entry(K, 8, "m", 0, 4);
  CHECK_FALSE(table_equivalent(x, y));
}

TEST_CASE("duality reproduces the upper range of positive tables") {
  for (Int n = 6; n <= 14; ++n) {
    CAPTURE(n);
    const SliceTable dual = dualize_slice_table(k_slice_table(5 - n));
    const SliceTable pos = k_slice_table(n);
    SliceTable tail;
    tail.source = pos.source;
    for (const SliceEntry& e : pos.entries)
      if (e.level >= n + 2) tail.entries.push_back(e);
    CHECK(table_equivalent(dual, tail));
  }
  CHECK_THROWS_AS(dualize_slice_table(c2_slice_table(-1)), std::invalid_argument);
  CHECK_THROWS_AS(dualize_slice_table(k_slice_table(0)), std::invalid_argument);
}

TEST_CASE("restriction to the L diagonal recovers the C2 tables") {
  for (Int n = -14; n <= 14; ++n) {
    CAPTURE(n);
    CHECK(table_equivalent(restrict_table_to_L(k_slice_table(n)), c2_slice_table(n)));
  }
  // Spot checks in the degrees where the restricted tables are easy to read.
  const SliceTable r9 = restrict_table_to_L(k_slice_table(9));
  CHECK(r9.levels() == std::vector<int>{9, 12});
  CHECK(fsum_equal(r9.at(9)->coeff, parse_fsum("Z")));
  CHECK(fsum_equal(r9.at(12)->coeff, parse_fsum("g")));
  const SliceTable r10 = restrict_table_to_L(k_slice_table(10));
  CHECK(r10.levels() == std::vector<int>{10, 14});
  // The degree-10 top restricts to the dual spelling Sigma^{4rho+2} HZ*,
  // equivalent to the stored C2 form Sigma^{2rho+6} HZ.
  CHECK(fsum_equal(r10.at(10)->coeff, parse_fsum("Z*")));
  CHECK(r10.at(10)->suspension == rep_c2(6, 4));
  CHECK_THROWS_AS(restrict_table_to_L(c2_slice_table(3)), std::invalid_argument);
}

TEST_CASE("slice status verification") {
  for (Int n = -9; n <= 9; ++n) {
    CAPTURE(n);
    CHECK(verify_slice_status(k_slice_table(n)) == SliceStatus::yes);
    CHECK(verify_slice_status(c2_slice_table(n)) == SliceStatus::yes);
  }
  const GroupId K = GroupId::K4;
  CHECK(verify_slice_status(K, slice_entry(K, 0, "Z", 0, 0)) == SliceStatus::yes);
  CHECK(verify_slice_status(K, slice_entry(K, 2, "g", 0, 1)) == SliceStatus::no);
  CHECK(verify_slice_status(K, slice_entry(K, -2, "m*", 0, -1)) == SliceStatus::yes);
  CHECK(verify_slice_status(K, slice_entry(K, -1, "m*", 0, -1)) == SliceStatus::no);
  CHECK(verify_slice_status(K, slice_entry(K, 4, "M", 1, 0)) == SliceStatus::yes);
  CHECK(verify_slice_status(K, slice_entry(K, 7, "M", 1, 3)) == SliceStatus::indeterminate);
  CHECK(verify_slice_status(GroupId::C2, slice_entry(GroupId::C2, 7, "Z", 2, 3)) ==
        SliceStatus::yes);
  CHECK(verify_slice_status(GroupId::C2, slice_entry(GroupId::C2, 8, "Z", 2, 3)) ==
        SliceStatus::no);

  // Wedge entries fail as soon as one summand fails.
  CHECK(verify_slice_status(K, slice_entry(K, 16, "g+phi*F*", 4, 0)) == SliceStatus::yes);
  CHECK(verify_slice_status(K, slice_entry(K, 15, "g+phi*F*", 4, 0)) == SliceStatus::no);

  // A mislabeled table is refuted as a whole.
  SliceTable t = k_slice_table(6);
  for (SliceEntry& e : t.entries) e.level += 1;
  CHECK(verify_slice_status(t) == SliceStatus::no);

  SliceTable u = k_slice_table(6);
  u.entries.push_back(slice_entry(K, 40, "M", 1, 33));
  CHECK(verify_slice_status(u) == SliceStatus::indeterminate);

  CHECK(to_string(SliceStatus::yes) == "yes");
  CHECK(to_string(SliceStatus::indeterminate) == "indeterminate");
}

TEST_CASE("mod-2 reduction and 2-torsion") {
  CHECK(mackey_iso(mackey_mod2(kat("Z")), kat("F")));
  CHECK(mackey_iso(mackey_mod2(kat("Z*")), kat("F*")));
  CHECK(mackey_is_zero(mackey_two_torsion(kat("Z"))));
  CHECK(mackey_is_zero(mackey_two_torsion(kat("Z*"))));
  CHECK(mackey_iso(mackey_mod2(kat("mg")), kat("mg")));
  CHECK(mackey_iso(mackey_two_torsion(kat("mg")), kat("mg")));
  CHECK(mackey_iso(mackey_mod2(catalog(GroupId::C2, "Z")), catalog(GroupId::C2, "F")));
  CHECK(check_axioms(mackey_mod2(kat("Z(2,1)*"))).empty());
  CHECK(check_axioms(mackey_two_torsion(kat("M"))).empty());

  CHECK(describe_functor(mackey_zero(GroupId::K4)) == "0");
  CHECK(describe_functor(kat("Z")) == "Z");
  CHECK(describe_functor(g_pow(3)) == "g^3");
  CHECK(fsum_equal(parse_fsum(describe_functor(realize_fsum(GroupId::K4, parse_fsum("g^2+phi*F")))),
                   parse_fsum("g^2+phi*F")));
}

TEST_CASE("recovering the mod-2 tables from adjacent integral ones") {
  const FSliceTable f7 = recover_F_slices(k_slice_table(7), k_slice_table(8));
  CHECK(f7.source.coeff == "F");
  CHECK(f7.source.degree == 7);
  CHECK(f7.notes.empty());
  {
    std::vector<int> ls;
    for (const auto& lv : f7.levels) ls.push_back(lv.level);
    CHECK(ls == std::vector<int>{7, 8, 10, 12, 16});
  }
  REQUIRE(f7.at(7) != nullptr);
  CHECK(f7.at(7)->resolved());
  CHECK(f7.at(7)->names[0] == "F");
  CHECK(f7.at(7)->suspension == rep_rho_plus(GroupId::K4, 1, 3));
  CHECK_FALSE(f7.at(7)->carried_4k2);
  REQUIRE(f7.at(8) != nullptr);
  CHECK(f7.at(8)->resolved());
  CHECK(f7.at(8)->names[0] == "mg*");
  REQUIRE(f7.at(10) != nullptr);
  CHECK(f7.at(10)->resolved());
  CHECK(f7.at(10)->names[0] == "phi*F*");
  CHECK(f7.at(10)->carried_4k2);
  // Level 12 assembles g from below and g^2 from above: the middle has
  // order 8 and both elementary and Z/4-type candidates survive.
  REQUIRE(f7.at(12) != nullptr);
  CHECK_FALSE(f7.at(12)->resolved());
  REQUIRE(f7.at(12)->candidates.size() == 2);
  CHECK(std::count(f7.at(12)->names.begin(), f7.at(12)->names.end(), "g^3") == 1);
  {
    bool has_z4 = false;
    for (const MackeyFunctor& c : f7.at(12)->candidates) {
      const AbGroup& top = c.lev[0];
      if (top.free == 0 && top.tor == std::vector<Int>{2, 4}) has_z4 = true;
    }
    CHECK(has_z4);
  }
  REQUIRE(f7.at(16) != nullptr);
  CHECK(f7.at(16)->resolved());
  CHECK(f7.at(16)->names[0] == "g");

  const FSliceTable f10 = recover_F_slices(k_slice_table(10), k_slice_table(11));
  REQUIRE(f10.at(14) != nullptr);
  CHECK(f10.at(14)->resolved());
  CHECK(f10.at(14)->names[0] == "phi*F*");
  CHECK(f10.at(14)->carried_4k2);
  REQUIRE(f10.at(10) != nullptr);
  CHECK(f10.at(10)->resolved());
  {
    bool note12 = false, note16 = false;
    for (const std::string& n : f10.notes) {
      if (n.find("level 12") != std::string::npos) note12 = true;
      if (n.find("level 16") != std::string::npos) note16 = true;
    }
    CHECK(note12);
    CHECK(note16);
  }
  REQUIRE(f10.at(28) != nullptr);
  CHECK(f10.at(28)->names[0] == "g");

  CHECK_THROWS_AS(recover_F_slices(k_slice_table(7), k_slice_table(9)), std::invalid_argument);
  CHECK_THROWS_AS(recover_F_slices(c2_slice_table(7), c2_slice_table(8)), std::invalid_argument);
}

TEST_CASE("pullback degrees") {
  CHECK(pullback_slice_degree(3, 2) == 6);
  CHECK(pullback_slice_degree(-2, 4) == -8);
  CHECK(pullback_slice_degree(0, 1) == 0);
  CHECK_THROWS_AS(pullback_slice_degree(3, 0), std::invalid_argument);
}

"""Method-length statistics and the accessor/equals/test filters."""

from __future__ import annotations

from fractions import Fraction

from cddlint.methods import method_stats
from cddlint.rules import default_rules
from cddlint.syntax import parse_unit

RULES = default_rules()


def unit_of(source: str, path: str = "M.java"):
    return parse_unit(source, path)


FOUR_LINE = """\
class M {
  int f() {
    int a = 1;
    return a;
  }
}
"""


def big_method_source(body_lines: int) -> str:
    # body spans its braces: opening line + fillers + closing line
    fillers = ["    int x0 = 0;"] + [
        f"    x0 = x0 + {i};" for i in range(1, body_lines - 2 + 1)
    ]
    return "class Big {\n  void run() {\n" + "\n".join(fillers[:body_lines - 2]) + "\n  }\n}\n"


class TestDistribution:
    def test_single_four_line_method(self):
        stats = method_stats([unit_of(FOUR_LINE)], RULES)
        assert stats.counted_methods == 1
        assert stats.mean_loc == 4
        assert stats.median_loc == 4
        assert stats.percent_at_or_under_24 == 100

    def test_seventy_line_method_dominates_max(self):
        units = [unit_of(FOUR_LINE), unit_of(big_method_source(70), "Big.java")]
        big = units[1].types[0].methods[0]
        assert big.body_line_count == 70  # fixture self-check
        stats = method_stats(units, RULES)
        assert stats.counted_methods == 2
        assert stats.max_loc == 70
        assert stats.min_loc == 4
        assert stats.mean_loc == 37
        assert stats.median_loc == 37
        assert stats.stddev_loc == 33.0  # population stddev of {4, 70}
        assert stats.percent_at_or_under_24 == 50

    def test_empty_corpus_reports_absent(self):
        stats = method_stats([], RULES)
        assert stats.counted_methods == 0
        assert stats.mean_loc is None and stats.max_loc is None


ACCESSORS = """\
class A {
  private int x;

  int getX() {
    return x;
  }

  void setX(int v) {
    x = v;
  }

  boolean isReady() {
    return x > 0;
  }

  int getComputed() {
    int a = x + 1;
    int b = a * 2;
    if (b > 4) {
      return b;
    }
    return a;
  }

  public boolean equals(Object o) {
    return false;
  }

  public int hashCode() {
    return x;
  }
}
"""


class TestFilters:
    def test_getters_setters_equals_hashcode_excluded(self):
        stats = method_stats([unit_of(ACCESSORS)], RULES)
        assert stats.counted_methods == 1  # only getComputed
        assert stats.excluded_methods == 5

    def test_get_prefix_with_real_body_is_counted(self):
        stats = method_stats([unit_of(ACCESSORS)], RULES)
        assert stats.mean_loc == 8  # getComputed body: braces span 8 lines

    def test_test_glob_excludes_whole_file(self):
        stats = method_stats(
            [unit_of(FOUR_LINE, "src/test/MTest.java")], RULES
        )
        assert stats.counted_methods == 0
        assert stats.excluded_methods == 1

    def test_bodiless_methods_excluded(self):
        stats = method_stats(
            [unit_of("interface I { int size(); }", "I.java")], RULES
        )
        assert stats.counted_methods == 0
        assert stats.excluded_methods == 1

    def test_exact_percentage_arithmetic(self):
        units = [unit_of(FOUR_LINE), unit_of(big_method_source(30), "B.java"),
                 unit_of(big_method_source(25, ).replace("Big", "Big2"), "B2.java")]
        stats = method_stats(units, RULES)
        assert stats.counted_methods == 3
        assert stats.percent_at_or_under_24 == Fraction(100, 3)

"""Tokenizer contract: spans, trivia attachment, line accounting, and
equivalence between the pure-Python and compiled backends."""

from __future__ import annotations

import subprocess

import pytest
from hypothesis import given, settings, strategies as st

from cddlint.syntax import InvalidCharacter, TokenKind, physical_loc, tokenize
from cddlint.syntax import _scan_py
from cddlint.syntax.tokens import TriviaKind

from conftest import ORACLE_DIR

K = TokenKind


def kinds(text: str) -> list[int]:
    return [t.kind for t in tokenize(text)]


class TestTokenGoldens:
    def test_empty_input_is_empty_sequence(self):
        assert tokenize("") == []

    def test_icp_annotation_tokens(self):
        toks = tokenize("@ICP(0.5)")
        assert [t.kind for t in toks] == [K.AT, K.IDENT, K.LPAREN, K.NUMBER, K.RPAREN]
        assert toks[1].text == "ICP"
        assert toks[3].text == "0.5"

    def test_condition_example_has_ten_tokens(self):
        # hand trace: if ( a > b && c < d )
        toks = tokenize("if (a > b && c < d)")
        assert len(toks) == 10
        assert [t.text for t in toks] == [
            "if", "(", "a", ">", "b", "&&", "c", "<", "d", ")",
        ]

    def test_spans_are_byte_offsets(self):
        toks = tokenize("a  bb")
        assert (toks[0].byte_start, toks[0].byte_end) == (0, 1)
        assert (toks[1].byte_start, toks[1].byte_end) == (3, 5)

    def test_shift_right_stays_split_for_generics(self):
        toks = tokenize("List<List<String>> x")
        assert [t.kind for t in toks].count(K.GT) == 2

    def test_compound_shift_assign_is_one_token(self):
        assert kinds("x >>= 2") == [K.IDENT, K.SHR_ASSIGN, K.NUMBER]
        assert kinds("x >>>= 2") == [K.IDENT, K.USHR_ASSIGN, K.NUMBER]

    def test_number_shapes(self):
        for text in ("0", "42L", "0x1F", "0b1010", "1_000", "3.14", ".5", "1e9", "2.5f"):
            toks = tokenize(text)
            assert [t.kind for t in toks] == [K.NUMBER], text
            assert toks[0].text == text


class TestTrivia:
    def test_comment_attaches_to_following_token(self):
        toks = tokenize("// note\nfoo")
        assert len(toks) == 1
        trivia = toks[0].trivia
        assert [t.kind for t in trivia] == [TriviaKind.LINE_COMMENT, TriviaKind.WHITESPACE]
        assert trivia[0].text == "// note"

    def test_trailing_trivia_rides_an_eof_token(self):
        toks = tokenize("foo // tail")
        assert [t.kind for t in toks] == [K.IDENT, K.EOF]
        assert toks[1].trivia[-1].text == "// tail"

    def test_tokens_and_trivia_cover_the_input(self):
        text = (ORACLE_DIR / "C10.java").read_text()
        data = text.encode()
        pieces = []
        for tok in tokenize(text):
            for tr in tok.trivia:
                pieces.append((tr.byte_start, tr.byte_end))
            if tok.kind != K.EOF:
                pieces.append((tok.byte_start, tok.byte_end))
        pieces.sort()
        pos = 0
        for start, end in pieces:
            assert start == pos
            pos = end
        assert pos == len(data)

    def test_block_comment_line_span(self):
        toks = tokenize("/* a\n b */ x")
        tr = toks[0].trivia[0]
        assert (tr.line_start, tr.line_end) == (1, 2)
        assert toks[0].line_start == 2


class TestErrors:
    def test_invalid_character(self):
        with pytest.raises(InvalidCharacter):
            tokenize("int a = #;")

    def test_unterminated_string(self):
        with pytest.raises(InvalidCharacter):
            tokenize('String s = "abc')

    def test_unterminated_block_comment(self):
        with pytest.raises(InvalidCharacter):
            tokenize("/* never closed")


class TestPhysicalLoc:
    def test_two_newlines(self):
        assert physical_loc("a\nb\n") == 2

    def test_empty(self):
        assert physical_loc("") == 0

    def test_no_trailing_newline(self):
        # printf 'a\nb' | wc -l == 1
        assert physical_loc("a\nb") == 1

    @pytest.mark.parametrize("name", sorted(p.name for p in ORACLE_DIR.glob("*.java")))
    def test_matches_wc_on_fixtures(self, name):
        path = ORACLE_DIR / name
        out = subprocess.run(["wc", "-l"], stdin=path.open("rb"),
                             capture_output=True, text=True, check=True)
        assert physical_loc(path.read_text()) == int(out.stdout.split()[0])


try:
    from cddlint.syntax import _scan_c
except ImportError:  # pure-Python-only install
    _scan_c = None

_java_ish = st.text(
    alphabet=st.sampled_from(
        list("abcXY_$09 \t\n(){}[];,.@?~!=<>&|+-*/%^:\"'\\é世")
    ),
    max_size=80,
)


def _outcome(backend, data: bytes):
    try:
        return "ok", backend.scan(data)
    except InvalidCharacter as exc:
        return "err", (exc.byte_start, exc.byte_end)


@pytest.mark.skipif(_scan_c is None, reason="compiled scanner not built")
class TestBackendEquivalence:
    @given(_java_ish)
    @settings(max_examples=400, deadline=None)
    def test_same_tokens_or_same_error(self, text):
        data = text.encode("utf-8")
        assert _outcome(_scan_c, data) == _outcome(_scan_py, data)

    @pytest.mark.parametrize("name", sorted(p.name for p in ORACLE_DIR.glob("*.java")))
    def test_same_tokens_on_fixtures(self, name):
        data = (ORACLE_DIR / name).read_bytes()
        assert _scan_c.scan(data) == _scan_py.scan(data)

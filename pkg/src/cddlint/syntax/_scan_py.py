"""Pure-Python tokenizer backend.

Reference implementation of the lexical grammar. cddlint.syntax._scan_c is a
compiled port of this module and must produce identical token lists; the
equivalence is enforced by tests. Keep the two in sync.

Contract (shared by both backends):
  - input is UTF-8 encoded bytes; spans are byte offsets, lines are 1-based
  - comments and whitespace are attached as trivia to the following token
  - trailing trivia with no following token is carried by a final EOF token,
    so tokenize("") == [] but tokenize("  ") has one EOF carrier
  - `>>` and `>>>` are emitted as individual GT tokens (the parser re-merges
    adjacent GTs into shifts); `>>=`, `>>>=`, `<<` and `<<=` are single tokens
"""

from __future__ import annotations

from sys import intern

from .tokens import InvalidCharacter, Token, TokenKind, Trivia, TriviaKind

_K = TokenKind

_SINGLE = {
    ord("("): _K.LPAREN,
    ord(")"): _K.RPAREN,
    ord("{"): _K.LBRACE,
    ord("}"): _K.RBRACE,
    ord("["): _K.LBRACKET,
    ord("]"): _K.RBRACKET,
    ord(";"): _K.SEMI,
    ord(","): _K.COMMA,
    ord("@"): _K.AT,
    ord("?"): _K.QUESTION,
    ord("~"): _K.TILDE,
}


def _is_ident_start(c: int) -> bool:
    return 65 <= c <= 90 or 97 <= c <= 122 or c == 95 or c == 36


def _is_ident_part(c: int) -> bool:
    return 65 <= c <= 90 or 97 <= c <= 122 or 48 <= c <= 57 or c == 95 or c == 36


def _is_digit(c: int) -> bool:
    return 48 <= c <= 57


def _is_hex_digit(c: int) -> bool:
    return 48 <= c <= 57 or 97 <= c <= 102 or 65 <= c <= 70 or c == 95


def _line_end(data: bytes, start: int, end: int, line_start: int) -> tuple[int, int]:
    """Return (line_end_of_region, line_after_region) for data[start:end]."""
    nl = data.count(b"\n", start, end)
    after = line_start + nl
    if nl and data[end - 1] == 10:
        return after - 1, after
    return after, after


def scan(data: bytes) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    line = 1
    n = len(data)

    while True:
        # ── trivia run: whitespace and comments attach to the next token ──
        trivia: list[Trivia] = []
        while pos < n:
            c = data[pos]
            if c == 32 or c == 9 or c == 13 or c == 10 or c == 12:
                start, start_line = pos, line
                while pos < n:
                    c = data[pos]
                    if c != 32 and c != 9 and c != 13 and c != 10 and c != 12:
                        break
                    pos += 1
                le, line = _line_end(data, start, pos, start_line)
                trivia.append(
                    Trivia(TriviaKind.WHITESPACE, data[start:pos].decode("utf-8"),
                           start, pos, start_line, le)
                )
            elif c == 47 and pos + 1 < n and data[pos + 1] == 47:  # //
                start, start_line = pos, line
                pos += 2
                while pos < n and data[pos] != 10:
                    pos += 1
                trivia.append(
                    Trivia(TriviaKind.LINE_COMMENT, data[start:pos].decode("utf-8"),
                           start, pos, start_line, start_line)
                )
            elif c == 47 and pos + 1 < n and data[pos + 1] == 42:  # /*
                start, start_line = pos, line
                pos += 2
                while True:
                    if pos + 1 >= n:
                        raise InvalidCharacter("unterminated block comment", start, n, start_line)
                    if data[pos] == 42 and data[pos + 1] == 47:
                        pos += 2
                        break
                    pos += 1
                le, line = _line_end(data, start, pos, start_line)
                trivia.append(
                    Trivia(TriviaKind.BLOCK_COMMENT, data[start:pos].decode("utf-8"),
                           start, pos, start_line, le)
                )
            else:
                break

        if pos >= n:
            if trivia:
                tokens.append(Token(_K.EOF, "", n, n, line, line, tuple(trivia)))
            return tokens

        start = pos
        c = data[pos]

        if _is_ident_start(c):
            pos += 1
            while pos < n and _is_ident_part(data[pos]):
                pos += 1
            kind = _K.IDENT
            text = intern(data[start:pos].decode("utf-8"))
        elif _is_digit(c) or (c == 46 and pos + 1 < n and _is_digit(data[pos + 1])):
            pos = _scan_number(data, pos, n)
            kind = _K.NUMBER
            text = data[start:pos].decode("utf-8")
        elif c == 34:  # "
            pos = _scan_quoted(data, pos, n, 34, line, "string literal")
            kind = _K.STRING
            text = data[start:pos].decode("utf-8")
        elif c == 39:  # '
            pos = _scan_quoted(data, pos, n, 39, line, "char literal")
            kind = _K.CHAR
            text = data[start:pos].decode("utf-8")
        else:
            kind, pos = _scan_punct(data, pos, n, line)
            text = data[start:pos].decode("utf-8")

        tokens.append(Token(kind, text, start, pos, line, line, tuple(trivia)))


def _scan_number(data: bytes, pos: int, n: int) -> int:
    c = data[pos]
    if c == 48 and pos + 1 < n and (data[pos + 1] == 120 or data[pos + 1] == 88):  # 0x
        pos += 2
        while pos < n and _is_hex_digit(data[pos]):
            pos += 1
    elif c == 48 and pos + 1 < n and (data[pos + 1] == 98 or data[pos + 1] == 66):  # 0b
        pos += 2
        while pos < n and (data[pos] == 48 or data[pos] == 49 or data[pos] == 95):
            pos += 1
    else:
        while pos < n and (_is_digit(data[pos]) or data[pos] == 95):
            pos += 1
        if pos < n and data[pos] == 46:  # fraction
            pos += 1
            while pos < n and (_is_digit(data[pos]) or data[pos] == 95):
                pos += 1
        if pos < n and (data[pos] == 101 or data[pos] == 69):  # exponent
            nxt = pos + 1
            if nxt < n and (data[nxt] == 43 or data[nxt] == 45):
                nxt += 1
            if nxt < n and _is_digit(data[nxt]):
                pos = nxt
                while pos < n and _is_digit(data[pos]):
                    pos += 1
    if pos < n and data[pos] in (108, 76, 102, 70, 100, 68):  # lLfFdD
        pos += 1
    return pos


def _scan_quoted(data: bytes, pos: int, n: int, quote: int, line: int, what: str) -> int:
    start = pos
    pos += 1
    while pos < n:
        c = data[pos]
        if c == quote:
            return pos + 1
        if c == 10:
            break
        if c == 92 and pos + 1 < n:  # backslash escape
            pos += 2
        else:
            pos += 1
    raise InvalidCharacter(f"unterminated {what}", start, pos, line)


def _scan_punct(data: bytes, pos: int, n: int, line: int) -> tuple[int, int]:
    c = data[pos]
    kind = _SINGLE.get(c)
    if kind is not None:
        return kind, pos + 1
    nxt = data[pos + 1] if pos + 1 < n else 0

    if c == 61:  # =
        return (_K.EQ, pos + 2) if nxt == 61 else (_K.ASSIGN, pos + 1)
    if c == 33:  # !
        return (_K.NE, pos + 2) if nxt == 61 else (_K.NOT, pos + 1)
    if c == 60:  # <
        if nxt == 60:
            if pos + 2 < n and data[pos + 2] == 61:
                return _K.SHL_ASSIGN, pos + 3
            return _K.SHL, pos + 2
        return (_K.LE, pos + 2) if nxt == 61 else (_K.LT, pos + 1)
    if c == 62:  # > ; >> and >>> stay split so generics close cleanly
        if data[pos:pos + 4] == b">>>=":
            return _K.USHR_ASSIGN, pos + 4
        if data[pos:pos + 3] == b">>=":
            return _K.SHR_ASSIGN, pos + 3
        return (_K.GE, pos + 2) if nxt == 61 else (_K.GT, pos + 1)
    if c == 38:  # &
        if nxt == 38:
            return _K.ANDAND, pos + 2
        return (_K.AMP_ASSIGN, pos + 2) if nxt == 61 else (_K.AMP, pos + 1)
    if c == 124:  # |
        if nxt == 124:
            return _K.OROR, pos + 2
        return (_K.BAR_ASSIGN, pos + 2) if nxt == 61 else (_K.BAR, pos + 1)
    if c == 43:  # +
        if nxt == 43:
            return _K.PLUSPLUS, pos + 2
        return (_K.PLUS_ASSIGN, pos + 2) if nxt == 61 else (_K.PLUS, pos + 1)
    if c == 45:  # -
        if nxt == 45:
            return _K.MINUSMINUS, pos + 2
        if nxt == 62:
            return _K.ARROW, pos + 2
        return (_K.MINUS_ASSIGN, pos + 2) if nxt == 61 else (_K.MINUS, pos + 1)
    if c == 42:  # *
        return (_K.STAR_ASSIGN, pos + 2) if nxt == 61 else (_K.STAR, pos + 1)
    if c == 47:  # / (comments were consumed as trivia)
        return (_K.SLASH_ASSIGN, pos + 2) if nxt == 61 else (_K.SLASH, pos + 1)
    if c == 37:  # %
        return (_K.PERCENT_ASSIGN, pos + 2) if nxt == 61 else (_K.PERCENT, pos + 1)
    if c == 94:  # ^
        return (_K.CARET_ASSIGN, pos + 2) if nxt == 61 else (_K.CARET, pos + 1)
    if c == 58:  # :
        return (_K.COLONCOLON, pos + 2) if nxt == 58 else (_K.COLON, pos + 1)
    if c == 46:  # . (leading-digit case handled by the number path)
        if data[pos:pos + 3] == b"...":
            return _K.ELLIPSIS, pos + 3
        return _K.DOT, pos + 1

    raise InvalidCharacter(f"invalid character 0x{c:02x}", pos, pos + 1, line)

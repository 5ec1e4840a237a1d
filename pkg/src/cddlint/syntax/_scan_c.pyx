# cython: language_level=3
# cython: boundscheck=False, wraparound=False
"""Compiled tokenizer backend: a C port of _scan_py.

Must produce token lists equal to _scan_py.scan on every input (enforced by
the backend-equivalence tests); token kinds are emitted as plain ints, which
compare equal to the TokenKind IntEnum members the parser uses. Keep the two
implementations in sync.
"""

from sys import intern

from cddlint.syntax.tokens import (
    InvalidCharacter,
    Token,
    TokenKind,
    Trivia,
    TriviaKind,
)

cdef int K_IDENT = <int> TokenKind.IDENT
cdef int K_NUMBER = <int> TokenKind.NUMBER
cdef int K_STRING = <int> TokenKind.STRING
cdef int K_CHAR = <int> TokenKind.CHAR
cdef int K_AT = <int> TokenKind.AT
cdef int K_LPAREN = <int> TokenKind.LPAREN
cdef int K_RPAREN = <int> TokenKind.RPAREN
cdef int K_LBRACE = <int> TokenKind.LBRACE
cdef int K_RBRACE = <int> TokenKind.RBRACE
cdef int K_LBRACKET = <int> TokenKind.LBRACKET
cdef int K_RBRACKET = <int> TokenKind.RBRACKET
cdef int K_SEMI = <int> TokenKind.SEMI
cdef int K_COMMA = <int> TokenKind.COMMA
cdef int K_DOT = <int> TokenKind.DOT
cdef int K_ELLIPSIS = <int> TokenKind.ELLIPSIS
cdef int K_COLON = <int> TokenKind.COLON
cdef int K_COLONCOLON = <int> TokenKind.COLONCOLON
cdef int K_QUESTION = <int> TokenKind.QUESTION
cdef int K_ARROW = <int> TokenKind.ARROW
cdef int K_ASSIGN = <int> TokenKind.ASSIGN
cdef int K_PLUS_ASSIGN = <int> TokenKind.PLUS_ASSIGN
cdef int K_MINUS_ASSIGN = <int> TokenKind.MINUS_ASSIGN
cdef int K_STAR_ASSIGN = <int> TokenKind.STAR_ASSIGN
cdef int K_SLASH_ASSIGN = <int> TokenKind.SLASH_ASSIGN
cdef int K_PERCENT_ASSIGN = <int> TokenKind.PERCENT_ASSIGN
cdef int K_AMP_ASSIGN = <int> TokenKind.AMP_ASSIGN
cdef int K_BAR_ASSIGN = <int> TokenKind.BAR_ASSIGN
cdef int K_CARET_ASSIGN = <int> TokenKind.CARET_ASSIGN
cdef int K_SHL_ASSIGN = <int> TokenKind.SHL_ASSIGN
cdef int K_SHR_ASSIGN = <int> TokenKind.SHR_ASSIGN
cdef int K_USHR_ASSIGN = <int> TokenKind.USHR_ASSIGN
cdef int K_EQ = <int> TokenKind.EQ
cdef int K_NE = <int> TokenKind.NE
cdef int K_LT = <int> TokenKind.LT
cdef int K_GT = <int> TokenKind.GT
cdef int K_LE = <int> TokenKind.LE
cdef int K_GE = <int> TokenKind.GE
cdef int K_ANDAND = <int> TokenKind.ANDAND
cdef int K_OROR = <int> TokenKind.OROR
cdef int K_NOT = <int> TokenKind.NOT
cdef int K_AMP = <int> TokenKind.AMP
cdef int K_BAR = <int> TokenKind.BAR
cdef int K_CARET = <int> TokenKind.CARET
cdef int K_TILDE = <int> TokenKind.TILDE
cdef int K_PLUS = <int> TokenKind.PLUS
cdef int K_MINUS = <int> TokenKind.MINUS
cdef int K_STAR = <int> TokenKind.STAR
cdef int K_SLASH = <int> TokenKind.SLASH
cdef int K_PERCENT = <int> TokenKind.PERCENT
cdef int K_PLUSPLUS = <int> TokenKind.PLUSPLUS
cdef int K_MINUSMINUS = <int> TokenKind.MINUSMINUS
cdef int K_SHL = <int> TokenKind.SHL
cdef int K_EOF = <int> TokenKind.EOF

cdef int T_WS = <int> TriviaKind.WHITESPACE
cdef int T_LINE = <int> TriviaKind.LINE_COMMENT
cdef int T_BLOCK = <int> TriviaKind.BLOCK_COMMENT


cdef inline bint _is_ident_start(unsigned char c):
    return (65 <= c <= 90) or (97 <= c <= 122) or c == 95 or c == 36


cdef inline bint _is_ident_part(unsigned char c):
    return (65 <= c <= 90) or (97 <= c <= 122) or (48 <= c <= 57) \
        or c == 95 or c == 36


cdef inline bint _is_digit(unsigned char c):
    return 48 <= c <= 57


cdef inline bint _is_hex_digit(unsigned char c):
    return (48 <= c <= 57) or (97 <= c <= 102) or (65 <= c <= 70) or c == 95


cdef inline bint _is_ws(unsigned char c):
    return c == 32 or c == 9 or c == 13 or c == 10 or c == 12


cdef Py_ssize_t _count_nl(const unsigned char* buf, Py_ssize_t start,
                          Py_ssize_t end):
    cdef Py_ssize_t i, k = 0
    for i in range(start, end):
        if buf[i] == 10:
            k += 1
    return k


def scan(data):
    """Tokenize UTF-8 bytes; same contract as _scan_py.scan."""
    if not isinstance(data, bytes):
        raise TypeError("scan expects bytes")
    cdef const unsigned char* buf = data
    cdef Py_ssize_t n = len(data)
    cdef Py_ssize_t pos = 0, start = 0, nxt_pos = 0, nl = 0
    cdef int line = 1, start_line = 0, le = 0, kind = 0
    cdef unsigned char c, nxt

    tokens = []
    trivia = []

    while True:
        # ── trivia run ──────────────────────────────────────────────────
        del trivia[:]
        while pos < n:
            c = buf[pos]
            if _is_ws(c):
                start = pos
                start_line = line
                while pos < n and _is_ws(buf[pos]):
                    pos += 1
                nl = _count_nl(buf, start, pos)
                line = start_line + <int> nl
                le = line - 1 if (nl and buf[pos - 1] == 10) else line
                trivia.append(Trivia(T_WS, data[start:pos].decode("utf-8"),
                                     start, pos, start_line, le))
            elif c == 47 and pos + 1 < n and buf[pos + 1] == 47:  # //
                start = pos
                start_line = line
                pos += 2
                while pos < n and buf[pos] != 10:
                    pos += 1
                trivia.append(Trivia(T_LINE, data[start:pos].decode("utf-8"),
                                     start, pos, start_line, start_line))
            elif c == 47 and pos + 1 < n and buf[pos + 1] == 42:  # /*
                start = pos
                start_line = line
                pos += 2
                while True:
                    if pos + 1 >= n:
                        raise InvalidCharacter("unterminated block comment",
                                               start, n, start_line)
                    if buf[pos] == 42 and buf[pos + 1] == 47:
                        pos += 2
                        break
                    pos += 1
                nl = _count_nl(buf, start, pos)
                line = start_line + <int> nl
                le = line - 1 if (nl and buf[pos - 1] == 10) else line
                trivia.append(Trivia(T_BLOCK, data[start:pos].decode("utf-8"),
                                     start, pos, start_line, le))
            else:
                break

        if pos >= n:
            if trivia:
                tokens.append(Token(K_EOF, "", n, n, line, line, tuple(trivia)))
            return tokens

        start = pos
        c = buf[pos]

        if _is_ident_start(c):
            pos += 1
            while pos < n and _is_ident_part(buf[pos]):
                pos += 1
            kind = K_IDENT
            text = intern(data[start:pos].decode("utf-8"))
        elif _is_digit(c) or (c == 46 and pos + 1 < n and _is_digit(buf[pos + 1])):
            pos = _scan_number(buf, pos, n)
            kind = K_NUMBER
            text = data[start:pos].decode("utf-8")
        elif c == 34:  # "
            pos = _scan_quoted(buf, pos, n, 34, line, "string literal")
            kind = K_STRING
            text = data[start:pos].decode("utf-8")
        elif c == 39:  # '
            pos = _scan_quoted(buf, pos, n, 39, line, "char literal")
            kind = K_CHAR
            text = data[start:pos].decode("utf-8")
        else:
            kind = _punct_kind(buf, pos, n, line, &nxt_pos)
            pos = nxt_pos
            text = data[start:pos].decode("utf-8")

        tokens.append(Token(kind, text, start, pos, line, line, tuple(trivia)))


cdef Py_ssize_t _scan_number(const unsigned char* buf, Py_ssize_t pos,
                             Py_ssize_t n) except -1:
    cdef unsigned char c = buf[pos]
    cdef Py_ssize_t probe
    if c == 48 and pos + 1 < n and (buf[pos + 1] == 120 or buf[pos + 1] == 88):
        pos += 2
        while pos < n and _is_hex_digit(buf[pos]):
            pos += 1
    elif c == 48 and pos + 1 < n and (buf[pos + 1] == 98 or buf[pos + 1] == 66):
        pos += 2
        while pos < n and (buf[pos] == 48 or buf[pos] == 49 or buf[pos] == 95):
            pos += 1
    else:
        while pos < n and (_is_digit(buf[pos]) or buf[pos] == 95):
            pos += 1
        if pos < n and buf[pos] == 46:
            pos += 1
            while pos < n and (_is_digit(buf[pos]) or buf[pos] == 95):
                pos += 1
        if pos < n and (buf[pos] == 101 or buf[pos] == 69):
            probe = pos + 1
            if probe < n and (buf[probe] == 43 or buf[probe] == 45):
                probe += 1
            if probe < n and _is_digit(buf[probe]):
                pos = probe
                while pos < n and _is_digit(buf[pos]):
                    pos += 1
    if pos < n and (buf[pos] == 108 or buf[pos] == 76 or buf[pos] == 102
                    or buf[pos] == 70 or buf[pos] == 100 or buf[pos] == 68):
        pos += 1
    return pos


cdef Py_ssize_t _scan_quoted(const unsigned char* buf, Py_ssize_t pos,
                             Py_ssize_t n, unsigned char quote, int line,
                             str what) except -1:
    cdef Py_ssize_t start = pos
    cdef unsigned char c
    pos += 1
    while pos < n:
        c = buf[pos]
        if c == quote:
            return pos + 1
        if c == 10:
            break
        if c == 92 and pos + 1 < n:
            pos += 2
        else:
            pos += 1
    raise InvalidCharacter("unterminated " + what, start, pos, line)


cdef int _punct_kind(const unsigned char* buf, Py_ssize_t pos, Py_ssize_t n,
                     int line, Py_ssize_t* end) except -2:
    cdef unsigned char c = buf[pos]
    cdef unsigned char nxt = buf[pos + 1] if pos + 1 < n else 0

    end[0] = pos + 1
    if c == 40: return K_LPAREN
    if c == 41: return K_RPAREN
    if c == 123: return K_LBRACE
    if c == 125: return K_RBRACE
    if c == 91: return K_LBRACKET
    if c == 93: return K_RBRACKET
    if c == 59: return K_SEMI
    if c == 44: return K_COMMA
    if c == 64: return K_AT
    if c == 63: return K_QUESTION
    if c == 126: return K_TILDE

    if c == 61:  # =
        if nxt == 61:
            end[0] = pos + 2
            return K_EQ
        return K_ASSIGN
    if c == 33:  # !
        if nxt == 61:
            end[0] = pos + 2
            return K_NE
        return K_NOT
    if c == 60:  # <
        if nxt == 60:
            if pos + 2 < n and buf[pos + 2] == 61:
                end[0] = pos + 3
                return K_SHL_ASSIGN
            end[0] = pos + 2
            return K_SHL
        if nxt == 61:
            end[0] = pos + 2
            return K_LE
        return K_LT
    if c == 62:  # > ; >> and >>> stay split so generics close cleanly
        if nxt == 62 and pos + 3 < n and buf[pos + 2] == 62 and buf[pos + 3] == 61:
            end[0] = pos + 4
            return K_USHR_ASSIGN
        if nxt == 62 and pos + 2 < n and buf[pos + 2] == 61:
            end[0] = pos + 3
            return K_SHR_ASSIGN
        if nxt == 61:
            end[0] = pos + 2
            return K_GE
        return K_GT
    if c == 38:  # &
        if nxt == 38:
            end[0] = pos + 2
            return K_ANDAND
        if nxt == 61:
            end[0] = pos + 2
            return K_AMP_ASSIGN
        return K_AMP
    if c == 124:  # |
        if nxt == 124:
            end[0] = pos + 2
            return K_OROR
        if nxt == 61:
            end[0] = pos + 2
            return K_BAR_ASSIGN
        return K_BAR
    if c == 43:  # +
        if nxt == 43:
            end[0] = pos + 2
            return K_PLUSPLUS
        if nxt == 61:
            end[0] = pos + 2
            return K_PLUS_ASSIGN
        return K_PLUS
    if c == 45:  # -
        if nxt == 45:
            end[0] = pos + 2
            return K_MINUSMINUS
        if nxt == 62:
            end[0] = pos + 2
            return K_ARROW
        if nxt == 61:
            end[0] = pos + 2
            return K_MINUS_ASSIGN
        return K_MINUS
    if c == 42:  # *
        if nxt == 61:
            end[0] = pos + 2
            return K_STAR_ASSIGN
        return K_STAR
    if c == 47:  # /
        if nxt == 61:
            end[0] = pos + 2
            return K_SLASH_ASSIGN
        return K_SLASH
    if c == 37:  # %
        if nxt == 61:
            end[0] = pos + 2
            return K_PERCENT_ASSIGN
        return K_PERCENT
    if c == 94:  # ^
        if nxt == 61:
            end[0] = pos + 2
            return K_CARET_ASSIGN
        return K_CARET
    if c == 58:  # :
        if nxt == 58:
            end[0] = pos + 2
            return K_COLONCOLON
        return K_COLON
    if c == 46:  # .
        if nxt == 46 and pos + 2 < n and buf[pos + 2] == 46:
            end[0] = pos + 3
            return K_ELLIPSIS
        return K_DOT

    raise InvalidCharacter("invalid character 0x%02x" % c, pos, pos + 1, line)

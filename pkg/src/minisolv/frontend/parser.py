"""Recursive-descent parser for the mini-Solidity subset.

Expressions use a Pratt loop with Solidity's precedence table. Constructs
outside the supported subset raise UnsupportedFeature naming the construct
rather than a generic syntax error.
"""

from __future__ import annotations

from typing import Optional

from minisolv.errors import AnnotationError, LexError, ParseError, ScopeError, UnsupportedFeature
from minisolv.frontend import ast
from minisolv.frontend.tokens import Token, TokenKind, is_int_type_name, tokenize
from minisolv.source import Span, line_starts, position

# ether units in wei
UNITS = {"wei": 1, "szabo": 10 ** 12, "finney": 10 ** 15, "ether": 10 ** 18}

# (left bp, right bp) per binary operator
_INFIX_BP = {
    "||": (1, 2), "&&": (3, 4),
    "==": (5, 6), "!=": (5, 6),
    "<": (7, 8), ">": (7, 8), "<=": (7, 8), ">=": (7, 8),
    "|": (9, 10), "^": (11, 12), "&": (13, 14),
    "<<": (15, 16), ">>": (15, 16),
    "+": (17, 18), "-": (17, 18),
    "*": (19, 20), "/": (19, 20), "%": (19, 20),
    "**": (24, 23),  # right associative, binds tighter than unary
}
_PREFIX_BP = 21
_POSTFIX_BP = 25

_UNSUPPORTED_DECLS = {
    "struct": "struct", "enum": "enum", "event": "event",
    "interface": "interface", "assembly": "inline assembly",
}

_TYPE_KEYWORDS = {"bool", "address", "mapping"}


class Parser:
    def __init__(self, tokens: list[Token], filename: str = "<input>", text: str = ""):
        self.tokens = tokens
        self.pos = 0
        self.filename = filename
        self.text = text
        self._line_starts = line_starts(text) if text else None
        self.in_modifier = False

    # -- token plumbing ----------------------------------------------------

    def peek(self, ahead: int = 0) -> Token:
        i = min(self.pos + ahead, len(self.tokens) - 1)
        return self.tokens[i]

    def next(self) -> Token:
        tok = self.peek()
        if tok.kind is not TokenKind.EOF:
            self.pos += 1
        return tok

    def expect_punct(self, text: str) -> Token:
        tok = self.peek()
        if not tok.is_punct(text):
            raise ParseError(f"unexpected {tok.text!r}", tok.span, expected=(text,))
        return self.next()

    def expect_kw(self, name: str) -> Token:
        tok = self.peek()
        if not tok.is_kw(name):
            raise ParseError(f"unexpected {tok.text!r}", tok.span, expected=(name,))
        return self.next()

    def expect_ident(self) -> Token:
        tok = self.peek()
        if tok.kind is not TokenKind.IDENT:
            raise ParseError(f"unexpected {tok.text!r}", tok.span, expected=("identifier",))
        if tok.text.startswith("__"):
            raise ParseError("identifiers starting with '__' are reserved", tok.span)
        return self.next()

    def take_doc(self) -> Optional[Token]:
        if self.peek().kind is TokenKind.DOC:
            doc = self.next()
            # merge consecutive /// lines into one logical comment
            while self.peek().kind is TokenKind.DOC:
                follow = self.next()
                doc = Token(TokenKind.DOC, doc.text + "\n" + follow.text,
                            doc.span.merge(follow.span))
            return doc
        return None

    # -- unit / contract ---------------------------------------------------

    def parse_unit(self) -> ast.CompilationUnit:
        contracts: list[ast.ContractDef] = []
        start = self.peek().span
        while self.peek().kind is not TokenKind.EOF:
            doc = self.take_doc()
            tok = self.peek()
            if tok.is_kw("pragma") if False else tok.kind is TokenKind.IDENT and tok.text == "pragma":
                self._skip_pragma()
                continue
            if tok.is_kw("contract", "library"):
                contracts.append(self.parse_contract(doc))
            elif tok.is_kw("interface"):
                raise UnsupportedFeature("interface", tok.span)
            else:
                raise ParseError(f"unexpected {tok.text!r} at top level", tok.span,
                                 expected=("contract", "library"))
        span = start if not contracts else start.merge(self.peek().span)
        unit = ast.CompilationUnit(span, contracts)
        return unit.finalize()

    def _skip_pragma(self) -> None:
        # `pragma solidity ^0.4.25;` is accepted and ignored
        while not self.peek().is_punct(";"):
            if self.peek().kind is TokenKind.EOF:
                raise ParseError("unterminated pragma", self.peek().span)
            self.next()
        self.next()

    def parse_contract(self, doc: Optional[Token]) -> ast.ContractDef:
        kw = self.next()
        is_library = kw.text == "library"
        name_tok = self.expect_ident()
        self.expect_punct("{")
        state_vars: list[ast.VarDecl] = []
        functions: list[ast.FunctionDef] = []
        modifiers: list[ast.ModifierDef] = []
        using_for: list[tuple[str, ast.SolType]] = []
        contract_span = kw.span
        invariants = parse_annotations(doc.text, "contract", doc=doc, parser=self) if doc else []

        while not self.peek().is_punct("}"):
            member_doc = self.take_doc()
            tok = self.peek()
            if tok.kind is TokenKind.EOF:
                raise ParseError("unterminated contract body", tok.span, expected=("}",))
            if tok.text in _UNSUPPORTED_DECLS and tok.kind is TokenKind.KEYWORD:
                raise UnsupportedFeature(_UNSUPPORTED_DECLS[tok.text], tok.span)
            if tok.is_kw("using"):
                using_for.append(self.parse_using())
            elif tok.is_kw("function", "constructor"):
                functions.append(self.parse_function(member_doc, name_tok.text))
            elif tok.is_kw("modifier"):
                modifiers.append(self.parse_modifier())
            else:
                state_vars.append(self.parse_state_var())
        close = self.expect_punct("}")
        return ast.ContractDef(contract_span.merge(close.span), name_tok.text, is_library,
                               state_vars, functions, modifiers, invariants, using_for)

    def parse_using(self) -> tuple[str, ast.SolType]:
        self.expect_kw("using")
        lib = self.expect_ident()
        tok = self.peek()
        if not (tok.kind is TokenKind.IDENT and tok.text == "for"):
            raise ParseError(f"unexpected {tok.text!r}", tok.span, expected=("for",))
        self.next()
        ty = self.parse_type()
        self.expect_punct(";")
        return lib.text, ty

    def parse_state_var(self) -> ast.VarDecl:
        start = self.peek().span
        ty = self.parse_type()
        visibility = "internal"
        while self.peek().is_kw("public", "private", "internal"):
            visibility = self.next().text
        if self.peek().is_kw("constant"):
            raise UnsupportedFeature("constant state variable", self.peek().span)
        name = self.expect_ident()
        init = None
        if self.peek().is_punct("="):
            self.next()
            init = self.parse_expression()
        end = self.expect_punct(";")
        return ast.VarDecl(start.merge(end.span), name.text, ty, visibility, init)

    def parse_type(self) -> ast.SolType:
        tok = self.peek()
        base: ast.SolType
        if tok.is_kw("bool"):
            self.next()
            base = ast.BOOL
        elif tok.is_kw("address"):
            self.next()
            base = ast.ADDRESS
        elif tok.kind is TokenKind.KEYWORD and is_int_type_name(tok.text):
            self.next()
            base = _int_type(tok.text)
        elif tok.is_kw("mapping"):
            self.next()
            self.expect_punct("(")
            key_tok = self.peek()
            if not key_tok.is_kw("address"):
                raise UnsupportedFeature(f"mapping key type {key_tok.text!r}", key_tok.span)
            self.next()
            self.expect_punct("=>")
            value = self.parse_type()
            if isinstance(value, (ast.MappingType, ast.ArrayType)):
                raise UnsupportedFeature("nested mapping value type", key_tok.span)
            self.expect_punct(")")
            base = ast.MappingType(value)
        elif tok.is_kw("string", "bytes", "var"):
            raise UnsupportedFeature(f"{tok.text} type", tok.span)
        elif tok.kind is TokenKind.IDENT:
            self.next()
            base = ast.ContractType(tok.text)
        else:
            raise ParseError(f"unexpected {tok.text!r}", tok.span, expected=("type",))
        while self.peek().is_punct("["):
            lb = self.next()
            if not self.peek().is_punct("]"):
                raise UnsupportedFeature("fixed-size array", lb.span)
            self.next()
            if isinstance(base, (ast.MappingType, ast.ArrayType)):
                raise UnsupportedFeature("nested array element type", lb.span)
            base = ast.ArrayType(base)
        return base

    # -- functions and modifiers -------------------------------------------

    def parse_function(self, doc: Optional[Token], contract_name: str) -> ast.FunctionDef:
        kw = self.next()  # function | constructor
        is_constructor = kw.text == "constructor"
        name = ""
        if kw.text == "function" and self.peek().kind is TokenKind.IDENT:
            name_tok = self.expect_ident()
            name = name_tok.text
            if name == contract_name:
                is_constructor = True
                name = ""
        params = self.parse_params()
        visibility = "public"
        is_payable = False
        mutability: Optional[str] = None
        applied: list[tuple[str, Span]] = []
        ret: Optional[ast.VarDecl] = None
        while True:
            tok = self.peek()
            if tok.is_kw("public", "private", "internal"):
                visibility = self.next().text
            elif tok.is_kw("external"):
                raise UnsupportedFeature("external visibility", tok.span)
            elif tok.is_kw("payable"):
                self.next()
                is_payable = True
            elif tok.is_kw("pure", "view"):
                mutability = self.next().text
            elif tok.is_kw("constant"):
                self.next()
                mutability = "view"
            elif tok.is_kw("returns"):
                self.next()
                self.expect_punct("(")
                rty = self.parse_type()
                rname = ""
                rspan = tok.span
                if self.peek().kind is TokenKind.IDENT:
                    rtok = self.expect_ident()
                    rname, rspan = rtok.text, rtok.span
                if self.peek().is_punct(","):
                    raise UnsupportedFeature("tuple return type", self.peek().span)
                self.expect_punct(")")
                ret = ast.VarDecl(rspan, rname, rty)
            elif tok.kind is TokenKind.IDENT:
                mod_tok = self.expect_ident()
                if self.peek().is_punct("("):
                    open_p = self.next()
                    if not self.peek().is_punct(")"):
                        raise UnsupportedFeature("modifier arguments", open_p.span)
                    self.next()
                applied.append((mod_tok.text, mod_tok.span))
            else:
                break
        if self.peek().is_punct(";"):
            raise UnsupportedFeature("function without body", self.peek().span)
        body = self.parse_block()
        fn = ast.FunctionDef(kw.span.merge(body.span), name, params, ret, visibility,
                             is_payable, mutability, applied, body,
                             is_constructor=is_constructor)
        if doc is not None:
            for ann in parse_annotations(doc.text, "function", doc=doc, parser=self):
                if ann.kind is ast.AnnotationKind.PRECONDITION:
                    fn.pre.append(ann)
                else:
                    fn.post.append(ann)
        return fn

    def parse_params(self) -> list[ast.VarDecl]:
        self.expect_punct("(")
        params: list[ast.VarDecl] = []
        while not self.peek().is_punct(")"):
            if params:
                self.expect_punct(",")
            start = self.peek().span
            ty = self.parse_type()
            if self.peek().is_kw("memory", "storage") if False else self.peek().kind is TokenKind.IDENT and self.peek().text in ("memory", "storage", "calldata"):
                self.next()  # data location is irrelevant here
            name = self.expect_ident()
            params.append(ast.VarDecl(start.merge(name.span), name.text, ty))
        self.expect_punct(")")
        return params

    def parse_modifier(self) -> ast.ModifierDef:
        kw = self.expect_kw("modifier")
        name = self.expect_ident()
        if self.peek().is_punct("("):
            open_p = self.next()
            if not self.peek().is_punct(")"):
                raise UnsupportedFeature("modifier parameters", open_p.span)
            self.next()
        saved, self.in_modifier = self.in_modifier, True
        try:
            body = self.parse_block()
        finally:
            self.in_modifier = saved
        placeholders = sum(1 for s in _walk_stmts(body) if isinstance(s, ast.PlaceholderStmt))
        if placeholders != 1:
            raise ParseError(f"modifier body must contain exactly one '_;' "
                             f"placeholder, found {placeholders}", name.span)
        return ast.ModifierDef(kw.span.merge(body.span), name.text, body)

    # -- statements ----------------------------------------------------------

    def parse_block(self) -> ast.Block:
        open_b = self.expect_punct("{")
        stmts: list[ast.Stmt] = []
        while not self.peek().is_punct("}"):
            if self.peek().kind is TokenKind.EOF:
                raise ParseError("unterminated block", self.peek().span, expected=("}",))
            stmts.append(self.parse_statement())
        close = self.expect_punct("}")
        return ast.Block(open_b.span.merge(close.span), stmts)

    def parse_statement(self) -> ast.Stmt:
        doc = self.take_doc()
        tok = self.peek()
        if doc is not None and not tok.is_kw("while", "for"):
            raise AnnotationError("documentation comment must precede a declaration or loop",
                                  doc.span)
        if tok.is_punct("{"):
            return self.parse_block()
        if tok.text in _UNSUPPORTED_DECLS and tok.kind is TokenKind.KEYWORD:
            raise UnsupportedFeature(_UNSUPPORTED_DECLS[tok.text], tok.span)
        if tok.is_kw("new"):
            raise UnsupportedFeature("new expression", tok.span)
        if tok.is_kw("emit"):
            raise UnsupportedFeature("event", tok.span)
        if tok.is_kw("delete"):
            raise UnsupportedFeature("delete", tok.span)
        if tok.is_kw("if"):
            return self.parse_if()
        if tok.is_kw("while"):
            return self.parse_while(doc)
        if tok.is_kw("for"):
            return self.parse_for(doc)
        if tok.is_kw("return"):
            self.next()
            value = None
            if not self.peek().is_punct(";"):
                value = self.parse_expression()
            end = self.expect_punct(";")
            return ast.ReturnStmt(tok.span.merge(end.span), value)
        if tok.is_kw("require"):
            self.next()
            self.expect_punct("(")
            cond = self.parse_expression()
            if self.peek().is_punct(","):  # require(cond, "message")
                self.next()
                self.next()
            self.expect_punct(")")
            end = self.expect_punct(";")
            return ast.RequireStmt(tok.span.merge(end.span), cond)
        if tok.is_kw("assert"):
            self.next()
            self.expect_punct("(")
            cond = self.parse_expression()
            self.expect_punct(")")
            end = self.expect_punct(";")
            return ast.AssertStmt(tok.span.merge(end.span), cond)
        if tok.is_kw("revert"):
            self.next()
            self.expect_punct("(")
            if self.peek().kind is TokenKind.STRING:
                self.next()
            self.expect_punct(")")
            end = self.expect_punct(";")
            return ast.RevertStmt(tok.span.merge(end.span))
        if tok.is_kw("throw"):
            self.next()
            end = self.expect_punct(";")
            return ast.RevertStmt(tok.span.merge(end.span))
        if self.in_modifier and tok.kind is TokenKind.IDENT and tok.text == "_":
            self.next()
            end = self.expect_punct(";")
            return ast.PlaceholderStmt(tok.span.merge(end.span))
        if self._at_local_decl():
            return self.parse_local_decl()
        return self.parse_expr_statement(terminated=True)

    def _at_local_decl(self) -> bool:
        tok = self.peek()
        if tok.kind is TokenKind.KEYWORD and (tok.text in _TYPE_KEYWORDS or is_int_type_name(tok.text)):
            return True
        # `Name ident` where Name is a contract type
        if tok.kind is TokenKind.IDENT and self.peek(1).kind is TokenKind.IDENT:
            return True
        if tok.kind is TokenKind.IDENT and self.peek(1).is_punct("[") and self.peek(2).is_punct("]"):
            return True
        return False

    def parse_local_decl(self) -> ast.VarDeclStmt:
        start = self.peek().span
        ty = self.parse_type()
        name = self.expect_ident()
        init = None
        if self.peek().is_punct("="):
            self.next()
            init = self.parse_expression()
        end = self.expect_punct(";")
        decl = ast.VarDecl(start.merge(name.span), name.text, ty)
        return ast.VarDeclStmt(start.merge(end.span), decl, init)

    def parse_if(self) -> ast.IfStmt:
        kw = self.expect_kw("if")
        self.expect_punct("(")
        cond = self.parse_expression()
        self.expect_punct(")")
        then_branch = self._branch_block()
        else_branch = None
        if self.peek().is_kw("else"):
            self.next()
            if self.peek().is_kw("if"):
                nested = self.parse_if()
                else_branch = ast.Block(nested.span, [nested])
            else:
                else_branch = self._branch_block()
        end = else_branch.span if else_branch else then_branch.span
        return ast.IfStmt(kw.span.merge(end), cond, then_branch, else_branch)

    def _branch_block(self) -> ast.Block:
        if self.peek().is_punct("{"):
            return self.parse_block()
        stmt = self.parse_statement()
        return ast.Block(stmt.span, [stmt])

    def parse_while(self, doc: Optional[Token]) -> ast.WhileStmt:
        kw = self.expect_kw("while")
        invariants = parse_annotations(doc.text, "loop", doc=doc, parser=self) if doc else []
        self.expect_punct("(")
        cond = self.parse_expression()
        self.expect_punct(")")
        body = self._branch_block()
        return ast.WhileStmt(kw.span.merge(body.span), cond, body, invariants)

    def parse_for(self, doc: Optional[Token]) -> ast.ForStmt:
        kw = self.expect_kw("for")
        invariants = parse_annotations(doc.text, "loop", doc=doc, parser=self) if doc else []
        self.expect_punct("(")
        init: Optional[ast.Stmt] = None
        if not self.peek().is_punct(";"):
            if self._at_local_decl():
                init = self.parse_local_decl()
            else:
                init = self.parse_expr_statement(terminated=True)
        else:
            self.next()
        cond = None
        if not self.peek().is_punct(";"):
            cond = self.parse_expression()
        self.expect_punct(";")
        update: Optional[ast.Stmt] = None
        if not self.peek().is_punct(")"):
            update = self.parse_expr_statement(terminated=False)
        self.expect_punct(")")
        body = self._branch_block()
        return ast.ForStmt(kw.span.merge(body.span), init, cond, update, body, invariants)

    def parse_expr_statement(self, terminated: bool) -> ast.Stmt:
        start = self.peek().span
        expr = self.parse_expression()
        tok = self.peek()
        stmt: ast.Stmt
        if tok.is_punct("=", "+=", "-="):
            op = self.next().text
            value = self.parse_expression()
            stmt = ast.AssignStmt(start.merge(value.span), expr, op, value)
        elif tok.is_punct("*=", "/="):
            raise UnsupportedFeature(f"compound assignment {tok.text}", tok.span)
        elif tok.is_punct("++", "--"):
            op_tok = self.next()
            one = ast.NumberLit(op_tok.span, 1, "1")
            stmt = ast.AssignStmt(start.merge(op_tok.span), expr,
                                  "+=" if op_tok.text == "++" else "-=", one)
        else:
            stmt = ast.ExprStmt(start.merge(expr.span), expr)
        if terminated:
            end = self.expect_punct(";")
            stmt.span = stmt.span.merge(end.span)
        return stmt

    # -- expressions ---------------------------------------------------------

    def parse_expression(self, min_bp: int = 0) -> ast.Expr:
        lhs = self.parse_prefix()
        while True:
            tok = self.peek()
            if tok.is_punct("?"):
                raise UnsupportedFeature("conditional expression", tok.span)
            if tok.kind is not TokenKind.PUNCT or tok.text not in _INFIX_BP:
                break
            left_bp, right_bp = _INFIX_BP[tok.text]
            if left_bp < min_bp:
                break
            self.next()
            rhs = self.parse_expression(right_bp)
            lhs = ast.BinaryOp(lhs.span.merge(rhs.span), tok.text, lhs, rhs)
        return lhs

    def parse_prefix(self) -> ast.Expr:
        tok = self.peek()
        if tok.is_punct("!", "-", "~"):
            self.next()
            operand = self.parse_expression(_PREFIX_BP)
            return ast.UnaryOp(tok.span.merge(operand.span), tok.text, operand)
        if tok.is_punct("++", "--"):
            raise UnsupportedFeature("prefix increment/decrement", tok.span)
        return self.parse_postfix()

    def parse_postfix(self) -> ast.Expr:
        expr = self.parse_primary()
        while True:
            tok = self.peek()
            if tok.is_punct("."):
                self.next()
                member = self.peek()
                if member.kind not in (TokenKind.IDENT, TokenKind.KEYWORD):
                    raise ParseError(f"unexpected {member.text!r}", member.span,
                                     expected=("member name",))
                self.next()
                if member.text in ("delegatecall", "callcode"):
                    raise UnsupportedFeature(member.text, member.span)
                expr = ast.MemberAccess(expr.span.merge(member.span), expr, member.text)
            elif tok.is_punct("["):
                self.next()
                index = self.parse_expression()
                close = self.expect_punct("]")
                expr = ast.IndexAccess(expr.span.merge(close.span), expr, index)
            elif tok.is_punct("("):
                self.next()
                args: list[ast.Expr] = []
                while not self.peek().is_punct(")"):
                    if args:
                        self.expect_punct(",")
                    if self.peek().kind is TokenKind.STRING:
                        lit = self.next()
                        args.append(ast.StringLit(lit.span, lit.text))
                    else:
                        args.append(self.parse_expression())
                close = self.expect_punct(")")
                expr = ast.CallExpr(expr.span.merge(close.span), expr, args)
            else:
                break
        return expr

    def parse_primary(self) -> ast.Expr:
        tok = self.peek()
        if tok.kind is TokenKind.NUMBER:
            self.next()
            value = int(tok.text, 16) if tok.text.lower().startswith("0x") else int(tok.text)
            text = tok.text
            span = tok.span
            unit_tok = self.peek()
            if unit_tok.is_kw("ether", "wei", "finney", "szabo"):
                self.next()
                value *= UNITS[unit_tok.text]
                text = f"{tok.text} {unit_tok.text}"
                span = span.merge(unit_tok.span)
            return ast.NumberLit(span, value, text)
        if tok.is_kw("true", "false"):
            self.next()
            return ast.BoolLit(tok.span, tok.text == "true")
        if tok.kind is TokenKind.IDENT:
            if tok.text == "this":
                self.next()
                return ast.ThisExpr(tok.span)
            self.next()
            return ast.Ident(tok.span, tok.text)
        if tok.kind is TokenKind.KEYWORD and (is_int_type_name(tok.text) or tok.text in ("address", "bool")):
            # type name in expression position: a cast like uint256(x)
            self.next()
            return ast.Ident(tok.span, tok.text)
        if tok.is_kw("new"):
            raise UnsupportedFeature("new expression", tok.span)
        if tok.is_punct("("):
            self.next()
            inner = self.parse_expression()
            self.expect_punct(")")
            return inner
        raise ParseError(f"unexpected {tok.text!r}", tok.span, expected=("expression",))


def _int_type(name: str) -> ast.IntType:
    signed = not name.startswith("u")
    digits = name.lstrip("uint")
    bits = int(digits) if digits else 256
    return ast.IntType(bits, signed)


def _walk_stmts(stmt: ast.Stmt):
    yield stmt
    for child in stmt.children():
        if isinstance(child, ast.Stmt):
            yield from _walk_stmts(child)


# ---------------------------------------------------------------------------
# Annotation parsing


_KIND_BY_SCOPE = {
    "contract": {"invariant": ast.AnnotationKind.CONTRACT_INVARIANT},
    "loop": {"invariant": ast.AnnotationKind.LOOP_INVARIANT},
    "function": {
        "precondition": ast.AnnotationKind.PRECONDITION,
        "postcondition": ast.AnnotationKind.POSTCONDITION,
    },
}

_ALL_KINDS = ("invariant", "precondition", "postcondition")


def parse_annotations(doc_comment: str, scope: str,
                      doc: Optional[Token] = None,
                      parser: Optional[Parser] = None) -> list[ast.Annotation]:
    """Extract `@notice <kind> <expr>` annotations from a documentation comment.

    `scope` is one of "contract", "function", "loop" and controls which kinds
    are legal. When `doc` and `parser` are given, expression spans are mapped
    back into the original source file.
    """
    if scope not in _KIND_BY_SCOPE:
        raise ValueError(f"unknown annotation scope {scope!r}")
    base_offset = doc.span.start + 3 if doc is not None else 0
    filename = doc.span.file if doc is not None else "<annotation>"
    full_text = parser.text if parser is not None and parser.text else None

    # collect (kind, expr text, absolute offset) triples line by line
    items: list[tuple[str, str, int]] = []
    offset = 0
    current: Optional[list] = None  # [kind, text, abs offset]
    for line in doc_comment.split("\n"):
        stripped = line.lstrip(" \t*")
        lead = len(line) - len(stripped)
        at = stripped.find("@notice")
        if at >= 0:
            rest = stripped[at + len("@notice"):]
            kind_and_expr = rest.strip().split(None, 1)
            if not kind_and_expr:
                raise AnnotationError("empty @notice annotation", doc.span if doc else None)
            kind = kind_and_expr[0]
            if kind not in _ALL_KINDS:
                raise AnnotationError(f"unknown annotation kind {kind!r}",
                                      doc.span if doc else None)
            expr_text = kind_and_expr[1] if len(kind_and_expr) > 1 else ""
            rel = offset + lead + at + len("@notice")
            rel += len(rest) - len(rest.lstrip()) + len(kind)
            if current is not None:
                items.append(tuple(current))
            current = [kind, expr_text, base_offset + rel + (len(expr_text) - len(expr_text.lstrip()) if expr_text else 0) + 1]
        elif current is not None and stripped.strip():
            current[1] += " " + stripped.strip()
        offset += len(line) + 1
    if current is not None:
        items.append(tuple(current))

    annotations: list[ast.Annotation] = []
    for kind, expr_text, abs_off in items:
        if not expr_text.strip():
            raise AnnotationError(f"annotation {kind!r} has no expression",
                                  doc.span if doc else None)
        legal = _KIND_BY_SCOPE[scope]
        if kind not in legal:
            raise ScopeError(f"annotation kind {kind!r} is not allowed on a {scope}",
                             doc.span if doc else None)
        expr = _parse_annotation_expr(expr_text, filename, abs_off, full_text)
        span = expr.span
        annotations.append(ast.Annotation(span, legal[kind], expr, expr_text.strip()))
    return annotations


def _parse_annotation_expr(text: str, filename: str, abs_offset: int,
                           full_text: Optional[str]) -> ast.Expr:
    try:
        toks = tokenize(text, filename)
    except LexError as err:
        raise AnnotationError(f"malformed annotation expression: {err.message}", err.span)
    if full_text is not None:
        starts = line_starts(full_text)
        shifted = []
        for t in toks:
            a, b = t.span.start + abs_offset, t.span.end + abs_offset
            line, col = position(starts, a)
            shifted.append(Token(t.kind, t.text, Span(filename, a, b, line, col)))
        toks = shifted
    sub = Parser(toks, filename, full_text or "")
    try:
        expr = sub.parse_expression()
    except ParseError as err:
        raise AnnotationError(f"malformed annotation expression: {err.message}", err.span)
    trailing = sub.peek()
    if trailing.kind is not TokenKind.EOF:
        raise AnnotationError(f"trailing input in annotation expression: {trailing.text!r}",
                              trailing.span)
    return expr


def parse(tokens: list[Token], filename: str = "<input>", text: str = "") -> ast.CompilationUnit:
    return Parser(tokens, filename, text).parse_unit()


def parse_source(text: str, filename: str = "<input>") -> ast.CompilationUnit:
    return parse(tokenize(text, filename), filename, text)

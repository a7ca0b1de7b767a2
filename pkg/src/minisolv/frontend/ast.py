"""AST for the mini-Solidity subset plus its annotation language.

Nodes are plain mutable dataclasses; the resolver fills in ``ty`` / ``decl``
fields in place. Node identity (``nid``) is assigned by a deterministic
pre-order walk once parsing finishes, which also builds the unit's source map.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator, Optional

from minisolv.source import Span


# ---------------------------------------------------------------------------
# Types


class SolType:
    def __eq__(self, other) -> bool:
        return type(self) is type(other) and self.__dict__ == other.__dict__

    def __hash__(self) -> int:
        return hash(repr(self))

    def __repr__(self) -> str:
        return self.__class__.__name__


class BoolType(SolType):
    def __repr__(self) -> str:
        return "bool"


@dataclass(repr=False, eq=False)
class IntType(SolType):
    bits: int
    signed: bool

    def __eq__(self, other) -> bool:
        return isinstance(other, IntType) and (self.bits, self.signed) == (other.bits, other.signed)

    def __hash__(self) -> int:
        return hash(("int", self.bits, self.signed))

    def __repr__(self) -> str:
        return f"{'' if self.signed else 'u'}int{self.bits}"

    @property
    def min_value(self) -> int:
        return -(1 << (self.bits - 1)) if self.signed else 0

    @property
    def max_value(self) -> int:
        return (1 << (self.bits - 1)) - 1 if self.signed else (1 << self.bits) - 1


class AddressType(SolType):
    def __repr__(self) -> str:
        return "address"


@dataclass(repr=False, eq=False)
class MappingType(SolType):
    value: SolType

    def __eq__(self, other) -> bool:
        return isinstance(other, MappingType) and self.value == other.value

    def __hash__(self) -> int:
        return hash(("mapping", self.value))

    def __repr__(self) -> str:
        return f"mapping(address => {self.value!r})"


@dataclass(repr=False, eq=False)
class ArrayType(SolType):
    elem: SolType

    def __eq__(self, other) -> bool:
        return isinstance(other, ArrayType) and self.elem == other.elem

    def __hash__(self) -> int:
        return hash(("array", self.elem))

    def __repr__(self) -> str:
        return f"{self.elem!r}[]"


@dataclass(repr=False, eq=False)
class ContractType(SolType):
    """A reference to a contract instance; represented as an address."""

    name: str

    def __eq__(self, other) -> bool:
        return isinstance(other, ContractType) and self.name == other.name

    def __hash__(self) -> int:
        return hash(("contract", self.name))

    def __repr__(self) -> str:
        return self.name


BOOL = BoolType()
ADDRESS = AddressType()
UINT256 = IntType(256, False)
INT256 = IntType(256, True)


def is_value_type(ty: SolType) -> bool:
    return isinstance(ty, (BoolType, IntType, AddressType, ContractType))


# ---------------------------------------------------------------------------
# Base node


@dataclass(eq=False)
class Node:
    span: Span = field(repr=False)

    def __post_init__(self):
        self.nid: int = -1

    def children(self) -> Iterator["Node"]:
        for value in self.__dict__.values():
            if isinstance(value, Node):
                yield value
            elif isinstance(value, list):
                for item in value:
                    if isinstance(item, Node):
                        yield item


# ---------------------------------------------------------------------------
# Expressions


@dataclass(eq=False)
class Expr(Node):
    def __post_init__(self):
        super().__post_init__()
        self.ty: Optional[SolType] = None


@dataclass(eq=False)
class NumberLit(Expr):
    value: int
    text: str  # original spelling, units already folded in


@dataclass(eq=False)
class BoolLit(Expr):
    value: bool


@dataclass(eq=False)
class StringLit(Expr):
    value: str


@dataclass(eq=False)
class Ident(Expr):
    name: str

    def __post_init__(self):
        super().__post_init__()
        self.decl: Optional[Node] = None


@dataclass(eq=False)
class MemberAccess(Expr):
    obj: Expr
    member: str

    def __post_init__(self):
        super().__post_init__()
        # filled by the resolver: "msg_sender", "msg_value", "balance",
        # "array_length", "state_getter", "library_method", "transfer",
        # "send", "call_value"
        self.kind: Optional[str] = None
        self.decl: Optional[Node] = None


@dataclass(eq=False)
class IndexAccess(Expr):
    obj: Expr
    index: Expr


@dataclass(eq=False)
class UnaryOp(Expr):
    op: str
    operand: Expr


@dataclass(eq=False)
class BinaryOp(Expr):
    op: str
    lhs: Expr
    rhs: Expr


@dataclass(eq=False)
class CallExpr(Expr):
    callee: Expr
    args: list[Expr]

    def __post_init__(self):
        super().__post_init__()
        # filled by the resolver: "function", "getter", "sum", "cast",
        # "transfer", "send", "call_value"
        self.kind: Optional[str] = None
        self.decl: Optional[Node] = None
        self.cast_to: Optional[SolType] = None
        self.receiver: Optional[Expr] = None  # for member calls a.f(...)


@dataclass(eq=False)
class ThisExpr(Expr):
    pass


# ---------------------------------------------------------------------------
# Annotations


class AnnotationKind(enum.Enum):
    CONTRACT_INVARIANT = "invariant"
    PRECONDITION = "precondition"
    POSTCONDITION = "postcondition"
    LOOP_INVARIANT = "loop invariant"


@dataclass(eq=False)
class Annotation(Node):
    kind: AnnotationKind
    expr: Expr
    text: str  # original expression text


# ---------------------------------------------------------------------------
# Statements


@dataclass(eq=False)
class Stmt(Node):
    pass


@dataclass(eq=False)
class Block(Stmt):
    stmts: list[Stmt]


@dataclass(eq=False)
class VarDeclStmt(Stmt):
    decl: "VarDecl"
    init: Optional[Expr]


@dataclass(eq=False)
class AssignStmt(Stmt):
    target: Expr
    op: str  # "=", "+=", "-="
    value: Expr


@dataclass(eq=False)
class ExprStmt(Stmt):
    expr: Expr


@dataclass(eq=False)
class IfStmt(Stmt):
    cond: Expr
    then_branch: Block
    else_branch: Optional[Block]


@dataclass(eq=False)
class WhileStmt(Stmt):
    cond: Expr
    body: Block
    invariants: list[Annotation]


@dataclass(eq=False)
class ForStmt(Stmt):
    init: Optional[Stmt]
    cond: Optional[Expr]
    update: Optional[Stmt]
    body: Block
    invariants: list[Annotation]


@dataclass(eq=False)
class ReturnStmt(Stmt):
    value: Optional[Expr]


@dataclass(eq=False)
class RequireStmt(Stmt):
    cond: Expr


@dataclass(eq=False)
class AssertStmt(Stmt):
    cond: Expr


@dataclass(eq=False)
class RevertStmt(Stmt):
    pass


@dataclass(eq=False)
class PlaceholderStmt(Stmt):
    """The `_;` statement inside a modifier body."""


# ---------------------------------------------------------------------------
# Declarations


@dataclass(eq=False)
class VarDecl(Node):
    name: str
    ty: SolType
    visibility: str = "internal"  # state vars: public/internal/private
    initializer: Optional[Expr] = None


@dataclass(eq=False)
class FunctionDef(Node):
    name: str  # "" for the fallback function
    params: list[VarDecl]
    ret: Optional[VarDecl]
    visibility: str  # public / internal / private
    is_payable: bool
    mutability: Optional[str]  # pure / view / None
    applied_modifiers: list[tuple[str, Span]]
    body: Block
    pre: list[Annotation] = field(default_factory=list)
    post: list[Annotation] = field(default_factory=list)
    is_constructor: bool = False

    def __post_init__(self):
        super().__post_init__()
        self.contract: Optional["ContractDef"] = None

    @property
    def display_name(self) -> str:
        if self.is_constructor:
            return "constructor"
        return self.name or "<fallback>"


@dataclass(eq=False)
class ModifierDef(Node):
    name: str
    body: Block


@dataclass(eq=False)
class ContractDef(Node):
    name: str
    is_library: bool
    state_vars: list[VarDecl]
    functions: list[FunctionDef]
    modifiers: list[ModifierDef]
    invariants: list[Annotation]
    using_for: list[tuple[str, SolType]]  # (library name, value type)

    def constructor(self) -> Optional[FunctionDef]:
        for f in self.functions:
            if f.is_constructor:
                return f
        return None


@dataclass(eq=False)
class CompilationUnit(Node):
    contracts: list[ContractDef]

    def __post_init__(self):
        super().__post_init__()
        self.source_map: dict[int, Span] = {}
        self.resolved: bool = False

    def finalize(self) -> "CompilationUnit":
        """Assign deterministic node ids in pre-order and build the source map."""
        counter = 0
        stack: list[Node] = [self]
        self.source_map = {}
        while stack:
            node = stack.pop()
            node.nid = counter
            self.source_map[counter] = node.span
            counter += 1
            stack.extend(reversed(list(node.children())))
        return self

    def walk(self) -> Iterator[Node]:
        stack: list[Node] = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(list(node.children())))

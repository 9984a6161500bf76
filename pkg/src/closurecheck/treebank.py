"""Penn-style bracketed constituency trees: parsing plus the structural queries
the phrase-guided alignment refinement needs (smallest covering subtree,
adjacent leaves, label classing).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

CLAUSE = "CLAUSE"
PHRASE = "PHRASE"
VERB_PHRASE = "VERB_PHRASE"
OTHER = "OTHER"

# Bracket characters cannot appear raw inside a bracketed format; treebanks
# escape them in leaf tokens. Labels are kept verbatim.
_TOKEN_DECODE = {"-LRB-": "(", "-RRB-": ")"}
_TOKEN_ENCODE = {"(": "-LRB-", ")": "-RRB-"}


class BracketParseError(ValueError):
    """Malformed bracketing; `offset` is the character position of the fault."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


@dataclass(frozen=True)
class TreeNode:
    """Internal node (label + children) or leaf (token + leaf_index)."""

    label: Optional[str] = None
    children: tuple["TreeNode", ...] = ()
    token: Optional[str] = None
    leaf_index: Optional[int] = None

    @property
    def is_leaf(self) -> bool:
        return self.token is not None

    def iter_leaves(self) -> Iterator["TreeNode"]:
        if self.is_leaf:
            yield self
        for child in self.children:
            yield from child.iter_leaves()

    def leaf_indices(self) -> tuple[int, ...]:
        return tuple(leaf.leaf_index for leaf in self.iter_leaves())  # type: ignore[misc]


@dataclass(frozen=True)
class ConstituencyTree:
    root: TreeNode
    # (token, leaf_index) left to right; leaf_index is always 0..n-1.
    leaves: tuple[tuple[str, int], ...] = field(init=False)

    def __post_init__(self) -> None:
        leaves = tuple((leaf.token, leaf.leaf_index) for leaf in self.root.iter_leaves())
        ancestors: dict[int, tuple[TreeNode, ...]] = {}

        def walk(node: TreeNode, path: tuple[TreeNode, ...]) -> None:
            if node.is_leaf:
                ancestors[node.leaf_index] = path  # type: ignore[index]
                return
            for child in node.children:
                walk(child, path + (node,))

        walk(self.root, ())
        object.__setattr__(self, "leaves", leaves)
        object.__setattr__(self, "_ancestors", ancestors)

    def ancestors_of(self, leaf_index: int) -> tuple[TreeNode, ...]:
        """Root-to-parent chain of internal nodes above the leaf."""
        return self._ancestors[leaf_index]  # type: ignore[attr-defined]


def _scan_atom(text: str, pos: int) -> tuple[str, int]:
    start = pos
    while pos < len(text) and not text[pos].isspace() and text[pos] not in "()":
        pos += 1
    return text[start:pos], pos


def _skip_space(text: str, pos: int) -> int:
    while pos < len(text) and text[pos].isspace():
        pos += 1
    return pos


def _parse_node(text: str, pos: int, counter: list[int]) -> tuple[TreeNode, int]:
    # pos sits on '(' when called
    pos = _skip_space(text, pos + 1)
    label, pos = _scan_atom(text, pos)
    if not label:
        raise BracketParseError("missing node label", pos)
    children: list[TreeNode] = []
    while True:
        pos = _skip_space(text, pos)
        if pos >= len(text):
            raise BracketParseError(f"unclosed node {label!r}", len(text))
        ch = text[pos]
        if ch == ")":
            if not children:
                raise BracketParseError(f"node {label!r} has no children", pos)
            return TreeNode(label=label, children=tuple(children)), pos + 1
        if ch == "(":
            child, pos = _parse_node(text, pos, counter)
            children.append(child)
        else:
            raw, pos = _scan_atom(text, pos)
            token = _TOKEN_DECODE.get(raw, raw)
            children.append(TreeNode(token=token, leaf_index=counter[0]))
            counter[0] += 1


def parse_bracket(text: str) -> ConstituencyTree:
    """Parse one bracketed tree; raises BracketParseError with a char offset."""
    pos = _skip_space(text, 0)
    if pos >= len(text) or text[pos] != "(":
        raise BracketParseError("expected '('", pos)
    counter = [0]
    root, pos = _parse_node(text, pos, counter)
    pos = _skip_space(text, pos)
    if pos < len(text):
        raise BracketParseError("trailing content after tree", pos)
    return ConstituencyTree(root)


def serialize(tree: ConstituencyTree) -> str:
    def emit(node: TreeNode) -> str:
        if node.is_leaf:
            return _TOKEN_ENCODE.get(node.token, node.token)  # type: ignore[arg-type]
        inner = " ".join(emit(child) for child in node.children)
        return f"({node.label} {inner})"

    return emit(tree.root)


def smallest_covering_subtree(tree: ConstituencyTree, leaf_index: int) -> TreeNode:
    """Lowest ancestor of the leaf dominating at least two leaves.

    A single-leaf tree has no such ancestor; the root stands in.
    """
    chain = tree.ancestors_of(leaf_index)
    for node in reversed(chain):
        if len(node.leaf_indices()) >= 2:
            return node
    return tree.root


def adjacent_leaves(node: TreeNode, leaf_index: int) -> list[int]:
    """Immediate left/right neighbors of the leaf within the node's leaf span."""
    indices = node.leaf_indices()
    pos = indices.index(leaf_index)
    out = []
    if pos > 0:
        out.append(indices[pos - 1])
    if pos + 1 < len(indices):
        out.append(indices[pos + 1])
    return out


@dataclass(frozen=True)
class LabelTable:
    clause: frozenset[str]
    verb_phrase: frozenset[str]
    phrase: frozenset[str]


# Only a handful of these labels show up in the bundled fixtures; the rest of
# each inventory follows the standard treebank tag sets.
ZH_LABELS = LabelTable(
    clause=frozenset({"IP", "CP", "S"}),
    verb_phrase=frozenset({"VP"}),
    phrase=frozenset({"NP", "DNP", "PP", "QP", "ADJP", "DP", "LCP", "CLP"}),
)
EN_LABELS = LabelTable(
    clause=frozenset({"S", "SBAR", "SINV", "SQ"}),
    verb_phrase=frozenset({"VP"}),
    phrase=frozenset({"NP", "PP", "ADJP", "ADVP", "QP", "WHNP"}),
)


def label_table_for(language: str) -> LabelTable:
    return ZH_LABELS if language.lower().startswith("zh") else EN_LABELS


def classify_label(label: str, table: LabelTable) -> str:
    if label in table.clause:
        return CLAUSE
    if label in table.verb_phrase:
        return VERB_PHRASE
    if label in table.phrase:
        return PHRASE
    return OTHER

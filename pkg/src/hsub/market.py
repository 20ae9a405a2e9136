"""Buyer-seller markets: transaction matrices and stable matching.

An (n, k) market has n buyers and n sellers trading k commodity types.
Buyer i quotes a maximum price for each item it wants; seller j quotes a
reserve for each item it holds.  Item l can change hands between i and j
when both list it and the quote meets the reserve.  Three n x n matrices
summarize every pairing:

    counts[i, j]    number of transactable items
    prices[i, j]    sum of buyer quotes over those items
    reserves[i, j]  sum of seller reserves over those items

All three reduce to dominance counting: encode buyers as row vectors over
items (quote, or -inf when unlisted) and sellers likewise (reserve, or
+inf), and "transactable" becomes a coordinatewise <= between the two.
Stable matching then runs buyer-proposing deferred acceptance over
preference orders computed from the matrices.

Text format, one record per line, '#' starts a comment:

    market <n> <k>
    b <i> <item>:<max_price> ...
    s <j> <item>:<reserve> ...

Every buyer and seller line must appear exactly once; an agent with no
listed items is written as a bare ``b <i>`` or ``s <j>`` line.
"""
from __future__ import annotations

import ast
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .dominance import dominance_matrix, weighted_dominance
from .graphs import GraphFormatError


@dataclass(frozen=True)
class Buyer:
    """Items the buyer wants, mapped to the maximum price paid for each."""

    items: Mapping[int, float]


@dataclass(frozen=True)
class Seller:
    """Items the seller holds, mapped to the reserve asked for each."""

    items: Mapping[int, float]


@dataclass(frozen=True)
class MarketInstance:
    """n buyers, n sellers, items numbered 1..k, all quotes positive."""

    k: int
    buyers: tuple[Buyer, ...]
    sellers: tuple[Seller, ...]

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("commodity count must be at least 1")
        if len(self.buyers) != len(self.sellers):
            raise ValueError("buyer and seller counts differ")
        if not self.buyers:
            raise ValueError("market must have at least one buyer")
        for role, agents in (("buyer", self.buyers), ("seller", self.sellers)):
            for idx, agent in enumerate(agents, start=1):
                for item, price in agent.items.items():
                    if not (1 <= item <= self.k):
                        raise ValueError(
                            f"{role} {idx} lists item {item}, valid range is"
                            f" 1..{self.k}")
                    if not (price > 0 and np.isfinite(price)):
                        raise ValueError(
                            f"{role} {idx} item {item}: price must be a"
                            " positive real")

    @property
    def n(self) -> int:
        return len(self.buyers)

    @staticmethod
    def build(k: int, buyers: Iterable[Mapping[int, float]],
              sellers: Iterable[Mapping[int, float]]) -> "MarketInstance":
        """Construct from bare item->price mappings."""
        return MarketInstance(
            k,
            tuple(Buyer(dict(b)) for b in buyers),
            tuple(Seller(dict(s)) for s in sellers),
        )


@dataclass(frozen=True)
class TransactionMatrices:
    """counts is int64; prices and reserves are float64, zero where empty."""

    counts: np.ndarray
    prices: np.ndarray
    reserves: np.ndarray


def _agent_rows(inst: MarketInstance, agents, missing: float):
    """(levels, values): per-agent item rows, `missing` where unlisted."""
    n, k = inst.n, inst.k
    levels = np.full((n, k), missing)
    values = np.zeros((n, k))
    for idx, agent in enumerate(agents):
        for item, price in agent.items.items():
            levels[idx, item - 1] = price
            values[idx, item - 1] = price
    return levels, values


def transaction_matrices(inst: MarketInstance) -> TransactionMatrices:
    """All three matrices via dominance counting, one kernel call each.

    Item l transacts between buyer i and seller j iff sigma_j[l] <= beta_i[l]
    where beta is the quote row (-inf when unlisted) and sigma the reserve
    row (+inf).  Unlisted entries can never satisfy the comparison, so no
    masking is needed beyond the infinities.
    """
    beta, quote_values = _agent_rows(inst, inst.buyers, -np.inf)
    sigma, reserve_values = _agent_rows(inst, inst.sellers, np.inf)
    counts = dominance_matrix(sigma, beta).T
    reserves = weighted_dominance(sigma, beta, reserve_values).T
    # prices sum the buyer side, so flip the comparison to keep rows = buyers
    prices = weighted_dominance(-beta, -sigma, quote_values)
    return TransactionMatrices(counts=np.ascontiguousarray(counts),
                               prices=prices,
                               reserves=np.ascontiguousarray(reserves))


# -- preferences -------------------------------------------------------------

_ALLOWED_NODES = (
    ast.Expression, ast.BinOp, ast.UnaryOp, ast.Compare,
    ast.Add, ast.Sub, ast.USub, ast.UAdd,
    ast.Lt, ast.LtE, ast.Gt, ast.GtE, ast.Eq, ast.NotEq,
    ast.Name, ast.Load, ast.Constant,
)

_BUILTIN_RULES = {
    "count": lambda P, R, C: C,
    "surplus": lambda P, R, C: P - R,
    "price": lambda P, R, C: P,
}


def _compile_rule(text: str):
    """Rule text -> f(P, R, C).  Builtins by name, else ``expr:<expression>``
    over the names P, R, C with +, -, unary -, comparisons, and literals."""
    if text in _BUILTIN_RULES:
        return _BUILTIN_RULES[text]
    if not text.startswith("expr:"):
        raise ValueError(
            f"unknown preference rule {text!r}; expected "
            "count, surplus, price, or expr:<expression>")
    source = text[len("expr:"):]
    try:
        tree = ast.parse(source, mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"bad preference expression {source!r}: {exc}") from exc
    for node in ast.walk(tree):
        if not isinstance(node, _ALLOWED_NODES):
            raise ValueError(
                f"preference expression {source!r}: "
                f"{type(node).__name__} is not allowed")
        if isinstance(node, ast.Name) and node.id not in ("P", "R", "C"):
            raise ValueError(
                f"preference expression {source!r}: unknown name {node.id!r}")
        if isinstance(node, ast.Constant) and not isinstance(
                node.value, (int, float)):
            raise ValueError(
                f"preference expression {source!r}: only numeric literals")
    code = compile(tree, "<preference>", "eval")
    def rule(P, R, C):
        return eval(code, {"__builtins__": {}}, {"P": P, "R": R, "C": C})
    return rule


@dataclass(frozen=True)
class PreferenceSpec:
    """How each side scores a potential partner; higher is better.

    A rule is one of the builtins ``count`` (transactable items),
    ``surplus`` (P - R), ``price`` (P), or ``expr:<expression>`` evaluated
    with P, R, C bound to the pair's matrix entries.  The seller rule
    defaults to the buyer rule.  The agent index argument exists so a
    subclass can score per-agent; the base spec ignores it.
    """

    buyer_rule: str = "count"
    seller_rule: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "_buyer_fn", _compile_rule(self.buyer_rule))
        seller = self.seller_rule if self.seller_rule is not None else self.buyer_rule
        object.__setattr__(self, "_seller_fn", _compile_rule(seller))

    def buyer_value(self, buyer: int, P: float, R: float, C: int):
        return self._buyer_fn(P, R, C)

    def seller_value(self, seller: int, P: float, R: float, C: int):
        return self._seller_fn(P, R, C)


def stable_matching(inst: MarketInstance,
                    prefs: PreferenceSpec | None = None,
                    matrices: TransactionMatrices | None = None,
                    ) -> dict[int, int]:
    """Buyer-optimal stable matching, returned as {buyer: seller}, 1-based.

    Buyer-proposing deferred acceptance.  Preference values come from the
    spec applied to the transaction matrices; ties are broken toward the
    lower partner index on both sides, which makes the orders strict and
    the outcome deterministic.
    """
    prefs = prefs if prefs is not None else PreferenceSpec()
    tm = matrices if matrices is not None else transaction_matrices(inst)
    n = inst.n
    c, p, r = tm.counts, tm.prices, tm.reserves

    proposal_order = []
    for i in range(n):
        scored = sorted(
            ((-prefs.buyer_value(i + 1, p[i, j], r[i, j], int(c[i, j])), j)
             for j in range(n)))
        proposal_order.append([j for _, j in scored])
    seller_rank = np.empty((n, n), dtype=np.int64)
    for j in range(n):
        scored = sorted(
            ((-prefs.seller_value(j + 1, p[i, j], r[i, j], int(c[i, j])), i)
             for i in range(n)))
        for rank, (_, i) in enumerate(scored):
            seller_rank[j, i] = rank

    next_choice = [0] * n
    holds: dict[int, int] = {}
    free = list(range(n - 1, -1, -1))
    while free:
        i = free.pop()
        j = proposal_order[i][next_choice[i]]
        next_choice[i] += 1
        if j not in holds:
            holds[j] = i
        elif seller_rank[j, i] < seller_rank[j, holds[j]]:
            free.append(holds[j])
            holds[j] = i
        else:
            free.append(i)
    return {i + 1: j + 1 for j, i in holds.items()}


def blocking_pairs(inst: MarketInstance,
                   matching: Mapping[int, int],
                   prefs: PreferenceSpec | None = None,
                   matrices: TransactionMatrices | None = None,
                   ) -> list[tuple[int, int]]:
    """All (buyer, seller) pairs that strictly prefer each other, 1-based.

    The audit uses raw preference values, not the tie-broken orders: a pair
    blocks only when both sides are strictly better off, so an empty return
    certifies stability in the usual weak sense.  O(n^2) evaluations.
    """
    prefs = prefs if prefs is not None else PreferenceSpec()
    tm = matrices if matrices is not None else transaction_matrices(inst)
    n = inst.n
    c, p, r = tm.counts, tm.prices, tm.reserves
    if sorted(matching.keys()) != list(range(1, n + 1)) or \
            sorted(matching.values()) != list(range(1, n + 1)):
        raise ValueError("matching is not a buyer->seller bijection")
    partner_of_seller = {j: i for i, j in matching.items()}

    def bval(i, j):
        return prefs.buyer_value(i, p[i - 1, j - 1], r[i - 1, j - 1],
                                 int(c[i - 1, j - 1]))

    def sval(i, j):
        return prefs.seller_value(j, p[i - 1, j - 1], r[i - 1, j - 1],
                                  int(c[i - 1, j - 1]))

    out = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if matching[i] == j:
                continue
            if bval(i, j) > bval(i, matching[i]) and \
                    sval(i, j) > sval(partner_of_seller[j], j):
                out.append((i, j))
    return out


# -- text format --------------------------------------------------------------

def parse_market(text: str) -> MarketInstance:
    header: tuple[int, int] | None = None
    buyers: dict[int, dict[int, float]] = {}
    sellers: dict[int, dict[int, float]] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        kind = tokens[0]
        if kind == "market":
            if header is not None:
                raise GraphFormatError(line_no, "duplicate market header")
            if len(tokens) != 3:
                raise GraphFormatError(line_no, "expected: market <n> <k>")
            try:
                header = (int(tokens[1]), int(tokens[2]))
            except ValueError:
                raise GraphFormatError(line_no, "n and k must be integers")
            continue
        if header is None:
            raise GraphFormatError(line_no, "market header must come first")
        if kind not in ("b", "s"):
            raise GraphFormatError(line_no, f"unknown record {kind!r}")
        if len(tokens) < 2:
            raise GraphFormatError(line_no, f"expected: {kind} <index> ...")
        try:
            idx = int(tokens[1])
        except ValueError:
            raise GraphFormatError(line_no, "agent index must be an integer")
        if not 1 <= idx <= header[0]:
            raise GraphFormatError(line_no,
                                   f"agent index {idx} out of range 1..{header[0]}")
        side = buyers if kind == "b" else sellers
        if idx in side:
            raise GraphFormatError(line_no, f"duplicate line for {kind} {idx}")
        items: dict[int, float] = {}
        for token in tokens[2:]:
            item_text, sep, price_text = token.partition(":")
            if not sep:
                raise GraphFormatError(line_no,
                                       f"expected <item>:<price>, got {token!r}")
            try:
                item = int(item_text)
                price = float(price_text)
            except ValueError:
                raise GraphFormatError(line_no, f"bad item entry {token!r}")
            if item in items:
                raise GraphFormatError(line_no, f"item {item} listed twice")
            items[item] = price
        side[idx] = items
    if header is None:
        raise GraphFormatError(1, "missing market header")
    n, k = header
    for role, side in (("buyer", buyers), ("seller", sellers)):
        missing = [i for i in range(1, n + 1) if i not in side]
        if missing:
            raise GraphFormatError(1, f"missing {role} line(s): {missing}")
    try:
        return MarketInstance.build(
            k,
            [buyers[i] for i in range(1, n + 1)],
            [sellers[j] for j in range(1, n + 1)],
        )
    except ValueError as exc:
        raise GraphFormatError(1, str(exc))


def _format_price(x: float) -> str:
    return repr(float(x))


def serialize_market(inst: MarketInstance) -> str:
    lines = [f"market {inst.n} {inst.k}"]
    for kind, agents in (("b", inst.buyers), ("s", inst.sellers)):
        for idx, agent in enumerate(agents, start=1):
            parts = [f"{item}:{_format_price(agent.items[item])}"
                     for item in sorted(agent.items)]
            lines.append(" ".join([kind, str(idx), *parts]).rstrip())
    return "\n".join(lines) + "\n"


def generate_random_market(n: int, k: int, seed: int | None = None,
                           density: float = 0.6) -> MarketInstance:
    """Random instance: each agent lists each item with prob `density`,
    prices are dyadic (multiples of 1/8 in (0, 16]) so float sums are exact."""
    rng = np.random.Generator(np.random.PCG64(seed))
    def side():
        out = []
        for _ in range(n):
            listed = [l for l in range(1, k + 1) if rng.random() < density]
            out.append({l: (1 + int(rng.integers(0, 128))) / 8.0
                        for l in listed})
        return out
    return MarketInstance.build(k, side(), side())

"""Finite posets and lattices: construction, validation, order queries,
antichain machinery and structural classification.

Elements are opaque hashable labels; internally everything runs on dense
integer indices in input order, with up/down sets stored as bitmasks.
A fixed linear extension (topological order of the covers, ties broken
by input order) is computed once and reused for all triangular matrix
work downstream.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

from .errors import CycleDetected, GuardrailExceeded, NotALattice, RedundantCover

SIZE_GUARDRAIL = 10_000


class Poset:
    """Finite poset on labelled elements with explicit cover relation."""

    def __init__(self, elements, covers):
        labels = tuple(elements)
        if len(set(labels)) != len(labels):
            raise ValueError("element labels must be distinct")
        if not labels:
            raise ValueError("empty element set")
        if len(labels) > SIZE_GUARDRAIL:
            raise GuardrailExceeded(f"{len(labels)} elements > {SIZE_GUARDRAIL}")
        self.labels = labels
        self.n = len(labels)
        self.index = {lab: i for i, lab in enumerate(labels)}
        cov = []
        for lo, hi in covers:
            if lo not in self.index or hi not in self.index:
                raise ValueError(f"cover ({lo!r}, {hi!r}) references unknown label")
            cov.append((self.index[lo], self.index[hi]))
        if len(set(cov)) != len(cov):
            dup = next(c for c in cov if cov.count(c) > 1)
            raise RedundantCover(labels[dup[0]], labels[dup[1]])
        self.covers = tuple(cov)
        self.upper_covers = [[] for _ in range(self.n)]
        self.lower_covers = [[] for _ in range(self.n)]
        for a, b in self.covers:
            if a == b:
                raise CycleDetected(f"self-cover at {labels[a]!r}")
            self.upper_covers[a].append(b)
            self.lower_covers[b].append(a)
        self.topo = self._linear_extension()
        self.up_mask, self.down_mask = self._closure()
        self._check_irredundant()

    def _linear_extension(self):
        indeg = [len(self.lower_covers[i]) for i in range(self.n)]
        avail = sorted(i for i in range(self.n) if indeg[i] == 0)
        order = []
        import heapq

        heapq.heapify(avail)
        while avail:
            v = heapq.heappop(avail)
            order.append(v)
            for w in self.upper_covers[v]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    heapq.heappush(avail, w)
        if len(order) != self.n:
            raise CycleDetected("cover relation contains a directed cycle")
        return tuple(order)

    def _closure(self):
        up = [1 << i for i in range(self.n)]
        for v in reversed(self.topo):
            for w in self.upper_covers[v]:
                up[v] |= up[w]
        down = [1 << i for i in range(self.n)]
        for v in self.topo:
            for w in self.lower_covers[v]:
                down[v] |= down[w]
        return up, down

    def _check_irredundant(self):
        for a, b in self.covers:
            between = self.up_mask[a] & self.down_mask[b]
            if between != (1 << a) | (1 << b):
                raise RedundantCover(self.labels[a], self.labels[b])

    # -- index-level queries -------------------------------------------------

    def leq_i(self, a: int, b: int) -> bool:
        return bool(self.up_mask[a] >> b & 1)

    def interval_mask(self, a: int, b: int) -> int:
        return self.up_mask[a] & self.down_mask[b]

    def mask_members(self, mask: int):
        return [i for i in range(self.n) if mask >> i & 1]

    # -- label-level queries -------------------------------------------------

    def leq(self, a, b) -> bool:
        return self.leq_i(self.index[a], self.index[b])

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"Poset({self.n} elements, {len(self.covers)} covers)"


class Lattice:
    """Finite lattice: a poset with total meet/join tables and bounds."""

    def __init__(self, poset: Poset):
        self.poset = poset
        self.labels = poset.labels
        self.index = poset.index
        self.n = poset.n
        self.covers = poset.covers
        self.topo = poset.topo
        self.up_mask = poset.up_mask
        self.down_mask = poset.down_mask
        self.meet_tab, self.join_tab = self._tables()
        self.bottom = self.meet_tab[0][self.n - 1] if self.n > 1 else 0
        self.top = self.join_tab[0][self.n - 1] if self.n > 1 else 0
        for i in range(self.n):
            self.bottom = self.meet_tab[self.bottom][i]
            self.top = self.join_tab[self.top][i]

    def _tables(self):
        n, down, up = self.poset.n, self.poset.down_mask, self.poset.up_mask
        meet = [[0] * n for _ in range(n)]
        join = [[0] * n for _ in range(n)]
        for a in range(n):
            for b in range(a, n):
                low = down[a] & down[b]
                m = None
                x = low
                while x:
                    c = (x & -x).bit_length() - 1
                    if down[c] == low:
                        m = c
                        break
                    x &= x - 1
                if m is None:
                    raise NotALattice(self.labels[a], self.labels[b], "meet")
                meet[a][b] = meet[b][a] = m
                high = up[a] & up[b]
                j = None
                x = high
                while x:
                    c = (x & -x).bit_length() - 1
                    if up[c] == high:
                        j = c
                        break
                    x &= x - 1
                if j is None:
                    raise NotALattice(self.labels[a], self.labels[b], "join")
                join[a][b] = join[b][a] = j
        return meet, join

    # -- queries (label level unless suffixed _i) -----------------------------

    def leq(self, a, b) -> bool:
        return self.poset.leq(a, b)

    def meet(self, a, b):
        return self.labels[self.meet_tab[self.index[a]][self.index[b]]]

    def join(self, a, b):
        return self.labels[self.join_tab[self.index[a]][self.index[b]]]

    def join_all(self, items, empty=None):
        """Join of an iterable of labels; `empty` for the empty join."""
        idx = None
        for x in items:
            i = self.index[x]
            idx = i if idx is None else self.join_tab[idx][i]
        if idx is None:
            return empty
        return self.labels[idx]

    def meet_all(self, items, empty=None):
        idx = None
        for x in items:
            i = self.index[x]
            idx = i if idx is None else self.meet_tab[idx][i]
        if idx is None:
            return empty
        return self.labels[idx]

    @property
    def bottom_label(self):
        return self.labels[self.bottom]

    @property
    def top_label(self):
        return self.labels[self.top]

    def leq_i(self, a, b):
        return self.poset.leq_i(a, b)

    def interval_members(self, ref: "IntervalRef"):
        lo, hi = self.index[ref.lo], self.index[ref.hi]
        if not self.poset.leq_i(lo, hi):
            raise ValueError(f"not an interval: {ref.lo!r} is not below {ref.hi!r}")
        return [self.labels[i] for i in self.poset.mask_members(self.poset.interval_mask(lo, hi))]

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"Lattice({self.n} elements, bottom={self.bottom_label!r}, top={self.top_label!r})"


@dataclass(frozen=True)
class IntervalRef:
    """A closed interval [lo, hi] of a lattice, referenced by labels."""

    lo: object
    hi: object


@dataclass(frozen=True)
class Antichain:
    """An antichain over (mode='over') or under (mode='under') a base element."""

    members: frozenset
    base: object
    mode: str  # 'over' | 'under'

    def validate(self, lattice: Lattice):
        if self.mode not in ("over", "under"):
            raise ValueError(f"bad antichain mode {self.mode!r}")
        idx = [lattice.index[m] for m in self.members]
        b = lattice.index[self.base]
        for i, j in itertools.combinations(idx, 2):
            if lattice.leq_i(i, j) or lattice.leq_i(j, i):
                raise ValueError("antichain members must be pairwise incomparable")
        for i in idx:
            if self.mode == "over":
                if not (lattice.leq_i(b, i) and b != i):
                    raise ValueError(f"base must lie strictly below member {lattice.labels[i]!r}")
            else:
                if not (lattice.leq_i(i, b) and b != i):
                    raise ValueError(f"base must lie strictly above member {lattice.labels[i]!r}")


def build_lattice(elements, covers) -> Lattice:
    """Validated lattice from labels and cover pairs (deterministic order)."""
    return Lattice(Poset(elements, covers))


# -- JSON interchange --------------------------------------------------------


def lattice_to_json_dict(lat: Lattice) -> dict:
    return {
        "elements": [str(x) for x in lat.labels],
        "covers": [[str(lat.labels[a]), str(lat.labels[b])] for a, b in lat.covers],
    }


def lattice_from_json_dict(data: dict) -> Lattice:
    return build_lattice(data["elements"], [tuple(c) for c in data["covers"]])


def load_lattice(path) -> Lattice:
    with open(path, "r", encoding="utf-8") as fh:
        return lattice_from_json_dict(json.load(fh))


def dump_lattice(lat: Lattice, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(lattice_to_json_dict(lat), fh, indent=1)
        fh.write("\n")


# -- generators ---------------------------------------------------------------


def chain(k: int) -> Lattice:
    """Chain with k elements labelled '0'..'k-1'."""
    if k < 1:
        raise ValueError("chain needs at least one element")
    labels = [str(i) for i in range(k)]
    return build_lattice(labels, [(labels[i], labels[i + 1]) for i in range(k - 1)])


def chain_product(sizes) -> Lattice:
    """Product of chains C_{s} for s in sizes (a divisor lattice)."""
    sizes = list(sizes)
    if any(s < 1 for s in sizes):
        raise ValueError("chain sizes must be positive")
    lat = chain(1)
    for s in sizes:
        lat = product(lat, chain(s))
    return relabel_canonically(lat)


def boolean_lattice(k: int) -> Lattice:
    """B_k as a product of k two-element chains."""
    return chain_product([2] * k)


def relabel_canonically(lat: Lattice) -> Lattice:
    """Relabel elements as 'e0'..'e{n-1}' in current input order."""
    labels = [f"e{i}" for i in range(lat.n)]
    return build_lattice(labels, [(labels[a], labels[b]) for a, b in lat.covers])


def product(l1: Lattice, l2: Lattice) -> Lattice:
    """Componentwise-order product; labels joined with '|'."""
    labels = []
    for x in l1.labels:
        for y in l2.labels:
            labels.append(f"{x}|{y}")
    if len(set(labels)) != len(labels):
        raise ValueError("product labels collide; relabel inputs first")
    covers = []
    for i, x in enumerate(l1.labels):
        for j, y in enumerate(l2.labels):
            for a, b in l1.covers:
                if a == i:
                    covers.append((f"{x}|{y}", f"{l1.labels[b]}|{y}"))
            for a, b in l2.covers:
                if a == j:
                    covers.append((f"{x}|{y}", f"{x}|{l2.labels[b]}"))
    return build_lattice(labels, covers)


def order_dual(lat: Lattice) -> Lattice:
    return build_lattice(lat.labels, [(lat.labels[b], lat.labels[a]) for a, b in lat.covers])


# -- antichains ----------------------------------------------------------------


def min_complement_antichain(lat: Lattice, ref: IntervalRef) -> Antichain:
    """Minimal elements of up(lo) outside [lo, hi]; writes M_[lo,hi] as an
    antichain module over lo."""
    lo, hi = lat.index[ref.lo], lat.index[ref.hi]
    if not lat.leq_i(lo, hi):
        raise ValueError(f"not an interval: {ref.lo!r} !<= {ref.hi!r}")
    outside = lat.up_mask[lo] & ~lat.poset.interval_mask(lo, hi)
    members = []
    for c in lat.poset.mask_members(outside):
        if lat.down_mask[c] & outside == 1 << c:
            members.append(lat.labels[c])
    return Antichain(frozenset(members), ref.lo, "over")


def max_complement_antichain(lat: Lattice, ref: IntervalRef) -> Antichain:
    """Dual construction: maximal elements of down(hi) outside [lo, hi]."""
    lo, hi = lat.index[ref.lo], lat.index[ref.hi]
    if not lat.leq_i(lo, hi):
        raise ValueError(f"not an interval: {ref.lo!r} !<= {ref.hi!r}")
    outside = lat.down_mask[hi] & ~lat.poset.interval_mask(lo, hi)
    members = []
    for c in lat.poset.mask_members(outside):
        if lat.up_mask[c] & outside == 1 << c:
            members.append(lat.labels[c])
    return Antichain(frozenset(members), ref.hi, "under")


ANTICHAIN_GUARDRAIL = 16


def _subset_joins(lat: Lattice, members, base_idx):
    """gamma over all subsets: tuple index -> joined element index."""
    idx = sorted(lat.index[m] for m in members)
    out = {}
    for r in range(len(idx) + 1):
        for comb in itertools.combinations(idx, r):
            if not comb:
                out[comb] = base_idx
            else:
                j = comb[0]
                for c in comb[1:]:
                    j = lat.join_tab[j][c]
                out[comb] = j
    return out


def _subset_meets(lat: Lattice, members, base_idx):
    idx = sorted(lat.index[m] for m in members)
    out = {}
    for r in range(len(idx) + 1):
        for comb in itertools.combinations(idx, r):
            if not comb:
                out[comb] = base_idx
            else:
                j = comb[0]
                for c in comb[1:]:
                    j = lat.meet_tab[j][c]
                out[comb] = j
    return out


def is_boolean_antichain(lat: Lattice, ac: Antichain) -> bool:
    """Brute-force test: subsets-to-joins map is injective and preserves
    meets and joins (the empty subset goes to the base)."""
    if ac.mode != "over":
        raise ValueError("is_boolean_antichain expects mode='over'")
    ac.validate(lat)
    if len(ac.members) > ANTICHAIN_GUARDRAIL:
        raise GuardrailExceeded(f"antichain of size {len(ac.members)}")
    gamma = _subset_joins(lat, ac.members, lat.index[ac.base])
    if len(set(gamma.values())) != len(gamma):
        return False
    keys = list(gamma)
    for s in keys:
        ss = set(s)
        for t in keys:
            tt = set(t)
            cap = tuple(sorted(ss & tt))
            cup = tuple(sorted(ss | tt))
            if gamma[cap] != lat.meet_tab[gamma[s]][gamma[t]]:
                return False
            if gamma[cup] != lat.join_tab[gamma[s]][gamma[t]]:
                return False
    return True


def is_dual_boolean_antichain(lat: Lattice, ac: Antichain) -> bool:
    """Dual test for antichains under a base: subsets-to-meets embedding."""
    if ac.mode != "under":
        raise ValueError("is_dual_boolean_antichain expects mode='under'")
    ac.validate(lat)
    if len(ac.members) > ANTICHAIN_GUARDRAIL:
        raise GuardrailExceeded(f"antichain of size {len(ac.members)}")
    gamma = _subset_meets(lat, ac.members, lat.index[ac.base])
    if len(set(gamma.values())) != len(gamma):
        return False
    keys = list(gamma)
    for s in keys:
        ss = set(s)
        for t in keys:
            tt = set(t)
            cap = tuple(sorted(ss & tt))
            cup = tuple(sorted(ss | tt))
            # P(C)^op: unions go to meets, intersections to joins
            if gamma[cup] != lat.meet_tab[gamma[s]][gamma[t]]:
                return False
            if gamma[cap] != lat.join_tab[gamma[s]][gamma[t]]:
                return False
    return True


def boolean_partner(lat: Lattice, ac: Antichain) -> Antichain:
    """The paired dual antichain of the boolean sublattice spanned by `ac`:
    coatom joins under the full join."""
    if ac.mode != "over":
        raise ValueError("boolean_partner expects mode='over'")
    members = sorted(ac.members, key=lambda m: lat.index[m])
    if not members:
        return Antichain(frozenset(), ac.base, "under")
    beta = lat.join_all(members)
    dual = set()
    for drop in members:
        rest = [m for m in members if m != drop]
        dual.add(lat.join_all(rest, empty=ac.base))
    return Antichain(frozenset(dual), beta, "under")


def all_antichains_over(lat: Lattice, base, include_empty=True):
    """All antichains strictly above `base` (exhaustive; desk scale only)."""
    b = lat.index[base]
    above = [i for i in lat.poset.mask_members(lat.up_mask[b]) if i != b]
    out = []
    for r in range(0 if include_empty else 1, len(above) + 1):
        for comb in itertools.combinations(above, r):
            ok = True
            for i, j in itertools.combinations(comb, 2):
                if lat.leq_i(i, j) or lat.leq_i(j, i):
                    ok = False
                    break
            if ok:
                out.append(Antichain(frozenset(lat.labels[i] for i in comb), base, "over"))
    return out


# -- classification ------------------------------------------------------------


@dataclass(frozen=True)
class Classification:
    is_distributive: bool
    is_semidistributive: bool
    is_divisor_lattice: bool
    is_boolean: bool
    chain_sizes: tuple  # sizes of chain factors when divisor, else ()


def _join_irreducibles(lat: Lattice):
    return [i for i in range(lat.n) if len(lat.poset.lower_covers[i]) == 1]


def _is_distributive(lat: Lattice) -> bool:
    ji = _join_irreducibles(lat)
    phi = []
    for x in range(lat.n):
        m = 0
        for k, j in enumerate(ji):
            if lat.leq_i(j, x):
                m |= 1 << k
        phi.append(m)
    if len(set(phi)) != lat.n:
        return False
    for a in range(lat.n):
        for b in range(a + 1, lat.n):
            if phi[lat.join_tab[a][b]] != phi[a] | phi[b]:
                return False
    return True


def _is_semidistributive(lat: Lattice) -> bool:
    n = lat.n
    for tab, other in ((lat.meet_tab, lat.join_tab), (lat.join_tab, lat.meet_tab)):
        for a in range(n):
            groups = {}
            for b in range(n):
                groups.setdefault(tab[a][b], []).append(b)
            for v, grp in groups.items():
                for b, c in itertools.combinations(grp, 2):
                    if tab[a][other[b][c]] != v:
                        return False
    return True


def _multiplicative_partitions(n, min_factor=2):
    if n == 1:
        yield ()
        return
    f = min_factor
    while f * f <= n:
        if n % f == 0:
            for rest in _multiplicative_partitions(n // f, f):
                yield (f,) + rest
        f += 1
    yield (n,)


def classify(lat: Lattice) -> Classification:
    """Structural classification; divisor test is a direct search for a
    chain-product isomorphism."""
    distr = _is_distributive(lat)
    semi = _is_semidistributive(lat)
    chain_sizes = None
    if lat.n == 1:
        chain_sizes = ()
    elif distr:  # non-distributive lattices are never chain products
        for part in sorted(_multiplicative_partitions(lat.n)):
            cand = chain_product(part)
            if poset_isomorphism(lat, cand) is not None:
                chain_sizes = tuple(part)
                break
    divisor = chain_sizes is not None
    boolean = divisor and all(s == 2 for s in chain_sizes)
    return Classification(distr, semi, divisor, boolean, chain_sizes or ())


# -- poset isomorphism (backtracking with invariant refinement) -----------------


def _refine_colors(lat: Lattice):
    colors = [
        (
            bin(lat.down_mask[i]).count("1"),
            bin(lat.up_mask[i]).count("1"),
            len(lat.poset.lower_covers[i]),
            len(lat.poset.upper_covers[i]),
        )
        for i in range(lat.n)
    ]
    for _ in range(lat.n):
        new = []
        for i in range(lat.n):
            up = tuple(sorted(colors[j] for j in lat.poset.upper_covers[i]))
            dn = tuple(sorted(colors[j] for j in lat.poset.lower_covers[i]))
            new.append((colors[i], up, dn))
        canon = {c: k for k, c in enumerate(sorted(set(new)))}
        new_ids = [canon[c] for c in new]
        if len(set(new_ids)) == len(set(colors)):
            return new_ids
        colors = new_ids
    return colors


def poset_isomorphism(l1: Lattice, l2: Lattice):
    """A label map realizing an isomorphism of the underlying posets, or None."""
    if l1.n != l2.n or len(l1.covers) != len(l2.covers):
        return None
    c1, c2 = _refine_colors(l1), _refine_colors(l2)
    if sorted(c1) != sorted(c2):
        return None
    cands = {i: [j for j in range(l2.n) if c2[j] == c1[i]] for i in range(l1.n)}
    order = sorted(range(l1.n), key=lambda i: (len(cands[i]), i))
    assign = [None] * l1.n
    used = [False] * l2.n
    cov1 = set(l1.covers)
    cov2 = set(l2.covers)

    def ok(i, j):
        for k in range(l1.n):
            m = assign[k]
            if m is None:
                continue
            if ((k, i) in cov1) != ((m, j) in cov2):
                return False
            if ((i, k) in cov1) != ((j, m) in cov2):
                return False
        return True

    def bt(pos):
        if pos == l1.n:
            return True
        i = order[pos]
        for j in cands[i]:
            if not used[j] and ok(i, j):
                assign[i] = j
                used[j] = True
                if bt(pos + 1):
                    return True
                assign[i] = None
                used[j] = False
        return False

    if not bt(0):
        return None
    return {l1.labels[i]: l2.labels[assign[i]] for i in range(l1.n)}

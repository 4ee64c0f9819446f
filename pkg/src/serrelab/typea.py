"""Type-A engine: quiver representations of an oriented A_n quiver, torsion
classes and the Cambrian lattice tors(Lambda), wide subcategories, mutable
intervals, the Serre permutation on them, interval mutations, 2-cluster
triples, and the Tamari / type-I(m) lattice generators.

Sets of indecomposables are bitmasks over the fixed list of vertex
intervals [lo, hi], sorted lexicographically.  Hom spaces between type-A
indecomposables are at most one dimensional; this is asserted at engine
start and every surjection/injection test rides on the basis morphism.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import linalg
from .errors import GuardrailExceeded, PeriodViolation, RotationViolation, SerrelabError
from .fields import QQ
from .lattice import Lattice, build_lattice, poset_isomorphism

QUIVER_GUARDRAIL = 5


@dataclass(frozen=True)
class QuiverA:
    """Oriented A_n quiver; orientation[k] = 'L' points the edge between
    vertices k+1 and k+2 at the lower vertex, 'R' at the higher one."""

    n: int
    orientation: str = ""

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("quiver needs at least one vertex")
        if len(self.orientation) != self.n - 1 or set(self.orientation) - {"L", "R"}:
            raise ValueError("orientation must be 'L'/'R' per edge")

    def arrows(self):
        out = []
        for k, d in enumerate(self.orientation):
            lo, hi = k + 1, k + 2
            out.append((hi, lo) if d == "L" else (lo, hi))
        return out


@dataclass(frozen=True, order=True)
class IndecA:
    lo: int
    hi: int

    def __repr__(self):
        return f"[{self.lo},{self.hi}]"


def all_orientations(n):
    return ["".join(bits) for bits in itertools.product("LR", repeat=max(n - 1, 0))]


def linear_quiver(n):
    return QuiverA(n, "L" * (n - 1))


# -- the engine -----------------------------------------------------------------


class _Engine:
    def __init__(self, q: QuiverA):
        if q.n > QUIVER_GUARDRAIL:
            raise GuardrailExceeded(f"n={q.n} > {QUIVER_GUARDRAIL}")
        self.q = q
        self.n = q.n
        self.arrows = q.arrows()
        self.indecs = [IndecA(lo, hi) for lo in range(1, q.n + 1) for hi in range(lo, q.n + 1)]
        self.indecs.sort()
        self.N = len(self.indecs)
        self.idx = {m: i for i, m in enumerate(self.indecs)}
        self.full_mask = (1 << self.N) - 1
        self._tables()
        self._structure_masks()
        self._closure_data()
        self._enumerate_torsion()
        self._a_tors_cache = {}
        self._a_free_cache = {}
        self._wide_cache = {}
        self._intervals = None
        self._mutations = None
        self._triples = None

    # ---- linear algebra over the quiver -------------------------------------

    def dimvec(self, m: IndecA):
        return tuple(1 if m.lo <= v <= m.hi else 0 for v in range(1, self.n + 1))

    def _hom_space(self, A: IndecA, B: IndecA):
        """(dim, witness) for Hom(A, B); witness maps vertex -> scalar."""
        common = [v for v in range(1, self.n + 1) if A.lo <= v <= A.hi and B.lo <= v <= B.hi]
        if not common:
            return 0, None
        pos = {v: k for k, v in enumerate(common)}
        rows = []
        zero, one = Fraction(0), Fraction(1)
        for (s, t) in self.arrows:
            a_alive = A.lo <= s <= A.hi and A.lo <= t <= A.hi
            b_alive = B.lo <= s <= B.hi and B.lo <= t <= B.hi
            # f_t * a_{st} = b_{st} * f_s
            row = [zero] * len(common)
            if a_alive and t in pos:
                row[pos[t]] += one
            if b_alive and s in pos:
                row[pos[s]] -= one
            if any(row):
                rows.append(row)
        if rows:
            basis = linalg.kernel_basis(rows, len(common), QQ)
        else:  # no constraints: the full space
            basis = [[one if i == j else zero for i in range(len(common))] for j in range(len(common))]
        if len(basis) == 0:
            return 0, None
        if len(basis) > 1:
            raise SerrelabError("hom space between type-A indecomposables exceeds dimension 1")
        witness = {v: basis[0][pos[v]] for v in common}
        return 1, witness

    def _euler(self, d, e):
        s = sum(a * b for a, b in zip(d, e))
        for (src, tgt) in self.arrows:
            s -= d[src - 1] * e[tgt - 1]
        return s

    def _tables(self):
        N = self.N
        self.h = [[0] * N for _ in range(N)]
        self.e = [[0] * N for _ in range(N)]
        self.witness = {}
        for i, A in enumerate(self.indecs):
            for j, B in enumerate(self.indecs):
                d, w = self._hom_space(A, B)
                self.h[i][j] = d
                if w is not None:
                    self.witness[(i, j)] = w
                ext = d - self._euler(self.dimvec(A), self.dimvec(B))
                if ext < 0:
                    raise SerrelabError("negative Ext dimension")
                self.e[i][j] = ext

    # ---- structural masks -----------------------------------------------------

    def _span_mask(self, lo, hi):
        out = 0
        for i, m in enumerate(self.indecs):
            if lo <= m.lo and m.hi <= hi:
                out |= 1 << i
        return out

    def _structure_masks(self):
        N = self.N
        self.quot_mask = [0] * N
        self.sub_mask = [0] * N
        self.injector_mask = [0] * N  # Y != X with an injective basis hom Y -> X
        for i, A in enumerate(self.indecs):
            for j, B in enumerate(self.indecs):
                w = self.witness.get((i, j))
                if w is None:
                    continue
                surj = all(w[v] for v in range(B.lo, B.hi + 1) if A.lo <= v <= A.hi)
                surj = surj and all(A.lo <= v <= A.hi for v in range(B.lo, B.hi + 1))
                inj = all(A.lo <= v <= A.hi and B.lo <= v <= B.hi and w[v] for v in range(A.lo, A.hi + 1))
                if surj:
                    self.quot_mask[i] |= 1 << j
                if inj:
                    self.sub_mask[j] |= 1 << i
                    if i != j:
                        self.injector_mask[j] |= 1 << i
        # projectives / injectives: reachability along / against the arrows
        self.proj_vertices = {}
        self.inj_vertices = {}
        fwd = {v: [] for v in range(1, self.n + 1)}
        back = {v: [] for v in range(1, self.n + 1)}
        for (s, t) in self.arrows:
            fwd[s].append(t)
            back[t].append(s)
        self.proj_of_vertex = {}
        self.inj_of_vertex = {}
        self.proj_mask = 0
        self.inj_mask = 0
        for v in range(1, self.n + 1):
            for adj, store, collect in ((fwd, self.proj_of_vertex, "p"), (back, self.inj_of_vertex, "i")):
                seen = {v}
                stack = [v]
                while stack:
                    x = stack.pop()
                    for y in adj[x]:
                        if y not in seen:
                            seen.add(y)
                            stack.append(y)
                m = IndecA(min(seen), max(seen))
                store[v] = m
                if collect == "p":
                    self.proj_mask |= 1 << self.idx[m]
                else:
                    self.inj_mask |= 1 << self.idx[m]

    def _components_mask(self, vertex_set):
        """Decompose a 0/1 vertex support into maximal runs -> indec mask."""
        out = 0
        run = None
        for v in range(1, self.n + 2):
            if v <= self.n and v in vertex_set:
                run = v if run is None else run
            else:
                if run is not None:
                    out |= 1 << self.idx[IndecA(run, v - 1)]
                    run = None
        return out

    def _closure_data(self):
        N = self.N
        self.kerdec = {}
        self.cokerdec = {}
        for (i, j), w in self.witness.items():
            A, B = self.indecs[i], self.indecs[j]
            zero_at = {v for v in w if not w[v]}
            supp_a = set(range(A.lo, A.hi + 1))
            supp_b = set(range(B.lo, B.hi + 1))
            alive = {v for v in supp_a & supp_b if w[v]}
            self.kerdec[(i, j)] = self._components_mask(supp_a - alive)
            self.cokerdec[(i, j)] = self._components_mask(supp_b - alive)
        # middles: 0 -> sub -> E -> quot -> 0
        self.mid = {}
        for si, S in enumerate(self.indecs):
            for qi, Qm in enumerate(self.indecs):
                lo = min(S.lo, Qm.lo)
                hi = max(S.hi, Qm.hi)
                if S.hi + 1 != Qm.lo and Qm.hi + 1 != S.lo:
                    cand = 0
                else:
                    E = IndecA(lo, hi)
                    ei = self.idx[E]
                    cand = 0
                    w = self.witness.get((si, ei))
                    if w is not None and all(w[v] for v in range(S.lo, S.hi + 1)):
                        cand = 1 << ei
                self.mid[(si, qi)] = cand

    # ---- closures ---------------------------------------------------------------

    def torsion_closed(self, mask):
        m = mask
        while True:
            x = m
            bits = m
            while bits:
                i = (bits & -bits).bit_length() - 1
                bits &= bits - 1
                x |= self.quot_mask[i]
            mm = m
            b1 = m
            while b1:
                i = (b1 & -b1).bit_length() - 1
                b1 &= b1 - 1
                b2 = m
                while b2:
                    j = (b2 & -b2).bit_length() - 1
                    b2 &= b2 - 1
                    x |= self.mid[(i, j)]
            if x == m:
                return m
            m = x

    def torsionfree_closed(self, mask):
        m = mask
        while True:
            x = m
            bits = m
            while bits:
                i = (bits & -bits).bit_length() - 1
                bits &= bits - 1
                x |= self.sub_mask[i]
            b1 = m
            while b1:
                i = (b1 & -b1).bit_length() - 1
                b1 &= b1 - 1
                b2 = m
                while b2:
                    j = (b2 & -b2).bit_length() - 1
                    b2 &= b2 - 1
                    x |= self.mid[(i, j)]
            if x == m:
                return m
            m = x

    def wide_closure(self, mask):
        if mask in self._wide_cache:
            return self._wide_cache[mask]
        m = mask
        while True:
            x = m
            b1 = m
            while b1:
                i = (b1 & -b1).bit_length() - 1
                b1 &= b1 - 1
                b2 = m
                while b2:
                    j = (b2 & -b2).bit_length() - 1
                    b2 &= b2 - 1
                    x |= self.mid[(i, j)]
                    if (i, j) in self.witness:
                        x |= self.kerdec[(i, j)] | self.cokerdec[(i, j)]
            if x == m:
                break
            m = x
        self._wide_cache[mask] = m
        return m

    def perp_from(self, mask):
        """mask^{perp_0}: objects receiving no hom from mask (torsion-free side)."""
        out = self.full_mask
        bits = mask
        while bits:
            i = (bits & -bits).bit_length() - 1
            bits &= bits - 1
            bad = 0
            for j in range(self.N):
                if self.h[i][j]:
                    bad |= 1 << j
            out &= ~bad
        return out

    def perp_into(self, mask):
        """^{perp_0}mask: objects with no hom into mask (a torsion class)."""
        out = self.full_mask
        bits = mask
        while bits:
            j = (bits & -bits).bit_length() - 1
            bits &= bits - 1
            bad = 0
            for i in range(self.N):
                if self.h[i][j]:
                    bad |= 1 << i
            out &= ~bad
        return out

    # ---- torsion classes ---------------------------------------------------------

    def _enumerate_torsion(self):
        N = self.N
        tors = []
        for mask in range(1 << N):
            ok = True
            bits = mask
            while bits and ok:
                i = (bits & -bits).bit_length() - 1
                bits &= bits - 1
                if self.quot_mask[i] & ~mask:
                    ok = False
            if not ok:
                continue
            b1 = mask
            while b1 and ok:
                i = (b1 & -b1).bit_length() - 1
                b1 &= b1 - 1
                b2 = mask
                while b2 and ok:
                    j = (b2 & -b2).bit_length() - 1
                    b2 &= b2 - 1
                    if self.mid[(i, j)] & ~mask:
                        ok = False
                b1 &= -1
            if ok:
                tors.append(mask)
        tors.sort(key=lambda m: (bin(m).count("1"), m))
        self.tors_masks = tors
        self.tors_set = set(tors)

    def mask_label(self, mask):
        return "".join("1" if mask >> i & 1 else "0" for i in range(self.N))

    def _tors_covers(self):
        """Cover relations of the inclusion order on torsion classes, with the
        unique edge label in T^{perp_0} cap T' attached to each."""
        if hasattr(self, "_covers_cache"):
            return self._covers_cache
        masks = self.tors_masks
        lower = {m: [] for m in masks}
        upper = {m: [] for m in masks}
        for ma in masks:
            for mb in masks:
                if ma != mb and ma & mb == ma:
                    if not any(
                        mc != ma and mc != mb and ma & mc == ma and mc & mb == mc
                        for mc in masks
                    ):
                        cand = self.perp_from(ma) & mb
                        if bin(cand).count("1") != 1:
                            raise SerrelabError("cover edge label is not unique")
                        lower[mb].append((ma, cand))
                        upper[ma].append((mb, cand))
        self._covers_cache = (lower, upper)
        return self._covers_cache

    def filt_closure(self, mask):
        """Extension closure: fixpoint of adding indecomposable middles."""
        m = mask
        while True:
            x = m
            b1 = m
            while b1:
                i = (b1 & -b1).bit_length() - 1
                b1 &= b1 - 1
                b2 = m
                while b2:
                    j = (b2 & -b2).bit_length() - 1
                    b2 &= b2 - 1
                    x |= self.mid[(i, j)]
            if x == m:
                return m
            m = x

    def a_tors(self, mask):
        """a(T) for a torsion class: extension closure of the lower-cover
        edge labels (these are exactly the simple objects of a(T))."""
        if mask not in self._a_tors_cache:
            lower, _ = self._tors_covers()
            labels = 0
            for _, lab in lower[mask]:
                labels |= lab
            self._a_tors_cache[mask] = self.filt_closure(labels)
        return self._a_tors_cache[mask]

    def a_free(self, mask):
        """a(F) for the torsion-free class F = T^{perp_0}: extension closure
        of the upper-cover edge labels of T."""
        if mask not in self._a_free_cache:
            _, upper = self._tors_covers()
            labels = 0
            for _, lab in upper[mask]:
                labels |= lab
            self._a_free_cache[mask] = self.filt_closure(labels)
        return self._a_free_cache[mask]

    def tors_lattice(self) -> tuple:
        """(Lattice, label->mask map); labels are fixed-width bitmask strings."""
        masks = self.tors_masks
        labels = {m: self.mask_label(m) for m in masks}
        lower, _ = self._tors_covers()
        covers = []
        for mb in masks:
            for ma, _lab in lower[mb]:
                covers.append((labels[ma], labels[mb]))
        lat = build_lattice(list(labels.values()), covers)
        return lat, {labels[m]: m for m in masks}

    # ---- wide subcategories and the Ingalls-Thomas maps ----------------------------

    def simples_of(self, wide_mask):
        out = 0
        bits = wide_mask
        while bits:
            x = (bits & -bits).bit_length() - 1
            bits &= bits - 1
            if not (wide_mask & self.injector_mask[x]):
                out |= 1 << x
        return out

    def rank_of(self, wide_mask):
        return bin(self.simples_of(wide_mask)).count("1")

    def wide_subcats(self):
        """Wide subcategories as extension closures of semibricks (sets of
        pairwise hom-orthogonal indecomposables)."""

        def orthogonal(i, j):
            return self.h[i][j] == 0 and self.h[j][i] == 0

        out = set()

        def bt(start, chosen):
            mask = 0
            for i in chosen:
                mask |= 1 << i
            out.add(self.filt_closure(mask))
            for i in range(start, self.N):
                if all(orthogonal(i, j) for j in chosen):
                    chosen.append(i)
                    bt(i + 1, chosen)
                    chosen.pop()

        bt(0, [])
        return sorted(out, key=lambda m: (bin(m).count("1"), m))

    def ext_injectives_in(self, mask):
        out = 0
        bits = mask
        while bits:
            x = (bits & -bits).bit_length() - 1
            bits &= bits - 1
            if all(not (mask >> y & 1) or self.e[y][x] == 0 for y in range(self.N)):
                out |= 1 << x
        return out

    def ext_projectives_in(self, mask):
        out = 0
        bits = mask
        while bits:
            x = (bits & -bits).bit_length() - 1
            bits &= bits - 1
            if all(not (mask >> y & 1) or self.e[x][y] == 0 for y in range(self.N)):
                out |= 1 << x
        return out

    # ---- mutable intervals ----------------------------------------------------------

    def mutable_intervals(self):
        if self._intervals is not None:
            return self._intervals
        out = {}
        for lo in self.tors_masks:
            alo = self.a_tors(lo)
            for hi in self.tors_masks:
                if lo & hi == lo and alo & self.a_tors(hi) == alo:
                    out[(lo, hi)] = self._build_interval(lo, hi)
        self._intervals = out
        return out

    def _build_interval(self, lo, hi):
        f_hi = self.perp_from(hi)
        a_flo = self.a_free(lo)
        a_fhi = self.a_free(hi)
        w1 = self.a_tors(lo)
        w2 = a_flo & self.a_tors(hi)
        w3 = a_fhi
        ranks = (self.rank_of(w1), self.rank_of(w2), self.rank_of(w3))
        if sum(ranks) != self.n:
            raise SerrelabError("delta-sequence ranks do not sum to the rank of the algebra")
        t_free = self.ext_injectives_in(f_hi & a_flo)
        t_tors = self.ext_projectives_in(lo & self.a_tors(hi))
        t_supp = 0
        bits = self.proj_mask
        while bits:
            p = (bits & -bits).bit_length() - 1
            bits &= bits - 1
            if all(
                not ((lo | f_hi) >> x & 1) or self.h[p][x] == 0 for x in range(self.N)
            ):
                t_supp |= 1 << p
        w_free = self.wide_closure(t_free)
        w_tors = self.wide_closure(t_tors)
        # the smallest wide subcategory over a partial tilting module has the
        # same rank, and W_free is pinched between a(F') and a(F)
        if self.rank_of(w_free) != bin(t_free).count("1"):
            raise SerrelabError("rank of W(T_free) differs from |T_free|")
        if self.rank_of(w_tors) != bin(t_tors).count("1"):
            raise SerrelabError("rank of W(T_tors) differs from |T_tors|")
        if a_fhi & w_free != a_fhi or w_free & a_flo != w_free:
            raise SerrelabError("W_free is not pinched between a(F') and a(F)")
        return MutableInterval(
            engine=self,
            lo=lo,
            hi=hi,
            delta=(w1, w2, w3),
            delta_ranks=ranks,
            t_free=t_free,
            t_tors=t_tors,
            t_supp=t_supp,
            w_free=w_free,
            w_tors=w_tors,
            k=self.rank_of(w_free),
        )

    def interval_members(self, iv):
        return [m for m in self.tors_masks if iv.lo & m == iv.lo and m & iv.hi == m]

    def serre_perm(self, iv):
        lo = self.torsion_closed(iv.t_free)
        hi = self.torsion_closed(iv.lo | iv.w_free)
        target = self.mutable_intervals().get((lo, hi))
        if target is None:
            raise SerrelabError("Serre permutation left the set of mutable intervals")
        return target

    def serre_perm_inverse(self, iv):
        lo = iv.hi & self.perp_into(iv.w_tors)
        hi = self.perp_into(iv.t_tors)
        target = self.mutable_intervals().get((lo, hi))
        if target is None:
            raise SerrelabError("inverse Serre permutation left the set of mutable intervals")
        return target

    # ---- interval mutations -----------------------------------------------------------

    def interval_mutations(self):
        if self._mutations is not None:
            return self._mutations
        ivs = self.mutable_intervals()
        out = []
        for iv in ivs.values():
            if iv.lo == iv.hi:
                continue
            simple_bits = self.simples_of(iv.delta[1])
            bits = simple_bits
            while bits:
                x = (bits & -bits).bit_length() - 1
                bits &= bits - 1
                a_hi = iv.hi & self.perp_into(1 << x)
                b_lo = self.torsion_closed(iv.lo | 1 << x)
                A = ivs.get((iv.lo, a_hi))
                B = ivs.get((b_lo, iv.hi))
                if A is None or B is None:
                    raise SerrelabError("interval mutation produced a non-mutable part")
                self._assert_mutation(B, iv, A)
                out.append(IntervalMutation(B=B, I=iv, A=A, x=self.indecs[x]))
        self._mutations = out
        return out

    def _assert_mutation(self, B, I, A):
        mi = set(self.interval_members(I))
        ma = set(self.interval_members(A))
        mb = set(self.interval_members(B))
        if ma & mb or ma | mb != mi:
            raise SerrelabError("interval mutation is not a disjoint union")
        if max(mb, key=lambda m: (bin(m).count('1'), m)) != max(mi, key=lambda m: (bin(m).count('1'), m)):
            raise SerrelabError("max B != max I")
        if A.lo != I.lo or B.hi != I.hi:
            raise SerrelabError("mutation bounds are off")

    def rotation_check(self):
        muts = self.interval_mutations()
        keyset = {(m.B.key, m.I.key, m.A.key) for m in muts}
        records = []
        for m in muts:
            wb, wi, wa = m.B.w_free, m.I.w_free, m.A.w_free
            if wb & wi != wb or wi & wa != wi:
                raise RotationViolation("W_free chain inclusion fails")
            rb, ri, ra = (self.rank_of(w) for w in (wb, wi, wa))
            if rb + 1 != ra:
                raise RotationViolation("rank gap is not 1")
            case1 = wi == wa
            case2 = wb == wi
            if case1 == case2:
                raise RotationViolation("rotation cases are not exclusive")
            SB, SI, SA = self.serre_perm(m.B), self.serre_perm(m.I), self.serre_perm(m.A)
            if case1:
                rotated = (SI.key, SA.key, SB.key)
            else:
                rotated = (SA.key, SB.key, SI.key)
            if rotated not in keyset:
                raise RotationViolation("rotated triple is not an interval mutation")
            records.append({"case": 1 if case1 else 2, "triple": (m.B.key, m.I.key, m.A.key)})
        return records

    # ---- 2-cluster triples ---------------------------------------------------------

    def _rigid_subsets(self):
        compat = [0] * self.N
        for i in range(self.N):
            for j in range(self.N):
                if i != j and self.e[i][j] == 0 and self.e[j][i] == 0:
                    compat[i] |= 1 << j
        out = []

        def bt(start, mask, allowed):
            out.append(mask)
            bits = allowed & ~((1 << start) - 1)
            while bits:
                i = (bits & -bits).bit_length() - 1
                bits &= bits - 1
                bt(i + 1, mask | 1 << i, allowed & compat[i])
        bt(0, 0, self.full_mask)
        return out

    def cluster_triples(self):
        if self._triples is not None:
            return self._triples
        rigid = self._rigid_subsets()
        triples = []
        for t_tors in rigid:
            for t_free in rigid:
                if bin(t_tors).count("1") + bin(t_free).count("1") > self.n:
                    continue
                ok = True
                bits = t_tors
                while bits and ok:
                    a = (bits & -bits).bit_length() - 1
                    bits &= bits - 1
                    fb = t_free
                    while fb and ok:
                        b = (fb & -fb).bit_length() - 1
                        fb &= fb - 1
                        if self.h[a][b] or self.e[a][b]:
                            ok = False
                if not ok:
                    continue
                need = self.n - bin(t_tors).count("1") - bin(t_free).count("1")
                elig = 0
                bits = self.proj_mask
                while bits:
                    p = (bits & -bits).bit_length() - 1
                    bits &= bits - 1
                    if all(
                        not ((t_tors | t_free) >> x & 1) or self.h[p][x] == 0
                        for x in range(self.N)
                    ):
                        elig |= 1 << p
                have = bin(elig).count("1")
                if have < need:
                    continue
                if have > need:
                    raise SerrelabError("support completion is not unique")
                triples.append(ClusterTriple(t_free=t_free, t_tors=t_tors, t_supp=elig))
        self._triples = triples
        return triples

    def interval_of(self, t: "ClusterTriple"):
        lo = self.torsion_closed(t.t_tors)
        hi = self.perp_into(t.t_free)
        iv = self.mutable_intervals().get((lo, hi))
        if iv is None:
            raise SerrelabError("interval of a 2-cluster triple is not mutable")
        return iv

    def almost_triples(self):
        """2-rigid triples with n-1 summands, with supp allowed to be any
        eligible subset of the right size."""
        rigid = self._rigid_subsets()
        out = set()
        for t_tors in rigid:
            for t_free in rigid:
                base = bin(t_tors).count("1") + bin(t_free).count("1")
                if base > self.n - 1:
                    continue
                ok = True
                bits = t_tors
                while bits and ok:
                    a = (bits & -bits).bit_length() - 1
                    bits &= bits - 1
                    fb = t_free
                    while fb and ok:
                        b = (fb & -fb).bit_length() - 1
                        fb &= fb - 1
                        if self.h[a][b] or self.e[a][b]:
                            ok = False
                if not ok:
                    continue
                need = self.n - 1 - base
                elig = []
                bits = self.proj_mask
                while bits:
                    p = (bits & -bits).bit_length() - 1
                    bits &= bits - 1
                    if all(
                        not ((t_tors | t_free) >> x & 1) or self.h[p][x] == 0
                        for x in range(self.N)
                    ):
                        elig.append(p)
                for comb in itertools.combinations(elig, need):
                    supp = 0
                    for p in comb:
                        supp |= 1 << p
                    out.add((t_free, t_tors, supp))
        return sorted(out)

    def completions(self, almost):
        t_free, t_tors, t_supp = almost
        found = []
        for t in self.cluster_triples():
            if (
                t.t_free & t_free == t_free
                and t.t_tors & t_tors == t_tors
                and t.t_supp & t_supp == t_supp
            ):
                extra = (
                    bin(t.t_free ^ t_free).count("1")
                    + bin(t.t_tors ^ t_tors).count("1")
                    + bin(t.t_supp ^ t_supp).count("1")
                )
                if extra == 1:
                    found.append(t)
        return found


@dataclass
class ClusterTriple:
    t_free: int
    t_tors: int
    t_supp: int

    @property
    def key(self):
        return (self.t_free, self.t_tors, self.t_supp)


class MutableInterval:
    def __init__(self, engine, lo, hi, delta, delta_ranks, t_free, t_tors, t_supp, w_free, w_tors, k):
        self.engine = engine
        self.lo = lo
        self.hi = hi
        self.delta = delta
        self.delta_ranks = delta_ranks
        self.t_free = t_free
        self.t_tors = t_tors
        self.t_supp = t_supp
        self.w_free = w_free
        self.w_tors = w_tors
        self.k = k

    @property
    def key(self):
        return (self.lo, self.hi)

    def members(self, mask):
        return frozenset(self.engine.indecs[i] for i in range(self.engine.N) if mask >> i & 1)

    def __repr__(self):
        e = self.engine
        return f"MutableInterval({e.mask_label(self.lo)} <= {e.mask_label(self.hi)}, k={self.k})"


@dataclass
class IntervalMutation:
    B: MutableInterval
    I: MutableInterval
    A: MutableInterval
    x: IndecA


@lru_cache(maxsize=None)
def _engine(q: QuiverA) -> _Engine:
    return _Engine(q)


# -- public operations ------------------------------------------------------------


def indec_rep(q: QuiverA, m: IndecA):
    """dims per vertex and per-arrow 0/1 scalars of the interval module."""
    eng = _engine(q)
    dims = eng.dimvec(m)
    amaps = {}
    for k, (s, t) in enumerate(eng.arrows):
        amaps[k] = 1 if dims[s - 1] and dims[t - 1] else 0
    return {"dims": dims, "arrows": eng.arrows, "arrow_scalars": amaps}


def _as_indices(eng, M):
    if isinstance(M, IndecA):
        return [eng.idx[M]]
    return [eng.idx[m] for m in M]


def hom_dim_q(q: QuiverA, M, N) -> int:
    eng = _engine(q)
    return sum(eng.h[i][j] for i in _as_indices(eng, M) for j in _as_indices(eng, N))


def ext1_dim_q(q: QuiverA, M, N) -> int:
    eng = _engine(q)
    return sum(eng.e[i][j] for i in _as_indices(eng, M) for j in _as_indices(eng, N))


def quotients_of(q: QuiverA, m: IndecA):
    eng = _engine(q)
    mask = eng.quot_mask[eng.idx[m]]
    return frozenset(eng.indecs[i] for i in range(eng.N) if mask >> i & 1)


def subs_of(q: QuiverA, m: IndecA):
    eng = _engine(q)
    mask = eng.sub_mask[eng.idx[m]]
    return frozenset(eng.indecs[i] for i in range(eng.N) if mask >> i & 1)


def torsion_classes(q: QuiverA):
    eng = _engine(q)
    return [frozenset(eng.indecs[i] for i in range(eng.N) if m >> i & 1) for m in eng.tors_masks]


def tors_lattice(q: QuiverA) -> Lattice:
    return _engine(q).tors_lattice()[0]


def wide_subcats(q: QuiverA):
    eng = _engine(q)
    return [
        frozenset(eng.indecs[i] for i in range(eng.N) if m >> i & 1) for m in eng.wide_subcats()
    ]


def _mask_of(eng, members):
    m = 0
    for x in members:
        m |= 1 << eng.idx[x]
    return m


def a_of(q: QuiverA, members):
    """a(T) of a torsion class, the associated wide subcategory."""
    eng = _engine(q)
    mask = _mask_of(eng, members)
    if mask not in eng.tors_set:
        raise ValueError("a_of expects a torsion class")
    out = eng.a_tors(mask)
    return frozenset(eng.indecs[i] for i in range(eng.N) if out >> i & 1)


def a_of_torsionfree(q: QuiverA, members):
    """a(F) of a torsion-free class, the cogen-side dual."""
    eng = _engine(q)
    fmask = _mask_of(eng, members)
    tmask = eng.perp_into(fmask)
    if tmask not in eng.tors_set or eng.perp_from(tmask) != fmask:
        raise ValueError("a_of_torsionfree expects a torsion-free class")
    out = eng.a_free(tmask)
    return frozenset(eng.indecs[i] for i in range(eng.N) if out >> i & 1)


def gen(q: QuiverA, members):
    eng = _engine(q)
    mask = eng.torsion_closed(_mask_of(eng, members))
    return frozenset(eng.indecs[i] for i in range(eng.N) if mask >> i & 1)


def cogen(q: QuiverA, members):
    eng = _engine(q)
    mask = eng.torsionfree_closed(_mask_of(eng, members))
    return frozenset(eng.indecs[i] for i in range(eng.N) if mask >> i & 1)


def mutable_intervals(q: QuiverA):
    return list(_engine(q).mutable_intervals().values())


def serre_perm(q: QuiverA, iv: MutableInterval) -> MutableInterval:
    return _engine(q).serre_perm(iv)


def serre_perm_inverse(q: QuiverA, iv: MutableInterval) -> MutableInterval:
    return _engine(q).serre_perm_inverse(iv)


def coxeter_number(q: QuiverA) -> int:
    return q.n + 1


def indec_count(q: QuiverA) -> int:
    return q.n * (q.n + 1) // 2


def fuss_catalan_count(n: int) -> int:
    """Number of mutable intervals / 2-cluster tilting objects in type A_n."""
    return math.comb(3 * n + 3, n + 1) // (2 * n + 3)


def serre_orbit_stats(q: QuiverA):
    """Iterate the Serre permutation 2h+2 times on every mutable interval,
    asserting the period and the rank sum; returns orbit cycle data."""
    eng = _engine(q)
    ivs = eng.mutable_intervals()
    h = coxeter_number(q)
    N = indec_count(q)
    period = 2 * h + 2
    succ = {iv.key: eng.serre_perm(iv).key for iv in ivs.values()}
    for key, iv in ivs.items():
        cur = iv
        ranksum = 0
        for _ in range(period):
            cur = eng.serre_perm(cur)
            ranksum += cur.k
        if cur.key != key:
            raise PeriodViolation(f"interval {key} does not return after {period} steps")
        if ranksum != 2 * N:
            raise PeriodViolation(f"rank sum {ranksum} != {2 * N} for interval {key}")
        if q.n == 1:
            cur2 = iv
            ranksum2 = 0
            for _ in range(h + 1):
                cur2 = eng.serre_perm(cur2)
                ranksum2 += cur2.k
            if cur2.key != key or ranksum2 != N:
                raise PeriodViolation("A_1 special (N, h+1) periodicity fails")
    cycles = []
    seen = set()
    for key in ivs:
        if key in seen:
            continue
        cyc = [key]
        seen.add(key)
        x = succ[key]
        while x != key:
            cyc.append(x)
            seen.add(x)
            x = succ[x]
        cycles.append(cyc)
    return {
        "period_bound": period,
        "cycle_lengths": sorted(len(c) for c in cycles),
        "orbit_count": len(cycles),
    }


def interval_mutations(q: QuiverA):
    return _engine(q).interval_mutations()


def rotation_check(q: QuiverA):
    return _engine(q).rotation_check()


def cluster_triples(q: QuiverA):
    return _engine(q).cluster_triples()


def interval_of(q: QuiverA, t: ClusterTriple) -> MutableInterval:
    return _engine(q).interval_of(t)


def almost_triples(q: QuiverA):
    return _engine(q).almost_triples()


def completions(q: QuiverA, almost):
    return _engine(q).completions(almost)


def edge_label(q: QuiverA, lo_members, hi_members) -> IndecA:
    """The unique indecomposable in T^{perp_0} cap T' for a cover T <. T'."""
    eng = _engine(q)
    lo = _mask_of(eng, lo_members)
    hi = _mask_of(eng, hi_members)
    cand = eng.perp_from(lo) & hi
    if bin(cand).count("1") != 1:
        raise SerrelabError("edge label is not unique")
    return eng.indecs[cand.bit_length() - 1]


# -- lattice generators --------------------------------------------------------------


def _binary_trees(k):
    if k == 0:
        return [None]
    out = []
    for left in range(k):
        for l in _binary_trees(left):
            for r in _binary_trees(k - 1 - left):
                out.append((l, r))
    return out


def _tree_str(t):
    if t is None:
        return "."
    return f"({_tree_str(t[0])}{_tree_str(t[1])})"


def _rotations(t):
    """Single right-rotations ((A,B),C) -> (A,(B,C)) anywhere in t."""
    if t is None:
        return
    l, r = t
    if l is not None:
        yield (l[0], (l[1], r))
    for ll in _rotations(l):
        yield (ll, r)
    for rr in _rotations(r):
        yield (l, rr)


def tamari_rotation_lattice(n: int) -> Lattice:
    """Tamari lattice on binary trees with n internal nodes, covers given by
    single rotations; independent of the torsion-class construction."""
    trees = _binary_trees(n)
    labels = [_tree_str(t) for t in trees]
    lab = dict(zip(labels, trees))
    covers = []
    for s in labels:
        for t2 in _rotations(lab[s]):
            covers.append((s, _tree_str(t2)))
    return build_lattice(labels, covers)


def gen_tamari(n: int) -> Lattice:
    """tors of the linear A_{n-1} quiver, cross-checked against the rotation
    order on binary trees."""
    if n < 1:
        raise ValueError("n >= 1")
    if n == 1:
        return build_lattice(["t"], [])
    lat = tors_lattice(linear_quiver(n - 1))
    rot = tamari_rotation_lattice(n)
    if poset_isomorphism(lat, rot) is None:
        raise SerrelabError("torsion-class Tamari lattice is not the rotation lattice")
    return lat


def gen_type_i(m: int) -> Lattice:
    """The (m+2)-element lattice: bottom, one left element, a right chain of
    m-1 elements, top."""
    if m < 2:
        raise ValueError("m >= 2")
    elements = ["0", "L"] + [f"R{i}" for i in range(1, m)] + ["1"]
    covers = [("0", "L"), ("L", "1"), ("0", "R1"), (f"R{m-1}", "1")]
    covers += [(f"R{i}", f"R{i+1}") for i in range(1, m - 1)]
    return build_lattice(elements, covers)

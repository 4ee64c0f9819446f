"""Integer fast path: Cartan and Coxeter matrices of the incidence algebra
and the combinatorial Serre-formality check with Serre permutation
extraction, plus the agreement check against the derived machinery.

All matrices act on dimension vectors written in input element order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import linalg
from .derived import GeneralComplexResult, serre
from .errors import Disagreement, MaxStepsExceeded, SerrelabError
from .fields import QQ
from .lattice import IntervalRef, Lattice
from .reps import find_interval_iso, injective_module


@dataclass
class CartanMatrix:
    matrix: list
    inverse: list  # the Moebius-function matrix of the poset
    orientation: str  # which comparability pattern satisfied the ground truth


@dataclass
class CoxeterMatrix:
    matrix: list
    cartan: CartanMatrix


def _proj_vector(lat: Lattice, i: int):
    return [1 if lat.leq_i(i, v) else 0 for v in range(lat.n)]


def _inj_vector(lat: Lattice, i: int):
    return [1 if lat.leq_i(v, i) else 0 for v in range(lat.n)]


def cartan_matrix(lat: Lattice) -> CartanMatrix:
    """0/1 comparability matrix, oriented so that the construction-time
    ground truth C [P_i] = -[I_i] holds; fails loudly if no orientation
    works or the two orientations disagree while both passing."""
    n = lat.n
    zeta = [[1 if lat.leq_i(i, j) else 0 for j in range(n)] for i in range(n)]
    zeta_t = [[zeta[j][i] for j in range(n)] for i in range(n)]
    passing = []
    for name, omega in (("leq", zeta), ("geq", zeta_t)):
        inv = linalg.int_inverse(omega)
        omega_t = [[omega[j][i] for j in range(n)] for i in range(n)]
        C = [[-x for x in row] for row in linalg.int_mat_mul(omega_t, inv)]
        ok = all(
            linalg.int_mat_vec(C, _proj_vector(lat, i)) == [-x for x in _inj_vector(lat, i)]
            for i in range(n)
        )
        if ok:
            passing.append((name, omega, inv, C))
    if not passing:
        raise SerrelabError("no Cartan orientation satisfies C[P_i] = -[I_i]")
    if len(passing) == 2 and passing[0][3] != passing[1][3]:
        raise SerrelabError("both Cartan orientations pass with different Coxeter matrices")
    name, omega, inv, _ = passing[0]
    return CartanMatrix(matrix=omega, inverse=inv, orientation=name)


def coxeter_matrix(lat: Lattice) -> CoxeterMatrix:
    cart = cartan_matrix(lat)
    n = lat.n
    omega_t = [[cart.matrix[j][i] for j in range(n)] for i in range(n)]
    C = [[-x for x in row] for row in linalg.int_mat_mul(omega_t, cart.inverse)]
    for i in range(n):  # construction-time invariant
        if linalg.int_mat_vec(C, _proj_vector(lat, i)) != [-x for x in _inj_vector(lat, i)]:
            raise SerrelabError("Coxeter matrix failed its defining identity")
    return CoxeterMatrix(matrix=C, cartan=cart)


@dataclass
class Trajectory:
    element: object
    vectors: list  # [I_i], C[I_i], ..., up to +-[P_target] or the failure point
    steps: int | None  # n_i when found
    sign: int | None  # +1 / -1 at termination
    target: object | None  # pi(element)
    failed: str | None  # 'mixed-sign' when a vector is not weakly signed


@dataclass
class SerreFormalReport:
    lattice: Lattice
    coxeter: CoxeterMatrix
    trajectories: dict
    is_serre_formal: bool
    permutation: dict | None  # element -> pi(element)
    cycles: list | None
    lcm_period: int | None
    strict_sign_differs: bool

    @property
    def classification(self) -> str:
        return (
            "combinatorially Serre formal"
            if self.is_serre_formal
            else "not combinatorially Serre formal"
        )

    def to_json_dict(self):
        perm = self.permutation or {}
        return {
            "serre_formal": self.is_serre_formal,
            "classification": self.classification,
            "cartan_matrix": self.coxeter.cartan.matrix,
            "coxeter_matrix": self.coxeter.matrix,
            "permutation": {str(k): str(v) for k, v in perm.items()},
            "permutation_oneline": [str(perm[e]) for e in self.lattice.labels] if perm else None,
            "cycles": [[str(x) for x in c] for c in (self.cycles or [])],
            "lcm_period": self.lcm_period,
            "strict_sign_differs": self.strict_sign_differs,
            "trajectories": {
                str(t.element): {
                    "vectors": [list(v) for v in t.vectors],
                    "steps": t.steps,
                    "sign": t.sign,
                    "target": None if t.target is None else str(t.target),
                    "failed": t.failed,
                }
                for t in self.trajectories.values()
            },
        }


def _weakly_signed(v):
    return all(x >= 0 for x in v) or all(x <= 0 for x in v)


def _run_trajectories(lat: Lattice, C, max_steps, allow_negative=True):
    ptable = {}
    for j in range(lat.n):
        pv = tuple(_proj_vector(lat, j))
        ptable[pv] = (j, 1)
        if allow_negative:
            ptable[tuple(-x for x in pv)] = (j, -1)
    out = {}
    for i in range(lat.n):
        v = _inj_vector(lat, i)
        vectors = [tuple(v)]
        traj = None
        for k in range(max_steps + 1):
            if not any(v):
                raise SerrelabError("trajectory vector vanished")
            if not _weakly_signed(v):
                traj = Trajectory(lat.labels[i], vectors, None, None, None, "mixed-sign")
                break
            hit = ptable.get(tuple(v))
            if hit is not None:
                j, sign = hit
                traj = Trajectory(lat.labels[i], vectors, k, sign, lat.labels[j], None)
                break
            v = linalg.int_mat_vec(C, v)
            vectors.append(tuple(v))
        if traj is None:
            raise MaxStepsExceeded(lat.labels[i], max_steps)
        out[lat.labels[i]] = traj
    return out


def combinatorial_serre_check(lat: Lattice, max_steps=None) -> SerreFormalReport:
    """Iterate the Coxeter matrix on each injective dimension vector until it
    hits +-[P_j], requiring weak positivity or negativity throughout."""
    if max_steps is None:
        max_steps = 4 * (lat.n + 10)
    cox = coxeter_matrix(lat)
    C = cox.matrix
    trajs = _run_trajectories(lat, C, max_steps)
    ok = all(t.failed is None for t in trajs.values())
    perm = None
    cycles = None
    lcm = None
    if ok:
        perm = {e: t.target for e, t in trajs.items()}
        if len(set(perm.values())) != lat.n:
            ok = False
    if ok:
        cycles = []
        seen = set()
        for e in lat.labels:
            if e in seen:
                continue
            cyc = [e]
            seen.add(e)
            x = perm[e]
            while x != e:
                cyc.append(x)
                seen.add(x)
                x = perm[x]
            cycles.append(cyc)
        lcm = 1
        for c in cycles:
            lcm = math.lcm(lcm, len(c))
    # would the strict (+[P_j] only) reading change the verdict?
    try:
        strict = _run_trajectories(lat, C, max_steps, allow_negative=False)
        strict_ok = all(t.failed is None for t in strict.values())
        if strict_ok:
            strict_perm = {e: t.target for e, t in strict.items()}
            strict_ok = len(set(strict_perm.values())) == lat.n
    except (MaxStepsExceeded, SerrelabError):
        strict_ok = False
    return SerreFormalReport(
        lattice=lat,
        coxeter=cox,
        trajectories=trajs,
        is_serre_formal=ok,
        permutation=perm if ok else None,
        cycles=cycles,
        lcm_period=lcm,
        strict_sign_differs=(strict_ok != ok),
    )


@dataclass
class CrossCheck:
    lattice: Lattice
    ok: bool
    per_element: dict
    combinatorial: SerreFormalReport

    def to_json_dict(self):
        return {
            "agree": self.ok,
            "per_element": {str(k): v for k, v in self.per_element.items()},
            "combinatorial": self.combinatorial.to_json_dict(),
        }


def cross_check(lat: Lattice, max_steps=None, field=QQ) -> CrossCheck:
    """Run the Coxeter trajectories and the derived Serre iteration side by
    side on every injective; raise Disagreement on any mismatch."""
    report = combinatorial_serre_check(lat, max_steps)
    per = {}
    for i, label in enumerate(lat.labels):
        traj = report.trajectories[label]
        if traj.failed is not None:
            per[label] = {"combinatorial_failed": traj.failed}
            continue
        module = injective_module(lat, label, field)
        shifts = []
        for k in range(traj.steps + 1):
            expect = [abs(x) for x in traj.vectors[k]]
            got = module.dimension_vector()
            if got != expect:
                raise Disagreement(label, k, traj.vectors[k], got)
            if k == traj.steps:
                break
            res = serre(module)
            if isinstance(res, GeneralComplexResult):
                raise Disagreement(label, k, traj.vectors[k + 1], "non-stalk Serre image")
            shifts.append(res.shift)
            module = res.rep
        iso = find_interval_iso(module)
        target_interval = IntervalRef(traj.target, lat.top_label)
        if iso != target_interval:
            raise Disagreement(label, traj.steps, f"projective {traj.target!r}", iso)
        per[label] = {
            "pi": str(traj.target),
            "steps": traj.steps,
            "derived_shifts": shifts,
        }
    return CrossCheck(lattice=lat, ok=True, per_element=per, combinatorial=report)

"""Staged search for solutions of a pair of diagonal quadrics

    Q1: a00*X0^2 + a11*X1^2 + a22*X2^2 = 0
    Q2: b00*X0^2 + b11*X1^2 + b33*X3^2 = 0

sharing X0, X1.  The weak search parametrizes Q1 and scans parameters until
Q2's remaining square is perfect.  The strong search needs a zero-coordinate
point on one of the four quadrics of the homogeneous space; it then gains a
second substitution level, roughly doubling the digits reachable per unit of
loop radius.  Both loops are deterministic for any worker count: work is
split by enumeration index and the earliest hit in enumeration order wins.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .descent import HomogeneousSpace
from .errors import (
    ConditionFailure,
    DegenerateKernel,
    EffortExhausted,
    InvalidArgument,
)
from .integers import (
    RadiusSchedule,
    is_perfect_square,
    primitive_normalize,
    shell_pairs,
    shell_size,
    squarefree_part,
)
from .quadforms import (
    ConicParametrization,
    TernaryForm,
    biquadratic_to_ternary,
    find_conic_point,
    legendre_solvable,
    parametrize_conic,
    reduce_to_legendre,
    substitute_into_partner,
    zero_coordinate_point,
)

Triple = tuple[int, int, int]
Quad = tuple[int, int, int, int]

_PARALLEL_CHUNK = 1024


# ---------------------------------------------------------------------------
# pair selection

@dataclass(frozen=True)
class PairSelection:
    """Two quadrics renamed to the shared shape: Q1 in (X0, X1, X2) with a
    zero-X0 base point, Q2 in (X0, X1, X3); var_order records which original
    space variable sits in each X slot."""

    q1_name: str
    q2_name: str
    q1: Triple
    q2: Triple
    base: Triple
    var_order: tuple[str, str, str, str]


def _reorder_diag(form: TernaryForm, vars_: Sequence[str], order: Sequence[str]) -> Triple:
    coeffs = form.diagonal()
    lookup = dict(zip(vars_, coeffs))
    return tuple(lookup[v] for v in order)


def select_equation_pair(space: HomogeneousSpace) -> PairSelection:
    """Scan the four quadrics (then coordinates, ascending) for one with a
    zero-coordinate point; partner it with the first other quadric that also
    contains the zeroed variable.  Raises ConditionFailure when no quadric
    admits such a point."""
    quadrics = space.quadrics()
    for q1_name, q1_form, q1_vars in quadrics:
        for idx in range(3):
            base = zero_coordinate_point(q1_form, idx)
            if base is None:
                continue
            zero_var = q1_vars[idx]
            for q2_name, q2_form, q2_vars in quadrics:
                if q2_name == q1_name or zero_var not in q2_vars:
                    continue
                shared = [v for v in q1_vars if v in q2_vars]
                other_shared = next(v for v in shared if v != zero_var)
                x2_var = next(v for v in q1_vars if v not in shared)
                x3_var = next(v for v in q2_vars if v not in shared)
                order = (zero_var, other_shared, x2_var, x3_var)
                q1_coeffs = _reorder_diag(q1_form, q1_vars, order[:2] + (x2_var,))
                q2_coeffs = _reorder_diag(q2_form, q2_vars, order[:2] + (x3_var,))
                base_lookup = dict(zip(q1_vars, base))
                base_reordered = tuple(base_lookup[v] for v in (zero_var, other_shared, x2_var))
                return PairSelection(
                    q1_name, q2_name, q1_coeffs, q2_coeffs, base_reordered, order
                )
    raise ConditionFailure("no quadric has a point with a zero coordinate")


def weak_pair(space: HomogeneousSpace) -> PairSelection:
    """Fallback pairing (no zero-coordinate base needed): the x-eliminated
    quadric in (a, b, c) with the (a, b, d) quadric as partner."""
    q1 = _reorder_diag(space.e_d, ("a", "b", "c"), ("a", "b", "c"))
    q2 = _reorder_diag(space.e_a, ("a", "b", "d"), ("a", "b", "d"))
    return PairSelection("e_d", "e_a", q1, q2, (0, 0, 0), ("a", "b", "c", "d"))


def solution_in_space_order(sel: PairSelection, quad: Quad) -> Quad:
    named = dict(zip(sel.var_order, quad))
    return tuple(named[v] for v in ("a", "b", "c", "d"))


# ---------------------------------------------------------------------------
# deterministic parallel scanning

def _scan_weak(rows, b00, b11, b33, skip_zero, tests, offset):
    for i, (s, t) in enumerate(tests):
        f0 = rows[0][0] * s * s + rows[0][1] * s * t + rows[0][2] * t * t
        f1 = rows[1][0] * s * s + rows[1][1] * s * t + rows[1][2] * t * t
        value = -b33 * (b00 * f0 * f0 + b11 * f1 * f1)
        if value == 0:
            continue
        root = is_perfect_square(value)
        if root is None:
            continue
        if skip_zero:
            f2 = rows[2][0] * s * s + rows[2][1] * s * t + rows[2][2] * t * t
            if f0 == 0 or f1 == 0 or f2 == 0:
                continue
        return (offset + i, s, t, root)
    return None


def _scan_weak_segments(rows, b00, b11, b33, skip_zero, segments):
    # segments: [(shell radius, enumeration offset), ...]; pairs are
    # regenerated locally so only shell numbers cross process boundaries
    for r, off in segments:
        hit = _scan_weak(rows, b00, b11, b33, skip_zero, shell_pairs(r), off)
        if hit is not None:
            return hit
    return None


def _scan_quartic(coeffs, mu, tests, offset):
    b40, b31, b22, b13, b04 = coeffs
    for i, (s, t) in enumerate(tests):
        s2 = s * s
        t2 = t * t
        st = s * t
        val = b40 * s2 * s2 + b31 * s2 * st + b22 * s2 * t2 + b13 * st * t2 + b04 * t2 * t2
        if val == 0:
            continue
        root = is_perfect_square(mu * val)
        if root is None:
            continue
        return (offset + i, s, t, root // abs(mu))
    return None


def _scan_quartic_segments(coeffs, mu, segments):
    for r, off in segments:
        hit = _scan_quartic(coeffs, mu, shell_pairs(r), off)
        if hit is not None:
            return hit
    return None


def _chunk_segments(segments, parts):
    if not segments:
        return []
    chunk = max(1, -(-len(segments) // max(1, parts)))
    return [segments[i : i + chunk] for i in range(0, len(segments), chunk)]


# ---------------------------------------------------------------------------
# weak search

@dataclass
class WeakState:
    base: Triple
    phi: ConicParametrization
    hit: tuple[int, int] = (0, 0)
    pairs_tested: int = 0
    selection: Optional[PairSelection] = None


@dataclass
class SearchOutcome:
    quadruple: Quad                       # in (X0, X1, X2, X3) order
    method: str                           # "strong" or "weak"
    state: object
    diagnostics: dict = field(default_factory=dict)


def weak_solve(
    q1: Triple,
    q2: Triple,
    schedule: RadiusSchedule,
    workers: int = 1,
    base: Optional[Triple] = None,
    skip_zero_coordinates: bool = True,
) -> SearchOutcome:
    """Parametrize Q1 from any point, then scan coprime parameter pairs until
    -b33*(b00*F0^2 + b11*F1^2) is a nonzero perfect square; the quadruple is
    (F0, F1, F2, root) cleared to a primitive integer vector.

    Hits whose quadruple has a zero coordinate are skipped by default; they
    correspond to torsion images and are useless downstream.
    """
    form = TernaryForm(q1[0], 0, q1[1], q1[2])
    if base is None:
        base = find_conic_point(form)
    phi = parametrize_conic(form, base)
    b00, b11, b33 = q2
    rows = phi.rows
    static = (rows, b00, b11, b33, skip_zero_coordinates)
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    wave_target = _PARALLEL_CHUNK * max(1, workers) * 4
    try:
        offset = 0
        shells = schedule.shells()
        exhausted = False
        while not exhausted:
            segments = []
            total = 0
            while not exhausted and total < wave_target:
                r = next(shells, None)
                if r is None:
                    exhausted = True
                else:
                    size = shell_size(r)
                    segments.append((r, offset))
                    offset += size
                    total += size
            if not segments:
                break
            if pool is None:
                hit = _scan_weak_segments(*static, segments)
            else:
                futures = [
                    pool.submit(_scan_weak_segments, *static, chunk)
                    for chunk in _chunk_segments(segments, workers * 4)
                ]
                hits = [h for h in (f.result() for f in futures) if h is not None]
                hit = min(hits, key=lambda h: h[0]) if hits else None
            if hit is not None:
                idx, s, t, root = hit
                quad = _weak_quadruple(rows, b33, s, t, root)
                state = WeakState(base, phi, (s, t), idx + 1)
                return SearchOutcome(
                    quad,
                    "weak",
                    state,
                    {
                        "pairs_tested": idx + 1,
                        "parameter": (s, t),
                        "parameter_height": _height_of((s, t)),
                        "quadruple_height": _height_of(quad),
                    },
                )
    finally:
        if pool is not None:
            pool.shutdown()
    raise EffortExhausted("weak search schedule exhausted")


def _weak_quadruple(rows, b33, s, t, root) -> Quad:
    f = tuple(r[0] * s * s + r[1] * s * t + r[2] * t * t for r in rows)
    scale = abs(b33)
    return primitive_normalize((scale * f[0], scale * f[1], scale * f[2], root))


def _height_of(vec) -> float:
    m = max(abs(v) for v in vec)
    return 0.0 if m <= 1 else math.log10(m)


# ---------------------------------------------------------------------------
# strong search

@dataclass
class StagePins:
    """Optional stage-by-stage choices for bit-exact replay."""

    base_q1: Optional[Triple] = None
    phi_rows: Optional[tuple[Triple, Triple, Triple]] = None
    base_q3: Optional[Triple] = None
    psi_rows: Optional[tuple[Triple, Triple, Triple]] = None
    mu: Optional[int] = None
    base_q4: Optional[Triple] = None
    gamma_rows: Optional[tuple[Triple, Triple, Triple]] = None
    rho: Optional[tuple[int, int]] = None


@dataclass
class ChainState:
    """Everything the strong chain produced, for reporting and replay diffs."""

    selection: PairSelection
    phi: ConicParametrization
    y_conic: TernaryForm
    base_q3: Triple
    psi: ConicParametrization
    kernel: Triple
    cross_term: int
    mu_candidates: list[int]
    mu: int
    q4: TernaryForm
    q5: TernaryForm
    base_q4: Triple
    gamma: ConicParametrization
    quartic: tuple[int, int, int, int, int]
    rho: tuple[int, int]
    sigma1: int
    z_values: Quad
    y_values: Triple
    x_values: Quad


def pinned_parametrization(form: TernaryForm, base: Triple, rows) -> ConicParametrization:
    param = ConicParametrization(tuple(tuple(r) for r in rows), tuple(base), form)
    if form(*base) != 0:
        raise InvalidArgument(f"pinned base {base} is not on {form.coefficients}")
    if not param.is_valid():
        raise InvalidArgument("pinned parametrization does not sweep the conic")
    return param


def substituted_conic(phi: ConicParametrization, q2: Triple) -> TernaryForm:
    """Push the parametrization through the partner and read the biquadratic
    result as a conic in (s^2, t^2, X3)."""
    quartic = substitute_into_partner(phi, (q2[0], 0, q2[1], q2[2]))
    return biquadratic_to_ternary(quartic)


def parameter_kernel(psi: ConicParametrization) -> Triple:
    """Primitive vector orthogonal to both pure-square coefficient columns."""
    u = psi.column(0)
    v = psi.column(2)
    cross = (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )
    if cross == (0, 0, 0):
        raise DegenerateKernel("pure-square columns are linearly dependent")
    return primitive_normalize(cross)


def kernel_cross_term(kernel: Triple, psi: ConicParametrization) -> int:
    mid = psi.column(1)
    return sum(c * m for c, m in zip(kernel, mid))


def _squarefree_divisors(n: int) -> list[int]:
    n = abs(n)
    if n == 1:
        return [1]
    from .integers import factorize

    primes = [p for p, _ in factorize(n).factors]
    divs = [1]
    for p in primes:
        divs += [d * p for d in divs]
    return sorted(divs)


def square_factor_candidates(cross_term: int, psi: ConicParametrization) -> list[int]:
    """Signed squarefree divisors of the squarefree part of the cross term,
    kept when both row conics (row_i = mu * sigma^2) pass the solvability
    criterion AND admit the integral pattern with parameters coprime to mu;
    ordered by |mu|, positive first."""
    if cross_term == 0:
        raise DegenerateKernel("cross term vanishes; divisor condition is empty")
    core = abs(squarefree_part(cross_term)[0])
    out = []
    for d in _squarefree_divisors(core):
        for mu in (d, -d):
            if _scaled_rows_solvable(psi, mu) and _coprime_pattern_ok(psi, mu):
                out.append(mu)
    out.sort(key=lambda m: (abs(m), m < 0))
    return out


def _binary_resultant(f: Triple, g: Triple) -> int:
    return (f[0] * g[2] - g[0] * f[2]) ** 2 - (f[0] * g[1] - g[0] * f[1]) * (
        f[1] * g[2] - g[1] * f[2]
    )


def extended_square_factors(psi: ConicParametrization) -> list[int]:
    """Completion of the candidate set: any square factor of an actual
    solution divides both row values at parameters that are coprime where it
    matters, so its primes divide the resultant of the two rows.  Only the
    solvability criterion is applied here (the coprime-pattern refinement can
    reject the true factor when the rows take imprimitive values)."""
    res = _binary_resultant(psi.rows[0], psi.rows[1])
    if res == 0:
        raise DegenerateKernel("parametrization rows share a factor")
    from .integers import factorize

    primes = factorize(abs(res)).primes()
    cores = [1]
    for p in primes:
        cores += [c * p for c in cores]
    out = []
    for d in sorted(cores):
        for mu in (d, -d):
            if _scaled_rows_solvable(psi, mu):
                out.append(mu)
    out.sort(key=lambda m: (abs(m), m < 0))
    return out


def _coprime_pattern_ok(psi: ConicParametrization, mu: int) -> bool:
    """Necessary local conditions for row_i(n0, n1) = mu*s^2 to have integer
    solutions with n0, n1 coprime to mu: each odd prime of mu must divide
    some row value at unit coordinates, and for even mu the congruence must
    already close modulo 16."""
    if abs(mu) == 1:
        return True
    from .integers import factorize

    for p in factorize(abs(mu)).primes():
        for i in (0, 1):
            r = psi.rows[i]
            if p == 2:
                targets = {(mu * s * s) % 16 for s in range(16)}
                if not any(
                    (r[0] * a * a + r[1] * a * b + r[2] * b * b) % 16 in targets
                    for a in range(1, 16, 2)
                    for b in range(1, 16, 2)
                ):
                    return False
            else:
                if not any(
                    (r[0] * a * a + r[1] * a * b + r[2] * b * b) % p == 0
                    for a in range(1, p)
                    for b in range(1, p)
                ):
                    return False
    return True


def _scaled_rows_solvable(psi: ConicParametrization, mu: int) -> bool:
    for i in (0, 1):
        r = psi.rows[i]
        try:
            form = TernaryForm(r[0], r[1], r[2], -mu)
        except Exception:
            return False
        if not legendre_solvable(reduce_to_legendre(_diagonal_model(form))):
            return False
    return True


def _diagonal_model(form: TernaryForm) -> TernaryForm:
    if form.is_diagonal:
        return form
    a00, a01, a11, a22 = form.coefficients
    return TernaryForm(1, 0, 4 * a00 * a11 - a01 * a01, 4 * a00 * a22)


def scaled_square_conic(row: Triple, mu: int) -> TernaryForm:
    """The conic row(Z0, Z1) - mu*Z2^2 = 0."""
    return TernaryForm(row[0], row[1], row[2], -mu)


def _compose_quartic(psi_row: Triple, gamma: ConicParametrization) -> tuple[int, ...]:
    """Coefficients of psi_row(gamma0, gamma1) as a quartic in the final
    parameters."""
    from .quadforms import _binary_mul

    g0, g1 = gamma.rows[0], gamma.rows[1]
    acc = [0] * 5
    for coef, prod in (
        (psi_row[0], _binary_mul(g0, g0)),
        (psi_row[1], _binary_mul(g0, g1)),
        (psi_row[2], _binary_mul(g1, g1)),
    ):
        for i in range(5):
            acc[i] += coef * prod[i]
    return tuple(acc)


@dataclass
class _MuState:
    mu: int
    q4: TernaryForm
    q5: TernaryForm
    base: Triple
    gamma: ConicParametrization
    quartic: tuple[int, ...]


def _final_search(
    states: list[_MuState],
    schedule: RadiusSchedule,
    workers: int,
    pool,
) -> tuple[int, tuple[int, int], int, int]:
    """Round-robin scan over the per-mu quartics with a shared shell radius;
    returns (state index, (rho0, rho1), sigma1, enumeration position).

    With workers, whole waves of (shell, state) segments are scanned
    concurrently; segments carry their enumeration offsets, so the earliest
    hit is identical for any worker count."""
    offset = 0
    if workers <= 1 or pool is None:
        for r in schedule.shells():
            pairs = shell_pairs(r)
            for si, st in enumerate(states):
                hit = _scan_quartic(st.quartic, st.mu, pairs, offset)
                if hit is not None:
                    idx, s, t, sigma1 = hit
                    return si, (s, t), sigma1, idx + 1
                offset += len(pairs)
        raise EffortExhausted("final search schedule exhausted")

    wave_target = _PARALLEL_CHUNK * workers * 4
    shells = schedule.shells()
    parts_per_state = max(1, (workers * 4) // len(states))
    exhausted = False
    while not exhausted:
        segments = [[] for _ in states]
        total = 0
        while total < wave_target:
            r = next(shells, None)
            if r is None:
                exhausted = True
                break
            size = shell_size(r)
            for si in range(len(states)):
                segments[si].append((r, offset))
                offset += size
            total += size * len(states)
        futures = []
        for si, st in enumerate(states):
            for chunk in _chunk_segments(segments[si], parts_per_state):
                futures.append(
                    (si, pool.submit(_scan_quartic_segments, st.quartic, st.mu, chunk))
                )
        hits = []
        for si, fut in futures:
            h = fut.result()
            if h is not None:
                hits.append((h[0], si, h))
        if hits:
            idx, si, h = min(hits)
            return si, (h[1], h[2]), h[3], idx + 1
    raise EffortExhausted("final search schedule exhausted")


def strong_solve(
    space: HomogeneousSpace,
    schedule: Optional[RadiusSchedule] = None,
    workers: int = 1,
    pins: Optional[StagePins] = None,
    mu_override: Optional[int] = None,
    weak_fallback: bool = True,
) -> SearchOutcome:
    """Full staged search on a homogeneous space.

    Falls back to the weak search when no quadric of the space has a
    zero-coordinate point (or when the kernel stage degenerates), unless
    weak_fallback is False, in which case ConditionFailure propagates.
    """
    schedule = schedule or RadiusSchedule(1, 2000)
    pins = pins or StagePins()
    try:
        sel = select_equation_pair(space)
    except ConditionFailure:
        if not weak_fallback:
            raise
        return _weak_on_space(space, schedule, workers, pins)
    try:
        return _strong_chain(space, sel, schedule, workers, pins, mu_override)
    except DegenerateKernel as exc:
        if not weak_fallback:
            raise
        outcome = _weak_on_space(space, schedule, workers, pins)
        outcome.diagnostics["degenerate_kernel"] = str(exc)
        return outcome


def _weak_on_space(space, schedule, workers, pins) -> SearchOutcome:
    sel = weak_pair(space)
    outcome = weak_solve(
        sel.q1, sel.q2, schedule, workers=workers, base=pins.base_q1
    )
    outcome.state.selection = sel
    outcome.diagnostics["pair"] = (sel.q1_name, sel.q2_name)
    outcome.diagnostics["var_order"] = sel.var_order
    solution = solution_in_space_order(sel, outcome.quadruple)
    if not space.satisfied_by(solution):
        raise InvalidArgument("weak result does not satisfy the space")
    outcome.diagnostics["space_solution"] = solution
    return outcome


def _strong_chain(space, sel, schedule, workers, pins, mu_override) -> SearchOutcome:
    q1_form = TernaryForm(sel.q1[0], 0, sel.q1[1], sel.q1[2])
    base1 = pins.base_q1 or sel.base
    if pins.phi_rows is not None:
        phi = pinned_parametrization(q1_form, base1, pins.phi_rows)
    else:
        phi = parametrize_conic(q1_form, base1)

    y_conic = substituted_conic(phi, sel.q2)

    base_q3 = pins.base_q3 or find_conic_point(y_conic)
    if pins.psi_rows is not None:
        psi = pinned_parametrization(y_conic, base_q3, pins.psi_rows)
    else:
        psi = parametrize_conic(y_conic, base_q3)

    kernel = parameter_kernel(psi)
    cross = kernel_cross_term(kernel, psi)
    try:
        candidates = square_factor_candidates(cross, psi)
    except DegenerateKernel:
        candidates = []
    completion = [m for m in extended_square_factors(psi) if m not in candidates]
    chosen = mu_override if mu_override is not None else pins.mu
    if chosen is not None:
        if chosen not in candidates and chosen not in completion:
            raise InvalidArgument(f"mu={chosen} is not among the candidates {candidates}")
        rounds = [[chosen]]
    else:
        rounds = [r for r in (candidates, completion) if r]
    if not rounds:
        raise DegenerateKernel("no surviving square factors")

    def _states_for(mus):
        states = []
        for mu in mus:
            q4 = scaled_square_conic(psi.rows[0], mu)
            q5 = scaled_square_conic(psi.rows[1], mu)
            base_q4 = pins.base_q4 or find_conic_point(q4)
            if pins.gamma_rows is not None:
                gamma = pinned_parametrization(q4, base_q4, pins.gamma_rows)
            else:
                gamma = parametrize_conic(q4, base_q4)
            quartic = _compose_quartic(psi.rows[1], gamma)
            states.append(_MuState(mu, q4, q5, base_q4, gamma, quartic))
        return states

    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    completion_used = False
    try:
        if pins.rho is not None:
            if chosen is None:
                raise InvalidArgument("pinned final parameters need a pinned square factor")
            s, t = pins.rho
            states = _states_for(rounds[0])
            st = states[0]
            hit = _scan_quartic(st.quartic, st.mu, [(s, t)], 0)
            if hit is None:
                raise InvalidArgument(f"pinned parameters {pins.rho} are not a hit")
            si, rho, sigma1, tested = 0, (s, t), hit[3], 1
        else:
            si = None
            for round_no, mus in enumerate(rounds):
                states = _states_for(mus)
                try:
                    si, rho, sigma1, tested = _final_search(states, schedule, workers, pool)
                    completion_used = round_no > 0
                    break
                except EffortExhausted:
                    if round_no == len(rounds) - 1:
                        raise
    finally:
        if pool is not None:
            pool.shutdown()

    st = states[si]
    quadruple, zvec, yvec = back_substitute(phi, psi, st, rho, sigma1, sel)
    state = ChainState(
        selection=sel,
        phi=phi,
        y_conic=y_conic,
        base_q3=base_q3,
        psi=psi,
        kernel=kernel,
        cross_term=cross,
        mu_candidates=candidates,
        mu=st.mu,
        q4=st.q4,
        q5=st.q5,
        base_q4=st.base,
        gamma=st.gamma,
        quartic=st.quartic,
        rho=rho,
        sigma1=sigma1,
        z_values=zvec,
        y_values=yvec,
        x_values=quadruple,
    )
    solution = solution_in_space_order(sel, quadruple)
    if not space.satisfied_by(solution):
        raise InvalidArgument("strong result does not satisfy the space")
    diagnostics = {
        "pairs_tested": tested,
        "mu": st.mu,
        "mu_candidates": candidates,
        "mu_completion": completion,
        "completion_used": completion_used,
        "parameter": rho,
        "parameter_height": _height_of(rho),
        "quadruple_height": _height_of(quadruple),
        "space_solution": solution,
    }
    return SearchOutcome(quadruple, "strong", state, diagnostics)


def back_substitute(
    phi: ConicParametrization,
    psi: ConicParametrization,
    st: _MuState,
    rho: tuple[int, int],
    sigma1: int,
    sel: PairSelection,
) -> tuple[Quad, Quad, Triple]:
    """Walk a final-loop hit back through the chain to a primitive quadruple
    verified against both renamed quadrics."""
    mu = st.mu
    z = st.gamma(*rho)
    zvec = (z[0], z[1], z[2], sigma1)
    y = tuple(psi.evaluate_row(i, z[0], z[1]) for i in range(3))
    assert y[0] == mu * z[2] * z[2]
    assert y[1] == mu * sigma1 * sigma1
    xi0 = is_perfect_square(mu * y[0])
    xi1 = is_perfect_square(mu * y[1])
    assert xi0 is not None and xi1 is not None
    x0, x1, x2 = phi(xi0, xi1)
    x3 = mu * y[2]
    quadruple = primitive_normalize((x0, x1, x2, x3))
    a00, a11, a22 = sel.q1
    b00, b11, b33 = sel.q2
    assert a00 * quadruple[0] ** 2 + a11 * quadruple[1] ** 2 + a22 * quadruple[2] ** 2 == 0
    assert b00 * quadruple[0] ** 2 + b11 * quadruple[1] ** 2 + b33 * quadruple[3] ** 2 == 0
    return quadruple, zvec, y

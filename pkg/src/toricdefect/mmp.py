"""Special minimal model programs for the negative of an invariant divisor.

A run starts from a smooth complete Fano fan and a marked ray D.  At every
step the engine picks an extremal ray R with ``D_i . R > 0`` and
``-K . R > 0`` (both checked exactly); a fiber-type pick terminates the run,
a divisorial pick removes a ray, a small pick flips.  The divisor is tracked
by its stable ray label.  Completed runs are classified by the defect of the
transformed divisor on the terminal fan, which a dichotomy forces into
``{0, 1}``: type (a) and type (b).  Type (b) runs carry a conic-bundle
package (the exceptional divisor E, its opposite Ê, the fiber class and the
identities tying them together) which is recomputed and checked from scratch
here.

``strategy="all"`` explores every admissible choice of extremal ray with
memoization on (canonical fan, divisor label).  Distinct choice paths that
reach the same terminal state are collapsed: the search returns one witness
run per reachable terminal state, which is exactly what existence and
universality checks over run types need.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from . import linalg as la
from .fan import Fan, canonical_key, local_properties, walls
from .intersection import CurveClass, intersection_space
from .linalg import Matrix, Vector
from .mori import (
    ContractionError,
    ContractionInfo,
    ExtremalRay,
    classify_contraction,
    contract,
    extremal_rays,
    flip,
)
from .defect import c_of_divisor, n1_span_of_divisor

__all__ = [
    "MmpError",
    "MmpRun",
    "MmpStep",
    "RunClassification",
    "TypeBReport",
    "classify_run",
    "run_to_dict",
    "special_mmp",
    "transform_class",
    "type_b_structure",
]

UNDEFINED = object()  # marker: transform hit an indeterminacy locus


class MmpError(RuntimeError):
    """A run violated an invariant the construction guarantees."""


@dataclass(frozen=True)
class MmpStep:
    index: int                 # 1-based position in the run
    fan_before: Fan
    fan_after: Fan
    ray: ExtremalRay
    info: ContractionInfo
    kind: str                  # "divisorial" | "small"
    d_label: str
    d_pairing: int             # D_i . R_i on the primitive generator (> 0)
    k_pairing: int             # -K . R_i on the primitive generator (> 0)
    removed_label: str | None
    flip_added: tuple[frozenset[str], ...]  # label sets of cones a flip created


@dataclass(frozen=True)
class MmpRun:
    d_label: str
    steps: tuple[MmpStep, ...]
    terminal_fan: Fan          # X_k
    phi_ray: ExtremalRay
    phi_info: ContractionInfo
    y_fan: Fan
    projection: Matrix
    phi_d_pairing: int
    phi_k_pairing: int

    @property
    def k(self) -> int:
        return len(self.steps) + 1

    @property
    def start_fan(self) -> Fan:
        return self.steps[0].fan_before if self.steps else self.terminal_fan

    def fan_at(self, i: int) -> Fan:
        """X_i for i in 1..k."""
        if not 1 <= i <= self.k:
            raise IndexError(f"step index {i} outside 1..{self.k}")
        return self.steps[i - 1].fan_before if i <= len(self.steps) else self.terminal_fan

    def d_index_at(self, i: int) -> int:
        return self.fan_at(i).index_of_label(self.d_label)


@dataclass(frozen=True)
class RunClassification:
    run_type: str                       # "a" | "b"
    c_start: int
    c_terminal: int
    special_indices: tuple[int, ...]    # 1-based step indices escaping N1(D_i, X_i)
    exceptional_labels: tuple[str, ...]  # removed-ray labels at the special steps


@dataclass(frozen=True)
class TypeBReport:
    e_label: str
    e_hat_label: str
    e_class: CurveClass          # e, fiber of E, in start-fan coordinates
    e_hat_class: CurveClass      # ê
    ell_class: CurveClass        # ℓ, general fiber, in start-fan coordinates
    pairing_e_on_e: int          # E . e   (must be -1)
    pairing_e_on_ehat: int       # E . ê   (must be 1)
    pairing_ehat_on_e: int       # Ê . e   (must be 1)
    pairing_e_on_ell: int        # E . ℓ   (must be 0)
    pairing_ehat_on_ell: int     # Ê . ℓ   (must be 0)
    ell_decomposes: bool         # ℓ = e + ê coordinatewise
    e_hat_is_wall_class: bool
    e_bundle_ok: bool            # star fan of E is a P^1-bundle fan
    e_hat_bundle_ok: bool
    terminal_smooth: bool
    base_smooth: bool
    fibration_smooth: bool       # no contracted degree-1 wall on X_k
    discriminant_walls: tuple[frozenset[int], ...]  # singular-fiber walls of X_k
    a_center_labels: frozenset[str]
    a_component_ok: bool         # center locus disjoint from flip debris
    z_ray: Vector                # image of the center in the base lattice
    pullback_multiplicity_ok: bool
    zeta_rho_drop_ok: bool | None  # k = 2, non-smooth case only


# ---------------------------------------------------------------------------
# running the MMP


def _candidates(fan: Fan, d_index: int) -> list[ExtremalRay]:
    out = []
    for r in extremal_rays(fan):
        if r.generator[d_index] > 0 and sum(r.generator) > 0:
            out.append(r)
    return out


def _terminal_data(fan: Fan, d_index: int, ray: ExtremalRay):
    info = classify_contraction(fan, ray)
    y_fan, proj = contract(fan, ray)
    d_image = la.mat_vec(proj, fan.rays[d_index])
    if not la.is_zero_vector(d_image):
        raise MmpError(
            "transformed divisor does not dominate the base of the final "
            f"fiber contraction (image {d_image})"
        )
    return info, y_fan, proj


def _execute_step(
    fan: Fan, d_label: str, ray: ExtremalRay, index: int
) -> MmpStep:
    d_index = fan.index_of_label(d_label)
    info = classify_contraction(fan, ray)
    flip_added: tuple[frozenset[str], ...] = ()
    if info.kind == "divisorial":
        after, _ = contract(fan, ray)
        removed_label = fan.labels[info.removed_ray]
        kind = "divisorial"
    elif info.kind == "small":
        after = flip(fan, ray)
        removed_label = None
        kind = "small"
        before_cones = set(fan.cones)
        flip_added = tuple(
            frozenset(after.labels[i] for i in c)
            for c in after.cones
            if c not in before_cones
        )
    else:
        raise MmpError("fiber-type ray passed to a birational step")
    props = local_properties(after)
    if not props.terminal:
        raise MmpError(f"step {index} produced a non-terminal fan")
    return MmpStep(
        index=index,
        fan_before=fan,
        fan_after=after,
        ray=ray,
        info=info,
        kind=kind,
        d_label=d_label,
        d_pairing=ray.generator[d_index],
        k_pairing=sum(ray.generator),
        removed_label=removed_label,
        flip_added=flip_added,
    )


def special_mmp(
    fan: Fan,
    d_ray: int,
    strategy: str = "first",
    step_bound: int | None = None,
    runs_out: list | None = None,
) -> list[MmpRun]:
    """Run special MMPs for minus the divisor of the given ray.

    ``strategy="first"`` follows one deterministic run: among admissible
    extremal rays it terminates on the lexicographically least fiber-type
    candidate as soon as one exists, otherwise steps along the least
    birational candidate.  ``strategy="all"`` explores every admissible
    candidate with memoization and returns one witness run per reachable
    terminal state.

    Every returned run satisfies, step by step, ``D_i . R_i > 0`` and
    ``-K . R_i > 0`` exactly, with terminal simplicial intermediate fans;
    an empty candidate set before termination is a hard error, since the
    construction guarantees continuation on Fano input.
    """
    props = local_properties(fan)
    if not (props.smooth and props.fano and props.complete):
        raise MmpError("special MMPs are defined for smooth complete Fano fans")
    if not 0 <= d_ray < fan.n_rays:
        raise MmpError("divisor ray index out of range")
    if strategy not in ("first", "all"):
        raise ValueError(f"unknown strategy {strategy!r}")
    if step_bound is None:
        step_bound = 10 * intersection_space(fan).rho
    d_label = fan.labels[d_ray]

    if strategy == "first":
        runs = [_run_first(fan, d_label, step_bound)]
    else:
        memo: dict = {}
        suffixes = _explore_all(fan, d_label, step_bound, memo, set())
        runs = [_assemble(fan, d_label, s) for s in suffixes]
    if runs_out is not None:
        runs_out.extend(runs)
    return runs


def _run_first(fan: Fan, d_label: str, bound: int) -> MmpRun:
    steps: list[MmpStep] = []
    current = fan
    while True:
        d_index = current.index_of_label(d_label)
        cands = _candidates(current, d_index)
        if not cands:
            raise MmpError(
                f"empty candidate set at step {len(steps) + 1}; a special MMP "
                "must continue until a fiber-type ray appears"
            )
        fiber = [r for r in cands if r.kind == "fiber"]
        if fiber:
            chosen = min(fiber, key=lambda r: r.generator)
            info, y_fan, proj = _terminal_data(current, d_index, chosen)
            return MmpRun(
                d_label=d_label,
                steps=tuple(steps),
                terminal_fan=current,
                phi_ray=chosen,
                phi_info=info,
                y_fan=y_fan,
                projection=proj,
                phi_d_pairing=chosen.generator[d_index],
                phi_k_pairing=sum(chosen.generator),
            )
        if len(steps) >= bound:
            raise MmpError(
                f"step bound {bound} exceeded; trace so far: "
                + " -> ".join(s.kind for s in steps)
            )
        chosen = min(cands, key=lambda r: r.generator)
        steps.append(_execute_step(current, d_label, chosen, len(steps) + 1))
        current = steps[-1].fan_after


def _explore_all(fan: Fan, d_label: str, bound: int, memo: dict, active: set):
    """Suffixes (steps with local indices, terminal data) from this state."""
    d_index = fan.index_of_label(d_label)
    key = canonical_key(fan, d_index)
    if key in memo:
        return memo[key]
    if key in active:
        raise MmpError("cycle in the MMP state graph; this cannot happen")
    active.add(key)
    cands = _candidates(fan, d_index)
    if not cands:
        raise MmpError("empty candidate set before fiber-type termination")
    suffixes = []
    for ray in cands:
        if ray.kind == "fiber":
            info, y_fan, proj = _terminal_data(fan, d_index, ray)
            suffixes.append(
                ((), (fan, ray, info, y_fan, proj))
            )
            continue
        if bound <= 0:
            raise MmpError("step bound exceeded during exhaustive exploration")
        step = _execute_step(fan, d_label, ray, 1)
        for sub_steps, terminal in _explore_all(
            step.fan_after, d_label, bound - 1, memo, active
        ):
            suffixes.append(((step,) + sub_steps, terminal))
    # one witness per reachable terminal state
    seen: dict = {}
    for steps, terminal in suffixes:
        t_fan, t_ray = terminal[0], terminal[1]
        t_key = (
            canonical_key(t_fan, t_fan.index_of_label(d_label)),
            t_ray.generator,
        )
        if t_key not in seen:
            seen[t_key] = (steps, terminal)
    result = list(seen.values())
    active.discard(key)
    memo[key] = result
    return result


def _assemble(fan: Fan, d_label: str, suffix) -> MmpRun:
    steps, (t_fan, t_ray, info, y_fan, proj) = suffix
    renumbered = tuple(replace(s, index=i + 1) for i, s in enumerate(steps))
    d_index = t_fan.index_of_label(d_label)
    return MmpRun(
        d_label=d_label,
        steps=renumbered,
        terminal_fan=t_fan,
        phi_ray=t_ray,
        phi_info=info,
        y_fan=y_fan,
        projection=proj,
        phi_d_pairing=t_ray.generator[d_index],
        phi_k_pairing=sum(t_ray.generator),
    )


# ---------------------------------------------------------------------------
# classification


def classify_run(run: MmpRun) -> RunClassification:
    """Type (a)/(b) split by the defect of the transformed divisor on X_k.

    Also locates the special steps, those whose chosen ray escapes the span
    of curves inside the divisor; their count must equal the drop of the
    defect along the run, and the terminal defect must be 0 or 1.
    """
    start = run.start_fan
    c_start = c_of_divisor(start, start.index_of_label(run.d_label))
    if c_start < 1:
        raise MmpError(
            "runs are only classified for divisors with positive defect "
            f"(got c(D) = {c_start})"
        )
    c_terminal = c_of_divisor(
        run.terminal_fan, run.terminal_fan.index_of_label(run.d_label)
    )
    if c_terminal not in (0, 1):
        raise MmpError(
            f"terminal defect c(D_k) = {c_terminal} violates the 0/1 dichotomy"
        )
    special = []
    labels = []
    for step in run.steps:
        fan_i = step.fan_before
        d_idx = fan_i.index_of_label(run.d_label)
        span = n1_span_of_divisor(fan_i, d_idx)
        if not la.in_span(span, step.ray.generator):
            special.append(step.index)
            labels.append(step.removed_label or "")
    if len(special) != c_start - c_terminal:
        raise MmpError(
            f"{len(special)} special steps but the defect dropped by "
            f"{c_start - c_terminal}"
        )
    return RunClassification(
        run_type="a" if c_terminal == 0 else "b",
        c_start=c_start,
        c_terminal=c_terminal,
        special_indices=tuple(special),
        exceptional_labels=tuple(labels),
    )


# ---------------------------------------------------------------------------
# transforms of curve classes along a run


def transform_class(run: MmpRun, gamma, from_step: int, to_step: int):
    """Transform of a one-cycle class from X_{from_step} to X_{to_step}.

    ``gamma`` must be a nonnegative combination of wall classes of
    X_{from_step}.  Divisorial steps push forward (the removed coordinate is
    folded into the blow-down center via the wall relation); flips act as
    the identity provided some effective representation of the class avoids
    the flipped circuit, and otherwise the transform is undefined and the
    module-level ``UNDEFINED`` marker is returned.
    """
    if not 1 <= from_step <= to_step <= run.k:
        raise IndexError("step range out of bounds")
    current = tuple(gamma)
    for j in range(from_step, to_step):
        step = run.steps[j - 1]
        fan_j = step.fan_before
        if len(current) != fan_j.n_rays:
            raise ValueError("class vector has the wrong length for this step")
        if step.kind == "divisorial":
            removed = step.info.removed_ray
            weights = dict(
                zip(sorted(step.info.center), step.info.center_weights)
            )
            coeff = current[removed]
            moved = [
                current[i] + coeff * weights.get(i, 0)
                for i in range(fan_j.n_rays)
            ]
            current = tuple(x for i, x in enumerate(moved) if i != removed)
        else:
            j_minus = step.info.circuit[1]
            good = [
                w.relation for w in walls(fan_j) if not j_minus <= w.rays
            ]
            if la.solve_nonnegative(good, current) is None:
                return UNDEFINED
            # class coordinates are untouched: rays are unchanged by a flip
    return current


# ---------------------------------------------------------------------------
# type (b) structure


def _is_p1_bundle_fan(fan: Fan) -> bool:
    """True when some antipodal ray pair meets every maximal cone."""
    if fan.dim == 0:
        return True
    ray_set = {v: i for i, v in enumerate(fan.rays)}
    for v, i in ray_set.items():
        j = ray_set.get(la.vec_neg(v))
        if j is None or j < i:
            continue
        if all(i in c or j in c for c in fan.cones):
            return True
    return False


def _loci_disjoint(fan: Fan, tau1: frozenset[int], tau2: frozenset[int]) -> bool:
    """Orbit closures V(tau1), V(tau2) are disjoint iff no cone contains both."""
    union = tau1 | tau2
    return not any(union <= c for c in fan.cones)


def type_b_structure(run: MmpRun, classification: RunClassification | None = None) -> TypeBReport:
    """Recompute and verify the conic-bundle package of a type (b) run.

    Identifies E (the ray removed at the unique special step), the fiber
    class e, the general fiber ℓ, the opposite divisor Ê with fiber ê, and
    checks the exact identities ``E.e = -1``, ``E.ê = Ê.e = 1``,
    ``E.ℓ = Ê.ℓ = 0`` and ``ℓ = e + ê`` coordinatewise on the start fan,
    plus smoothness of X_k and Y.  Any failure raises :class:`MmpError`
    with the offending data; these identities are theorems, so a failure
    means a bug or a genuine counterexample.
    """
    cls = classification or classify_run(run)
    if cls.run_type != "b":
        raise MmpError("type_b_structure requires a type (b) run")
    if cls.c_start != 2:
        raise MmpError(
            "the conic-bundle package is a c(D) = 2 statement "
            f"(got c(D) = {cls.c_start})"
        )
    (i1,) = cls.special_indices
    special = run.steps[i1 - 1]
    if special.kind != "divisorial":
        raise MmpError("the special step of a type (b) run must be divisorial")
    for step in run.steps:
        if step.index != i1 and step.kind != "small":
            raise MmpError(
                f"step {step.index} is {step.kind}; in a type (b) run every "
                "step except the special one must be a flip"
            )
    if not special.info.smooth_codim2:
        raise MmpError("special step is not a smooth codimension-two blow-down")

    start = run.start_fan
    x_k = run.terminal_fan
    e_label = special.removed_label
    e_index = start.index_of_label(e_label)

    # flips do not change rays, so classes on X_{i1} = classes on X for the
    # steps before the blow-down, and X_k-classes extend by zero at E
    if special.fan_before.rays != start.rays:
        raise MmpError("rays changed before the special step of a type (b) run")
    e_class = special.ray.generator
    if e_class[e_index] != -1:
        raise MmpError(f"E . e = {e_class[e_index]} != -1")

    ell_terminal = run.phi_ray.generator
    term_labels = x_k.labels
    ell_class = tuple(
        ell_terminal[term_labels.index(lab)] if lab in term_labels else 0
        for lab in start.labels
    )
    e_hat_class = la.vec_sub(ell_class, e_class)
    wall_classes = {w.relation: w for w in walls(start)}
    e_hat_is_wall = tuple(e_hat_class) in wall_classes

    # Ê from the base: Z is the image of the blow-down center
    center_labels = frozenset(
        special.fan_before.labels[i] for i in special.info.center
    )
    center_in_terminal = frozenset(
        x_k.index_of_label(lab) for lab in center_labels
    )
    images = [
        la.mat_vec(run.projection, x_k.rays[i]) for i in sorted(center_in_terminal)
    ]
    nonzero = [v for v in images if not la.is_zero_vector(v)]
    if not nonzero or la.rank(nonzero) != 1:
        raise MmpError(f"center image {images} does not span a base ray")
    z_ray = la.primitive(nonzero[0])
    over_z = []
    for i, v in enumerate(x_k.rays):
        img = la.mat_vec(run.projection, v)
        if la.is_zero_vector(img):
            continue
        if la.in_span([z_ray], img) and la.dot(img, z_ray) > 0:
            over_z.append((i, img))
    if len(over_z) != 1:
        raise MmpError(
            f"pullback of Z has {len(over_z)} ray components, expected one"
        )
    e_hat_terminal_index, e_hat_image = over_z[0]
    pullback_mult_ok = tuple(e_hat_image) == tuple(z_ray)
    if not pullback_mult_ok:
        raise MmpError(
            f"pullback of Z has multiplicity > 1 at {e_hat_image}; "
            "it must equal E + Ê"
        )
    e_hat_label = x_k.labels[e_hat_terminal_index]
    e_hat_index = start.index_of_label(e_hat_label)
    if e_hat_class[e_hat_index] != -1:
        raise MmpError(f"Ê . ê = {e_hat_class[e_hat_index]} != -1")

    p_e_on_e = e_class[e_index]
    p_e_on_ehat = e_hat_class[e_index]
    p_ehat_on_e = e_class[e_hat_index]
    p_e_on_ell = ell_class[e_index]
    p_ehat_on_ell = ell_class[e_hat_index]
    for name, value, want in [
        ("E.e", p_e_on_e, -1),
        ("E.ê", p_e_on_ehat, 1),
        ("Ê.e", p_ehat_on_e, 1),
        ("E.ℓ", p_e_on_ell, 0),
        ("Ê.ℓ", p_ehat_on_ell, 0),
    ]:
        if value != want:
            raise MmpError(f"type (b) identity {name} = {value}, expected {want}")
    if not e_hat_is_wall:
        raise MmpError(f"ê = {e_hat_class} is not a wall class of the start fan")

    term_props = local_properties(x_k)
    base_props = local_properties(run.y_fan)
    if not term_props.smooth:
        raise MmpError("terminal fan of a type (b) run must be smooth")
    if not base_props.smooth:
        raise MmpError("base of a type (b) run must be smooth")

    # smooth conic bundle <=> the primitive contracted class has degree 2;
    # degree-1 contracted walls are the components of reducible fibers
    contracted = [
        w for w in walls(x_k) if w.relation == run.phi_ray.generator
    ]
    fibration_smooth = run.phi_k_pairing == 2
    discriminant = tuple(
        w.rays for w in contracted if sum(w.relation) == 1
    )
    if fibration_smooth and discriminant:
        raise MmpError("degree-2 fibration cannot have discriminant walls")

    # A is a connected component of the indeterminacy locus: the center must
    # be locus-disjoint from every flip's inserted cone
    a_ok = True
    for step in run.steps:
        if step.kind != "small":
            continue
        j_plus = frozenset(
            step.fan_before.labels[i] for i in step.info.circuit[0]
        )
        plus_in_terminal = frozenset(x_k.index_of_label(lab) for lab in j_plus)
        if not _loci_disjoint(x_k, center_in_terminal, plus_in_terminal):
            a_ok = False

    e_star_ok = _is_p1_bundle_fan(_star_of(start, e_index))
    e_hat_star_ok = _is_p1_bundle_fan(_star_of(start, e_hat_index))
    if not (e_star_ok and e_hat_star_ok):
        raise MmpError("E or Ê is not a P^1-bundle divisor")

    # a singular conic bundle forces k = 2 and a smooth P^1-fibration on the
    # base whose total Picard drop from X is three
    zeta_ok = None
    if not fibration_smooth:
        if run.k != 2:
            raise MmpError(
                "singular conic bundle reached through flips: contradicts "
                "the k = 2 dichotomy for non-smooth type (b) fibrations"
            )
        zeta_ok = _smooth_p1_quotient_exists(run, z_ray)
        if not zeta_ok:
            raise MmpError(
                "singular conic bundle without a smooth P^1-fibration of "
                "total rho drop 3 on the base"
            )

    return TypeBReport(
        e_label=e_label,
        e_hat_label=e_hat_label,
        e_class=e_class,
        e_hat_class=tuple(e_hat_class),
        ell_class=tuple(ell_class),
        pairing_e_on_e=p_e_on_e,
        pairing_e_on_ehat=p_e_on_ehat,
        pairing_ehat_on_e=p_ehat_on_e,
        pairing_e_on_ell=p_e_on_ell,
        pairing_ehat_on_ell=p_ehat_on_ell,
        ell_decomposes=tuple(ell_class) == tuple(la.vec_add(e_class, e_hat_class)),
        e_hat_is_wall_class=e_hat_is_wall,
        e_bundle_ok=e_star_ok,
        e_hat_bundle_ok=e_hat_star_ok,
        terminal_smooth=term_props.smooth,
        base_smooth=base_props.smooth,
        fibration_smooth=fibration_smooth,
        discriminant_walls=discriminant,
        a_center_labels=center_labels,
        a_component_ok=a_ok,
        z_ray=z_ray,
        pullback_multiplicity_ok=pullback_mult_ok,
        zeta_rho_drop_ok=zeta_ok,
    )


def _star_of(fan: Fan, ray_index: int) -> Fan:
    from .fan import divisor_star_fan

    return divisor_star_fan(fan, ray_index)


def _smooth_p1_quotient_exists(run: MmpRun, z_ray: Vector) -> bool:
    """Search the base for a smooth P^1-fibration positive on Z (k = 2 case)."""
    y = run.y_fan
    z_index = next(
        i for i, v in enumerate(y.rays) if v == tuple(z_ray)
    )
    rho_x = intersection_space(run.start_fan).rho
    for ray in extremal_rays(y):
        if ray.kind != "fiber" or sum(ray.generator) != 2:
            continue
        if ray.generator[z_index] <= 0:
            continue
        try:
            y2, _proj = contract(y, ray)
        except ContractionError:
            continue
        if not local_properties(y2).smooth:
            continue
        if rho_x - intersection_space(y2).rho == 3:
            return True
    return False


# ---------------------------------------------------------------------------
# serialization


def run_to_dict(run: MmpRun, classification: RunClassification | None = None) -> dict:
    """JSON-ready trace: step list, ray vectors, classes, terminal data."""
    out = {
        "divisor": run.d_label,
        "k": run.k,
        "steps": [
            {
                "index": s.index,
                "kind": s.kind,
                "ray_class": list(s.ray.generator),
                "d_pairing": s.d_pairing,
                "k_pairing": s.k_pairing,
                "removed_ray": s.removed_label,
                "fan_after": {
                    "rays": [list(v) for v in s.fan_after.rays],
                    "labels": list(s.fan_after.labels),
                    "cones": sorted(sorted(c) for c in s.fan_after.cones),
                },
            }
            for s in run.steps
        ],
        "terminal": {
            "fiber_class": list(run.phi_ray.generator),
            "d_pairing": run.phi_d_pairing,
            "k_pairing": run.phi_k_pairing,
            "base_rays": [list(v) for v in run.y_fan.rays],
            "base_cones": sorted(sorted(c) for c in run.y_fan.cones),
            "projection": [list(r) for r in run.projection],
        },
    }
    if classification is not None:
        out["type"] = classification.run_type
        out["special_indices"] = list(classification.special_indices)
    return out

"""Severity, occurrence, and detection reasoning over a design model.

Severity flows forward (requirements to functions to components) and
occurrence flows backward (components to functions to requirements) along
the two mapping matrices; detection is assessed on components and carried
upward the same way occurrence is. Every aggregation is a maximum, so the
propagation is two strata in each direction and cycles cannot arise.

``oracle_propagate`` recomputes all three maps by brute-force enumeration
of every requirement-function-component path, with no reuse of
intermediate element values. It exists so tests can check the direct
implementations against an independent route on small models.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .model import (
    DesignModel,
    Domain,
    FailureMode,
    element_domain,
    element_text,
    get_failure_mode,
    is_valid_rank,
)
from .rating import detection_band, occurrence_band, rpn, severity_band


class AnalysisError(Exception):
    """A failure mode could not be rated; carries the offending id."""

    def __init__(self, failure_mode_id: str, message: str) -> None:
        super().__init__(message)
        self.failure_mode_id = failure_mode_id


class MissingSeverity(AnalysisError):
    pass


class MissingOccurrence(AnalysisError):
    pass


class MissingDetection(AnalysisError):
    pass


@dataclass(frozen=True, slots=True)
class RpnRow:
    """One prioritized failure mode with its three ranks and RPN.

    The (severity, occurrence, detection) triple is kept alongside the
    product: distinct risk situations can share an RPN, and collapsing
    them would hide which one is on the table.
    """

    fm_id: str
    element_id: str
    domain: Domain
    severity: int
    occurrence: int
    detection: int | None
    rpn: int
    rank_position: int


@dataclass(frozen=True, slots=True)
class AnalysisResult:
    """Propagated rank maps plus one prioritized row per failure mode."""

    severity: dict[str, int]
    occurrence: dict[str, int]
    detection: dict[str, int]
    rows: tuple[RpnRow, ...]


@dataclass(frozen=True, slots=True)
class TraceHop:
    """One element on a trace, with one of its failure modes if it has any."""

    element_id: str
    failure_mode_id: str | None
    text: str


@dataclass(frozen=True, slots=True)
class TraceChain:
    """Single-hop adjacency walk from a failure mode, up toward effects
    or down toward causes. Hops for the same element stay adjacent;
    consecutive hops on different elements are joined by an rf or fc edge.
    """

    direction: str
    hops: tuple[TraceHop, ...]


def resolve_fm_severity(model: DesignModel, fm: FailureMode) -> int | None:
    """Worst severity over the failure mode's rated effects, or None.

    An explicit rank wins over a class; a class alone contributes its
    band maximum. Unrated or unresolvable effects contribute nothing.
    """
    entry = model.elements_by_id.get(fm.element)
    domain = entry[0] if entry is not None else None
    ranks: list[int] = []
    for effect in fm.effects:
        if is_valid_rank(effect.severity_rank):
            ranks.append(effect.severity_rank)
        elif effect.severity_class is not None and domain is not None:
            try:
                ranks.append(severity_band(domain, effect.severity_class).hi)
            except ValueError:
                continue
    return max(ranks) if ranks else None


def resolve_fm_occurrence(fm: FailureMode) -> int | None:
    """Worst occurrence over the failure mode's rated causes, or None."""
    ranks: list[int] = []
    for cause in fm.causes:
        if is_valid_rank(cause.occurrence_rank):
            ranks.append(cause.occurrence_rank)
        elif cause.frequency is not None:
            ranks.append(occurrence_band(cause.frequency).hi)
    return max(ranks) if ranks else None


def resolve_fm_detection(fm: FailureMode) -> int | None:
    """Detection rank of the failure mode's control plan, or None."""
    if fm.control is None:
        return None
    if is_valid_rank(fm.control.detection_rank):
        return fm.control.detection_rank
    return detection_band(fm.control.method_class).hi


def fm_severity(model: DesignModel, fm_id: str) -> int:
    """Severity of one failure mode: the maximum over its rated effects."""
    fm = get_failure_mode(model, fm_id)
    value = resolve_fm_severity(model, fm)
    if value is None:
        raise MissingSeverity(fm_id, f'failure mode "{fm_id}" has no effect with a severity rank or class')
    return value


def fm_occurrence(model: DesignModel, fm_id: str) -> int:
    """Occurrence of one failure mode: the maximum over its rated causes."""
    fm = get_failure_mode(model, fm_id)
    value = resolve_fm_occurrence(fm)
    if value is None:
        raise MissingOccurrence(fm_id, f'failure mode "{fm_id}" has no cause with an occurrence rank or frequency')
    return value


def fm_detection(model: DesignModel, fm_id: str) -> int:
    """Detection of one failure mode, from its control plan."""
    fm = get_failure_mode(model, fm_id)
    value = resolve_fm_detection(fm)
    if value is None:
        raise MissingDetection(fm_id, f'failure mode "{fm_id}" has no control plan')
    return value


def severity_map(model: DesignModel, strict: bool = True) -> dict[str, int]:
    """Forward severity: requirements from their own failure modes, then
    functions and components from their own rated failure modes combined
    with everything mapped onto them. Elements with no contribution are
    left out of the map.

    With ``strict`` set, an unrated requirement failure mode raises
    MissingSeverity; requirements are the root of this direction, so there
    is nothing to fall back on.
    """
    smap: dict[str, int] = {}
    for requirement in model.requirements:
        values: list[int] = []
        for fm in model.failure_modes_of(requirement.id):
            value = resolve_fm_severity(model, fm)
            if value is None:
                if strict:
                    raise MissingSeverity(
                        fm.id,
                        f'requirement failure mode "{fm.id}" has no effect'
                        " with a severity rank or class",
                    )
                continue
            values.append(value)
        if values:
            smap[requirement.id] = max(values)

    for function in model.functions:
        values = [
            value
            for fm in model.failure_modes_of(function.id)
            if (value := resolve_fm_severity(model, fm)) is not None
        ]
        values += [smap[rid] for rid in model.rf_sources.get(function.id, ()) if rid in smap]
        if values:
            smap[function.id] = max(values)

    for component in model.components:
        values = [
            value
            for fm in model.failure_modes_of(component.id)
            if (value := resolve_fm_severity(model, fm)) is not None
        ]
        values += [smap[fid] for fid in model.fc_sources.get(component.id, ()) if fid in smap]
        if values:
            smap[component.id] = max(values)

    return smap


def occurrence_map(model: DesignModel, strict: bool = True) -> dict[str, int]:
    """Backward occurrence: components from their own failure modes, then
    functions and requirements purely from what they map onto. Authored
    occurrence ranks on requirement or function causes never enter these
    values; occurrence originates at components only.
    """
    omap: dict[str, int] = {}
    for component in model.components:
        values: list[int] = []
        for fm in model.failure_modes_of(component.id):
            value = resolve_fm_occurrence(fm)
            if value is None:
                if strict:
                    raise MissingOccurrence(
                        fm.id,
                        f'component failure mode "{fm.id}" has no cause'
                        " with an occurrence rank or frequency",
                    )
                continue
            values.append(value)
        if values:
            omap[component.id] = max(values)

    for function in model.functions:
        values = [omap[cid] for cid in model.fc_targets.get(function.id, ()) if cid in omap]
        if values:
            omap[function.id] = max(values)

    for requirement in model.requirements:
        values = [omap[fid] for fid in model.rf_targets.get(requirement.id, ()) if fid in omap]
        if values:
            omap[requirement.id] = max(values)

    return omap


def detection_map(model: DesignModel, strict: bool = True) -> dict[str, int]:
    """Detection per component (worst over its failure modes' control
    plans), carried up to functions and requirements by maximum.
    """
    dmap: dict[str, int] = {}
    for component in model.components:
        values: list[int] = []
        for fm in model.failure_modes_of(component.id):
            value = resolve_fm_detection(fm)
            if value is None:
                if strict:
                    raise MissingDetection(
                        fm.id, f'component failure mode "{fm.id}" has no control plan'
                    )
                continue
            values.append(value)
        if values:
            dmap[component.id] = max(values)

    for function in model.functions:
        values = [dmap[cid] for cid in model.fc_targets.get(function.id, ()) if cid in dmap]
        if values:
            dmap[function.id] = max(values)

    for requirement in model.requirements:
        values = [dmap[fid] for fid in model.rf_targets.get(requirement.id, ()) if fid in dmap]
        if values:
            dmap[requirement.id] = max(values)

    return dmap


def forward_severity(model: DesignModel) -> dict[str, int]:
    """Severity of every element reachable by forward reasoning."""
    return severity_map(model, strict=True)


def backward_occurrence(model: DesignModel) -> dict[str, int]:
    """Occurrence of every element reachable by backward reasoning."""
    return occurrence_map(model, strict=True)


def assign_detection(model: DesignModel) -> dict[str, int]:
    """Detection of every element with a component-level detection source."""
    return detection_map(model, strict=True)


def analyze(model: DesignModel, *, propagate_detection: bool = True) -> AnalysisResult:
    """Rate and prioritize every failure mode in the model.

    Each row takes its own ratings where the failure mode carries them and
    falls back to the owning element's propagated value otherwise;
    occurrence for requirement and function rows always comes from
    propagation. With ``propagate_detection`` off, rows without their own
    control plan get no detection rank and an RPN of severity times
    occurrence.

    Rows are sorted by RPN, then severity, occurrence, and detection, all
    descending, then element id and failure mode id; positions are dense
    from 1. The tail of the ordering exists purely to make it total.
    """
    smap = severity_map(model, strict=True)
    omap = occurrence_map(model, strict=True)
    dmap = detection_map(model, strict=True)

    rows: list[RpnRow] = []
    for fm in model.failure_modes:
        domain = element_domain(model, fm.element)

        severity = resolve_fm_severity(model, fm)
        if severity is None:
            severity = smap.get(fm.element)
        if severity is None:
            raise MissingSeverity(
                fm.id,
                f'failure mode "{fm.id}" has no rated effect and no propagated severity',
            )

        if domain is Domain.COMPONENT:
            occurrence = resolve_fm_occurrence(fm)
        else:
            occurrence = omap.get(fm.element)
        if occurrence is None:
            raise MissingOccurrence(
                fm.id, f'failure mode "{fm.id}" has no occurrence source'
            )

        detection = resolve_fm_detection(fm)
        if detection is None and propagate_detection:
            detection = dmap.get(fm.element)
            if detection is None:
                raise MissingDetection(
                    fm.id, f'failure mode "{fm.id}" has no detection source'
                )

        value = rpn(severity, occurrence, detection) if detection is not None else severity * occurrence
        rows.append(
            RpnRow(
                fm_id=fm.id,
                element_id=fm.element,
                domain=domain,
                severity=severity,
                occurrence=occurrence,
                detection=detection,
                rpn=value,
                rank_position=0,
            )
        )

    rows.sort(
        key=lambda row: (
            -row.rpn,
            -row.severity,
            -row.occurrence,
            -(row.detection or 0),
            row.element_id,
            row.fm_id,
        )
    )
    ranked = tuple(
        replace(row, rank_position=position) for position, row in enumerate(rows, start=1)
    )
    return AnalysisResult(severity=smap, occurrence=omap, detection=dmap, rows=ranked)


def trace(model: DesignModel, fm_id: str, direction: str) -> TraceChain:
    """Walk one mapping hop at a time from a failure mode.

    ``effects`` climbs toward requirements, collecting at each element its
    failure-mode descriptions as candidate downstream effects; ``causes``
    descends toward components symmetrically. Elements at each level are
    visited in id order, and an element with no failure modes still gets a
    bare hop so the structural path stays visible.
    """
    if direction not in ("effects", "causes"):
        raise ValueError(f'direction must be "effects" or "causes", got {direction!r}')
    fm = get_failure_mode(model, fm_id)
    domain = element_domain(model, fm.element)

    if direction == "effects":
        if domain is Domain.COMPONENT:
            level_one = sorted(model.fc_sources.get(fm.element, ()))
            level_two = sorted(
                {rid for fid in level_one for rid in model.rf_sources.get(fid, ())}
            )
        elif domain is Domain.FUNCTION:
            level_one = sorted(model.rf_sources.get(fm.element, ()))
            level_two = []
        else:
            level_one, level_two = [], []
    else:
        if domain is Domain.REQUIREMENT:
            level_one = sorted(model.rf_targets.get(fm.element, ()))
            level_two = sorted(
                {cid for fid in level_one for cid in model.fc_targets.get(fid, ())}
            )
        elif domain is Domain.FUNCTION:
            level_one = sorted(model.fc_targets.get(fm.element, ()))
            level_two = []
        else:
            level_one, level_two = [], []

    hops = [TraceHop(fm.element, fm.id, fm.description)]
    for element_id in level_one + level_two:
        element_fms = sorted(model.failure_modes_of(element_id), key=lambda f: f.id)
        if element_fms:
            hops.extend(
                TraceHop(element_id, candidate.id, candidate.description)
                for candidate in element_fms
            )
        else:
            hops.append(TraceHop(element_id, None, element_text(model, element_id)))
    return TraceChain(direction=direction, hops=tuple(hops))


def oracle_propagate(model: DesignModel) -> tuple[dict[str, int], dict[str, int], dict[str, int]]:
    """Recompute the three rank maps by exhaustive path enumeration.

    Every requirement-function-component path is expanded from the raw
    edge lists and leaf ratings are maxed directly, never reusing an
    intermediate element's value. Quadratic and proud of it; meant for
    checking the direct propagation on small models.
    """
    requirement_ids = {r.id for r in model.requirements}
    function_ids = {f.id for f in model.functions}
    component_ids = {c.id for c in model.components}
    fms_of: dict[str, list[FailureMode]] = {}
    for fm in model.failure_modes:
        fms_of.setdefault(fm.element, []).append(fm)

    rf_pairs = [
        (e.source, e.target)
        for e in model.rf
        if e.source in requirement_ids and e.target in function_ids
    ]
    fc_pairs = [
        (e.source, e.target)
        for e in model.fc
        if e.source in function_ids and e.target in component_ids
    ]

    def requirement_severities(rid: str) -> list[int]:
        values = []
        for fm in fms_of.get(rid, ()):
            value = resolve_fm_severity(model, fm)
            if value is None:
                raise MissingSeverity(
                    fm.id,
                    f'requirement failure mode "{fm.id}" has no effect'
                    " with a severity rank or class",
                )
            values.append(value)
        return values

    def rated_severities(eid: str) -> list[int]:
        return [
            value
            for fm in fms_of.get(eid, ())
            if (value := resolve_fm_severity(model, fm)) is not None
        ]

    smap: dict[str, int] = {}
    for requirement in model.requirements:
        values = requirement_severities(requirement.id)
        if values:
            smap[requirement.id] = max(values)
    for function in model.functions:
        values = rated_severities(function.id)
        for source, target in rf_pairs:
            if target == function.id:
                values += requirement_severities(source)
        if values:
            smap[function.id] = max(values)
    for component in model.components:
        values = rated_severities(component.id)
        for f_source, c_target in fc_pairs:
            if c_target != component.id:
                continue
            values += rated_severities(f_source)
            for r_source, f_target in rf_pairs:
                if f_target == f_source:
                    values += requirement_severities(r_source)
        if values:
            smap[component.id] = max(values)

    def component_leaf(cid: str, kind: str) -> list[int]:
        values = []
        for fm in fms_of.get(cid, ()):
            value = (
                resolve_fm_occurrence(fm) if kind == "occurrence" else resolve_fm_detection(fm)
            )
            if value is None:
                error = MissingOccurrence if kind == "occurrence" else MissingDetection
                raise error(
                    fm.id, f'component failure mode "{fm.id}" has no {kind} rating'
                )
            values.append(value)
        return values

    def backward(kind: str) -> dict[str, int]:
        emap: dict[str, int] = {}
        for component in model.components:
            values = component_leaf(component.id, kind)
            if values:
                emap[component.id] = max(values)
        for function in model.functions:
            values = []
            for f_source, c_target in fc_pairs:
                if f_source == function.id:
                    values += component_leaf(c_target, kind)
            if values:
                emap[function.id] = max(values)
        for requirement in model.requirements:
            values = []
            for r_source, f_target in rf_pairs:
                if r_source != requirement.id:
                    continue
                for f_source, c_target in fc_pairs:
                    if f_source == f_target:
                        values += component_leaf(c_target, kind)
            if values:
                emap[requirement.id] = max(values)
        return emap

    return smap, backward("occurrence"), backward("detection")

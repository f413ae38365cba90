import pytest

from planecubic.cremona import CremonaMap
from planecubic.elliptic import CurvePoint, WeierstrassCurve, translation_map
from planecubic.sarkisov import (
    CubicTracker,
    EngineError,
    FactorizationState,
    SarkisovTrace,
    StepCapExceeded,
    StuckState,
    TrackedPoint,
    PendingPoint,
    elementary_transform_update,
    factorize,
    jonquieres_centers,
    link_III_update,
    link_IV_update,
    next_link,
    plane_state,
    state_from_map,
)
from planecubic.surfaces import SurfaceModel, canonical_class

CURVE = WeierstrassCurve(0, 1)
P = CurvePoint.affine(2, 3)


def neg_k(model):
    return tuple(-c for c in canonical_class(model))


def hirz_state(n, system, points, cubic_cls=None, mults=None):
    cubic = None
    if cubic_cls is not None:
        cubic = CubicTracker(tuple(cubic_cls), dict(mults or {}))
    return FactorizationState(
        SurfaceModel.hirzebruch(n),
        tuple(system),
        tuple(points),
        cubic,
        next_id=max((p.id for p in points), default=-1) + 1,
    )


class TestQuadraticOracle:
    """(2;1,1,1) against the hand lattice computation."""

    def test_all_points_on_cubic(self):
        trace = factorize(plane_state(2, [(1, True), (1, True), (1, True)]))
        assert trace.kinds() == ["I", "II", "II", "III"]
        assert trace.all_vp
        # hand computation: systems and boundary classes after each link
        expected = [
            (SurfaceModel.hirzebruch(1), (2, 1), (3, 2)),
            (SurfaceModel.hirzebruch(0), (1, 1), (2, 2)),
            (SurfaceModel.hirzebruch(1), (1, 1), (3, 2)),
            (SurfaceModel.plane(), (1,), (3,)),
        ]
        got = [(s.model, s.system, s.cubic.cls) for s in trace.states]
        assert got == expected
        assert all(s.cubic.cls == neg_k(s.model) for s in trace.states)

    def test_one_point_off_cubic_flips_vp(self):
        trace = factorize(plane_state(2, [(1, True), (1, True), (1, False)]))
        assert trace.kinds() == ["I", "II", "II", "III"]
        assert not trace.all_vp
        flags = [l.vp for l in trace.links]
        assert False in flags
        # the elementary transformation centered at the off-cubic point
        off_link = trace.links[2]
        assert off_link.kind == "II" and off_link.vp is False
        assert off_link.case_tag == "off-cubic"

    def test_case_tags_on_cubic(self):
        trace = factorize(plane_state(2, [(1, True), (1, True), (1, True)]))
        assert [l.case_tag for l in trace.links if l.kind == "II"] == [3, 1]


class TestElementaryTransform:
    def test_off_section_drops_n(self):
        st = hirz_state(
            2, (4, 2), [TrackedPoint(0, 2, True)], cubic_cls=(4, 2), mults={0: 1}
        )
        link, new = elementary_transform_update(st, 0)
        assert new.model == SurfaceModel.hirzebruch(1)
        assert new.system == (2, 2)
        assert new.points == ()  # b - m = 0: no new point
        assert new.cubic.cls == (3, 2) == neg_k(new.model)
        assert link.vp and link.case_tag == 3

    def test_on_section_raises_n(self):
        st = hirz_state(
            1, (3, 1),
            [TrackedPoint(0, 1, True, on_negative_section=True)],
            cubic_cls=(3, 2), mults={0: 1},
        )
        link, new = elementary_transform_update(st, 0)
        assert new.model == SurfaceModel.hirzebruch(2)
        assert new.system == (3, 1)
        assert new.cubic.cls == (4, 2) == neg_k(new.model)
        assert link.case_tag == 1

    def test_new_point_mult_is_b_minus_m(self):
        st = hirz_state(
            1, (3, 2), [TrackedPoint(0, 1, True)], cubic_cls=(3, 2), mults={0: 1}
        )
        link, new = elementary_transform_update(st, 0)
        assert new.system == (2, 2)
        assert len(new.points) == 1
        q = new.points[0]
        assert q.mult == 1  # b - m = 2 - 1
        assert q.on_cubic  # contracted fiber meets the boundary once
        assert link.vp

    def test_off_cubic_center_not_vp_and_singular_image(self):
        st = hirz_state(
            1, (3, 2), [TrackedPoint(0, 1, False)], cubic_cls=(3, 2), mults={0: 0}
        )
        link, new = elementary_transform_update(st, 0)
        assert not link.vp
        assert link.case_tag == "off-cubic"
        assert not new.cubic.nonsingular  # C-check . fiber = 2

    def test_tangent_with_chain_unsupported(self):
        st = hirz_state(
            1, (3, 2),
            [TrackedPoint(0, 1, True, fiber_tangent_to_cubic=True,
                          children=(PendingPoint(1, True),))],
            cubic_cls=(3, 2), mults={0: 1},
        )
        with pytest.raises(EngineError):
            elementary_transform_update(st, 0)

    def test_plane_rejected(self):
        with pytest.raises(EngineError):
            elementary_transform_update(plane_state(2, [(1, True)]), 0)


class TestLinkIII:
    def test_anticanonical_system(self):
        st = hirz_state(1, (3, 2), [], cubic_cls=(3, 2))
        link, new = link_III_update(st)
        assert new.model.is_plane and new.system == (3,)
        assert len(new.points) == 1 and new.points[0].mult == 1
        assert new.points[0].on_cubic
        assert link.vp  # C.E = 3 - 2 = 1

    def test_low_system(self):
        st = hirz_state(1, (2, 1), [], cubic_cls=(3, 2))
        _, new = link_III_update(st)
        assert new.system == (2,) and new.points[0].mult == 1

    def test_balanced_system_no_new_point(self):
        st = hirz_state(1, (2, 2), [], cubic_cls=(3, 2))
        _, new = link_III_update(st)
        assert new.system == (2,) and new.points == ()

    def test_wrong_model_rejected(self):
        with pytest.raises(EngineError):
            link_III_update(hirz_state(2, (3, 2), [], cubic_cls=(4, 2)))


class TestLinkIV:
    def test_swap(self):
        st = hirz_state(0, (3, 1), [], cubic_cls=(2, 2))
        link, new = link_IV_update(st)
        assert new.system == (1, 3)
        assert new.model == SurfaceModel.hirzebruch(0)
        assert link.vp

    def test_triggered_then_stuck(self):
        st = hirz_state(0, (3, 1), [], cubic_cls=(2, 2))
        link, new = next_link(st)
        assert link.kind == "IV"
        with pytest.raises(StuckState):
            next_link(new)


class TestTranslationMapRun:
    def test_full_pipeline(self):
        f = translation_map(CURVE, P)
        trace = factorize(f, CURVE)
        assert trace.kinds() == ["I"] + ["II"] * 6 + ["III"]
        assert trace.all_vp
        allowed = {
            SurfaceModel.plane(),
            SurfaceModel.hirzebruch(0),
            SurfaceModel.hirzebruch(1),
            SurfaceModel.hirzebruch(2),
        }
        assert {s.model for s in trace.states} <= allowed
        assert all(s.cubic.cls == neg_k(s.model) for s in trace.states)
        assert trace.final.system == (1,)
        assert trace.lints == ()
        for link in trace.links:
            assert bool(link.vp_incidence) == bool(link.vp_discrepancy)

    def test_enrichment_structure(self):
        st = state_from_map(translation_map(CURVE, P), CURVE)
        assert st.system == (4,)
        mults = sorted(p.mult for p in st.points)
        assert mults == [1, 3]
        chain_root = next(p for p in st.points if p.mult == 1)
        depth = 0
        node = chain_root
        while node.children:
            assert len(node.children) == 1
            node = node.children[0]
            depth += 1
        assert depth == 5

    def test_identity_empty_trace(self):
        trace = factorize(CremonaMap.identity(), CURVE)
        assert trace.kinds() == [] and trace.all_vp

    def test_first_link_at_max_mult_point(self):
        trace = factorize(translation_map(CURVE, P), CURVE)
        first = trace.links[0]
        assert first.kind == "I"
        assert trace.initial.point(first.center).mult == 3


class TestStuckAndCap:
    def test_plane_without_points(self):
        with pytest.raises(StuckState):
            next_link(plane_state(2, []))

    def test_plane_point_below_degree(self):
        with pytest.raises(StuckState):
            next_link(plane_state(4, [(1, True)]))

    def test_f2_without_big_points(self):
        st = hirz_state(2, (2, 2), [], cubic_cls=(4, 2))
        with pytest.raises(StuckState):
            next_link(st)

    def test_step_cap(self):
        # (2; 1) is not homaloidal: the engine ping-pongs P^2 <-> F_1 forever
        with pytest.raises(StepCapExceeded):
            factorize(plane_state(2, [(1, True)]), step_cap=20)

    def test_terminal_state_has_no_next_link(self):
        with pytest.raises(EngineError):
            next_link(plane_state(1, []))


class TestLints:
    def test_bare_type_iii_flagged(self):
        st = hirz_state(1, (1, 1), [], cubic_cls=(3, 2))
        trace = factorize(st)
        assert trace.kinds() == ["III"]
        assert any("type III" in lint for lint in trace.lints)


class TestJonquieres:
    def test_translation_trace_single_block(self):
        trace = factorize(translation_map(CURVE, P), CURVE)
        rep = jonquieres_centers(trace)
        assert rep.grouped
        assert len(rep.centers) == 1
        center_id, on_cubic = rep.centers[0]
        assert on_cubic
        assert trace.initial.point(center_id).mult == 3

    def test_quadratic_trace_single_block(self):
        trace = factorize(plane_state(2, [(1, True), (1, True), (1, True)]))
        rep = jonquieres_centers(trace)
        assert rep.grouped and len(rep.centers) == 1
        assert rep.centers[0][1] is True

    def test_empty_trace(self):
        trace = factorize(plane_state(1, []))
        rep = jonquieres_centers(trace)
        assert rep.grouped and rep.centers == ()

    def test_ungrouped_fallback(self):
        trace = factorize(plane_state(2, [(1, True), (1, True), (1, True)]))
        broken = SarkisovTrace(
            links=trace.links[:-1],  # drop the closing III
            all_vp=True,
            initial=trace.initial,
            final=trace.states[-2],
        )
        rep = jonquieres_centers(broken)
        assert not rep.grouped
        assert len(rep.centers) == 3  # every I/II center reported flat


KIND_MODELS = {
    "I": ("P2", "F1"),
    "II": ("Fn", "Fn+-1"),
    "III": ("F1", "P2"),
    "IV": ("F0", "F0"),
}


def check_kind_model_compatibility(trace):
    prev = trace.initial.model
    for link in trace.links:
        assert link.from_model == prev
        if link.kind == "I":
            assert link.from_model.is_plane
            assert link.to_model == SurfaceModel.hirzebruch(1)
        elif link.kind == "II":
            assert not link.from_model.is_plane and not link.to_model.is_plane
            assert abs(link.from_model.n - link.to_model.n) == 1
        elif link.kind == "III":
            assert link.from_model == SurfaceModel.hirzebruch(1)
            assert link.to_model.is_plane
        elif link.kind == "IV":
            assert link.from_model == link.to_model == SurfaceModel.hirzebruch(0)
        prev = link.to_model
    assert prev == trace.final.model


def remaining_mult_total(state):
    def pending(point):
        return point.mult + sum(pending_child(c) for c in point.children)

    def pending_child(c):
        return c.mult + sum(pending_child(k) for k in c.children)

    return sum(pending(p) for p in state.points)


class TestTraceInvariants:
    def test_kind_model_chaining(self):
        for trace in (
            factorize(translation_map(CURVE, P), CURVE),
            factorize(plane_state(2, [(1, True), (1, True), (1, True)])),
            factorize(plane_state(2, [(1, True), (1, True), (1, False)])),
        ):
            check_kind_model_compatibility(trace)

    def test_type_ii_strictly_decreases_remaining_multiplicity(self):
        trace = factorize(translation_map(CURVE, P), CURVE)
        states = [trace.initial] + list(trace.states)
        for link, before, after in zip(trace.links, states, states[1:]):
            if link.kind in ("I", "II"):
                assert remaining_mult_total(after) < remaining_mult_total(before)

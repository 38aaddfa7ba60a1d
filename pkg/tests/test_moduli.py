import itertools
from math import gcd

import pytest

from vcremona.cremona import MarkedGram, cremona_gram_image
from vcremona.lattice import BinaryForm, LatticeError, isometry_exists, local_obstruction
from vcremona.moduli import (
    EXCLUDED_DISCS,
    ComponentError,
    admissible_range,
    bigger_disc_report,
    c20_c14_survey,
    closed_form_disc,
    component_frame,
    component_gram,
    component_sweep,
    identify_image,
    labelling_form,
    locate_components,
    represented_discs,
    reproduce_new_rationals,
    tau_bound,
    template_gram,
    veronese_candidates,
    veronese_frame,
)


@pytest.mark.parametrize("pair,n", [((20, 26), 5), ((14, 20), 3), ((20, 146), 16), ((20, 182), 18),
                                    ((20, 62), 10), ((20, 38), 7), ((20, 42), 8), ((20, 18), 4)])
def test_tau_bound(pair, n):
    assert tau_bound(*pair) == n


def test_tau_bound_errors():
    with pytest.raises(ComponentError):
        tau_bound(20, 20)
    with pytest.raises(ComponentError):
        tau_bound(20, 7)


@pytest.mark.parametrize("d,tau,gram,disc", [
    (26, 0, ((3, 1, 1), (1, 7, 0), (1, 0, 9)), 173),
    (38, -2, ((3, 1, 1), (1, 7, -2), (1, -2, 13)), 237),
    (42, 1, ((3, 1, 0), (1, 7, 1), (0, 1, 14)), 277),
])
def test_component_gram(d, tau, gram, disc):
    spec = component_gram(20, d, tau)
    assert spec.gram == gram and spec.disc == disc
    assert spec.ambient.gram() == gram
    assert closed_form_disc(20, d, tau) == disc


def test_component_gram_order_and_errors():
    assert component_gram(42, 20, 1).gram == component_gram(20, 42, 1).gram
    with pytest.raises(ComponentError, match="out of range"):
        component_gram(20, 26, 6)
    with pytest.raises(ComponentError, match="out of range"):
        component_gram(20, 42, -1)
    assert component_gram(20, 14, 4, strict=False).disc == 53


def test_closed_form_everywhere():
    for d1, d2 in ((20, 26), (20, 38), (20, 42), (14, 20), (8, 14), (12, 18), (20, 24)):
        n = tau_bound(d1, d2)
        for tau in range(-n, n + 1):
            try:
                spec = component_gram(d1, d2, tau)
            except ComponentError as exc:
                assert "out of range" in str(exc) or "norm 2" in str(exc) or "saturated" in str(exc)
                continue
            assert spec.disc == closed_form_disc(spec.d1, spec.d2, tau)
            assert tau in locate_components(spec.d1, spec.d2, spec.disc)


def test_norm2_rejected():
    with pytest.raises(ComponentError, match="empty"):
        component_gram(14, 20, 5, strict=False)


def test_exactly_nine_c20_c14_components():
    ok = []
    for t in range(-10, 11):
        try:
            component_gram(14, 20, t, strict=False)
            ok.append(t)
        except ComponentError:
            pass
    assert ok == list(range(-4, 5))


def test_veronese_frame_examples():
    assert veronese_frame(((3, 1, 1), (1, 7, 0), (1, 0, 9))).gram == ((3, 4, 1), (4, 12, 1), (1, 1, 9))
    assert veronese_frame(((3, 1, 1), (1, 7, -2), (1, -2, 13))).gram == ((3, 4, 1), (4, 12, -1), (1, -1, 13))
    assert veronese_frame(((3, 1, 0), (1, 7, 1), (0, 1, 14))).gram == ((3, 4, 0), (4, 12, 1), (0, 1, 14))
    with pytest.raises(ComponentError, match="no Veronese frame"):
        veronese_frame(((3, 0, 0), (0, 5, 0), (0, 0, 5)))


def test_veronese_candidates_restricted():
    g = component_gram(20, 42, 7).gram
    assert veronese_candidates(g) == [(1, 1, -1), (1, 1, 0)]
    assert veronese_candidates(g, ((1, 0, 0), (0, 1, 0))) == [(1, 1, 0)]
    assert component_frame(component_gram(20, 42, 7)).basis[1] == (1, 1, 0)


def test_frames_are_isometric():
    for d, tau in ((26, 0), (38, -2), (42, 1), (26, 3), (38, 5)):
        spec = component_gram(20, d, tau)
        frame = component_frame(spec).marked
        assert frame.gram[0][:2] == (3, 4) and frame.gram[1][:2] == (4, 12)
        assert isometry_exists(frame.gram, spec.gram) is not None


def test_labelling_forms():
    img = MarkedGram.from_abc(3, 1, 13)
    assert labelling_form(((3, 1, 1), (1, 7, -16), (1, -16, 49))).as_tuple() == (20, -98, 146)
    assert labelling_form(img).discriminant == labelling_form(((3, 1, 1), (1, 7, -16), (1, -16, 49))).discriminant
    for n in (2, 4, 5, 6, 7, 8, 9, 10, 11):
        spec = component_gram(20, 6 * n + 2, 0)
        img = cremona_gram_image(component_frame(spec).marked)
        # equivalent to (20, -18, 6n + 6): same values up to a bound
        assert set(represented_discs(img, 400)) == set(_values(BinaryForm(20, -18, 6 * n + 6), 400))
    for n in range(2, 12):
        spec = component_gram(20, 6 * n, 1)
        img = cremona_gram_image(component_frame(spec).marked)
        assert set(represented_discs(img, 400)) == set(_values(BinaryForm(20, 14, 6 * n + 2), 400))


def _values(f, bound, box=40):
    return {f(x, y) for x, y in itertools.product(range(-box, box + 1), repeat=2) if 0 < f(x, y) <= bound}


def test_represented_discs():
    reps = represented_discs(((3, 1, 1), (1, 7, 8), (1, 8, 21)), 62)
    assert reps[62].witness == (0, 1) and reps[62].saturated
    assert reps[20].witness == (1, 0)
    with pytest.raises(LatticeError):
        represented_discs(((3, 0, 0), (0, 1, 5), (0, 5, 1)), 10)


def test_new_rationals():
    reports = reproduce_new_rationals()
    expect = [
        (173, 146, ((3, 4, 3), (4, 12, 1), (3, 1, 13)), (146, -16)),
        (237, 62, ((3, 4, 5), (4, 12, -1), (5, -1, 29)), (62, 8)),
        (277, 182, ((3, 4, -1), (4, 12, 1), (-1, 1, 15)), (182, 18)),
    ]
    for r, (disc, target, gram, ident) in zip(reports, expect):
        assert r.image_disc == disc and r.source.disc == disc
        assert r.image.gram == gram
        assert r.target_disc == target and r.target_represented
        assert (r.image_equivalent.d2, r.image_equivalent.tau) == ident
        assert r.excluded_list_clear
        f = labelling_form(r.image)
        for e in EXCLUDED_DISCS:
            assert e not in r.represented
            assert not any(f(x, y) == e for x in range(-60, 61) for y in range(-60, 61))
        assert "excluded" in r.to_json()


def test_exclusion_local_obstructions():
    # at least some exclusions are already forced modulo a small integer
    f = BinaryForm(20, -98, 146)
    assert any(local_obstruction(f, e) for e in EXCLUDED_DISCS)


def test_equivalent_templates():
    assert isometry_exists(template_gram(20, 62, 8), ((3, 4, 5), (4, 12, -1), (5, -1, 29))) is not None
    assert template_gram(20, 62, 8) == ((3, 1, 1), (1, 7, 8), (1, 8, 21))
    assert template_gram(20, 182, 18) == ((3, 1, 1), (1, 7, 18), (1, 18, 61))
    assert identify_image(((3, 4, 3), (4, 12, 1), (3, 1, 13)), [146])[0].tau == -16


def test_bigger_disc():
    r14 = bigger_disc_report(14, 500)
    assert r14.form.as_tuple() == (20, -18, 18)
    assert r14.clause1 and r14.witness.disc == 62 and r14.witness.witness == (2, 1)
    r26 = bigger_disc_report(26, 500)
    assert r26.form.as_tuple() == (20, -18, 30)
    assert r26.clause1 and r26.witness is not None and r26.witness.disc > 26
    assert bigger_disc_report(14, 30).verdict == "inconclusive below bound"
    with pytest.raises(ComponentError):
        bigger_disc_report(20)


def test_bigger_disc_sweep():
    for d in admissible_range(14, 80):
        r = bigger_disc_report(d, 500)
        assert r.clause1
        assert r.witness is None or (r.witness.disc > d and r.witness.saturated)


def test_bigger_disc_env(monkeypatch):
    monkeypatch.setenv("VC_MAX_SEARCH", "40")
    assert bigger_disc_report(14).search_max == 40


def test_survey():
    rows = {r.tau: r for r in c20_c14_survey()}
    assert sorted(rows) == list(range(-4, 5))
    for t, r in rows.items():
        assert r.spec.gram == ((3, 1, 1), (1, 7, t), (1, t, 5))
        assert r.spec.disc == (280 - (1 - 3 * t) ** 2) // 3
        assert r.conditional == (abs(t) == 4)
    assert rows[0].image.gram == ((3, 4, 3), (4, 12, 1), (3, 1, 9))
    assert {(i.d2, i.tau) for i in rows[0].identifications} == {(62, -10), (18, 3)}
    assert rows[4].image.gram == ((3, 4, -1), (4, 12, 5), (-1, 5, 9))
    assert {(i.d2, i.tau) for i in rows[4].identifications} == {(26, -6)}
    assert rows[-4].image.gram == ((3, 4, 7), (4, 12, -3), (7, -3, 41))
    assert rows[-4].singular and 6 in rows[-4].image_discs
    assert [t for t, r in rows.items() if r.in_c8] == [-4]
    assert not any(r.singular for t, r in rows.items() if t != -4)


def test_sweep_exceptions():
    table = {(d, r.tau): r for d in (26, 38, 42) for r in component_sweep(d)}
    ids = {k: {(i.d2, i.tau) for i in r.identifications} for k, r in table.items()}
    assert {(38, -6), (42, 7)} <= ids[(26, 4)]
    assert (38, 6) in ids[(26, -2)]
    assert (42, 3) in ids[(38, 0)]
    assert (146, -16) in ids[(26, 0)]
    non_invariant = sorted(k for k, r in table.items() if not r.invariant)
    assert non_invariant == [(26, -4), (26, -2), (26, 0), (26, 4), (38, -6), (38, -4), (38, -2), (38, 0),
                             (38, 4), (38, 6), (42, 1), (42, 3), (42, 7)]

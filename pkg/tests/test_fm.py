from math import gcd

import pytest

from vcremona.fm import (
    CountingError,
    admissible,
    disc_nonempty,
    fm_partner_count,
    fm_report,
    glue_sizes,
    glue_sizes_brute,
    labelling_disc_is_cyclic,
    labelling_gram,
    m_of,
    overlattice_count,
    residue_case,
    s_lattice,
    valid_counting_discs,
)


def odd_prime_factors(n):
    out, p = set(), 3
    while n % 2 == 0:
        n //= 2
    while p * p <= n:
        while n % p == 0:
            out.add(p)
            n //= p
        p += 2
    if n > 1:
        out.add(n)
    return out


def test_predicates():
    assert disc_nonempty(8) and disc_nonempty(20) and not disc_nonempty(7) and not disc_nonempty(2)
    assert admissible(14) and admissible(26) and admissible(38) and admissible(42)
    assert not admissible(20) and not admissible(18) and not admissible(8)
    assert admissible(62) and admissible(146) and admissible(182)


@pytest.mark.parametrize("d,n", [(20, 2), (14, 1), (26, 1), (38, 1), (62, 1), (42, 1), (8, 1), (56, 2)])
def test_counts(d, n):
    assert fm_partner_count(d) == n


def test_hypothesis_errors():
    for d in (7, 9, 18, 36, 4):
        with pytest.raises(CountingError):
            fm_partner_count(d)


def test_m_rule_by_hand():
    for d in valid_counting_discs(200):
        k = len(odd_prime_factors(d))
        a = (d & -d).bit_length() - 1
        expected = 1 if k == 0 else (2 ** (k - 1) if a == 1 else 2**k)
        assert m_of(d) == expected


def test_glue_enumeration_all():
    for d in valid_counting_discs(200):
        sizes = glue_sizes(d)
        assert sizes == glue_sizes_brute(d)
        assert len(set(sizes.values())) == 1
        assert overlattice_count(d) == 2 * fm_partner_count(d)


def test_glue_by_definition():
    # d = 20: the classes b in (Z/20)* with 3 b^2 c = 1 mod 40
    d = 20
    by_c = {}
    for b in range(d):
        if gcd(b, d) == 1:
            for c in range(2 * d):
                if (3 * b * b * c - 1) % (2 * d) == 0:
                    by_c.setdefault(c, []).append(b)
    assert {c: len(v) for c, v in by_c.items()} == glue_sizes(20)
    assert sorted(by_c) == [3, 27]


def test_labellings():
    assert labelling_gram(20) == ((3, 1), (1, 7))
    assert labelling_gram(42) == ((3, 0), (0, 14))
    assert all(labelling_disc_is_cyclic(d) for d in valid_counting_discs(200))
    assert s_lattice(14).ell_sq == -42 and s_lattice(42).ell_sq == -14


def test_report():
    r = fm_report(20)
    assert r.to_json() == {"d": 20, "m": 2, "partner_count": 2, "residue_case": "2 mod 6",
                           "glue_sizes": {"3": 4, "27": 4}}
    assert residue_case(42) == "0 mod 6"

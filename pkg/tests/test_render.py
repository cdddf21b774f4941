import re

import pytest

from riccati.compactify import all_equilibria
from riccati.flow import sample_orbits, trace_separatrices
from riccati.normalform import normal_form
from riccati.render import RenderSpec, render_disk


@pytest.fixture(scope="module")
def p1():
    nf = normal_form("I", (0, 0, 0, 3.75, -0.25))
    eqs = all_equilibria(nf)
    return trace_separatrices(nf, eqs), sample_orbits(nf, eqs, 3)


def glyphs(svg):
    return re.findall(r'<g class="glyph (\w+)" data-label="(\w+)">', svg)


def test_only_n_and_s():
    sk = trace_separatrices(normal_form("V", (1, 1, 2, 0, 0.2)))
    svg = render_disk(sk)
    assert sorted(glyphs(svg)) == [("StableNode", "n"), ("UnstableNode", "s")]


def test_p1_glyphs_and_paths(p1):
    sk, orbits = p1
    svg = render_disk(sk, orbits)
    g = glyphs(svg)
    assert len(g) == 10
    assert {t for t, _ in g} == {"Saddle", "StableNode", "UnstableNode"}
    seps = svg.split('<g class="separatrices"')[1].split("</g>")[0]
    assert seps.count("<path") == len(sk.separatrices())
    # layers: orbits, then separatrices, then glyphs
    assert svg.index('class="orbits"') < svg.index('class="separatrices"') < svg.index('class="equilibria"')


def test_saddle_and_node_glyphs_differ(p1):
    sk, _ = p1
    svg = render_disk(sk)
    saddle = re.search(r'<g class="glyph Saddle"[^>]*>(.*?)</g>', svg).group(1)
    node = re.search(r'<g class="glyph StableNode"[^>]*>(.*?)</g>', svg).group(1)
    assert saddle.startswith("<path") and node.startswith("<circle")


def test_deterministic_and_four_decimals(p1):
    sk, orbits = p1
    a = render_disk(sk, orbits)
    b = render_disk(sk, orbits)
    assert a == b
    nums = re.findall(r"-?\d+\.\d+", a.split("<g class=\"orbits\"")[1])
    assert nums and all(len(n.split(".")[1]) == 4 for n in nums)


def test_arrows_and_labels(p1):
    sk, _ = p1
    svg = render_disk(sk, spec=RenderSpec(show_labels=False))
    assert "<text" not in svg
    assert '<g class="separatrix-arrows"' in svg
    assert render_disk(sk).count("<text") == 10


def test_spec_validation():
    with pytest.raises(ValueError):
        RenderSpec(size_px=0)

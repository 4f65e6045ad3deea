import re
import xml.etree.ElementTree as ET
from concurrent.futures import ThreadPoolExecutor

import pytest

from kolam.errors import KolamError, RadiusBoundError
from kolam.geometry import faces
from kolam.grid import SymmetryGroup, make_grid
from kolam.mapping import BUILTIN_PIGMENTS, Density, Fill, FillKind, LineType, RenderPlan
from kolam.render import build_scene, contact_sheet, fmt, render_ascii, render_svg
from kolam.search import enumerate_single_loop
from kolam.trace import GateConfig, deserialize, serialize

NS = {"s": "http://www.w3.org/2000/svg"}
ONE = GateConfig(make_grid(1, 1), ())
PATTERN = enumerate_single_loop(make_grid(3, 3), SymmetryGroup.ROT180).config(0)


def _tree(doc):
    return ET.fromstring(doc.split("\n", 1)[1])


def test_fmt():
    assert fmt(-0.00001) == "0.0000"
    assert fmt(1e-7) == "0.0000"
    assert fmt(12.345678) == "12.3457"
    assert "e" not in fmt(1e20)


def test_single_dot_document():
    root = _tree(render_svg(ONE, RenderPlan()))
    circles = root.findall(".//s:circle", NS)
    assert len(circles) == 1
    (line,) = root.findall(".//s:g[@id='k-line']/s:path", NS)
    d = line.get("d")
    assert d.count("A") == 4 and d.count("L") == 0 and d.endswith("Z")


def test_dot_radius_and_placement():
    root = _tree(render_svg(ONE, RenderPlan(dot_radius=0.25)))
    (c,) = root.findall(".//s:circle", NS)
    # 40 px per unit, margin 1: dot (1,1) on a 2x2 canvas lands at 80, 80
    assert (c.get("cx"), c.get("cy"), c.get("r")) == ("80.0000", "80.0000", "10.0000")


def test_render_deterministic_across_threads():
    plan = RenderPlan(line_type=LineType.DOUBLE_FILLED, fill=Fill(FillKind.CHECKER, Density.DENSE))
    first = render_svg(PATTERN, plan)
    with ThreadPoolExecutor(4) as pool:
        docs = list(pool.map(lambda _: render_svg(PATTERN, plan), range(8)))
    assert all(d == first for d in docs)


def test_day2_style_document():
    turmeric = BUILTIN_PIGMENTS["turmeric"]
    plan = RenderPlan(dot_radius=0.244, pigment="turmeric", color=turmeric.rgb,
                      fill=Fill(FillKind.HATCH_V))
    root = _tree(render_svg(PATTERN, plan))
    line = root.find(".//s:g[@id='k-line']", NS)
    assert line.get("stroke") == turmeric.hex
    assert line.get("data-pigment") == "turmeric"
    groups = root.findall(".//s:g[@data-fill]", NS)
    assert len(groups) == len(faces(PATTERN).interior)
    assert {g.get("data-fill") for g in groups} == {"hatch_v"}
    for g in groups:
        for hatch in g.findall("s:path", NS):
            xs = re.findall(r"M (\S+) \S+ L (\S+) \S+", hatch.get("d"))
            assert xs and all(a == b for a, b in xs)


def test_every_path_closed_and_clips_reference_regions():
    plan = RenderPlan(line_type=LineType.DOUBLE, fill=Fill(FillKind.HATCH_D))
    root = _tree(render_svg(PATTERN, plan))
    for p in root.findall(".//s:g[@id='k-line']/s:path", NS):
        assert p.get("d").rstrip().endswith("Z")
    clip_ids = {c.get("id") for c in root.findall(".//s:clipPath", NS)}
    n = len(faces(PATTERN).interior)
    for g in root.findall(".//s:g[@clip-path]", NS):
        ref = g.get("clip-path")[5:-1]
        assert ref in clip_ids
        assert 0 <= int(g.get("data-region")) < n


def test_double_lines_draw_two_offsets_per_loop():
    root = _tree(render_svg(PATTERN, RenderPlan(line_type=LineType.DOUBLE)))
    assert len(root.findall(".//s:g[@id='k-line']/s:path", NS)) == 2
    assert root.find(".//s:g[@id='k-band']", NS) is None
    root = _tree(render_svg(PATTERN, RenderPlan(line_type=LineType.DOUBLE_FILLED)))
    assert root.find(".//s:g[@id='k-band']", NS) is not None


@pytest.mark.parametrize("kind", list(FillKind))
def test_all_fill_kinds_render(kind):
    doc = render_svg(PATTERN, RenderPlan(fill=Fill(kind, Density.SPARSE)))
    root = _tree(doc)
    groups = root.findall(".//s:g[@data-fill]", NS)
    assert (len(groups) == 0) == (kind is FillKind.EMPTY)


def test_region_class_selector():
    plan = RenderPlan(fill=Fill(FillKind.DOTS))
    fs = faces(PATTERN)
    dots = sum(fs.region_kind(k) == "dot" for k in range(len(fs.interior)))
    for cls, want in [("all", len(fs.interior)), ("dots", dots), ("corridors", len(fs.interior) - dots)]:
        assert len(build_scene(PATTERN, plan, region_class=cls).filled) == want


def test_radius_recheck():
    with pytest.raises(RadiusBoundError):
        render_svg(ONE, RenderPlan(dot_radius=0.6))


def test_ascii_single_dot():
    assert render_ascii(ONE) == " # \n#o#\n # \n"


def test_ascii_all_closed_2x2():
    text = render_ascii(GateConfig.all_closed(make_grid(2, 2)))
    rows = text.splitlines()
    assert len(rows) == 5 and all(len(r) == 5 for r in rows)
    assert rows[2] == " - - "
    assert rows[1] == "#o|o#" and rows[3] == "#o|o#"
    assert "." not in text


def test_ascii_round_trip():
    c = GateConfig.from_bits(make_grid(3, 2), "0110101")
    assert render_ascii(deserialize(serialize(c))) == render_ascii(c)


def test_contact_sheet_layout():
    doc = render_svg(ONE, RenderPlan())
    sheet = contact_sheet([doc] * 7, 3, [f"day {k}" for k in range(7)])
    root = _tree(sheet)
    cells = root.findall("s:g[@data-cell]", NS)
    assert len(cells) == 7
    ys = sorted({float(c.find("s:svg", NS).get("y")) for c in cells})
    assert len(ys) == 3
    assert [t.text for t in root.findall(".//s:text", NS)] == [f"day {k}" for k in range(7)]
    assert sheet == contact_sheet([doc] * 7, 3, [f"day {k}" for k in range(7)])
    ids = re.findall(r'id="([^"]+)"', sheet)
    assert len(ids) == len(set(ids))


def test_contact_sheet_single_and_empty():
    doc = render_svg(ONE, RenderPlan())
    root = _tree(contact_sheet([doc], 1))
    assert len(root.findall("s:g[@data-cell]", NS)) == 1
    with pytest.raises(KolamError):
        contact_sheet([], 2)

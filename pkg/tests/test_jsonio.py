import json
import math
from fractions import Fraction

import numpy as np
import pytest

from coarsedim import jsonio
from coarsedim.covers import Cover, brick_cover, verify_cover
from coarsedim.metric import gen_grid, random_graph_space
from coarsedim.witness import WitnessFamily, certify_c_implies_a, cover_to_witness, verify_witness


def through_text(obj):
    return json.loads(json.dumps(obj))


def test_space_matrix_round_trip():
    space = random_graph_space(9, 0.3, np.random.default_rng(1))
    assert jsonio.space_from_json(through_text(jsonio.space_to_json(space))) == space


def test_space_generator_form():
    space = gen_grid(2, 5, "l1")
    obj = jsonio.space_to_json(space, keep_generator=True)
    assert obj == {"generator": {"kind": "grid", "dim": 2, "side": 5, "norm": "l1"}}
    back = jsonio.space_from_json(obj)
    assert back.grid == space.grid
    # matrix form of a grid re-reads to the same distances
    assert jsonio.space_from_json(through_text(jsonio.space_to_json(space))) == space


@pytest.mark.parametrize("obj", [{"dist": [[0, 1]]}, {"size": 3, "dist": [[0]]}, {"nope": 1},
                                 {"generator": {"kind": "torus"}}])
def test_bad_space(obj):
    with pytest.raises(ValueError):
        jsonio.space_from_json(obj)


def test_cover_round_trip():
    cover = brick_cover(gen_grid(2, 6), 1)
    assert jsonio.cover_from_json(through_text(jsonio.cover_to_json(cover))) == cover
    with pytest.raises(jsonio.FormatError):
        jsonio.cover_from_json({"elements": [[0, 99]]}, size=4)


def test_witness_round_trip():
    fam = WitnessFamily(2.5, [[(0, 1), (1, 3)], [(1, 1)]])
    obj = through_text(jsonio.witness_to_json(fam))
    assert obj["sets"][0] == [[0, 1], [1, 3]]
    assert jsonio.witness_from_json(obj) == fam
    with pytest.raises(jsonio.FormatError):
        jsonio.witness_from_json(obj, size=3)


def test_cover_report_round_trip_with_infinite_margin():
    space = gen_grid(1, 4)
    report = verify_cover(space, Cover([range(4)]), n=0, S=3, L=10)
    obj = through_text(jsonio.cover_report_to_json(report))
    assert obj["min_margin"] == "inf"
    back = jsonio.cover_report_from_json(obj)
    assert math.isinf(back.min_margin)
    assert back == report


def test_witness_report_round_trip():
    space = gen_grid(1, 6)
    finite = verify_witness(space, cover_to_witness(space, Cover([range(6)]), 1, 2), 1, Fraction(1, 3), 0)
    infinite = verify_witness(space, WitnessFamily(0, [[(x, 1)] for x in range(6)]), 1, Fraction(1, 3))
    for report in (finite, infinite):
        obj = through_text(jsonio.witness_report_to_json(report))
        assert jsonio.witness_report_from_json(obj) == report
    assert through_text(jsonio.witness_report_to_json(infinite))["worst_ratio"]["value"] == "inf"


def test_certificate_json():
    space = gen_grid(1, 6)
    cert = certify_c_implies_a(space, WitnessFamily(5, [[(0, 1)]] * 6), 1, 0)
    obj = through_text(jsonio.certificate_to_json(cert))
    assert obj["passed"] and obj["centers"] == [0]


def test_write_json_is_atomic(tmp_path):
    target = tmp_path / "out.json"
    jsonio.write_json(target, {"a": 1})
    assert jsonio.read_json(target) == {"a": 1}
    assert [p.name for p in tmp_path.iterdir()] == ["out.json"]

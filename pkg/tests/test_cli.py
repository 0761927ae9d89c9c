import json

import pytest

from bisetloops.cli import ExpressionError, main, parse_biset_expression
from bisetloops.bisets import VirtualBiset, canonical_key
from bisetloops.groups import parse_element


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_expression_grammar(c2, s3):
    free = VirtualBiset.basis(canonical_key(c2, c2, [0], [0]))
    assert parse_biset_expression("1*[1,id]-2*[C2,id]", c2, c2) == free - 2 * VirtualBiset.identity(c2)
    assert parse_biset_expression("[1,id] + [1,id]", c2, c2) == 2 * free
    assert parse_biset_expression("0", c2, c2) == VirtualBiset.zero(c2, c2)
    t = parse_element(s3, "(12)")
    X = parse_biset_expression("3*[<(12)>,id]", s3, s3)
    assert X == 3 * VirtualBiset.basis(canonical_key(s3, s3, [0, t], [0, t]))
    sign = parse_biset_expression("[S3,{(12)->a; (123)->e}]", s3, c2)
    assert sign.items()[0][0].images == (0, 1, 0, 1, 1, 0)


@pytest.mark.parametrize("text", ["2*[1,id", "[1]", "x*[1,id]", "[1,id]+", "[1,foo]", "[<zz>,id]"])
def test_malformed_expressions(c2, text):
    with pytest.raises(ExpressionError):
        parse_biset_expression(text, c2, c2)


def test_twist_example(capsys):
    code, out, _ = run(capsys, "twist", "--group", "C2", "--biset", "1*[1,id]-2*[C2,id]", "--n", "1", "--ell", "2")
    assert code == 0
    assert "[(a) -> (e)] 1*[{(e,e),(a,a)}, {(e,e)->(e,e),(a,a)->(a,e)}]" in out
    assert out.strip().endswith("0  0\n   2 -2")


def test_twist_json(capsys):
    code, out, _ = run(
        capsys, "twist", "--group", "C2", "--biset", "1*[1,id]-2*[C2,id]", "--n", "1", "--ell", "2", "--format", "json"
    )
    data = json.loads(out)
    assert code == 0 and data["augmentation"] == [[0, 0], [2, -2]]
    assert data["entries"][1][0] == [{"coef": 1, "images": [0, 2], "subgroup": [0, 3]}]


def test_loop_objects(capsys):
    code, out, _ = run(capsys, "loop", "--group", "S3", "--n", "1", "--objects-only")
    assert code == 0
    assert out.splitlines() == ["3 components", "0 (e) order 6", "1 ((12)) order 2", "2 ((123)) order 3"]


def test_obstruction_verdict(capsys):
    code, out, _ = run(capsys, "obstruction", "--group", "C2", "--n", "1", "--p", "2", "--jmax", "6")
    assert code == 0
    verdict = out[out.index("verdict:") :]
    assert "augmentation-ideal obstruction: yes (diagonal entries (a)=-2)" in verdict
    assert "2-adic first power with A^m = 0 mod p^j: j=1:1 j=2:2 j=3:3 j=4:4 j=5:5 j=6:6" in verdict
    assert "2-adic convergence up to j=6: yes" in verdict


def test_output_is_deterministic(capsys):
    args = ("twist", "--group", "S3", "--biset", "[<(12)>,id]-[1,triv]", "--n", "1")
    assert run(capsys, *args) == run(capsys, *args)


def test_compose_and_pi0(capsys):
    code, out, _ = run(capsys, "compose", "--source", "C2", "--middle", "C2", "--target", "C2", "--left", "[1,id]", "--right", "[1,id]")
    assert code == 0 and out.startswith("2*[1, id]")
    code, out, _ = run(capsys, "pi0", "--group", "S3", "--biset", "[S3,id]", "--n", "1")
    assert code == 0 and out.splitlines()[-1].split() == ["0", "0", "1"]


def test_group_command(capsys):
    code, out, _ = run(capsys, "group", "--group", "C2")
    assert code == 0 and out.splitlines() == ["group C2 2", "0 1", "1 0", "names e a", "exponent 2"]


@pytest.mark.parametrize(
    "argv",
    [
        ["twist", "--group", "C2", "--n", "1", "--bogus"],
        ["frobnicate"],
        ["twist", "--group", "Foo", "--biset", "[1,id]", "--n", "1"],
        ["twist", "--group", "C2", "--biset", "[1,id", "--n", "1"],
        ["twist", "--group", "C2", "--n", "1"],
    ],
)
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["twist", "--group", "C2", "--biset", "[1,id]", "--n", "1", "--ell", "3"],
        ["loop", "--group", "S3", "--n", "-1", "--objects-only"],
        ["loop", "--source", "S3", "--target", "C2", "--biset", "[S3,{(12)->e;(123)->a}]", "--n", "1"],
    ],
)
def test_domain_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 3 and err.startswith("error:")


def test_verify_suite(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "golden")
    assert code == 0 and out.startswith("PASS golden")

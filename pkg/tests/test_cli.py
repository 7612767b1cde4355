import io
import json
from importlib import resources

import pytest

from latlim.cli import RunConfig, main
from latlim.errors import ParseError

BUNDLES = resources.files("latlim") / "bundles"


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out=out)
    return code, out.getvalue()


def bundle(name):
    return str(BUNDLES / name)


def test_seed_required_in_sampled_mode():
    with pytest.raises(ParseError):
        RunConfig("check-map", mode="sampled")
    assert RunConfig("check-map", mode="sampled", seed=3).effective_seed == 3


def test_check_map_ip_holds():
    code, out = run("check-map", "--property", "interval-preserving", "--input", bundle("phi21.json"))
    assert code == 0 and "PASS" in out


def test_check_map_hom_fails_with_witness():
    code, out = run("check-map", "--property", "lattice-hom", "--input", bundle("phi21.json"), "--format", "machine")
    assert code == 1
    verdict = json.loads(out)["verdict"]
    assert verdict["witness"]["x"] == ["1", "-1", "0", "0"]


def test_check_map_sampled_is_inconclusive():
    code, _ = run("check-map", "--property", "interval-preserving", "--input", bundle("phi21.json"),
                  "--mode", "sampled", "--seed", 7)
    assert code == 3


def test_sequence_map_ip_is_inconclusive(tmp_path):
    path = tmp_path / "avg.json"
    path.write_text(json.dumps({"kind": "averaging", "i": 1, "j": 3}))
    code, _ = run("check-map", "--property", "almost-interval-preserving", "--input", path, "--samples", 5)
    assert code == 3


def test_support_too_large_is_inconclusive(tmp_path):
    path = tmp_path / "wide.json"
    path.write_text(json.dumps({"kind": "matrix", "entries": [["1"] * 3 for _ in range(3)]}))
    code, _ = run("check-map", "--property", "interval-preserving", "--input", path, "--cap", 2)
    assert code == 3


@pytest.mark.parametrize("content", ['{"kind": "matrix", "entries": [[1', '{"kind": "nope"}', '[1, 2]',
                                     '{"kind": "matrix", "entries": [[1, 2], [3]]}'])
def test_malformed_input(tmp_path, content):
    path = tmp_path / "bad.json"
    path.write_text(content)
    code, _ = run("check-map", "--property", "positive", "--input", path)
    assert code == 2


def test_missing_file_and_bad_flags():
    assert run("check-map", "--property", "positive", "--input", "/nonexistent.json")[0] == 2
    assert run("check-map", "--property", "sideways", "--input", bundle("phi21.json"))[0] == 2
    assert run()[0] == 2


def test_colimit_validate():
    code, out = run("colimit", "validate", "--input", bundle("avg-l1.json"), "--depth", 6)
    assert code == 0 and "cocycle" in out


def test_colimit_norm():
    code, out = run("colimit", "norm", "--input", bundle("avg-l1.json"), "--element", bundle("x.json"),
                    "--horizon", 10, "--format", "machine")
    assert code == 0
    bracket = json.loads(out)["bracket"]
    assert bracket["certified_limit"] == "2"
    assert bracket["upper_sequence"][:3] == ["4", "5/2", "2"]


def test_colimit_equal():
    code, out = run("colimit", "equal", "--input", bundle("avg-l1.json"), "--a", bundle("a.json"),
                    "--b", bundle("b.json"), "--mode", "exact", "--k-max", 8)
    assert code == 0


def test_colimit_factor_and_structure():
    assert run("colimit", "factor", "--input", bundle("avg-l1.json"))[0] == 3
    assert run("colimit", "structure", "--input", bundle("inclusions.json"))[0] == 0
    assert run("colimit", "factor", "--input", bundle("eventually-constant.json"))[0] in (0, 3)


def test_sup_norm_example_prints_bound():
    code, out = run("example", "5.3")
    assert code == 0 and "lower bound = 1/2 (exact)" in out


def test_eventually_constant_example():
    code, out = run("example", "6.1")
    assert code == 0
    assert "inclusion c_1 -> c not AIP (certificate, bound 1/4)" in out
    assert "increasing non-Cauchy witness accepted in c" in out


def test_unknown_example():
    assert run("example", "9.9")[0] == 2


@pytest.mark.parametrize("argv", [
    ("check-map", "--property", "lattice-hom", "--input", bundle("phi21.json")),
    ("colimit", "validate", "--input", bundle("avg-l1.json"), "--depth", 4, "--seed", 11),
    ("colimit", "factor", "--input", bundle("avg-l1.json"), "--seed", 5),
    ("example", "5.1", "--seed", 3),
])
def test_machine_output_is_byte_identical(argv):
    first = run(*argv, "--format", "machine")
    second = run(*argv, "--format", "machine")
    assert first == second
    json.loads(first[1])

import json
import shutil
import subprocess

import pytest

from trusslab import io
from trusslab.cli import main
from trusslab.corpus import CorpusConfig
from trusslab.diagrams import Diagram, get_shape, make_diagram
from trusslab.heap import cyclic_heap
from trusslab.module import ModuleMorphism
from trusslab.suites import SUITES, run_suite

SMALL = ["--n", "2", "3", "--count", "4", "--seed", "5"]


def _write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(io.dumps(obj) if not isinstance(obj, dict) else json.dumps(obj))
    return str(p)


def _ses(z4, f=None, g=None):
    return Diagram(get_shape("ses"), {"M1": z4.z2, "M": z4.z4, "M2": z4.z2},
                   {("M1", "M"): f or z4.f, ("M", "M2"): g or z4.g})


def _snake(z4):
    modules = {"M1": z4.z2, "M": z4.z4, "M2": z4.z2, "N1": z4.z2, "N": z4.z4, "N2": z4.z2}
    maps = {("M1", "M"): z4.f.map, ("M", "M2"): z4.g.map, ("N1", "N"): z4.f.map, ("N", "N2"): z4.g.map,
            ("M1", "N1"): (0, 0), ("M", "N"): (0, 2, 0, 2), ("M2", "N2"): (0, 0)}
    return make_diagram("snake", modules, maps)


# -- check -----------------------------------------------------------------------------


def test_check_valid_and_invalid(tmp_path, capsys):
    good = _write(tmp_path, "h.json", cyclic_heap(3))
    assert main(["check", good]) == 0
    doc = io.dump(cyclic_heap(2))
    doc["op"][0][0][0] = 1
    bad = _write(tmp_path, "bad.json", doc)
    assert main(["check", bad, "--json"]) == 1
    out = capsys.readouterr().out
    assert json.loads(out.split("\n", 1)[1])["valid"] is False


def test_check_input_errors(tmp_path, capsys):
    p = tmp_path / "x.json"
    p.write_text("{not json")
    assert main(["check", str(p)]) == 2
    assert main(["check", str(tmp_path / "nope.json")]) == 2
    p.write_text('{"kind": "blob"}')
    assert main(["check", str(p)]) == 2
    assert "UnknownKindError" in capsys.readouterr().err


def test_check_diagram_with_failing_square(tmp_path, z4):
    d = _snake(z4)
    doc = io.dump(d)
    for m in doc["maps"]:
        if (m["from"], m["to"]) == ("M", "N"):
            m["map"] = [0, 1, 2, 3]
    assert main(["check", _write(tmp_path, "d.json", doc)]) == 1
    assert main(["check", _write(tmp_path, "ok.json", d)]) == 0


# -- theorem commands ------------------------------------------------------------------


def test_snake_command(tmp_path, z4, capsys):
    p = _write(tmp_path, "s.json", _snake(z4))
    assert main(["snake", p, "--all-absorbers", "--json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["stable"] and out["absorbers"] == [0]
    assert main(["snake", p, "--e-prime", "1"]) == 2


def test_shape_mismatch_is_input_error(tmp_path, z4):
    p = _write(tmp_path, "s.json", _ses(z4))
    assert main(["snake", p]) == 2
    assert main(["nine", p]) == 2


def test_five_and_nine(tmp_path, z4, corpus):
    assert main(["five", _write(tmp_path, "s.json", _snake(z4))]) == 0
    assert main(["nine", _write(tmp_path, "g.json", corpus.grids[0].item)]) == 0
    assert main(["five", _write(tmp_path, "r.json", corpus.five_rows[0].item)]) == 0


def test_split_command(tmp_path, z4, capsys):
    assert main(["split", _write(tmp_path, "s.json", _ses(z4)), "--json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["has_section"] is False and out["agree"] is True
    bad = _ses(z4, z4.f, ModuleMorphism(z4.z4, z4.z2, (0, 0, 0, 0)))
    assert main(["split", _write(tmp_path, "b.json", bad)]) == 2


def test_hom_command(tmp_path, z4, capsys):
    m = _write(tmp_path, "m.json", z4.z4)
    n = _write(tmp_path, "n.json", z4.z2)
    assert main(["hom", m, n, "--json"]) == 0
    assert json.loads(capsys.readouterr().out) == [[0, 0, 0, 0], [0, 1, 0, 1]]
    assert main(["hom", m, m, "--hom-budget", "10"]) == 2
    assert main(["hom", _write(tmp_path, "h.json", cyclic_heap(2)), n]) == 2


def test_corpus_command(tmp_path, capsys):
    out = tmp_path / "c"
    assert main(["corpus", "--n", "4", "--seed", "7", "--count", "3", "--out", str(out), "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["counts"]["snakes"] == 3
    files = sorted(out.iterdir())
    assert len(files) == report["written"]
    for f in files:
        assert main(["check", str(f)]) == 0
    assert main(["corpus", "--truss", "brace"]) == 2


# -- suites ---------------------------------------------------------------------------


def test_suite_passes(capsys):
    assert main(["suite", "axioms"] + SMALL) == 0
    assert "suite axioms: verified" in capsys.readouterr().out


def test_injected_broken_snake_fails(capsys):
    assert main(["suite", "snake", "--inject-broken", "--json"] + SMALL) == 1
    report = json.loads(capsys.readouterr().out)
    failures = [f for c in report["checks"] for f in c["failures"]]
    assert failures and all(f["instance"].startswith("corrupted:") for f in failures)


def test_all_on_singletons():
    r = run_suite("all", CorpusConfig(rings=(2, 3), max_size=1, seed=1, count=3))
    assert r.ok
    assert {c.name.split("/")[0] for c in r.checks} == set(SUITES)


def test_reports_byte_identical(capsys):
    args = ["suite", "snake", "--json"] + SMALL
    main(args)
    first = capsys.readouterr().out
    main(args)
    assert capsys.readouterr().out == first


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suite("lemmas")
    with pytest.raises(SystemExit):
        main(["suite", "lemmas"])


@pytest.mark.skipif(shutil.which("trusslab") is None, reason="console script not installed")
def test_console_script(tmp_path, z4):
    p = _write(tmp_path, "s.json", _ses(z4))
    done = subprocess.run(["trusslab", "split", p], capture_output=True, text=True)
    assert done.returncode == 0 and "not split" in done.stdout

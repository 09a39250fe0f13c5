import json
import subprocess
import sys

import numpy as np
import pytest

from twospectra.cli import dumps, main


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(path)


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def files(tmp_path):
    return {
        "uniform": write(tmp_path, "uniform.json", {"masses": [1.0] * 10, "springs": [1.0] * 10}),
        "one": write(tmp_path, "one.json", {"masses": [1.0], "springs": [3.0]}),
        "p21": write(tmp_path, "p21.json", {"theta": 2, "h": 1}),
        "p12": write(tmp_path, "p12.json", {"theta": 1, "h": 2}),
        "disjoint": write(tmp_path, "disjoint.json", {"lambda": [-1, 1], "mu": [-2, 2]}),
        "shared": write(tmp_path, "shared.json", {"lambda": [-1, 1], "mu": [-1, 4]}),
        "bad_interlace": write(tmp_path, "bad.json", {"lambda": [0, 1], "mu": [2, 3]}),
        "broken": write(tmp_path, "broken.json", "{not json"),
        "matrix00": write(tmp_path, "m00.json", {"q": [0, 0], "b": [1]}),
        "tmp": tmp_path,
    }


def test_dumps_is_deterministic():
    assert dumps({"b": [0.1, -0.0], "a": 1}) == '{\n  "a": 1,\n  "b": [0.10000000000000001, 0]\n}'
    assert dumps([]) == "[]" and dumps({}) == "{}"
    with pytest.raises(ValueError):
        dumps(float("nan"))


def test_forward_writes_file(files, capsys):
    out = files["tmp"] / "spec.json"
    code, _, _ = run(capsys, "forward", "--system", files["uniform"], "--params", files["p21"],
                     "--out", out)
    assert code == 0
    data = json.loads(out.read_text())
    assert set(data) == {"lambda", "mu", "weights", "gamma"}
    assert len(data["lambda"]) == 10 and data["gamma"] == pytest.approx(-4 / 3)
    assert sum(data["weights"]) == pytest.approx(1)


def test_forward_is_byte_stable(files, capsys):
    a = files["tmp"] / "a.json"
    b = files["tmp"] / "b.json"
    for path in (a, b):
        run(capsys, "forward", "--system", files["uniform"], "--params", files["p21"], "--out", path)
    assert a.read_bytes() == b.read_bytes()


def test_forward_csv(files, capsys):
    code, out, _ = run(capsys, "forward", "--matrix", files["matrix00"], "--params", files["p21"],
                       "--format", "csv")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "index,lambda,mu,weight" and len(lines) == 3
    assert float(lines[1].split(",")[1]) == pytest.approx(-1)


def test_forward_input_errors(files, capsys):
    code, _, err = run(capsys, "forward", "--system", files["broken"], "--params", files["p21"])
    assert code == 2 and "broken.json" in err
    code, _, err = run(capsys, "forward", "--system", files["uniform"], "--params", files["p12"])
    assert code == 2 and "theta" in err
    code, _, _ = run(capsys, "forward", "--params", files["p21"])
    assert code == 2
    bad = write(files["tmp"], "neg.json", {"masses": [1, -1], "springs": [1, 1]})
    code, _, _ = run(capsys, "forward", "--system", bad, "--params", files["p21"])
    assert code == 2


def test_perturb(files, capsys):
    code, out, _ = run(capsys, "perturb", "--system", files["uniform"], "--params", files["p21"])
    data = json.loads(out)
    assert code == 0
    assert data["delta_mass"] == pytest.approx(-0.75) and data["delta_spring"] == pytest.approx(-1)
    assert data["system"]["masses"][0] == pytest.approx(0.25)


def test_invert_anchors(files, capsys):
    code, out, _ = run(capsys, "invert", "--spectra", files["disjoint"], "--mode", "disjoint",
                       "--omega", "0")
    assert code == 0
    sol = json.loads(out)["solutions"][0]
    np.testing.assert_allclose(sol["q"], [0, 0], atol=1e-12)
    np.testing.assert_allclose(sol["b"], [1], atol=1e-12)
    assert sol["theta"] == pytest.approx(2) and abs(sol["h"]) < 1e-12
    code, out, _ = run(capsys, "invert", "--spectra", files["disjoint"], "--mode", "known-theta",
                       "--theta", "2")
    assert code == 0 and len(json.loads(out)["solutions"]) == 1
    code, out, _ = run(capsys, "invert", "--spectra", files["disjoint"], "--mode", "known-theta",
                       "--theta", "2.2360679774997898")
    assert code == 0 and len(json.loads(out)["solutions"]) == 2
    code, out, _ = run(capsys, "invert", "--spectra", files["shared"], "--mode", "shared-theta",
                       "--theta", "2")
    assert code == 0
    assert json.loads(out)["solutions"][0]["h"] == pytest.approx(0.75)


def test_invert_errors(files, capsys):
    code, _, _ = run(capsys, "invert", "--spectra", files["bad_interlace"], "--mode", "disjoint",
                     "--omega", "0")
    assert code == 4
    code, _, _ = run(capsys, "invert", "--spectra", files["disjoint"], "--mode", "disjoint",
                     "--omega", "5")
    assert code == 5
    code, _, _ = run(capsys, "invert", "--spectra", files["disjoint"], "--mode", "known-theta",
                     "--theta", "1.5")
    assert code == 5
    code, _, _ = run(capsys, "invert", "--spectra", files["shared"], "--mode", "disjoint",
                     "--omega", "0")
    assert code == 2
    code, _, _ = run(capsys, "invert", "--spectra", files["disjoint"], "--mode", "disjoint")
    assert code == 2


def test_invert_orientation_hint(files, capsys):
    amb = write(files["tmp"], "amb.json", {"lambda": [0, 2, 4], "mu": [1, 3, 5]})
    code, _, _ = run(capsys, "invert", "--spectra", amb, "--mode", "known-theta", "--theta", "2")
    assert code == 4
    code, out, _ = run(capsys, "invert", "--spectra", amb, "--orientation", "gt",
                       "--mode", "known-theta", "--theta", "2")
    assert code == 0 and len(json.loads(out)["solutions"]) == 1


def test_family(files, capsys):
    code, out, _ = run(capsys, "family", "--spectra", files["disjoint"], "--omega", "0",
                       "--omega", "0.5")
    members = json.loads(out)
    assert code == 0 and [m["omega"] for m in members] == [0, 0.5]
    code, out, _ = run(capsys, "family", "--spectra", files["disjoint"])
    assert code == 0 and len(json.loads(out)) == 5
    code, out, _ = run(capsys, "family", "--spectra", files["disjoint"], "--omega", "0",
                       "--omega", "7")
    assert code == 5 and "error" in json.loads(out)[1]


def test_verify(files, capsys):
    code, out, _ = run(capsys, "verify", "--system", files["uniform"], "--params", files["p21"])
    assert code == 0
    names = [line.split()[0] for line in out.splitlines()[1:]]
    assert names == sorted(["trace", "moments", "riccati", "product-form", "classification",
                            "roundtrip"])
    code, out, _ = run(capsys, "verify", "--system", files["one"], "--params", files["p12"])
    assert code == 0 and [line.split()[0] for line in out.splitlines()[1:]] == ["trace"]


def test_verify_flags_nudged_spectra(files, capsys):
    spec = files["tmp"] / "spec.json"
    run(capsys, "forward", "--system", files["uniform"], "--params", files["p21"], "--out", spec)
    data = json.loads(spec.read_text())
    data["mu"][4] += 1e-3
    nudged = write(files["tmp"], "nudged.json", data)
    code, _, err = run(capsys, "verify", "--system", files["uniform"], "--params", files["p21"],
                       "--spectra", nudged)
    assert code == 6 and "product-form" in err


def test_masses(files, capsys):
    code, out, _ = run(capsys, "masses", "--system",
                       write(files["tmp"], "s.json", {"masses": [1, 1], "springs": [1, 1]}))
    assert code == 0 and json.loads(out) == {"b": [1], "q": [-2, -1]}
    m = write(files["tmp"], "m.json", {"q": [-2, -1], "b": [1]})
    code, out, _ = run(capsys, "masses", "--matrix", m, "--m1", "1", "--k1", "1")
    assert code == 0 and json.loads(out) == {"masses": [1, 1], "springs": [1, 1]}
    code, _, _ = run(capsys, "masses", "--matrix", files["matrix00"], "--m1", "1", "--k1", "1")
    assert code == 3


def test_precision(files, capsys):
    code, out, _ = run(capsys, "--precision", "256", "invert", "--spectra", files["disjoint"],
                       "--mode", "disjoint", "--omega", "0.5")
    sol = json.loads(out)["solutions"][0]
    assert code == 0 and sol["theta"] == 5 ** 0.5
    code, _, _ = run(capsys, "--precision", "20", "family", "--spectra", files["disjoint"])
    assert code == 2


def test_module_entry_point(files):
    res = subprocess.run([sys.executable, "-m", "twospectra", "invert", "--spectra",
                          files["bad_interlace"], "--mode", "disjoint", "--omega", "0"],
                         capture_output=True, text=True)
    assert res.returncode == 4 and res.stderr

"""End-to-end tests of the command-line entry point."""

import pytest

from magnipersist.constants import THREADS_ENV_VAR, ExitCodes
from magnipersist.formats import parse_distance_matrix
from magnipersist.run import main

TWO_POINT = "2\n0 1\n1 0\n"
COLLINEAR = "# labels: a b c\n3\n0 1 2\n1 0 1\n2 1 0\n"
EQUILATERAL = "3\n0 1 1\n1 0 1\n1 1 0\n"


@pytest.fixture(autouse=True)
def no_thread_override(monkeypatch):
    monkeypatch.delenv(THREADS_ENV_VAR, raising=False)


@pytest.fixture
def space_file(tmp_path):
    def write(text, name="space.txt"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_magnitude(capsys, space_file):
    code, out, _ = run(capsys, "--command", "magnitude", "--input", space_file(TWO_POINT))
    assert code == ExitCodes.OK
    assert out == "(2)/(1 + 1*u^1) in q^(1/1)\n"


def test_euler(capsys, space_file):
    code, out, _ = run(
        capsys,
        "--command",
        "euler",
        "--input",
        space_file(EQUILATERAL),
        "--n-max",
        "3",
        "--l-max",
        "2",
    )
    assert code == ExitCodes.OK
    rows = out.splitlines()[1:]
    assert [row.split("\t")[-1] for row in rows] == ["true"] * 3


def test_ph(capsys, space_file):
    code, out, _ = run(
        capsys, "--command", "ph", "--input", space_file(COLLINEAR), "--eps-max", "2"
    )
    assert code == ExitCodes.OK
    assert out.splitlines() == [
        "k\tbirth\tdeath",
        "0\t0\t1",
        "0\t0\t1",
        "0\t0\tinf",
        "# incomplete degree: 2",
    ]


def test_mh_with_fraction_bound(capsys, space_file):
    code, out, _ = run(
        capsys, "--command", "mh", "--input", space_file(TWO_POINT), "--l-max", "3/2"
    )
    assert code == ExitCodes.OK
    assert "1\t1\t2\t" in out.splitlines()


def test_point_cloud_input(capsys, space_file):
    path = space_file("0 0\n1 0\n2 0\n", "points.txt")
    code, out, _ = run(capsys, "--command", "magnitude", "--input", path, "--metric", "l1")
    assert code == ExitCodes.OK
    assert out.startswith("(3 - 1*u^1)")


def test_limits(capsys, space_file):
    code, out, _ = run(capsys, "--command", "limits", "--input", space_file(COLLINEAR))
    assert code == ExitCodes.OK
    assert out.splitlines()[1] == "0\t3\t3\t0\t1"


def test_approx(capsys, space_file):
    code, out, _ = run(capsys, "--command", "approx", "--input", space_file(TWO_POINT))
    assert code == ExitCodes.OK
    assert "all checks passed: true" in out


def test_blurred_with_coend(capsys, space_file):
    code, out, _ = run(
        capsys,
        "--command",
        "blurred",
        "--input",
        space_file(TWO_POINT),
        "--dim-max",
        "3",
        "--eps-max",
        "3",
        "--check-coend",
    )
    assert code == ExitCodes.OK
    assert "eps\tk\tcoend_rank\tbars_alive\tok" in out
    assert "false" not in out


def test_output_file(capsys, space_file, tmp_path):
    target = tmp_path / "out.tsv"
    code, out, _ = run(
        capsys, "--command", "magnitude", "--input", space_file(TWO_POINT), "--output", str(target)
    )
    assert code == ExitCodes.OK
    assert out == ""
    assert target.read_text() == "(2)/(1 + 1*u^1) in q^(1/1)\n"


def test_deterministic(capsys, space_file):
    path = space_file(EQUILATERAL)
    argv = ("--command", "blurred", "--input", path, "--eps-max", "2")
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second


@pytest.mark.parametrize(
    "text, code, kind",
    [
        ("2\n0 1\n1 x\n", ExitCodes.PARSE, "parse"),
        ("2\n0 -1\n-1 0\n", ExitCodes.VALIDATION, "negative_entry"),
    ],
)
def test_input_errors(capsys, space_file, text, code, kind):
    status, out, err = run(capsys, "--command", "magnitude", "--input", space_file(text))
    assert status == code
    assert out == ""
    assert err.startswith(f"error[{kind}]: ")


def test_resource_bound(capsys, space_file):
    status, out, err = run(
        capsys,
        "--command",
        "mh",
        "--input",
        space_file(EQUILATERAL),
        "--max-generators",
        "5",
    )
    assert status == ExitCodes.RESOURCE
    assert out == ""
    assert err.startswith("error[resource_bound]: ")


def test_composite_prime(capsys, space_file):
    status, _, err = run(
        capsys, "--command", "ph", "--input", space_file(TWO_POINT), "--prime", "4"
    )
    assert status == ExitCodes.VALIDATION
    assert err.startswith("error[non_prime_characteristic]: ")


def test_missing_input(capsys, tmp_path):
    status, _, err = run(capsys, "--command", "magnitude", "--input", str(tmp_path / "nope"))
    assert status == ExitCodes.VALIDATION
    assert err.startswith("error[config]: ")


def test_bad_config(capsys, space_file, tmp_path):
    config = tmp_path / "bad.yaml"
    config.write_text("bounds:\n  l_max: 0.5\n")
    status, _, err = run(
        capsys,
        "--config",
        str(config),
        "--command",
        "magnitude",
        "--input",
        space_file(TWO_POINT),
    )
    assert status == ExitCodes.VALIDATION
    assert err.startswith("error[config]: ")


def test_invalid_utf8(capsys, tmp_path):
    path = tmp_path / "space.txt"
    path.write_bytes(b"2\n0 1\n1 \xff\n")
    status, out, err = run(capsys, "--command", "magnitude", "--input", str(path))
    assert status == ExitCodes.PARSE
    assert out == ""
    assert err.startswith("error[parse]: line 3, col 3: invalid UTF-8")


def test_unwritable_output(capsys, space_file, tmp_path):
    target = tmp_path / "missing" / "out.tsv"
    status, out, err = run(
        capsys, "--command", "magnitude", "--input", space_file(TWO_POINT), "--output", str(target)
    )
    assert status == ExitCodes.VALIDATION
    assert out == ""
    assert err.startswith("error[config]: cannot write output")


def test_integer_flags_accept_fractions(capsys, space_file):
    code, out, _ = run(
        capsys,
        "--command",
        "mh",
        "--input",
        space_file(TWO_POINT),
        "--n-max",
        "4/2",
        "--max-generators",
        "1000/1",
    )
    assert code == ExitCodes.OK
    assert max(int(row.split("\t")[0]) for row in out.splitlines()[1:]) == 2


@pytest.mark.parametrize(
    "flag, value",
    [("--n-max", "3/2"), ("--prime", "two"), ("--l-max", "1/0")],
)
def test_bad_flag_values(capsys, space_file, flag, value):
    status, out, err = run(
        capsys, "--command", "mh", "--input", space_file(TWO_POINT), flag, value
    )
    assert status == ExitCodes.VALIDATION
    assert out == ""
    assert err.startswith("error[config]: ")
    assert "usage:" not in err


def test_unknown_command(capsys, space_file):
    status, _, err = run(capsys, "--command", "nope", "--input", space_file(TWO_POINT))
    assert status == ExitCodes.VALIDATION
    assert err.startswith("error[config]: ")


def test_export_rips_complex(capsys, space_file, tmp_path):
    target = tmp_path / "rips.txt"
    code, out, err = run(
        capsys,
        "--command",
        "ph",
        "--input",
        space_file(COLLINEAR),
        "--export-complex",
        str(target),
    )
    assert code == ExitCodes.OK
    assert out.startswith("k\tbirth\tdeath\n")
    assert f"Wrote {target}" in err
    lines = target.read_text().splitlines()
    assert lines[:3] == ["0 0 0 - -", "1 0 0 - -", "2 0 0 - -"]
    assert lines[3] == "3 1 1 0,1 -1,+1"


def test_export_nerve(capsys, space_file, tmp_path):
    target = tmp_path / "nerve.txt"
    code, _, _ = run(
        capsys,
        "--command",
        "blurred",
        "--input",
        space_file(TWO_POINT),
        "--export-complex",
        str(target),
    )
    assert code == ExitCodes.OK
    assert target.read_text().splitlines()[2] == "2 1 1 0,1 -1,+1"


def test_export_space_after_metric(capsys, space_file, tmp_path):
    target = tmp_path / "matrix.txt"
    path = space_file("0 0\n1 0\n2 0\n", "points.txt")
    code, _, _ = run(
        capsys,
        "--command",
        "magnitude",
        "--input",
        path,
        "--metric",
        "l1",
        "--export-space",
        str(target),
    )
    assert code == ExitCodes.OK
    space = parse_distance_matrix(target.read_text())
    assert space.dist == ((0, 1, 2), (1, 0, 1), (2, 1, 0))


def test_export_complex_needs_complex_command(capsys, space_file, tmp_path):
    status, out, err = run(
        capsys,
        "--command",
        "magnitude",
        "--input",
        space_file(TWO_POINT),
        "--export-complex",
        str(tmp_path / "cells.txt"),
    )
    assert status == ExitCodes.VALIDATION
    assert out == ""
    assert err.startswith("error[config]: --export-complex")

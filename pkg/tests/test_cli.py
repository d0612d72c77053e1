import subprocess
import sys

import pytest

from tribound.cli import main
from tribound.decomposition import DecompositionTask, decompose
from tribound.textio import parse_polynomial_file
from tribound.triangular import parse_representation

from corpus import SYSTEMS, load


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_prem_inline(capsys):
    code, out, _ = run(capsys, "prem", "--f", "y+1", "--set", "x; x*y", "--vars", "x,y")
    assert code == 0 and out == "0\n"
    code, out, _ = run(capsys, "prem", "--f", "-1", "--set", "x; x*y")
    assert out == "-1\n"


def test_decompose_empty_file(tmp_path, capsys):
    f = tmp_path / "empty.txt"
    f.write_text("")
    code, out, _ = run(capsys, "decompose", str(f))
    assert code == 0
    R = parse_representation(out)
    assert R.components == () and not R.unit


def test_decompose_golden(tmp_path, capsys):
    f = tmp_path / "sys.txt"
    f.write_text("# two points\nvars: x, y\nx^2 - 1\ny - x\n")
    code, out, _ = run(capsys, "decompose", str(f))
    assert code == 0
    assert out == "vars: x,y\nx^2 - 1\ny - x\n"


def test_decompose_with_audit(tmp_path, capsys):
    f = tmp_path / "sys.txt"
    f.write_text("vars: x,y\nx*y\nx^2 - y\n")
    code, out, _ = run(capsys, "decompose", str(f), "--audit", "2")
    assert code == 0
    assert "bound n*d^(5.5n^3)   2*(2^44)" in out
    assert out.rstrip().endswith("within               yes")


def test_decompose_order_override(tmp_path, capsys):
    f = tmp_path / "sys.txt"
    f.write_text("vars: x,y\nx*y - 1\n")
    code, out, _ = run(capsys, "decompose", str(f), "--order", "y,x")
    assert code == 0 and out.startswith("vars: y,x\n")
    code, _, err = run(capsys, "decompose", str(f), "--order", "y,z")
    assert code == 2 and "--order" in err


def test_inconsistent_system(tmp_path, capsys):
    f = tmp_path / "sys.txt"
    f.write_text("vars: x\nx\nx - 1\n")
    code, out, _ = run(capsys, "decompose", str(f))
    assert code == 0 and out == "vars: x\n1\n"


def test_parse_error_cites_position(tmp_path, capsys):
    f = tmp_path / "bad.txt"
    f.write_text("vars: x,y\nx*y +\n")
    code, _, err = run(capsys, "decompose", str(f))
    assert code == 2
    assert "line 2, column 6" in err and "bad.txt" in err


def test_missing_file(capsys):
    code, _, err = run(capsys, "decompose", "/nonexistent/file.txt")
    assert code == 2 and "cannot read" in err


def test_budget_error_is_named(tmp_path, capsys):
    f = tmp_path / "sys.txt"
    f.write_text("vars: x,y,z\nx^2 + y^2 + z^2 - 1\nx + y + z\n")
    code, _, err = run(capsys, "decompose", str(f), "--max-steps", "2")
    assert code == 1 and "budget" in err


def test_usage_error(capsys):
    assert main([]) == 2
    assert main(["frobnicate"]) == 2
    capsys.readouterr()


def test_eliminate_and_product(tmp_path, capsys):
    f = tmp_path / "rep.txt"
    f.write_text("vars: x,y,z\nx^2 - 1\nx*y - 1\n---\nx\nz\n")
    code, out, _ = run(capsys, "eliminate", str(f), "--keep", "1")
    assert code == 0 and out == "vars: x\nx^2 - 1\n---\nx\n"
    code, out, _ = run(capsys, "product", str(f), str(f))
    assert code == 0 and len(parse_representation(out).components) == 4
    code, _, err = run(capsys, "eliminate", str(f), "--keep", "7")
    assert code == 2


def test_preimage(capsys):
    code, out, _ = run(capsys, "preimage", "--source", "GL(2)", "--target", "Trivial(1)", "--tau", "det")
    assert code == 0
    R = parse_representation(out)
    assert R.contains_point([2, 3, 1, 2]) and R.contains_point([2, 3, 1, 1]) is False


def test_preimage_from_file(tmp_path, capsys):
    f = tmp_path / "h.txt"
    f.write_text("vars: x11,x12,x21,x22\nx21\n")
    code, out, _ = run(capsys, "preimage", "--source", str(f), "--target", "Trivial(1)",
                       "--tau", "[[x11]]", "--denominator", "x22")
    assert code == 0
    R = parse_representation(out)
    assert R.contains_point([3, 5, 0, 3]) and R.contains_point([3, 5, 0, 2]) is False


def test_unipotent(capsys):
    code, out, _ = run(capsys, "unipotent", "[[0,1],[0,0]]")
    assert code == 0 and out == "vars: y11,y12,y21,y22\ny11 - 1\ny21\ny22 - 1\n"
    code, _, err = run(capsys, "unipotent", "[[1,0],[0,0]]")
    assert code == 2 and "nilpotent" in err


def test_proto_check(capsys):
    code, out, _ = run(capsys, "proto-check", "GL(2)", "SL(2)")
    assert code == 0 and out.startswith("pass")
    code, out, _ = run(capsys, "proto-check", "SL(2)", "Borel(2)")
    assert code == 1 and "fail at clause (i)" in out
    code, out, _ = run(capsys, "proto-check", "--catalog")
    assert code == 0 and out.rstrip().endswith("all verdicts hold")
    code, _, _ = run(capsys, "proto-check", "GL(2)")
    assert code == 2


def test_bounds_compare(capsys):
    code, out, _ = run(capsys, "bounds", "--n", "2", "--compare-feng")
    assert code == 0
    lines = out.rstrip().splitlines()
    assert lines[-1] == "all verdicts hold"
    assert len(lines) == 7
    assert lines[0].startswith("dbar <= 2^2^2^2^18")


def test_bounds_chain_and_sizes(capsys):
    code, out, _ = run(capsys, "bounds", "--n", "2", "--verify-chain")
    assert code == 0 and out.rstrip().endswith("all verdicts hold")
    code, out, _ = run(capsys, "bounds", "--n", "2")
    assert code == 0 and "D       8585 digits" in out
    code, _, _ = run(capsys, "bounds", "--n", "1")
    assert code == 2


def test_deterministic_output(tmp_path, capsys):
    f = tmp_path / "sys.txt"
    f.write_text("vars: x,y,z\nx*y*z\nx + y + z\n")
    first = run(capsys, "decompose", str(f))
    second = run(capsys, "decompose", str(f))
    assert first == second
    a = run(capsys, "unipotent", "[[0,1],[0,0]]", "[[0,0],[1,0]]", "--seed", "3")
    b = run(capsys, "unipotent", "[[0,1],[0,0]]", "[[0,0],[1,0]]", "--seed", "3")
    assert a == b


@pytest.mark.parametrize("system", SYSTEMS[:10], ids=[";".join(s[1]) for s in SYSTEMS[:10]])
def test_printed_representation_round_trips(system, tmp_path, capsys):
    order, gens = load(system)
    f = tmp_path / "sys.txt"
    f.write_text(f"vars: {','.join(order.names)}\n" + "\n".join(system[1]) + "\n")
    code, out, _ = run(capsys, "decompose", str(f))
    assert code == 0
    again = parse_representation(out)
    assert again == decompose(DecompositionTask(parse_polynomial_file(f.read_text())[1], order))


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "tribound", "prem", "--f", "y", "--set", "x*y"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout == "0\n"

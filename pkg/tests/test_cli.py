import csv
import io
import math

import pytest
from hypothesis import given, strategies as st

from quadlie.cli import (
    EXIT_INPUT, EXIT_IO, EXIT_OK, EXIT_SINGULAR, EXIT_VALIDATION, RunConfig, dump_config, main,
    parse_config_text,
)


def run(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as exc:  # argparse rejects bad choices itself
        code = exc.code
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_probe_converter_resonance(capsys):
    code, out, _ = run(capsys, "probe", "--model", "fc", "--k", "1", "--delta", "0",
                       "--t", repr(math.pi / 2))
    assert code == EXIT_OK
    header, row = rows(out)
    assert header == ["t", "prob_closed", "prob_oracle", "abs_err", "prob_closed_printed", "note"]
    assert float(row[1]) == pytest.approx(1.0, abs=1e-14)
    assert float(row[3]) < 1e-12


def test_probe_amplifier_without_coupling(capsys):
    code, out, _ = run(capsys, "probe", "--model", "pa", "--k", "0", "--t", "2")
    assert code == EXIT_OK
    row = rows(out)[1]
    assert float(row[1]) == 0 and float(row[2]) == 0


def test_probe_raman_forbidden_state(capsys):
    code, out, _ = run(capsys, "probe", "--model", "raman", "--final", "0,1,0", "--t", "0.9")
    assert code == EXIT_OK
    row = rows(out)[1]
    assert float(row[1]) == 0.0
    assert "selection rule" in row[5]


@pytest.mark.parametrize("argv", [
    ["probe", "--model", "fc", "--initial", "1,0,0"],
    ["probe", "--model", "raman", "--final", "1,-1,0"],
    ["probe", "--model", "laser"],
    ["sweep", "--t0", "2", "--t1", "1"],
    ["sweep", "--steps", "0"],
    ["probe", "--initial", "a,b"],
    ["probe", "--k", "nan"],
])
def test_invalid_input_exit_code(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == EXIT_INPUT
    assert out == "" and "quadlie" in err


def test_state_outside_oracle_basis(capsys):
    code, _, err = run(capsys, "probe", "--model", "pa", "--final", "5,5", "--nmax", "3")
    assert code == EXIT_INPUT and "outside" in err


def test_sweep_two_rows(capsys):
    code, out, _ = run(capsys, "sweep", "--t0", "0", "--t1", "1", "--steps", "1")
    assert code == EXIT_OK
    table = rows(out)
    assert table[0] == ["t", "prob_closed", "prob_oracle", "abs_err"]
    assert [float(r[0]) for r in table[1:]] == [0.0, 1.0]


def test_sweep_oscillatory_amplifier_bounded(capsys):
    code, out, _ = run(capsys, "sweep", "--model", "pa", "--k", "1", "--delta", "3",
                       "--t0", "0", "--t1", "10", "--steps", "40")
    assert code == EXIT_OK
    assert max(float(r[1]) for r in rows(out)[1:]) < 1


def test_sweep_is_byte_identical(tmp_path, capsys):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        assert main(["sweep", "--model", "raman", "--steps", "12", "--out", str(p)]) == EXIT_OK
    data = [p.read_bytes() for p in paths]
    assert data[0] == data[1]
    assert b"\r" not in data[0]
    assert len(data[0].splitlines()) == 14


def test_values_round_trip_through_csv(capsys):
    _, out, _ = run(capsys, "probe", "--model", "pa", "--k", "0.8", "--t", "1.1")
    from quadlie.models import parametric_amplifier
    from quadlie.transition import closed_transition
    expected = closed_transition(parametric_amplifier(0.8, 0.0), (0, 0), (1, 1), 1.1).prob_closed
    assert float(rows(out)[1][1]) == expected


def test_unwritable_output(tmp_path, capsys):
    code, _, err = run(capsys, "sweep", "--out", str(tmp_path / "missing" / "x.csv"))
    assert code == EXIT_IO and "cannot write" in err


def test_missing_config_file(tmp_path, capsys):
    code, _, _ = run(capsys, "probe", "--config", str(tmp_path / "nope.cfg"))
    assert code == EXIT_IO


def test_decompose_at_zero_time(capsys):
    code, out, _ = run(capsys, "decompose", "--model", "raman", "--t", "0")
    table = rows(out)
    assert code == EXIT_OK
    assert all(float(r[1]) == 0 and float(r[2]) == 0 for r in table[1:])


def test_decompose_su3_block(capsys):
    code, out, _ = run(capsys, "decompose", "--model", "su3", "--g2", "0", "--g3", "0", "--t", "0.6")
    table = rows(out)[1:]
    assert code == EXIT_OK
    assert [r[0] for r in table] == ["E", "J", "B", "C", "C+2K", "A", "G", "D", "residual"]
    nonzero = {r[0] for r in table[:-1] if abs(complex(float(r[1]), float(r[2]))) > 1e-15}
    assert nonzero <= {"A", "B", "C", "C+2K"}


def test_decompose_raman_default(capsys):
    code, out, _ = run(capsys, "decompose", "--model", "raman")
    table = rows(out)[1:]
    assert code == EXIT_OK
    assert [r[0] for r in table[:9]] == ["D", "G", "A", "C", "K", "F", "B", "J", "E"]
    assert table[9][0] == "residual" and float(table[9][1]) < 1e-10


def test_decompose_singular_point(capsys):
    code, _, err = run(capsys, "decompose", "--model", "fc", "--k", "1", "--t", repr(math.pi / 2))
    assert code == EXIT_SINGULAR and "singular" in err


def test_validate_list(capsys):
    code, out, _ = run(capsys, "validate", "--list")
    assert code == EXIT_OK
    assert len(out.splitlines()) == 8


def test_validate_default_passes(capsys):
    code, out, _ = run(capsys, "validate")
    assert code == EXIT_OK
    assert out.splitlines()[-1] == "8/8 criteria passed"


def test_validate_under_truncated_fails(capsys):
    code, out, _ = run(capsys, "validate", "--nmax", "2")
    assert code == EXIT_VALIDATION
    assert any(l.startswith("FAIL  amplifier-regimes") for l in out.splitlines())


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# amplifier run\nmodel = pa\nk = 0.5\nt = 0.25  # short\n")
    code, out, _ = run(capsys, "--config", str(cfg), "--t", "0.75", "--dump-config")
    assert code == EXIT_OK
    settings = parse_config_text(out)
    assert settings["model"] == "pa" and settings["k"] == 0.5 and settings["t"] == 0.75


def test_config_errors(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = blue\n")
    assert run(capsys, "probe", "--config", str(bad))[0] == EXIT_INPUT
    bad.write_text("just words\n")
    assert run(capsys, "probe", "--config", str(bad))[0] == EXIT_INPUT


@given(
    model=st.sampled_from(["fc", "pa", "raman", "su3"]),
    k=st.floats(-10, 10, allow_nan=False),
    t=st.floats(0, 100, allow_nan=False),
    steps=st.integers(1, 500),
    nmax=st.one_of(st.none(), st.integers(1, 80)),
    dt=st.one_of(st.none(), st.floats(1e-4, 1.0)),
    out=st.one_of(st.none(), st.text("abcxyz_/.", min_size=1, max_size=12)),
)
def test_dump_config_round_trip(model, k, t, steps, nmax, dt, out):
    arity = 2 if model in ("fc", "pa") else 3
    cfg = RunConfig(model=model, k=k, t=t, steps=steps, nmax=nmax, dt=dt, out=out,
                    initial=(1,) * arity, final=None)
    assert RunConfig(**parse_config_text(dump_config(cfg))) == cfg

"""Renderer tests against synthetic CSV fixtures (no simulator needed)."""

import pytest

from mocplots.cli import main
from mocplots.tables import SchemaError, load, read_table

PHASE_HEADER = (
    "# mocsim-csv v1 phase-diagram\n"
    "alpha,density,basis,p,n,s_mean,s_stderr,mi_mean,mi_stderr,tmi_mean,"
    "tmi_stderr,tmi_sign,t_ss,t_ss_first,tau,tau_censored,dr2_entanglement,"
    "entanglement_verdict,dr2_purification,purification_verdict,error\n"
)


def phase_row(alpha, n, s, tmi):
    return (f"{alpha},0.5,random,,{n},{s},0.01,1.5,0.01,{tmi},0.02,"
            f"{(tmi > 0) - (tmi < 0)},12,6.5,40,false,0.1,volume,0.1,mixed,\n")


@pytest.fixture
def phase_csv(tmp_path):
    rows = [phase_row(a, n, 0.1 * n if a == 0 else 2.0, -1.0 if a == 0 else 0.5)
            for a in (0, 2, 4) for n in (16, 32, 64)]
    p = tmp_path / "phase.csv"
    p.write_text(PHASE_HEADER + "".join(rows))
    return str(p)


def render(kind, src, out):
    return main([kind, "--in", src, "--out", str(out)])


def test_all_phase_kinds_render(phase_csv, tmp_path):
    for kind in ("phase-diagram", "scaling-fit", "crossover", "tss"):
        out = tmp_path / f"{kind}.png"
        assert render(kind, phase_csv, out) == 0
        assert out.stat().st_size > 0


def test_bell_census_renders(tmp_path):
    p = tmp_path / "bell.csv"
    p.write_text("# mocsim-csv v1 bell-census\nr,mean_count\n1,3.5\n2,1\n3,0\n4,0.25\n")
    assert render("bell-census", str(p), tmp_path / "b.png") == 0


def test_mi_decay_renders_with_fit(tmp_path):
    p = tmp_path / "mi.csv"
    rows = "".join(f"{r},{0.6 * r ** -1.8}\n" for r in range(1, 17))
    p.write_text("# mocsim-csv v1 mi-profile\nr,mi_mean\n" + rows)
    assert render("mi-decay", str(p), tmp_path / "mi.png") == 0


def test_xxz_sweep_renders(tmp_path):
    p = tmp_path / "xxz.csv"
    header = "p,n,s_mean,s_stderr,mi_mean,mi_stderr,tmi_mean,tmi_stderr,kappa,kappa_r2\n"
    rows = "".join(f"{pv},{n},2.5,0.1,0.8,0.05,-0.2,0.1,1.8,0.9\n"
                   for pv in (0.2, 0.5, 0.9) for n in (32, 64))
    p.write_text("# mocsim-csv v1 xxz-sweep\n" + header + rows)
    assert render("xxz-sweep", str(p), tmp_path / "x.png") == 0


def test_header_only_csv_gives_empty_axes(tmp_path):
    p = tmp_path / "empty.csv"
    p.write_text(PHASE_HEADER)
    for kind in ("phase-diagram", "scaling-fit", "crossover", "tss"):
        assert render(kind, str(p), tmp_path / f"{kind}.png") == 0


def test_wrong_schema_names_expectation(tmp_path, capsys):
    p = tmp_path / "bell.csv"
    p.write_text("# mocsim-csv v1 bell-census\nr,mean_count\n1,1\n")
    assert render("mi-decay", str(p), tmp_path / "o.png") == 1
    err = capsys.readouterr().err
    assert "error (schema)" in err and "mi-profile" in err


def test_missing_column_is_named(tmp_path, capsys):
    p = tmp_path / "phase.csv"
    p.write_text("# mocsim-csv v1 phase-diagram\nalpha,density,basis,n\n0,0.5,random,16\n")
    assert render("scaling-fit", str(p), tmp_path / "o.png") == 1
    assert "'s_mean'" in capsys.readouterr().err


def test_missing_header_line_rejected(tmp_path):
    p = tmp_path / "raw.csv"
    p.write_text("r,mean_count\n1,1\n")
    with pytest.raises(SchemaError, match="header"):
        read_table(str(p))


def test_multi_input_concatenation(phase_csv, tmp_path):
    table = load([phase_csv, phase_csv], "phase-diagram", ["alpha", "n"])
    assert len(table.rows) == 18


def test_rerun_is_byte_identical(phase_csv, tmp_path):
    a, b = tmp_path / "a.png", tmp_path / "b.png"
    assert render("phase-diagram", phase_csv, a) == 0
    assert render("phase-diagram", phase_csv, b) == 0
    assert a.read_bytes() == b.read_bytes()

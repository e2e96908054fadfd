import json

from pvakit.cli import main, to_latex


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_check_kdv(capsys):
    code, out = run(capsys, "check", "kdv.pva")
    assert code == 0 and "compatibility" in out


def test_bad_table_exit_status(tmp_path, capsys):
    f = tmp_path / "bad.pva"
    f.write_text("generators u;\nbracket {u,u} = l^2;\n")
    code, out = run(capsys, "check", str(f))
    assert code == 1 and "FAIL  skewsymmetry-H[u,u]  2*l^2" in out


def test_hierarchy_table(capsys):
    code, out = run(capsys, "hierarchy", "kdv.pva", "--steps", "3")
    assert code == 0
    assert "h[2]  1/2*u^3 + 1/2*c*u*u''" in out


def test_va_bracket(capsys):
    code, out = run(capsys, "va", "bracket", "freeboson.va", "L", "L")
    assert code == 0 and "(T + 2*l)*L + 1/12*l^3*vac" in out


def test_json_and_text_agree(capsys, tmp_path):
    out_file = tmp_path / "r.json"
    code, text = run(capsys, "bracket", "kdv.pva", "u^2", "u")
    code2, js = run(capsys, "bracket", "kdv.pva", "u^2", "u", "--emit", "json", "--out", str(out_file))
    data = json.loads(js)
    assert data["command"] == "bracket" and set(data) == {"version", "command", "entries"}
    assert set(data["entries"][0]) == {"kind", "indices", "expr", "pass"}
    assert data["entries"][0]["expr"] in text
    assert json.loads(out_file.read_text()) == data


def test_latex(capsys):
    code, out = run(capsys, "va", "bracket", "freeboson.va", "L", "a", "--emit", "latex")
    assert r"\lambda" in out and code == 0
    assert to_latex("u^(4)") == "u^{(4)}"


def test_parse_error_exit(tmp_path, capsys):
    f = tmp_path / "x.pva"
    f.write_text("generators u;\nbracket {u,u} = l*w;\n")
    assert main(["check", str(f)]) == 2

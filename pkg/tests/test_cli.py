import io
import json
import subprocess
import sys

import pytest

from tokensweep.cli import main

SUBCOMMANDS = ["transform", "tokenize", "train", "eval", "sweep", "topk", "expand", "heaps", "gen"]
EXAMPLE = "pésiiiimo auto :( @autoX fallan frenos y sistema de entretenimiento; no lo compren"


def run(*args, stdin=""):
    return subprocess.run([sys.executable, "-m", "tokensweep.cli", *args], input=stdin,
                          capture_output=True, text=True)


def call(monkeypatch, capsys, argv, stdin=""):
    monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("cmd", SUBCOMMANDS)
def test_help(cmd):
    res = run(cmd, "--help")
    assert res.returncode == 0
    assert "usage:" in res.stdout


def test_transform_golden():
    res = run("transform", "--flags", "stem=1,del_d1=1,del_diac=1,usr=1,neg=1", stdin=EXAMPLE + "\n")
    assert res.returncode == 0
    assert res.stdout == "pesim aut :( _user fal fren y sistem de entreten ; lo no_compr\n"


def test_transform_empty_stdin(monkeypatch, capsys):
    code, out, _ = call(monkeypatch, capsys, ["transform", "--flags", "lc=1"])
    assert (code, out) == (0, "")


def test_usage_errors():
    assert run("transform", "--flags", "bogus=1").returncode == 1
    assert run("nosuchcommand").returncode == 1
    assert run("topk").returncode == 1
    assert run("transform", "--tokenizers", "q9").returncode == 1


def test_data_errors(tmp_path, monkeypatch, capsys):
    bad = tmp_path / "bad.tsv"
    bad.write_text("1\tposivite\thola\n")
    code, _, err = call(monkeypatch, capsys, ["eval", "--corpus", str(bad)])
    assert code == 2 and ":1:" in err
    lexdir = tmp_path / "lex"
    lexdir.mkdir()
    (lexdir / "emoticons.tsv").write_text("no tab here\n")
    code, _, _ = call(monkeypatch, capsys, ["transform", "--lexicons", str(lexdir)], "x\n")
    assert code == 2
    empty = tmp_path / "empty.jsonl"
    empty.write_text("")
    code, _, _ = call(monkeypatch, capsys, ["topk", "--results", str(empty)])
    assert code == 2


def test_tokenize(monkeypatch, capsys):
    code, out, _ = call(monkeypatch, capsys, ["tokenize", "--tokenizers", "w1+q3"], "hola mundo\n")
    bag = json.loads(out)
    assert code == 0 and sum(bag.values()) == 10 and bag["w1:hola"] == 1


def test_gen_eval_train(tmp_path, monkeypatch, capsys):
    corpus = tmp_path / "c.tsv"
    code, _, _ = call(monkeypatch, capsys, ["gen", "--docs", "80", "--seed", "3", "--out", str(corpus)])
    assert code == 0 and len(corpus.read_text().splitlines()) == 80
    code, out, _ = call(monkeypatch, capsys, ["eval", "--corpus", str(corpus), "--tokenizers", "w1"])
    res = json.loads(out)
    assert code == 0 and sum(map(sum, res["confusion"])) == 80
    code, out, _ = call(monkeypatch, capsys, ["eval", "--corpus", str(corpus), "--split", "gold",
                                              "--train-fraction", "0.5"])
    assert code == 0 and sum(map(sum, json.loads(out)["confusion"])) == 40
    model = tmp_path / "m.json"
    code, out, _ = call(monkeypatch, capsys, ["train", "--corpus", str(corpus), "--model", str(model)])
    assert code == 0 and json.loads(out)["train_accuracy"] == 1.0
    assert json.loads(model.read_text())["classes"][0] == "positive"


def test_sweep_topk_expand(tmp_path, monkeypatch, capsys):
    out = tmp_path / "r.jsonl"
    ids = tmp_path / "ids.txt"
    ids.write_text("del_d1=0,del_d2=0,del_diac=0,del_ent=0,del_punc=0,del_sw=0,emo=0,lc=1,lem=0,"
                   "neg=0,num=0,stem=0,tfidf=0,url=0,usr=0;tok=w1\n"
                   "del_d1=0,del_d2=0,del_diac=0,del_ent=0,del_punc=0,del_sw=0,emo=0,lc=1,lem=0,"
                   "neg=0,num=0,stem=0,tfidf=1,url=0,usr=0;tok=q3\n")
    argv = ["sweep", "--configs", str(ids), "--out", str(out), "--epochs", "2"]
    code, text, _ = call(monkeypatch, capsys, argv)
    assert code == 0 and text.startswith("2 evaluated, 0 skipped")
    code, text, _ = call(monkeypatch, capsys, argv + ["--resume"])
    assert text.startswith("0 evaluated, 2 skipped")
    code, text, _ = call(monkeypatch, capsys, ["topk", "--results", str(out), "--k", "1,2,4"])
    rows = [l.split("\t") for l in text.splitlines()]
    assert code == 0 and rows[0][0] == "k" and len(rows) == 4
    assert rows[3][-1] == "1"  # k=4 truncated
    accs = [float(r[1]) for r in rows[1:]]
    assert accs == sorted(accs, reverse=True)
    code, text, _ = call(monkeypatch, capsys, ["expand", "--results", str(out), "--top", "1"])
    assert code == 0 and len(text.splitlines()) == 127
    assert call(monkeypatch, capsys, ["topk", "--results", str(out), "--k", "4,2"])[0] == 1


def test_heaps_cli(tmp_path, monkeypatch, capsys):
    pts = tmp_path / "p.tsv"
    code, out, _ = call(monkeypatch, capsys, ["heaps", "--interval", "50", "--points", str(pts)])
    res = json.loads(out)
    assert code == 0 and 0 < res["alpha"] < 1
    assert pts.read_text().splitlines()[0] == "n\tV"

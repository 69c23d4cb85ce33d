import io
import json
import os
import subprocess
import sys

import pytest

from conftest import five_words_path
from linfact.cli import EXIT_INVALID, EXIT_IO, EXIT_OK, build_parser, main

GOLDEN = b"abaabaaaabbaab"


class Std:
    """Swap stdin/stdout for bytes buffers while main() runs."""

    def __init__(self, monkeypatch, data=b""):
        self.out = io.BytesIO()
        monkeypatch.setattr(sys, "stdin", io.TextIOWrapper(io.BytesIO(data)))
        monkeypatch.setattr(sys, "stdout", io.TextIOWrapper(self.out, write_through=True))

    @property
    def text(self):
        return self.out.getvalue().decode()


def run(monkeypatch, argv, data=b""):
    std = Std(monkeypatch, data)
    code = main(argv)
    return code, std


def test_encode_golden(monkeypatch):
    code, std = run(monkeypatch, ["encode"], GOLDEN)
    assert code == EXIT_OK
    rows = std.text.splitlines()[1:]
    assert len(rows) == 8 and rows[-1].split("\t")[2] == "$"


def test_encode_decode_files(tmp_path, monkeypatch):
    src = tmp_path / "in.bin"
    src.write_bytes(GOLDEN)
    enc = tmp_path / "f.json"
    out = tmp_path / "back.bin"
    assert main(["encode", str(src), "--format", "json", "--backend", "accelerated", "--out", str(enc)]) == 0
    assert json.loads(enc.read_text())["format"] == "linfact/1"
    assert main(["decode", str(enc), "--out", str(out)]) == 0
    assert out.read_bytes() == GOLDEN


def test_decode_stdin(monkeypatch):
    _, std = run(monkeypatch, ["encode"], GOLDEN)
    code, back = run(monkeypatch, ["decode"], std.text.encode())
    assert code == 0
    assert back.out.getvalue() == GOLDEN


def test_encode_empty_stdin(monkeypatch):
    code, std = run(monkeypatch, ["encode", "-"], b"")
    assert code == 0
    assert std.text.splitlines()[1:] == ["1\t0\t$\t1"]


def test_encode_dot(monkeypatch):
    _, std = run(monkeypatch, ["encode", "--format", "dot"], GOLDEN)
    assert std.text.count("->") == 8


def test_pheap_five_words(monkeypatch, tmp_path):
    dot = tmp_path / "h.dot"
    code, std = run(monkeypatch, ["pheap", "--cst", five_words_path(), "--dot", str(dot)])
    assert code == 0
    assert len(std.text.splitlines()) == 14
    assert dot.read_text().count("->") == 12


def test_pheap_strings(monkeypatch, tmp_path):
    p = tmp_path / "w.txt"
    p.write_bytes(b"a\n")
    code, std = run(monkeypatch, ["pheap", "--strings", str(p), "--format", "json"])
    assert code == 0
    heap = json.loads(std.text)["heap"]
    assert [(r["label"], r["parent"], r["symbol"]) for r in heap] == [(1, 0, None), (2, 1, "$"), (3, 1, "a")]


def test_pheap_invalid_cst(monkeypatch, tmp_path, capsys):
    p = tmp_path / "bad.cst"
    p.write_text("CST 3\n2 1 $\n3 9 a\n")
    code, _ = run(monkeypatch, ["pheap", "--cst", str(p)])
    assert code == EXIT_INVALID
    assert "line 3" in capsys.readouterr().err


def test_missing_input_is_io_error(tmp_path, capsys):
    assert main(["encode", str(tmp_path / "nope")]) == EXIT_IO
    assert main(["pheap", "--cst", str(tmp_path / "nope")]) == EXIT_IO
    assert "linfact:" in capsys.readouterr().err


def test_malformed_factor_stream(monkeypatch):
    code, _ = run(monkeypatch, ["decode"], b"id\tparent\tsymbol\tend_pos\n1\t7\ta\t1\n")
    assert code == EXIT_INVALID


def test_verify_text_and_cst(monkeypatch, tmp_path):
    code, std = run(monkeypatch, ["verify"], GOLDEN)
    assert code == 0 and std.text.splitlines()[-1] == "PASS"
    code, std = run(monkeypatch, ["verify", "--cst", five_words_path()])
    assert code == 0 and "ok heap nodes=13" in std.text


def test_verify_random(monkeypatch):
    code, std = run(monkeypatch, ["verify", "--random", "n=300", "iters=8", "--seed", "3"])
    assert code == 0
    assert std.text.count("ok lz78") == 8


def test_verify_bad_random_params(monkeypatch):
    code, _ = run(monkeypatch, ["verify", "--random", "n=abc"])
    assert code == EXIT_INVALID


def test_bench_both_backends(monkeypatch):
    code, std = run(monkeypatch, ["bench", "--sizes", "256,512", "--backend", "both", "--repeat", "1"])
    assert code == 0
    rows = [r.split("\t") for r in std.text.splitlines()]
    assert rows[0][0] == "kind"
    assert {r[3] for r in rows[1:]} == {"reference", "accelerated"}
    assert len(rows) == 5
    assert rows[2][7] != "" and rows[1][7] == ""


def test_bench_kinds_to_file(tmp_path):
    out = tmp_path / "b.tsv"
    assert main(["bench", "--sizes", "128", "--kind", "all", "--repeat", "1", "--out", str(out)]) == 0
    kinds = [r.split("\t")[0] for r in out.read_text().splitlines()[1:]]
    assert kinds == ["random", "unary", "ab", "debruijn"]


def test_parser_requires_subcommand():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])


def test_module_entry_point(tmp_path):
    src = tmp_path / "g.txt"
    src.write_bytes(GOLDEN)
    env = dict(os.environ, PYTHONPATH=os.pathsep.join(sys.path))
    res = subprocess.run([sys.executable, "-m", "linfact", "encode", str(src)], capture_output=True, env=env)
    assert res.returncode == 0
    assert len(res.stdout.decode().splitlines()) == 9
    res = subprocess.run([sys.executable, "-m", "linfact", "decode", str(tmp_path / "nope")], capture_output=True, env=env)
    assert res.returncode == 2
